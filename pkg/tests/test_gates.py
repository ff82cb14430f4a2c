import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pqgames import gates
from pqgames.errors import DomainError
from pqgames.gates import Move
from pqgames.qstate import Projector, StateVector, apply, basis_state, win_prob_state

from helpers import MINUS, textbook_diffusion

R = 1 / math.sqrt(2)


class TestElementary:
    def test_hadamard_matrix(self):
        np.testing.assert_allclose(gates.hadamard().matrix, np.array([[1, 1], [1, -1]]) * R)

    def test_hadamard_self_inverse(self):
        s = apply(gates.hadamard(), apply(gates.hadamard(), basis_state([2], 0)))
        assert s.allclose(basis_state([2], 0))

    def test_pauli_x(self):
        assert gates.pauli_x().is_permutation
        np.testing.assert_array_equal(gates.pauli_x().matrix, [[0, 1], [1, 0]])
        assert apply(gates.pauli_x(), basis_state([2], 0)).allclose(basis_state([2], 1))

    def test_identity(self):
        rng = np.random.default_rng(0)
        v = rng.normal(size=4) + 1j * rng.normal(size=4)
        s = StateVector(v / np.linalg.norm(v), (2, 2))
        assert apply(gates.identity(4), s).allclose(s)
        with pytest.raises(DomainError):
            gates.identity(0)

    def test_hadamard_pauli_x_prepares_minus(self):
        np.testing.assert_allclose(gates.hadamard_pauli_x().matrix @ [1, 0], MINUS)


class TestHadamardN:
    def test_n1(self):
        assert gates.hadamard_n(1).same_as(gates.hadamard())

    def test_n2_by_hand(self):
        out = apply(gates.hadamard_n(2), basis_state([2, 2], 0))
        np.testing.assert_allclose(out.amplitudes, [0.5, 0.5, 0.5, 0.5])

    def test_n3_uniform(self):
        out = apply(gates.hadamard_n(3), basis_state([2] * 3, 0))
        np.testing.assert_allclose(out.amplitudes, np.full(8, 1 / math.sqrt(8)))

    def test_factored_matches_dense(self):
        np.testing.assert_allclose(gates.hadamard_n(3).matrix, np.kron(np.kron(gates.hadamard().matrix, gates.hadamard().matrix), gates.hadamard().matrix))

    def test_bad_n(self):
        with pytest.raises(DomainError):
            gates.hadamard_n(0)


class TestMove:
    def test_permutation_must_be_bijection(self):
        with pytest.raises(DomainError):
            Move.permutation([0, 0, 2])
        with pytest.raises(DomainError):
            Move.permutation([0, 3])

    def test_unitary_check(self):
        with pytest.raises(DomainError):
            Move.unitary([[1, 1], [0, 1]])

    def test_kron_of_permutations_is_permutation(self):
        m = Move.kron([gates.pauli_x(), gates.identity(2)])
        assert m.is_permutation
        np.testing.assert_array_equal(m.matrix, np.kron(gates.pauli_x().matrix, np.eye(2)))

    def test_compose_order(self):
        # first element acts first: compose([A, B]) = B @ A
        a = Move.unitary(gates.hadamard().matrix)
        b = Move.permutation([1, 0])
        np.testing.assert_allclose(Move.compose([a, b]).matrix, b.matrix @ a.matrix)

    def test_batch_application(self):
        m = gates.grover_prepare(2)
        arr = np.eye(8, dtype=complex)[:, :3]
        np.testing.assert_allclose(m.apply_columns(arr), m.matrix[:, :3], atol=1e-15)


class TestOracles:
    def test_delta(self):
        f = gates.delta_oracle(0, 1)
        assert (f(0), f(1)) == (1, 0)
        g = gates.delta_oracle(3, 2)
        assert sum(g(x) for x in range(4)) == 1
        with pytest.raises(DomainError):
            gates.delta_oracle(4, 2)

    def test_dot_by_hand(self):
        g = gates.dot_oracle("101")
        assert g(0b100) == 1
        assert g(0b011) == 1
        assert g(0b111) == 0
        zero = gates.dot_oracle("000")
        assert all(zero(x) == 0 for x in range(8))

    def test_dot_on_unit_vectors(self):
        for bits in itertools.product((0, 1), repeat=4):
            g = gates.dot_oracle(bits)
            assert [g(1 << (3 - i)) for i in range(4)] == list(bits)

    def test_controlled_zero_is_identity(self):
        f = gates.OracleFunction(2, (0, 0, 0, 0), "zero")
        np.testing.assert_array_equal(gates.controlled_f(f).perm, np.arange(8))

    def test_controlled_flip_ancilla(self):
        s = gates.controlled_f(gates.delta_oracle(1, 1))
        # |1,0> is index 2, |1,1> is index 3
        assert s.perm[2] == 3 and s.perm[3] == 2
        assert s.perm[0] == 0 and s.perm[1] == 1

    def test_delta_sign_flip(self):
        n, a = 3, 5
        state = apply(gates.grover_prepare(n), basis_state([2] * 4, 0))
        out = apply(gates.cached_delta_move(a, n), state)
        reg = out.amplitudes.reshape(8, 2) / MINUS
        expected = np.array([(-1) ** (x == a) for x in range(8)]) / math.sqrt(8)
        np.testing.assert_allclose(reg, np.column_stack([expected, expected]), atol=1e-14)

    def test_dot_phase(self):
        bits = (1, 0, 1)
        state = apply(gates.grover_prepare(3), basis_state([2] * 4, 0))
        out = apply(gates.cached_dot_move(bits), state)
        g = gates.dot_oracle(bits)
        expected = np.array([(-1) ** g(x) for x in range(8)]) / math.sqrt(8)
        np.testing.assert_allclose(out.amplitudes.reshape(8, 2), np.outer(expected, MINUS), atol=1e-14)

    def test_family_membership(self):
        fam = gates.OracleFamily("delta", 2)
        assert fam(3) in fam
        assert fam.param_of(fam(3)) == 3
        assert gates.cached_dot_move((1, 1)) not in fam
        assert gates.identity(8) not in fam


class TestGroverTurn:
    def test_unitary(self):
        m = gates.grover_turn(1)
        assert m.dim == 4 and m.is_unitary()

    def test_literal_composite(self):
        n = 2
        h = np.kron(gates.hadamard_n(n).matrix, np.eye(2))
        s0 = gates.cached_delta_move(0, n).matrix
        np.testing.assert_allclose(gates.grover_turn(n).matrix, h @ s0 @ h, atol=1e-14)

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_matches_textbook_diffusion_up_to_phase(self, n):
        # on the ancilla-minus subspace the composite equals -D exactly
        minus_block = np.kron(np.eye(1 << n), MINUS.reshape(2, 1))
        np.testing.assert_allclose(gates.grover_turn(n).matrix @ minus_block, -textbook_diffusion(n) @ minus_block, atol=1e-12)

    def test_differs_off_the_minus_subspace(self):
        # |0, 0> is not a game state: the oracle flips the ancilla instead of a phase
        e = np.zeros(4)
        e[0] = 1
        np.testing.assert_allclose(np.abs(gates.grover_turn(1).matrix @ e) ** 2, [0.25] * 4, atol=1e-14)
        np.testing.assert_allclose(np.abs(textbook_diffusion(1) @ e) ** 2, [0, 0, 1, 0], atol=1e-14)

    def test_n2_single_iteration_finds_a(self):
        n, a = 2, 3
        state = apply(gates.grover_prepare(n), basis_state([2] * 3, 0))
        state = apply(gates.cached_delta_move(a, n), state)
        state = apply(gates.grover_turn(n), state)
        assert win_prob_state(state, Projector.onto_basis(8, [2 * a, 2 * a + 1])) == pytest.approx(1.0, abs=1e-12)


@settings(max_examples=60, deadline=None, derandomize=True)
@given(n=st.integers(1, 4), seed=st.integers(0, 2**32 - 1))
def test_controlled_f_involution_and_kickback(n, seed):
    rng = np.random.default_rng(seed)
    table = tuple(int(v) for v in rng.integers(0, 2, size=1 << n))
    f = gates.OracleFunction(n, table, "rand")
    s = gates.controlled_f(f)
    np.testing.assert_array_equal(s.perm[s.perm], np.arange(1 << (n + 1)))
    for x in range(1 << n):
        vec = np.zeros(1 << (n + 1), dtype=complex)
        vec[2 * x:2 * x + 2] = MINUS
        out = s.apply_columns(vec)
        np.testing.assert_allclose(out, (-1) ** f(x) * vec, atol=1e-12)


@settings(max_examples=40, deadline=None, derandomize=True)
@given(n=st.integers(1, 4), x=st.integers(0, 15))
def test_grover_turn_win_probabilities_match_diffusion(n, x):
    """Register basis input |x> with the ancilla prepared in (|0> - |1>)/sqrt 2."""
    x %= 1 << n
    vec = np.kron(np.eye(1 << n)[x], MINUS)
    ours = np.abs(gates.grover_turn(n).matrix @ vec) ** 2
    book = np.abs(textbook_diffusion(n) @ vec) ** 2
    for a in range(1 << n):
        assert abs(ours[2 * a:2 * a + 2].sum() - book[2 * a:2 * a + 2].sum()) <= 1e-10
