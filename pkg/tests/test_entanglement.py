import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from helpers import random_product_amps, random_state_amps
from pqgames import catalog, gates
from pqgames.entanglement import (
    ENTANGLED_TOL,
    factor_purities,
    global_entanglement,
    is_product,
    oracle_checkpoints,
    schmidt_coefficients,
    trace_transcript,
)
from pqgames.errors import DomainError
from pqgames.qstate import StateVector, basis_state


def loop_purities(amps, nq):
    """Single-qubit purities by explicit summation over basis indices."""
    out = []
    for q in range(nq):
        shift = nq - 1 - q
        rho = np.zeros((2, 2), dtype=complex)
        for i, ai in enumerate(amps):
            for j, aj in enumerate(amps):
                if (i ^ j) & ~(1 << shift) == 0:
                    rho[(i >> shift) & 1, (j >> shift) & 1] += ai * np.conj(aj)
        out.append(np.trace(rho @ rho).real)
    return np.array(out)


BELL = StateVector(np.array([1, 0, 0, 1]) / np.sqrt(2), (2, 2))
GHZ3 = StateVector(np.array([1, 0, 0, 0, 0, 0, 0, 1]) / np.sqrt(2), (2, 2, 2))


class TestMeasure:
    def test_basis_states_are_products(self):
        for i in range(8):
            s = basis_state((2, 2, 2), i)
            assert is_product(s) and global_entanglement(s) == 0.0

    def test_bell(self):
        assert not is_product(BELL)
        assert global_entanglement(BELL) == pytest.approx(1.0, abs=1e-12)

    def test_ghz(self):
        assert global_entanglement(GHZ3) == pytest.approx(1.0, abs=1e-12)

    def test_grover_n2_after_oracle(self):
        # register after the first oracle: (|00> + |01> + |10> - |11>)/2 for a = 3
        t = catalog.grover_game(2, 3).transcript()
        psi = t.steps[2].state
        assert global_entanglement(psi, t.register) == pytest.approx(1.0, abs=1e-12)
        reg_only = StateVector(np.array([1, 1, 1, -1]) / 2, (2, 2))
        assert global_entanglement(reg_only) == pytest.approx(1.0, abs=1e-12)

    def test_unnormalised(self):
        with pytest.raises(DomainError):
            global_entanglement(StateVector(np.array([1.0, 1.0]), (2,)))

    def test_register_subset(self):
        s = StateVector(np.kron(BELL.amplitudes, [1, 0]), (2, 2, 2))
        assert global_entanglement(s, [2]) == pytest.approx(0.0, abs=1e-12)
        assert global_entanglement(s, [0, 1]) == pytest.approx(1.0)
        assert global_entanglement(s) == pytest.approx(2 / 3)

    def test_against_loop_oracle(self):
        rng = np.random.default_rng(17)
        for nq in (2, 3, 4):
            amps = random_state_amps(rng, 1 << nq)
            s = StateVector(amps, (2,) * nq)
            np.testing.assert_allclose(factor_purities(s), loop_purities(amps, nq), atol=1e-12)


class TestSchmidt:
    def test_bell(self):
        np.testing.assert_allclose(schmidt_coefficients(BELL, [0]), [2 ** -0.5] * 2, atol=1e-12)

    def test_product(self):
        s = StateVector(random_product_amps(np.random.default_rng(1), 3), (2, 2, 2))
        assert schmidt_coefficients(s, [0, 2]).size == 1

    def test_trivial_cut(self):
        with pytest.raises(DomainError):
            schmidt_coefficients(BELL, [])
        with pytest.raises(DomainError):
            schmidt_coefficients(BELL, [0, 1])
        with pytest.raises(DomainError):
            schmidt_coefficients(BELL, [5])


@settings(max_examples=60, deadline=None, derandomize=True)
@given(seed=st.integers(0, 2**32 - 1), nq=st.integers(2, 5), product=st.booleans())
def test_product_iff_zero_measure(seed, nq, product):
    rng = np.random.default_rng(seed)
    amps = random_product_amps(rng, nq) if product else random_state_amps(rng, 1 << nq)
    s = StateVector(amps, (2,) * nq)
    value = global_entanglement(s)
    assert 0.0 <= value <= 1.0
    if product:
        assert is_product(s) and value <= 1e-9
    else:
        # generic states are entangled
        assert not is_product(s) and value > ENTANGLED_TOL


class TestTrace:
    def test_penny_rows(self):
        g = catalog.penny_flip()
        tr = trace_transcript(g.transcript((gates.pauli_x(),)))
        assert [r.label for r in tr.rows] == ["psi0", "Q1:H", "P1:X", "Q2:H"]
        assert all(r.is_product and r.global_entanglement <= 1e-12 for r in tr.rows)
        assert all(abs(r.norm - 1) < 1e-12 for r in tr.rows)

    def test_bv_stays_product(self):
        tr = trace_transcript(catalog.bv_game(5, 0b10110).transcript())
        assert all(r.is_product for r in tr.rows)
        assert max(tr.values()) <= 1e-9

    def test_grover_interior_entangled(self):
        t = catalog.grover_game(4, 5).transcript()
        tr = trace_transcript(t)
        assert tr.rows[0].is_product and tr.rows[1].is_product
        assert all(not r.is_product and r.global_entanglement > ENTANGLED_TOL for r in tr.rows[2:-1])

    def test_checkpoints(self):
        t = catalog.grover_game(4, 0).transcript()
        assert oracle_checkpoints(t) == [1, 3, 5, 7]
        assert len(t.steps) == 2 * t.oracle_calls + 2
