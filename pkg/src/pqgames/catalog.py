"""The three games (Penny Flip, Grover and Bernstein-Vazirani Guess-a-Number)
plus the classical baselines they are compared against."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import gates
from .engine import (
    ClassicalMixedStrategy,
    ClassicalPureStrategy,
    PQGame,
    QuantumStrategy,
    RegisterTarget,
    evolve_pure,
    win_probability,
)
from .errors import DomainError
from .qstate import Projector, basis_state
from .rng import splitmix64_array, stream_seeds, to_unit_float

MAX_QUBITS = 20


@dataclass(frozen=True, eq=False)
class GameInstance:
    name: str
    game: PQGame
    q_reference: QuantumStrategy
    classical_reference: ClassicalMixedStrategy | None = None
    picard_reference: ClassicalPureStrategy | None = None
    a: int | None = None
    metadata: dict = field(default_factory=dict)

    @property
    def k(self) -> int:
        return self.game.k

    def transcript(self, p=None):
        """Reference play (Picard's reference strategy unless ``p`` is given)."""
        return evolve_pure(self.game, self.q_reference, p if p is not None else self.picard_reference, self.a)

    def win_probability(self, p=None) -> float:
        if p is None:
            p = self.picard_reference if self.picard_reference is not None else self.classical_reference
        return win_probability(self.game, self.q_reference, p, self.a)


def grover_iterations(N: int) -> int:
    """k = floor((pi / 4) sqrt N)."""
    return math.floor(math.pi / 4 * math.sqrt(N))


def _check_n(n: int) -> None:
    if not 1 <= n <= MAX_QUBITS:
        raise DomainError(f"n must lie in [1, {MAX_QUBITS}], got {n}")


def penny_flip() -> GameInstance:
    h, x, i = gates.hadamard(), gates.pauli_x(), gates.identity(2)
    game = PQGame(
        initial_state=basis_state([2], 0),
        q_move_sets=((h, i, x), (h, i, x)),
        p_move_sets=((i, x),),
        win_condition=Projector.onto_basis(2, [0]),
        name="penny",
    )
    return GameInstance(
        name="penny",
        game=game,
        q_reference=QuantumStrategy((h, h)),
        classical_reference=ClassicalMixedStrategy.uniform(game),
        metadata={"n": 1, "N": 2, "k": 1},
    )


def _oracle_game(name, n, family, q_moves_after, k):
    fac = (2,) * (n + 1)
    prepare = gates.grover_prepare(n)
    q_sets = [(prepare,)] + [(q_moves_after,)] * k
    return PQGame(
        initial_state=basis_state(fac, 0),
        q_move_sets=tuple(q_sets),
        p_move_sets=(family,) * k,
        win_condition=RegisterTarget(fac, n),
        register=tuple(range(n)),
        name=name,
    )


def grover_game(n: int, a: int) -> GameInstance:
    """Grover search for Picard's number ``a`` with k = floor((pi/4) sqrt(2^n)) queries."""
    _check_n(n)
    N = 1 << n
    if not 0 <= a < N:
        raise DomainError(f"a={a} out of range [0, {N})")
    k = grover_iterations(N)
    family = gates.OracleFamily("delta", n)
    game = _oracle_game("grover", n, family, gates.grover_turn(n), k)
    q = QuantumStrategy((gates.grover_prepare(n),) + (gates.grover_turn(n),) * k)
    return GameInstance(
        name="grover",
        game=game,
        q_reference=q,
        picard_reference=ClassicalPureStrategy((None,) * k),
        a=a,
        metadata={"n": n, "N": N, "k": k, "a": a},
    )


def bv_game(n: int, a) -> GameInstance:
    """Bernstein-Vazirani: one query to g_a(x) = x.a mod 2 identifies ``a``."""
    _check_n(n)
    bits = gates.parse_bits(a, n)
    a_int = gates.bits_to_int(bits)
    family = gates.OracleFamily("dot", n)
    game = _oracle_game("bv", n, family, gates.register_hadamard(n), 1)
    q = QuantumStrategy((gates.grover_prepare(n), gates.register_hadamard(n)))
    return GameInstance(
        name="bv",
        game=game,
        q_reference=q,
        picard_reference=ClassicalPureStrategy((None,)),
        a=a_int,
        metadata={"n": n, "N": 1 << n, "k": 1, "a": a_int, "a_bits": "".join(map(str, bits))},
    )


def guess_shift(x: int, n: int) -> gates.Move:
    """Classical guess ``x``: the register permutation |y, b> -> |y XOR x, b>."""
    d = 1 << (n + 1)
    idx = np.arange(d)
    perm = ((idx >> 1) ^ x) * 2 + (idx & 1)
    return gates.Move.permutation(perm, label=f"guess {x}")


def classical_guess_game(n: int) -> GameInstance:
    """One classical guess at Picard's number, checked by the delta oracle.

    Q moves the register from |0> to |x> (a permutation), Picard answers with
    s(f_a), and Q wins iff the register holds a.
    """
    _check_n(n)
    N = 1 << n
    fac = (2,) * (n + 1)
    guesses = tuple(guess_shift(x, n) for x in range(N))
    ident = gates.identity(2 * N)
    game = PQGame(
        initial_state=basis_state(fac, 0),
        q_move_sets=(guesses, (ident,)),
        p_move_sets=(gates.OracleFamily("delta", n),),
        win_condition=RegisterTarget(fac, n),
        register=tuple(range(n)),
        name="guess",
    )
    return GameInstance(
        name="guess",
        game=game,
        q_reference=QuantumStrategy((guesses[0], ident)),
        picard_reference=ClassicalPureStrategy((None,)),
        metadata={"n": n, "N": N, "k": 1},
    )


# -- classical baselines -------------------------------------------------------


@dataclass(frozen=True)
class GuessStats:
    n: int
    N: int
    trials: int
    seed: int
    mean: float
    stddev: float
    stderr: float
    exact_mean: float
    quantum_queries: int


def _guess_chunk(trial_seeds: np.ndarray, N: int) -> np.ndarray:
    """Query counts for one batch of trials, one SplitMix64 stream per trial.

    Draw 0 picks a; draws 1..N-1 drive a Fisher-Yates shuffle of the guess
    order; the count is the position of a in that order, plus one.
    """
    states = trial_seeds.copy()
    states, out = splitmix64_array(states)
    a = np.minimum((to_unit_float(out) * N).astype(np.int64), N - 1)
    order = np.tile(np.arange(N, dtype=np.int64), (trial_seeds.size, 1))
    rows = np.arange(trial_seeds.size)
    for i in range(N - 1, 0, -1):
        states, out = splitmix64_array(states)
        j = np.minimum((to_unit_float(out) * (i + 1)).astype(np.int64), i)
        tmp = order[rows, i].copy()
        order[rows, i] = order[rows, j]
        order[rows, j] = tmp
    return np.argmax(order == a[:, None], axis=1) + 1


def classical_guess_baseline(n: int, trials: int, seed: int) -> GuessStats:
    """Monte-Carlo of the classical equilibrium: a uniform, guesses in random order."""
    if trials < 1:
        raise DomainError("trials must be >= 1")
    _check_n(n)
    N = 1 << n
    seeds = stream_seeds(seed, trials)
    chunk = max(1, (1 << 22) // N)
    counts = np.concatenate([_guess_chunk(seeds[s:s + chunk], N) for s in range(0, trials, chunk)])
    mean = float(counts.mean())
    std = float(counts.std(ddof=1)) if trials > 1 else 0.0
    return GuessStats(
        n=n, N=N, trials=trials, seed=seed, mean=mean, stddev=std,
        stderr=std / math.sqrt(trials), exact_mean=(N + 1) / 2,
        quantum_queries=grover_iterations(N),
    )


@dataclass(frozen=True)
class BVRecovery:
    recovered: str
    queries: int


def classical_bv_baseline(n: int, a) -> BVRecovery:
    """Recover a bit by bit: g_a(e_i) = a_i, n queries in all."""
    bits = gates.parse_bits(a, n)
    g = gates.dot_oracle(bits)
    queries = 0
    found = []
    for i in range(n):
        e_i = 1 << (n - 1 - i)
        found.append(g(e_i))
        queries += 1
    return BVRecovery("".join(map(str, found)), queries)
