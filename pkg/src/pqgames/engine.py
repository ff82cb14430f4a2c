"""PQ games: records, strategy evaluation, classical restriction, equilibria.

A game alternates Q's moves (unitaries) and Picard's moves (permutations),
Q moving first and last, and ends with a projective measurement.  When the
win condition depends on a hidden parameter ``a`` chosen by Picard (the
search games), Picard's oracle turns are :class:`~pqgames.gates.OracleFamily`
sets indexed by the same ``a``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np

from .errors import DomainError, PQGameError, ResourceError
from .gates import Move, OracleFamily
from .qstate import (
    DensityMatrix,
    Projector,
    StateVector,
    _clip_prob,
    conjugate,
    sample_outcome,
)

ENUMERATION_CAP = 10**6
DEFAULT_EPS = 1e-6
EXACT_SOLVER_MAX = 8
DIST_ATOL = 1e-12


class RegisterTarget:
    """Parameterised win condition ``a -> |a><a| (x) I`` on a leading register.

    ``register_size`` leading factors form the register; the remaining
    factors (the ancilla) are unconstrained.
    """

    def __init__(self, factorization: Sequence[int], register_size: int):
        self.factorization = tuple(int(f) for f in factorization)
        if not 1 <= register_size <= len(self.factorization):
            raise DomainError("register must cover at least one and at most all factors")
        self.register_size = int(register_size)
        self.register_dim = math.prod(self.factorization[:register_size])
        self.tail_dim = math.prod(self.factorization[register_size:])
        self.dim = self.register_dim * self.tail_dim

    @property
    def params(self) -> range:
        return range(self.register_dim)

    def __call__(self, a: int) -> Projector:
        if not 0 <= a < self.register_dim:
            raise DomainError(f"hidden parameter a={a} out of range [0, {self.register_dim})")
        base = int(a) * self.tail_dim
        return Projector.onto_basis(self.dim, range(base, base + self.tail_dim))

    def __eq__(self, other):
        return (
            isinstance(other, RegisterTarget)
            and self.factorization == other.factorization
            and self.register_size == other.register_size
        )

    def __hash__(self):
        return hash((self.factorization, self.register_size))

    def __repr__(self):
        return f"RegisterTarget({self.factorization}, register_size={self.register_size})"


WinCondition = Union[Projector, RegisterTarget]


@dataclass(frozen=True, eq=False)
class PQGame:
    initial_state: StateVector
    q_move_sets: tuple
    p_move_sets: tuple
    win_condition: WinCondition
    register: tuple | None = None
    name: str = "game"

    def __post_init__(self):
        q_sets = tuple(tuple(s) for s in self.q_move_sets)
        p_sets = tuple(s if isinstance(s, OracleFamily) else tuple(s) for s in self.p_move_sets)
        object.__setattr__(self, "q_move_sets", q_sets)
        object.__setattr__(self, "p_move_sets", p_sets)
        d = self.dimension
        if len(q_sets) != len(p_sets) + 1:
            raise DomainError(
                f"Q needs one more turn than Picard (got {len(q_sets)} Q and {len(p_sets)} Picard turns)"
            )
        for i, moves in enumerate(q_sets, 1):
            if not moves:
                raise DomainError(f"turn Q{i}: empty move set")
            for m in moves:
                if not isinstance(m, Move) or m.dim != d:
                    raise DomainError(f"turn Q{i}: {m!r} is not a move of dimension {d}")
        params = None
        for i, moves in enumerate(p_sets, 1):
            if isinstance(moves, OracleFamily):
                if moves.dim != d:
                    raise DomainError(f"turn P{i}: oracle family has dimension {moves.dim}, game has {d}")
                if params is not None and params != moves.params:
                    raise DomainError(f"turn P{i}: oracle families disagree on the hidden parameter range")
                params = moves.params
                continue
            if not moves:
                raise DomainError(f"turn P{i}: empty move set")
            for m in moves:
                if not isinstance(m, Move) or m.dim != d or not m.is_permutation:
                    raise DomainError(f"turn P{i}: {m!r} is not a permutation of dimension {d}")
        w = self.win_condition
        if not isinstance(w, (Projector, RegisterTarget)) or w.dim != d:
            raise DomainError(f"win condition must be a projector of dimension {d}")
        if isinstance(w, RegisterTarget) and params is not None and w.params != params:
            raise DomainError("win condition and oracle families disagree on the hidden parameter range")
        reg = tuple(range(len(self.factorization))) if self.register is None else tuple(self.register)
        if any(not 0 <= r < len(self.factorization) for r in reg):
            raise DomainError("register factor index out of range")
        object.__setattr__(self, "register", reg)

    @property
    def dimension(self) -> int:
        return self.initial_state.dim

    @property
    def factorization(self) -> tuple[int, ...]:
        return self.initial_state.factorization

    @property
    def k(self) -> int:
        """Number of Picard turns (oracle calls in the search games)."""
        return len(self.p_move_sets)

    @property
    def is_parameterized(self) -> bool:
        return self.hidden_params is not None

    @property
    def hidden_params(self) -> range | None:
        if isinstance(self.win_condition, RegisterTarget):
            return self.win_condition.params
        for s in self.p_move_sets:
            if isinstance(s, OracleFamily):
                return s.params
        return None

    def projector(self, a: int | None = None) -> Projector:
        if isinstance(self.win_condition, Projector):
            return self.win_condition
        if a is None:
            raise DomainError(f"game {self.name!r} has a parameterised win condition; supply a")
        return self.win_condition(a)

    def same_as(self, other: "PQGame") -> bool:
        """Structural equality (moves compared by payload)."""

        def same_sets(xs, ys):
            if len(xs) != len(ys):
                return False
            for a, b in zip(xs, ys):
                if isinstance(a, OracleFamily) or isinstance(b, OracleFamily):
                    if a != b:
                        return False
                elif len(a) != len(b) or not all(m.same_as(n) for m, n in zip(a, b)):
                    return False
            return True

        w1, w2 = self.win_condition, other.win_condition
        if isinstance(w1, Projector) and isinstance(w2, Projector):
            same_w = w1.same_as(w2)
        else:
            same_w = w1 == w2
        return (
            self.initial_state.allclose(other.initial_state, atol=1e-12)
            and self.register == other.register
            and same_w
            and same_sets(self.q_move_sets, other.q_move_sets)
            and same_sets(self.p_move_sets, other.p_move_sets)
        )


@dataclass(frozen=True)
class QuantumStrategy:
    moves: tuple

    def __post_init__(self):
        object.__setattr__(self, "moves", tuple(self.moves))


@dataclass(frozen=True)
class ClassicalPureStrategy:
    """Picard's moves, one per turn; ``None`` on an oracle turn means "answer for a"."""

    moves: tuple

    def __post_init__(self):
        object.__setattr__(self, "moves", tuple(self.moves))


@dataclass(frozen=True)
class ClassicalMixedStrategy:
    """One distribution per Picard turn, each a tuple of ``(move, weight)`` pairs.

    A ``None`` distribution on an oracle turn is the point mass on the oracle
    for the hidden parameter.
    """

    distributions: tuple

    def __post_init__(self):
        dists = []
        for i, dist in enumerate(self.distributions, 1):
            if dist is None:
                dists.append(None)
                continue
            dist = tuple((m, float(w)) for m, w in dist)
            weights = np.array([w for _, w in dist])
            if not dist or (weights < 0).any() or abs(weights.sum() - 1.0) > DIST_ATOL:
                raise DomainError(f"turn P{i}: weights must be nonnegative and sum to 1")
            dists.append(dist)
        object.__setattr__(self, "distributions", tuple(dists))

    @classmethod
    def uniform(cls, game: PQGame) -> "ClassicalMixedStrategy":
        dists = []
        for moves in game.p_move_sets:
            if isinstance(moves, OracleFamily):
                dists.append(None)
            else:
                dists.append(tuple((m, 1.0 / len(moves)) for m in moves))
        return cls(tuple(dists))

    @classmethod
    def from_weights(cls, game: PQGame, weights: Sequence[Sequence[float] | None]) -> "ClassicalMixedStrategy":
        """Weights listed in the order of each turn's presented move set."""
        if len(weights) != game.k:
            raise DomainError(f"expected {game.k} distributions, got {len(weights)}")
        dists = []
        for i, (moves, ws) in enumerate(zip(game.p_move_sets, weights), 1):
            if ws is None:
                dists.append(None)
                continue
            if isinstance(moves, OracleFamily):
                raise DomainError(f"turn P{i}: explicit weights over an oracle family are not supported")
            if len(ws) != len(moves):
                raise DomainError(f"turn P{i}: {len(ws)} weights for {len(moves)} moves")
            dists.append(tuple(zip(moves, ws)))
        return cls(tuple(dists))

    @classmethod
    def point(cls, p: ClassicalPureStrategy) -> "ClassicalMixedStrategy":
        return cls(tuple(None if m is None else ((m, 1.0),) for m in p.moves))


@dataclass(frozen=True, eq=False)
class TranscriptStep:
    turn: str
    label: str
    state: StateVector


@dataclass(frozen=True, eq=False)
class GameTranscript:
    steps: tuple
    win_probability: float | None
    oracle_calls: int
    register: tuple
    a: int | None = None
    seed: int | None = None
    outcome: str | None = None

    @property
    def states(self) -> list[StateVector]:
        return [s.state for s in self.steps]

    @property
    def final_state(self) -> StateVector:
        return self.steps[-1].state


@dataclass(frozen=True, eq=False)
class MatrixGame:
    """Q's win probabilities; rows are Q's pure strategies, columns Picard's."""

    payoffs: np.ndarray
    row_labels: tuple = ()
    col_labels: tuple = ()

    def __post_init__(self):
        m = np.array(self.payoffs, dtype=np.float64)
        if m.ndim != 2:
            raise DomainError("payoff matrix must be 2-d")
        if m.size and (m.min() < -1e-10 or m.max() > 1 + 1e-10):
            raise DomainError("payoffs are win probabilities and must lie in [0, 1]")
        m = np.clip(m, 0.0, 1.0)
        m.setflags(write=False)
        object.__setattr__(self, "payoffs", m)
        rows = tuple(self.row_labels) or tuple(f"r{i}" for i in range(m.shape[0]))
        cols = tuple(self.col_labels) or tuple(f"c{j}" for j in range(m.shape[1]))
        if len(rows) != m.shape[0] or len(cols) != m.shape[1]:
            raise DomainError("label counts must match the payoff matrix shape")
        object.__setattr__(self, "row_labels", rows)
        object.__setattr__(self, "col_labels", cols)

    @property
    def shape(self) -> tuple[int, int]:
        return self.payoffs.shape


@dataclass(frozen=True, eq=False)
class Equilibrium:
    value: float
    row_mixture: np.ndarray
    col_mixture: np.ndarray
    exploitability: float
    method: str


# -- strategy resolution ----------------------------------------------------


def _in_set(m, moves) -> bool:
    return any(m is x for x in moves) or any(m.same_as(x) for x in moves)


def _resolve_q(g: PQGame, q) -> list[Move]:
    moves = list(q.moves if isinstance(q, QuantumStrategy) else q)
    if len(moves) != len(g.q_move_sets):
        raise DomainError(f"Q strategy has {len(moves)} moves, game has {len(g.q_move_sets)} Q turns")
    for i, (m, allowed) in enumerate(zip(moves, g.q_move_sets), 1):
        if not isinstance(m, Move) or not _in_set(m, allowed):
            raise DomainError(f"turn Q{i}: move {getattr(m, 'label', m)!r} is not in Q's move set")
    return moves


def _check_picard_move(i: int, m, allowed) -> None:
    if isinstance(allowed, OracleFamily):
        ok = isinstance(m, Move) and m in allowed
    else:
        ok = isinstance(m, Move) and _in_set(m, allowed)
    if not ok:
        raise DomainError(f"turn P{i}: move {getattr(m, 'label', m)!r} is not in Picard's move set")


def _resolve_p(g: PQGame, p, a: int | None) -> list[Move]:
    entries = [None] * g.k if p is None else list(p.moves if isinstance(p, ClassicalPureStrategy) else p)
    if len(entries) != g.k:
        raise DomainError(f"Picard strategy has {len(entries)} moves, game has {g.k} Picard turns")
    out = []
    for i, (m, allowed) in enumerate(zip(entries, g.p_move_sets), 1):
        if m is None:
            if isinstance(allowed, OracleFamily):
                if a is None:
                    raise DomainError(f"turn P{i}: oracle turn needs the hidden parameter a")
                m = allowed(a)
            elif len(allowed) == 1:
                m = allowed[0]
            else:
                raise DomainError(f"turn P{i}: no move given and the move set is not a singleton")
        _check_picard_move(i, m, allowed)
        out.append(m)
    return out


def _resolve_mixed(g: PQGame, p: ClassicalMixedStrategy, a: int | None) -> list[tuple]:
    if len(p.distributions) != g.k:
        raise DomainError(f"mixed strategy has {len(p.distributions)} turns, game has {g.k}")
    out = []
    for i, (dist, allowed) in enumerate(zip(p.distributions, g.p_move_sets), 1):
        if dist is None:
            if not isinstance(allowed, OracleFamily):
                raise DomainError(f"turn P{i}: missing distribution")
            if a is None:
                raise DomainError(f"turn P{i}: oracle turn needs the hidden parameter a")
            dist = ((allowed(a), 1.0),)
        for m, _ in dist:
            _check_picard_move(i, m, allowed)
        out.append(dist)
    return out


# -- evolution ----------------------------------------------------------------


def evolve_pure(g: PQGame, q, p=None, a: int | None = None) -> GameTranscript:
    """Run ``u_{k+1} s_k ... s_1 u_1 psi_0`` and record every intermediate state."""
    q_moves = _resolve_q(g, q)
    p_moves = _resolve_p(g, p, a)
    fac = g.factorization
    state = g.initial_state
    steps = [TranscriptStep("init", "psi0", state)]
    amps = state.amplitudes
    for i, u in enumerate(q_moves):
        amps = u.apply_columns(amps)
        steps.append(TranscriptStep(f"Q{i + 1}", u.label, StateVector(amps, fac)))
        if i < len(p_moves):
            s = p_moves[i]
            amps = s.apply_columns(amps)
            steps.append(TranscriptStep(f"P{i + 1}", s.label, StateVector(amps, fac)))
    win = None
    if a is not None or not g.is_parameterized or isinstance(g.win_condition, Projector):
        win = _clip_prob(g.projector(a).expectation(amps))
    return GameTranscript(tuple(steps), win, len(p_moves), g.register, a=a)


def _evolve_mixed_raw(g: PQGame, q_moves, dists) -> np.ndarray:
    psi = g.initial_state.amplitudes
    rho = np.outer(psi, psi.conj())
    for i, u in enumerate(q_moves):
        rho = conjugate(u, rho)
        if i < len(dists):
            dist = dists[i]
            if len(dist) == 1:
                rho = conjugate(dist[0][0], rho)
            else:
                rho = sum(w * conjugate(s, rho) for s, w in dist if w > 0.0)
    return rho


def evolve_mixed(g: PQGame, q, p: ClassicalMixedStrategy, a: int | None = None) -> DensityMatrix:
    """Alternate conjugation by Q's move and Picard's convex mixture of conjugations."""
    q_moves = _resolve_q(g, q)
    dists = _resolve_mixed(g, p, a)
    return DensityMatrix(_evolve_mixed_raw(g, q_moves, dists), g.factorization)


def win_probability(g: PQGame, q, p=None, a: int | None = None) -> float:
    """Q's probability of winning against a pure or mixed Picard strategy."""
    if g.is_parameterized and isinstance(g.win_condition, RegisterTarget) and a is None:
        raise DomainError(f"game {g.name!r} has a parameterised win condition; supply a")
    proj = g.projector(a)
    if isinstance(p, ClassicalMixedStrategy):
        rho = _evolve_mixed_raw(g, _resolve_q(g, q), _resolve_mixed(g, p, a))
        return _clip_prob(proj.trace_with(rho))
    q_moves = _resolve_q(g, q)
    p_moves = _resolve_p(g, p, a)
    amps = g.initial_state.amplitudes
    for i, u in enumerate(q_moves):
        amps = u.apply_columns(amps)
        if i < len(p_moves):
            amps = p_moves[i].apply_columns(amps)
    return _clip_prob(proj.expectation(amps))


def sample_transcript(g: PQGame, t: GameTranscript, seed: int) -> GameTranscript:
    """Attach a seeded measurement outcome to a transcript."""
    outcome = sample_outcome(t.final_state, g.projector(t.a), seed)
    return GameTranscript(t.steps, t.win_probability, t.oracle_calls, t.register, t.a, seed, outcome)


# -- classical restriction ------------------------------------------------------


def enumerate_payoff_matrix(
    g: PQGame,
    hidden_params: Iterable[int] | None = None,
    classical_q: bool = True,
    cap: int = ENUMERATION_CAP,
) -> MatrixGame:
    """Tabulate Q's win probability for every pair of pure strategies.

    With ``classical_q`` Q is restricted to the permutation moves in its
    presented sets.  For parameterised games each column is a pair (Picard's
    choices on non-oracle turns, hidden parameter a).
    """
    q_sets = []
    for i, moves in enumerate(g.q_move_sets, 1):
        allowed = [m for m in moves if m.is_permutation] if classical_q else list(moves)
        if not allowed:
            raise DomainError(f"turn Q{i}: Q has no classical (permutation) moves to enumerate")
        q_sets.append(allowed)
    free_turns = [i for i, s in enumerate(g.p_move_sets) if not isinstance(s, OracleFamily)]
    params: list = [None]
    if hidden_params is not None:
        params = list(hidden_params)
    elif g.is_parameterized:
        params = list(g.hidden_params)
    if not params:
        raise DomainError("hidden parameter list is empty")

    n_rows = math.prod(len(s) for s in q_sets)
    n_cols = math.prod(len(g.p_move_sets[i]) for i in free_turns) * len(params)
    if n_rows > cap or n_cols > cap or n_rows * n_cols > cap:
        raise ResourceError(f"payoff matrix would be {n_rows} x {n_cols}, above the cap of {cap} cells")

    rows = list(itertools.product(*q_sets))
    free_choices = list(itertools.product(*(g.p_move_sets[i] for i in free_turns)))
    cols = [(choice, a) for choice in free_choices for a in params]
    payoffs = np.empty((len(rows), len(cols)))
    for c, (choice, a) in enumerate(cols):
        p_moves = [None] * g.k
        for turn, m in zip(free_turns, choice):
            p_moves[turn] = m
        for r, q_moves in enumerate(rows):
            payoffs[r, c] = win_probability(g, q_moves, p_moves, a)
    row_labels = tuple(",".join(m.label for m in qm) for qm in rows)
    col_labels = []
    for choice, a in cols:
        label = ",".join(m.label for m in choice)
        if a is not None:
            label = f"{label}|a={a}" if label else f"a={a}"
        col_labels.append(label or "-")
    return MatrixGame(payoffs, row_labels, tuple(col_labels))


# -- zero-sum solving ---------------------------------------------------------------


def _as_matrix(m) -> np.ndarray:
    return m.payoffs if isinstance(m, MatrixGame) else np.asarray(m, dtype=np.float64)


def exploitability(m, row_mixture, col_mixture) -> float:
    """Largest gain either player gets from a pure deviation (Q maximises, Picard minimises)."""
    a = _as_matrix(m)
    x = np.asarray(row_mixture, dtype=np.float64)
    y = np.asarray(col_mixture, dtype=np.float64)
    if x.shape != (a.shape[0],) or y.shape != (a.shape[1],):
        raise DomainError(f"mixture sizes {x.shape}, {y.shape} do not match matrix {a.shape}")
    for name, v in (("row", x), ("column", y)):
        if (v < -DIST_ATOL).any() or abs(v.sum() - 1.0) > 1e-9:
            raise DomainError(f"{name} mixture is not a probability vector")
    value = x @ a @ y
    row_gain = (a @ y).max() - value
    col_gain = value - (x @ a).min()
    return float(max(row_gain, col_gain, 0.0))


def best_responses(m, row_mixture, col_mixture) -> tuple[int, int]:
    """Pure best responses; ties go to the lowest index."""
    a = _as_matrix(m)
    return int(np.argmax(a @ np.asarray(col_mixture))), int(np.argmin(np.asarray(row_mixture) @ a))


def _regret_matching(a: np.ndarray, eps: float, max_iter: int, check_every: int = 50):
    n_rows, n_cols = a.shape
    x = np.full(n_rows, 1.0 / n_rows)
    y = np.full(n_cols, 1.0 / n_cols)
    if exploitability(a, x, y) <= eps:
        return x, y
    rx = np.zeros(n_rows)
    ry = np.zeros(n_cols)
    sx = np.zeros(n_rows)
    sy = np.zeros(n_cols)
    for t in range(1, max_iter + 1):
        u = a @ y
        rx = np.maximum(rx + u - x @ u, 0.0)
        x = rx / rx.sum() if rx.sum() > 0 else np.full(n_rows, 1.0 / n_rows)
        v = -(x @ a)
        ry = np.maximum(ry + v - y @ v, 0.0)
        y = ry / ry.sum() if ry.sum() > 0 else np.full(n_cols, 1.0 / n_cols)
        sx += t * x
        sy += t * y
        if t % check_every == 0:
            xb, yb = sx / sx.sum(), sy / sy.sum()
            if exploitability(a, xb, yb) <= eps:
                return xb, yb
    return None


def _unique_lines(a: np.ndarray, axis: int) -> list[int]:
    keep, seen = [], []
    lines = a if axis == 0 else a.T
    for i, line in enumerate(lines):
        if not any(np.array_equal(line, s) for s in seen):
            seen.append(line)
            keep.append(i)
    return keep


def _kernel_enumeration(a: np.ndarray, eps: float):
    """Exact solve by scanning square nonsingular kernels (Shapley-Snow)."""
    shifted = a - a.min() + 1.0
    n_rows, n_cols = a.shape
    for size in range(1, min(n_rows, n_cols) + 1):
        for rows in itertools.combinations(range(n_rows), size):
            for cols in itertools.combinations(range(n_cols), size):
                k = shifted[np.ix_(rows, cols)]
                if abs(np.linalg.det(k)) < 1e-12:
                    continue
                kinv = np.linalg.inv(k)
                total = kinv.sum()
                if abs(total) < 1e-15:
                    continue
                xs = kinv.sum(axis=0) / total
                ys = kinv.sum(axis=1) / total
                if xs.min() < -1e-12 or ys.min() < -1e-12:
                    continue
                x = np.zeros(n_rows)
                y = np.zeros(n_cols)
                x[list(rows)] = np.clip(xs, 0.0, None)
                y[list(cols)] = np.clip(ys, 0.0, None)
                x /= x.sum()
                y /= y.sum()
                if exploitability(a, x, y) <= eps:
                    return x, y
    return None


def _linprog_solve(a: np.ndarray):
    from scipy.optimize import linprog

    n_rows, n_cols = a.shape

    def side(mat):
        # maximise v subject to mat^T x >= v, sum x = 1, x >= 0
        n, m = mat.shape
        c = np.zeros(n + 1)
        c[-1] = -1.0
        a_ub = np.hstack([-mat.T, np.ones((m, 1))])
        a_eq = np.hstack([np.ones((1, n)), np.zeros((1, 1))])
        res = linprog(c, A_ub=a_ub, b_ub=np.zeros(m), A_eq=a_eq, b_eq=[1.0],
                      bounds=[(0, None)] * n + [(None, None)], method="highs")
        if not res.success:
            raise PQGameError(f"linear program failed: {res.message}")
        x = np.clip(res.x[:-1], 0.0, None)
        return x / x.sum()

    return side(a), side(1.0 - a.T)


def solve_zero_sum(m, eps: float = DEFAULT_EPS, max_iter: int = 20_000) -> Equilibrium:
    """Equilibrium mixtures certified by ``exploitability <= eps``.

    Regret matching is tried first; if it has not certified within
    ``max_iter`` iterations the game is reduced by dropping duplicate rows and
    columns and solved exactly (kernel scan up to 8 x 8, a linear program
    beyond that).
    """
    a = _as_matrix(m)
    if a.ndim != 2 or a.size == 0:
        raise DomainError("cannot solve an empty matrix game")
    if not eps > 0:
        raise DomainError("eps must be positive")
    found = _regret_matching(a, eps, max_iter)
    method = "regret-matching"
    if found is None:
        rows = _unique_lines(a, 0)
        cols = _unique_lines(a, 1)
        reduced = a[np.ix_(rows, cols)]
        if max(reduced.shape) <= EXACT_SOLVER_MAX:
            sub = _kernel_enumeration(reduced, eps)
            method = "kernel-enumeration"
        else:
            sub = None
        if sub is None:
            sub = _linprog_solve(reduced)
            method = "linear-program"
        x = np.zeros(a.shape[0])
        y = np.zeros(a.shape[1])
        x[rows] = sub[0]
        y[cols] = sub[1]
        found = (x, y)
    x, y = found
    gap = exploitability(a, x, y)
    if gap > eps:
        raise PQGameError(f"solver could not certify exploitability <= {eps:g} (got {gap:.3g})")
    return Equilibrium(float(x @ a @ y), x, y, gap, method)
