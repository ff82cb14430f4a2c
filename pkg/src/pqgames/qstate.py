"""Dense states, density matrices, projectors and measurement.

All values are immutable after construction.  Inputs whose normalisation is
off by more than ``NORM_ATOL`` are rejected rather than renormalised.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterable, Sequence

import numpy as np

from .errors import DomainError
from .rng import SplitMix64

if TYPE_CHECKING:
    from .gates import Move

NORM_ATOL = 1e-8
HERMITIAN_ATOL = 1e-10
PSD_ATOL = 1e-9
PROB_SLACK = 1e-10
MAX_DIM = 1 << 21
# Full eigen-decomposition is only run on construction below this size.
PSD_CHECK_MAX_DIM = 256


def _check_factorization(factorization, d: int) -> tuple[int, ...]:
    fac = tuple(int(f) for f in factorization)
    if any(f < 1 for f in fac):
        raise DomainError("factor dimensions must be >= 1")
    if math.prod(fac) != d:
        raise DomainError(f"factorization {fac} does not multiply to dimension {d}")
    if d > MAX_DIM:
        raise DomainError(f"dimension {d} exceeds the dense cap {MAX_DIM}")
    return fac


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, dtype=np.complex128)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class StateVector:
    amplitudes: np.ndarray
    factorization: tuple[int, ...]

    def __post_init__(self):
        amps = _frozen(self.amplitudes)
        if amps.ndim != 1 or amps.size == 0:
            raise DomainError("amplitudes must be a non-empty vector")
        object.__setattr__(self, "amplitudes", amps)
        object.__setattr__(self, "factorization", _check_factorization(self.factorization, amps.size))
        norm = float(np.vdot(amps, amps).real)
        if abs(norm - 1.0) > NORM_ATOL:
            raise DomainError(f"state is not normalised (squared norm {norm:.12g})")

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def allclose(self, other: "StateVector", atol: float = 1e-10) -> bool:
        return self.factorization == other.factorization and bool(
            np.allclose(self.amplitudes, other.amplitudes, rtol=0.0, atol=atol)
        )


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    entries: np.ndarray
    factorization: tuple[int, ...]

    def __post_init__(self):
        rho = _frozen(self.entries)
        if rho.ndim != 2 or rho.shape[0] != rho.shape[1] or rho.shape[0] == 0:
            raise DomainError("density matrix must be square and non-empty")
        object.__setattr__(self, "entries", rho)
        object.__setattr__(self, "factorization", _check_factorization(self.factorization, rho.shape[0]))
        tr = np.trace(rho)
        if abs(tr - 1.0) > NORM_ATOL:
            raise DomainError(f"density matrix trace is {tr:.12g}, expected 1")
        if not np.allclose(rho, rho.conj().T, rtol=0.0, atol=HERMITIAN_ATOL):
            raise DomainError("density matrix is not Hermitian")
        if rho.shape[0] <= PSD_CHECK_MAX_DIM and not self.is_psd():
            raise DomainError("density matrix is not positive semidefinite")

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def is_psd(self, atol: float = PSD_ATOL) -> bool:
        return bool(np.linalg.eigvalsh(self.entries).min() >= -atol)

    def purity(self) -> float:
        return float(np.real(np.vdot(self.entries, self.entries)))

    def trace(self) -> complex:
        return complex(np.trace(self.entries))


class Projector:
    """Orthogonal projector, stored either as basis indices or as a dense matrix.

    ``Projector.onto_basis(d, [i, j])`` is the cheap form used by the games
    (``|a><a| (x) I_2`` projects onto indices ``2a`` and ``2a + 1``).
    """

    __slots__ = ("dim", "indices", "_matrix")

    def __init__(self, dim: int, *, indices=None, matrix=None):
        self.dim = int(dim)
        self.indices = indices
        self._matrix = matrix

    @classmethod
    def onto_basis(cls, dim: int, indices: Iterable[int]) -> "Projector":
        idx = np.unique(np.asarray(list(indices), dtype=np.int64))
        if idx.size and (idx.min() < 0 or idx.max() >= dim):
            raise DomainError(f"projector basis indices must lie in [0, {dim})")
        idx.setflags(write=False)
        return cls(dim, indices=idx)

    @classmethod
    def from_matrix(cls, matrix, atol: float = HERMITIAN_ATOL) -> "Projector":
        p = _frozen(matrix)
        if p.ndim != 2 or p.shape[0] != p.shape[1]:
            raise DomainError("projector must be a square matrix")
        if not np.allclose(p, p.conj().T, rtol=0.0, atol=atol):
            raise DomainError("projector is not Hermitian")
        if not np.allclose(p @ p, p, rtol=0.0, atol=atol):
            raise DomainError("projector is not idempotent")
        return cls(p.shape[0], matrix=p)

    @classmethod
    def from_vectors(cls, vectors: Sequence[Sequence[complex]], atol: float = HERMITIAN_ATOL) -> "Projector":
        """Projector onto the span of orthonormal ``vectors``."""
        v = np.array(vectors, dtype=np.complex128)
        if v.ndim != 2:
            raise DomainError("expected a list of vectors")
        if not np.allclose(v.conj() @ v.T, np.eye(v.shape[0]), rtol=0.0, atol=atol):
            raise DomainError("projector vectors are not orthonormal")
        return cls.from_matrix(v.T @ v.conj())

    @property
    def matrix(self) -> np.ndarray:
        if self._matrix is None:
            m = np.zeros((self.dim, self.dim), dtype=np.complex128)
            m[self.indices, self.indices] = 1.0
            m.setflags(write=False)
            self._matrix = m
        return self._matrix

    def expectation(self, amps: np.ndarray) -> float:
        if self.indices is not None:
            return float(np.sum(np.abs(amps[self.indices]) ** 2))
        return float(np.real(np.vdot(amps, self._matrix @ amps)))

    def trace_with(self, rho: np.ndarray) -> float:
        if self.indices is not None:
            return float(np.sum(np.real(rho[self.indices, self.indices])))
        return float(np.real(np.sum(self._matrix.T * rho)))

    def same_as(self, other: "Projector", atol: float = 1e-12) -> bool:
        if not isinstance(other, Projector) or self.dim != other.dim:
            return False
        if self.indices is not None and other.indices is not None:
            return bool(np.array_equal(self.indices, other.indices))
        return bool(np.allclose(self.matrix, other.matrix, rtol=0.0, atol=atol))

    def __repr__(self):
        if self.indices is not None:
            return f"Projector(dim={self.dim}, basis={self.indices.tolist()})"
        return f"Projector(dim={self.dim}, dense)"


def basis_state(factorization: Sequence[int], index: int) -> StateVector:
    """Computational basis state; leftmost factor is the most significant digit."""
    fac = tuple(int(f) for f in factorization)
    d = math.prod(fac)
    if not 0 <= index < d:
        raise DomainError(f"basis index {index} out of range [0, {d})")
    amps = np.zeros(d, dtype=np.complex128)
    amps[index] = 1.0
    return StateVector(amps, fac)


def basis_index(factorization: Sequence[int], digits: Sequence[int]) -> int:
    """Mixed-radix index of a per-factor label, e.g. ``([2, 2, 2], (1, 0, 1)) -> 5``."""
    if len(digits) != len(factorization):
        raise DomainError("one digit per factor is required")
    idx = 0
    for d, x in zip(factorization, digits):
        if not 0 <= x < d:
            raise DomainError(f"digit {x} out of range for factor of dimension {d}")
        idx = idx * d + int(x)
    return idx


def tensor(a: StateVector, b: StateVector) -> StateVector:
    fac = tuple(f for f in a.factorization + b.factorization if f != 1) or (1,)
    return StateVector(np.kron(a.amplitudes, b.amplitudes), fac)


def apply(m: "Move", s: StateVector) -> StateVector:
    if m.dim != s.dim:
        raise DomainError(f"move {m.label!r} has dimension {m.dim}, state has {s.dim}")
    return StateVector(m.apply_columns(s.amplitudes), s.factorization)


def to_density(s: StateVector) -> DensityMatrix:
    return DensityMatrix(np.outer(s.amplitudes, s.amplitudes.conj()), s.factorization)


def conjugate(m: "Move", rho: np.ndarray) -> np.ndarray:
    """m rho m^dagger on a raw matrix."""
    left = m.apply_columns(rho)
    return m.apply_columns(left.conj().T).conj().T


def apply_density(m: "Move", r: DensityMatrix) -> DensityMatrix:
    if m.dim != r.dim:
        raise DomainError(f"move {m.label!r} has dimension {m.dim}, density matrix has {r.dim}")
    return DensityMatrix(conjugate(m, r.entries), r.factorization)


def _clip_prob(p: float) -> float:
    if p < -PROB_SLACK or p > 1.0 + PROB_SLACK:
        raise DomainError(f"probability {p} outside [0, 1]")
    return min(max(p, 0.0), 1.0)


def win_prob_state(s: StateVector, p: Projector) -> float:
    """<psi| Pi |psi>."""
    if p.dim != s.dim:
        raise DomainError(f"projector dimension {p.dim} does not match state dimension {s.dim}")
    return _clip_prob(p.expectation(s.amplitudes))


def win_prob_density(r: DensityMatrix, p: Projector) -> float:
    """Tr(Pi rho)."""
    if p.dim != r.dim:
        raise DomainError(f"projector dimension {p.dim} does not match density dimension {r.dim}")
    return _clip_prob(p.trace_with(r.entries))


def partial_trace(r: DensityMatrix, keep: Iterable[int]) -> DensityMatrix:
    """Reduced density matrix on the factors in ``keep`` (kept in their original order)."""
    keep = sorted(set(int(k) for k in keep))
    fac = r.factorization
    m = len(fac)
    if not keep:
        raise DomainError("keep set must not be empty")
    if keep[0] < 0 or keep[-1] >= m:
        raise DomainError(f"factor indices must lie in [0, {m})")
    return DensityMatrix(reduced_matrix(r.entries, fac, keep), tuple(fac[k] for k in keep))


def reduced_matrix(rho: np.ndarray, factorization: Sequence[int], keep: Sequence[int]) -> np.ndarray:
    m = len(factorization)
    drop = [i for i in range(m) if i not in keep]
    t = rho.reshape(list(factorization) * 2)
    # bra axes of traced factors are relabelled onto their ket axes
    ket = list(range(m))
    bra = [m + i if i in keep else i for i in range(m)]
    out = [k for k in keep] + [m + k for k in keep]
    red = np.einsum(t, ket + bra, out) if drop else t
    d = math.prod(factorization[k] for k in keep)
    return red.reshape(d, d)


def reduced_from_state(amps: np.ndarray, factorization: Sequence[int], factor: int) -> np.ndarray:
    """Single-factor reduced density matrix of a pure state, without forming |psi><psi|."""
    left = math.prod(factorization[:factor])
    d = factorization[factor]
    t = amps.reshape(left, d, -1)
    return np.einsum("ajb,akb->jk", t, t.conj())


def purity(r: DensityMatrix) -> float:
    return r.purity()


def sample_outcome(s: StateVector, p: Projector, seed: int) -> str:
    """Measure ``s`` with ``p`` using the first draw of SplitMix64(seed): ``"win"`` or ``"lose"``."""
    prob = win_prob_state(s, p)
    u = SplitMix64(seed).next_float()
    return "win" if u < prob else "lose"


def sample_basis(s: StateVector, seed: int) -> int:
    """Full computational-basis measurement; returns the observed index."""
    cdf = np.cumsum(s.probabilities())
    u = SplitMix64(seed).next_float() * cdf[-1]
    return int(min(np.searchsorted(cdf, u, side="right"), s.dim - 1))
