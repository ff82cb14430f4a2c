"""Entanglement of pure game states relative to their qubit factorisation.

The scalar measure is the average single-qubit linear entropy
``2 (1 - mean_k Tr rho_k^2)`` (Meyer-Wallach form), taken over the register
qubits only: the oracle ancilla stays in a product with the register
throughout both search games, so including it would only dilute the value.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .engine import GameTranscript
from .errors import DomainError
from .qstate import NORM_ATOL, StateVector, reduced_from_state

PRODUCT_TOL = 1e-9
ENTANGLED_TOL = 1e-6


def _checked(s: StateVector) -> np.ndarray:
    amps = s.amplitudes
    if abs(float(np.vdot(amps, amps).real) - 1.0) > NORM_ATOL:
        raise DomainError("state is not normalised")
    return amps


def factor_purities(s: StateVector, factors: Sequence[int] | None = None) -> np.ndarray:
    """Tr rho_k^2 for each single-factor reduction."""
    amps = _checked(s)
    fac = s.factorization
    factors = range(len(fac)) if factors is None else factors
    out = []
    for k in factors:
        rho = reduced_from_state(amps, fac, k)
        out.append(float(np.real(np.vdot(rho, rho))))
    return np.array(out)


def is_product(s: StateVector, tol: float = PRODUCT_TOL) -> bool:
    """True iff every single-factor reduction is pure to within ``tol``."""
    return bool((factor_purities(s) >= 1.0 - tol).all())


def global_entanglement(s: StateVector, register: Sequence[int] | None = None) -> float:
    """``2 (1 - mean purity)`` over the ``register`` factors (default: all factors)."""
    purities = factor_purities(s, register)
    if purities.size == 0:
        return 0.0
    value = 2.0 * (1.0 - purities.mean())
    return float(min(max(value, 0.0), 1.0))


def schmidt_coefficients(s: StateVector, cut: Sequence[int]) -> np.ndarray:
    """Singular values across the bipartition ``cut | rest``, largest first."""
    amps = _checked(s)
    fac = s.factorization
    left = sorted(set(int(c) for c in cut))
    if any(not 0 <= c < len(fac) for c in left):
        raise DomainError("cut names a factor that does not exist")
    right = [i for i in range(len(fac)) if i not in left]
    if not left or not right:
        raise DomainError("both sides of the cut must be non-empty")
    t = amps.reshape(fac).transpose(left + right)
    d_left = int(np.prod([fac[i] for i in left]))
    sv = np.linalg.svd(t.reshape(d_left, -1), compute_uv=False)
    return sv[sv > 1e-15] if (sv > 1e-15).any() else sv[:1]


@dataclass(frozen=True)
class TraceRow:
    step: int
    label: str
    norm: float
    global_entanglement: float
    is_product: bool


@dataclass(frozen=True)
class EntanglementTrace:
    rows: tuple
    register: tuple

    def values(self) -> list[float]:
        return [r.global_entanglement for r in self.rows]

    def __len__(self):
        return len(self.rows)


def trace_transcript(t: GameTranscript, tol: float = PRODUCT_TOL) -> EntanglementTrace:
    """Per-step measure and product verdict for every state in a transcript."""
    rows = []
    for i, step in enumerate(t.steps):
        label = step.label if step.turn == "init" else f"{step.turn}:{step.label}"
        rows.append(
            TraceRow(
                step=i,
                label=label,
                norm=step.state.norm(),
                global_entanglement=global_entanglement(step.state, t.register),
                is_product=is_product(step.state, tol),
            )
        )
    return EntanglementTrace(tuple(rows), tuple(t.register))


def oracle_checkpoints(t: GameTranscript) -> list[int]:
    """Transcript indices of the state after j complete query rounds, j = 0..k.

    Index ``2j + 1`` holds ``u_{j+1} s_j ... u_1 psi_0``.
    """
    return [2 * j + 1 for j in range(t.oracle_calls + 1)]
