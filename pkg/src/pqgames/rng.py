"""SplitMix64 generator.

Every random draw in the package goes through this one generator so that
sessions are bit-reproducible from an explicit 64-bit seed.  The scalar
:class:`SplitMix64` and the vectorised :func:`splitmix64_array` produce the
same streams.

Floats are built from the top 53 bits of an output, and bounded integers as
``floor(u * m)``; the resulting bias is below ``m / 2**53``.
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB
_INV_2_53 = 1.0 / (1 << 53)


def mix64(z: int) -> int:
    z = ((z ^ (z >> 30)) * _MIX1) & MASK64
    z = ((z ^ (z >> 27)) * _MIX2) & MASK64
    return z ^ (z >> 31)


class SplitMix64:
    """Scalar SplitMix64 stream.

    >>> g = SplitMix64(0)
    >>> hex(g.next_u64())
    '0xe220a8397b1dcdaf'
    """

    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = int(seed) & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + GOLDEN_GAMMA) & MASK64
        return mix64(self.state)

    def next_float(self) -> float:
        """Uniform float in [0, 1)."""
        return (self.next_u64() >> 11) * _INV_2_53

    def next_below(self, m: int) -> int:
        """Integer uniform in [0, m)."""
        if m <= 0:
            raise ValueError("bound must be positive")
        return min(int(self.next_float() * m), m - 1)

    def spawn(self) -> "SplitMix64":
        """Child stream seeded with the next output of this one."""
        return SplitMix64(self.next_u64())


def _mix64_array(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX2)
    return z ^ (z >> np.uint64(31))


def splitmix64_array(states: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Advance many independent streams by one step.

    Returns ``(new_states, outputs)``; both are uint64 arrays shaped like
    ``states``.
    """
    with np.errstate(over="ignore"):
        new = states + np.uint64(GOLDEN_GAMMA)
        return new, _mix64_array(new)


def to_unit_float(outputs: np.ndarray) -> np.ndarray:
    return (outputs >> np.uint64(11)).astype(np.float64) * _INV_2_53


def stream_seeds(seed: int, count: int) -> np.ndarray:
    """First ``count`` outputs of the stream seeded by ``seed``, as uint64."""
    base = np.uint64(int(seed) & MASK64)
    steps = np.arange(1, count + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        return _mix64_array(base + steps * np.uint64(GOLDEN_GAMMA))
