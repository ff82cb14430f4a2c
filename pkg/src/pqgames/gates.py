"""Game moves and the oracle constructions used by the search games.

A :class:`Move` is either a basis permutation or a unitary.  Unitaries may be
held as an explicit matrix, as a Kronecker product of small factors, or as an
ordered product of other moves; the dense matrix is only built on request, so
applying ``H^{(x)n} (x) H sigma_x`` or the Grover turn to a state stays cheap.

Index convention is big-endian: the leftmost tensor factor is the most
significant digit, so ``|x, b>`` with a trailing ancilla is index ``2x + b``.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError

UNITARY_ATOL = 1e-10

_SQRT_HALF = 1.0 / math.sqrt(2.0)


def _readonly(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


class Move:
    """A move on a ``dim``-dimensional game space.

    Use the class-method constructors rather than ``__init__``.  ``token`` is
    the game-file vocabulary expression that rebuilds the move; it is ``None``
    for moves that have no vocabulary form (explicit matrices).
    """

    __slots__ = ("label", "dim", "_perm", "_inverse", "_matrix", "_factors", "_parts", "token")

    def __init__(self, label, dim, *, perm=None, matrix=None, factors=None, parts=None, token=None):
        self.label = label
        self.dim = int(dim)
        self._perm = perm
        self._inverse = None
        self._matrix = matrix
        self._factors = factors
        self._parts = parts
        self.token = token

    # -- construction -----------------------------------------------------

    @classmethod
    def permutation(cls, perm, label="perm", token=None) -> "Move":
        perm = np.asarray(perm, dtype=np.int64).copy()
        if perm.ndim != 1 or perm.size == 0:
            raise DomainError("permutation must be a non-empty 1-d index sequence")
        d = perm.size
        seen = np.zeros(d, dtype=bool)
        if perm.min() < 0 or perm.max() >= d:
            raise DomainError(f"permutation entries must lie in [0, {d})")
        seen[perm] = True
        if not seen.all():
            raise DomainError("permutation is not a bijection")
        if token is None:
            token = "perm:" + "[" + ",".join(str(int(i)) for i in perm) + "]"
        return cls(label, d, perm=_readonly(perm), token=token)

    @classmethod
    def unitary(cls, matrix, label="U", token=None, atol=UNITARY_ATOL) -> "Move":
        m = np.array(matrix, dtype=np.complex128)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
            raise DomainError("unitary payload must be a non-empty square matrix")
        gram = m.conj().T @ m
        if not np.allclose(gram, np.eye(m.shape[0]), rtol=0.0, atol=atol):
            raise DomainError(f"move {label!r} is not unitary within {atol:g}")
        return cls(label, m.shape[0], matrix=_readonly(m), token=token)

    @classmethod
    def kron(cls, moves: Sequence["Move"], label=None, token=None) -> "Move":
        """Tensor product, leftmost move acting on the most significant factor."""
        moves = list(moves)
        if not moves:
            raise DomainError("kron needs at least one move")
        if label is None:
            label = " (x) ".join(m.label for m in moves)
        if token is None and all(m.token is not None for m in moves):
            token = {"tensor": [m.token for m in moves]}
        if all(m.is_permutation for m in moves):
            perm = np.zeros(1, dtype=np.int64)
            for m in moves:
                perm = (perm[:, None] * m.dim + m._perm[None, :]).ravel()
            return cls(label, perm.size, perm=_readonly(perm), token=token)
        factors = []
        for m in moves:
            if m._factors is not None:
                factors.extend(m._factors)
            else:
                factors.append(m.matrix)
        dim = math.prod(f.shape[0] for f in factors)
        return cls(label, dim, factors=tuple(factors), token=token)

    @classmethod
    def compose(cls, moves: Sequence["Move"], label=None, token=None) -> "Move":
        """Product of moves applied in the given order (first element acts first)."""
        moves = list(moves)
        if not moves:
            raise DomainError("compose needs at least one move")
        dim = moves[0].dim
        if any(m.dim != dim for m in moves):
            raise DomainError("composed moves must share one dimension")
        if label is None:
            label = " o ".join(m.label for m in reversed(moves))
        if token is None and all(m.token is not None for m in moves):
            token = {"compose": [m.token for m in moves]}
        if all(m.is_permutation for m in moves):
            perm = np.arange(dim)
            for m in moves:
                perm = m._perm[perm]
            return cls(label, dim, perm=_readonly(perm), token=token)
        return cls(label, dim, parts=tuple(moves), token=token)

    # -- inspection -------------------------------------------------------

    @property
    def kind(self) -> str:
        return "permutation" if self._perm is not None else "unitary"

    @property
    def is_permutation(self) -> bool:
        return self._perm is not None

    @property
    def perm(self) -> np.ndarray:
        """Image of each basis index; only for permutation moves."""
        if self._perm is None:
            raise DomainError(f"move {self.label!r} is not a permutation")
        return self._perm

    @property
    def inverse_perm(self) -> np.ndarray:
        if self._inverse is None:
            inv = np.empty_like(self.perm)
            inv[self._perm] = np.arange(self.dim)
            self._inverse = _readonly(inv)
        return self._inverse

    @property
    def matrix(self) -> np.ndarray:
        """Dense unitary matrix (materialised lazily, then cached)."""
        if self._matrix is None:
            if self._perm is not None:
                m = np.zeros((self.dim, self.dim), dtype=np.complex128)
                m[self._perm, np.arange(self.dim)] = 1.0
            elif self._factors is not None:
                m = functools.reduce(np.kron, self._factors)
            else:
                m = self.apply_columns(np.eye(self.dim, dtype=np.complex128))
            self._matrix = _readonly(np.asarray(m, dtype=np.complex128))
        return self._matrix

    def __repr__(self):
        return f"Move({self.label!r}, kind={self.kind}, dim={self.dim})"

    def same_as(self, other: "Move", atol: float = 1e-12) -> bool:
        """Payload equality: identical permutation, or equal matrices within ``atol``."""
        if not isinstance(other, Move) or self.dim != other.dim or self.kind != other.kind:
            return False
        if self.is_permutation:
            return bool(np.array_equal(self._perm, other._perm))
        return bool(np.allclose(self.matrix, other.matrix, rtol=0.0, atol=atol))

    def is_unitary(self, atol: float = UNITARY_ATOL) -> bool:
        m = self.matrix
        return bool(np.allclose(m.conj().T @ m, np.eye(self.dim), rtol=0.0, atol=atol))

    # -- action -----------------------------------------------------------

    def apply_columns(self, arr: np.ndarray) -> np.ndarray:
        """Apply the move along axis 0 of ``arr`` (extra axes are batch axes)."""
        if arr.shape[0] != self.dim:
            raise DomainError(f"move {self.label!r} has dimension {self.dim}, state has {arr.shape[0]}")
        if self._perm is not None:
            return arr[self.inverse_perm]
        if self._matrix is not None and self._factors is None and self._parts is None:
            return self._matrix @ arr
        if self._factors is not None:
            dims = [f.shape[0] for f in self._factors]
            batch = arr.shape[1:]
            t = np.asarray(arr, dtype=np.complex128).reshape(dims + list(batch))
            for axis, f in enumerate(self._factors):
                if f.shape[0] == 2 and f[0, 0] == 1 and f[1, 1] == 1 and f[0, 1] == 0 and f[1, 0] == 0:
                    continue
                t = np.moveaxis(np.tensordot(f, t, axes=([1], [axis])), 0, axis)
            return t.reshape(arr.shape)
        out = arr
        for m in self._parts:
            out = m.apply_columns(out)
        return out


# -- elementary moves -------------------------------------------------------


@functools.cache
def hadamard() -> Move:
    """H = (1/sqrt 2) [[1, 1], [1, -1]], its own inverse."""
    h = np.array([[1.0, 1.0], [1.0, -1.0]], dtype=np.complex128) * _SQRT_HALF
    return Move.unitary(h, label="H", token="H")


@functools.cache
def pauli_x() -> Move:
    """sigma_x, the penny flip; a basis permutation."""
    return Move.permutation([1, 0], label="X", token="X")


@functools.cache
def identity(d: int = 2) -> Move:
    if d < 1:
        raise DomainError("identity dimension must be >= 1")
    token = "I" if d == 2 else f"I:{d}"
    label = "I" if d == 2 else f"I_{d}"
    return Move.permutation(np.arange(d), label=label, token=token)


@functools.cache
def hadamard_pauli_x() -> Move:
    """H o sigma_x: sends |0> to (|0> - |1>)/sqrt 2."""
    return Move.unitary(hadamard().matrix @ pauli_x().matrix, label="HX", token="HX")


@functools.cache
def hadamard_n(n: int) -> Move:
    """n-fold tensor power of H."""
    if n < 1:
        raise DomainError("hadamard_n needs n >= 1")
    if n == 1:
        return hadamard()
    return Move.kron([hadamard()] * n, label=f"H^{n}", token="Hn")


def permutation_move(perm, label="perm") -> Move:
    return Move.permutation(perm, label=label)


# -- oracles ----------------------------------------------------------------


@dataclass(frozen=True)
class OracleFunction:
    """A Boolean function on n-bit integers, held as a truth table."""

    n: int
    table: tuple
    label: str
    token: str | None = None

    def __post_init__(self):
        if self.n < 1:
            raise DomainError("oracle arity must be >= 1")
        if len(self.table) != 1 << self.n:
            raise DomainError(f"oracle table must have {1 << self.n} entries")
        if any(v not in (0, 1) for v in self.table):
            raise DomainError("oracle values must lie in {0, 1}")

    def __call__(self, x: int) -> int:
        return self.table[x]


def parse_bits(a, n: int | None = None) -> tuple[int, ...]:
    """Normalise a bit-vector given as ``"101"``, a 0/1 sequence, or (with ``n``) an int."""
    if isinstance(a, str):
        s = a[2:] if a.startswith("0b") else a
        if not s or any(c not in "01" for c in s):
            raise DomainError(f"not a bit string: {a!r}")
        bits = tuple(int(c) for c in s)
    elif isinstance(a, (int, np.integer)):
        if n is None:
            raise DomainError("an integer bit-vector needs an explicit length")
        if not 0 <= a < (1 << n):
            raise DomainError(f"a={a} out of range for n={n}")
        bits = tuple((int(a) >> (n - 1 - i)) & 1 for i in range(n))
    else:
        bits = tuple(int(b) for b in a)
        if any(b not in (0, 1) for b in bits):
            raise DomainError("bit-vector entries must be 0 or 1")
    if n is not None and len(bits) != n:
        raise DomainError(f"expected {n} bits, got {len(bits)}")
    if not bits:
        raise DomainError("bit-vector must have length >= 1")
    return bits


def bits_to_int(bits: Sequence[int]) -> int:
    v = 0
    for b in bits:
        v = (v << 1) | int(b)
    return v


def int_to_bits(x: int, n: int) -> str:
    return format(x, f"0{n}b")


def delta_oracle(a: int, n: int) -> OracleFunction:
    """f_a(x) = 1 iff x == a."""
    if n < 1:
        raise DomainError("n must be >= 1")
    if not 0 <= a < (1 << n):
        raise DomainError(f"a={a} out of range [0, {1 << n})")
    table = [0] * (1 << n)
    table[a] = 1
    return OracleFunction(n, tuple(table), label=f"f_{a}", token=f"oracle:delta:{a}")


def dot_oracle(a) -> OracleFunction:
    """g_a(x) = x . a mod 2 for the bit-vector ``a`` (big-endian)."""
    bits = parse_bits(a)
    n = len(bits)
    mask = bits_to_int(bits)
    table = tuple(bin(x & mask).count("1") & 1 for x in range(1 << n))
    text = "".join(map(str, bits))
    return OracleFunction(n, table, label=f"g_{text}", token=f"oracle:dot:{text}")


def controlled_f(f: OracleFunction) -> Move:
    """s(f)|x, b> = |x, b XOR f(x)>, a permutation on n + 1 qubits."""
    values = np.asarray(f.table, dtype=np.int64)
    x = np.repeat(np.arange(1 << f.n, dtype=np.int64), 2)
    b = np.tile(np.array([0, 1], dtype=np.int64), 1 << f.n)
    perm = 2 * x + (b ^ values[x])
    return Move.permutation(perm, label=f"s({f.label})", token=f.token)


@functools.cache
def cached_delta_move(a: int, n: int) -> Move:
    return controlled_f(delta_oracle(a, n))


@functools.cache
def cached_dot_move(bits: tuple[int, ...]) -> Move:
    return controlled_f(dot_oracle(bits))


@functools.cache
def register_hadamard(n: int) -> Move:
    """H^{(x)n} (x) I_2: Hadamards on the register, ancilla untouched."""
    return Move.kron([hadamard_n(n), identity(2)], label=f"H^{n} (x) I")


@functools.cache
def grover_prepare(n: int) -> Move:
    """First Q move of both search games: H^{(x)n} (x) H sigma_x."""
    return Move.kron([hadamard_n(n), hadamard_pauli_x()], label=f"H^{n} (x) HX")


@functools.cache
def grover_turn(n: int) -> Move:
    """(H^{(x)n} (x) I) o s(f_0) o (H^{(x)n} (x) I), built literally as that product."""
    if n < 1:
        raise DomainError("grover_turn needs n >= 1")
    h = register_hadamard(n)
    return Move.compose([h, cached_delta_move(0, n), h], label="G", token="grover_turn")


class OracleFamily:
    """Picard's move set on an oracle turn: ``a -> s(oracle(a))``.

    Once Picard fixes the hidden parameter ``a`` the oracle answers the same
    way on every turn, so the family is indexed by ``a`` rather than enumerated
    move by move.
    """

    def __init__(self, kind: str, n: int):
        if kind not in ("delta", "dot"):
            raise DomainError(f"unknown oracle kind {kind!r}")
        if n < 1:
            raise DomainError("oracle family needs n >= 1")
        self.kind = kind
        self.n = n
        self.dim = 1 << (n + 1)

    @property
    def params(self) -> range:
        return range(1 << self.n)

    def __call__(self, a: int) -> Move:
        if not 0 <= a < (1 << self.n):
            raise DomainError(f"a={a} out of range [0, {1 << self.n})")
        if self.kind == "delta":
            return cached_delta_move(int(a), self.n)
        return cached_dot_move(parse_bits(int(a), self.n))

    def param_of(self, move: Move) -> int | None:
        """Hidden parameter that produced ``move``, or ``None`` if it is not a member."""
        tok = move.token
        prefix = f"oracle:{self.kind}:"
        if not isinstance(tok, str) or not tok.startswith(prefix) or move.dim != self.dim:
            return None
        raw = tok[len(prefix):]
        try:
            a = int(raw) if self.kind == "delta" else bits_to_int(parse_bits(raw, self.n))
        except (ValueError, DomainError):
            return None
        return a if 0 <= a < (1 << self.n) else None

    def __contains__(self, move) -> bool:
        return isinstance(move, Move) and self.param_of(move) is not None

    @property
    def token(self) -> str:
        return f"oracle:{self.kind}:a"

    def __eq__(self, other):
        return isinstance(other, OracleFamily) and (self.kind, self.n) == (other.kind, other.n)

    def __hash__(self):
        return hash((self.kind, self.n))

    def __repr__(self):
        return f"OracleFamily({self.kind!r}, n={self.n})"

