"""Binary symplectic representation of n-qubit Paulis (phases dropped)."""

from __future__ import annotations

import re

import numpy as np

from .gf2 import as_bits

__all__ = [
    "PauliOperator",
    "PauliParseError",
    "omega",
    "symplectic_product",
    "symplectic_gram",
    "commutes",
    "pauli_weight",
    "parse_pauli",
    "format_pauli",
]


class PauliParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"position {position}: {message}")
        self.position = position


def omega(n: int) -> np.ndarray:
    """The 2n x 2n symplectic form [[0, I], [I, 0]]."""
    I = np.eye(n, dtype=np.uint8)
    Z = np.zeros((n, n), dtype=np.uint8)
    return np.block([[Z, I], [I, Z]])


def _split(u: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    n = u.shape[-1] // 2
    return u[..., :n], u[..., n:]


def symplectic_product(u, v) -> int:
    u, v = as_bits(u), as_bits(v)
    if u.shape != v.shape or u.shape[-1] % 2:
        raise ValueError(f"need equal even lengths, got {u.shape[-1]} and {v.shape[-1]}")
    a, b = _split(u.astype(np.int64))
    a2, b2 = _split(v.astype(np.int64))
    return int((a2 @ b + b2 @ a) % 2)


def symplectic_gram(A, B) -> np.ndarray:
    """Matrix of pairwise products ``A Omega B^T`` (mod 2)."""
    A = np.atleast_2d(as_bits(A)).astype(np.int64)
    B = np.atleast_2d(as_bits(B)).astype(np.int64)
    if A.shape[1] != B.shape[1] or A.shape[1] % 2:
        raise ValueError(f"need equal even widths, got {A.shape[1]} and {B.shape[1]}")
    ax, az = _split(A)
    bx, bz = _split(B)
    return ((ax @ bz.T + az @ bx.T) % 2).astype(np.uint8)


class PauliOperator:
    """E(a, b) modulo phase: ``x`` holds ``a`` and ``z`` holds ``b``."""

    __slots__ = ("x", "z")

    def __init__(self, x, z):
        x, z = as_bits(x).reshape(-1), as_bits(z).reshape(-1)
        if x.shape != z.shape:
            raise ValueError("x and z parts must have equal length")
        self.x = x
        self.z = z

    @classmethod
    def from_vector(cls, v) -> PauliOperator:
        v = as_bits(v).reshape(-1)
        if v.size % 2:
            raise ValueError("symplectic vector must have even length")
        n = v.size // 2
        return cls(v[:n], v[n:])

    @classmethod
    def identity(cls, n: int) -> PauliOperator:
        return cls(np.zeros(n, np.uint8), np.zeros(n, np.uint8))

    @property
    def n(self) -> int:
        return self.x.size

    @property
    def vector(self) -> np.ndarray:
        return np.concatenate([self.x, self.z])

    @property
    def weight(self) -> int:
        return int(np.count_nonzero(self.x | self.z))

    def __mul__(self, other: PauliOperator) -> PauliOperator:
        return PauliOperator(self.x ^ other.x, self.z ^ other.z)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PauliOperator):
            return NotImplemented
        return np.array_equal(self.x, other.x) and np.array_equal(self.z, other.z)

    def __hash__(self) -> int:
        return hash((self.x.tobytes(), self.z.tobytes()))

    def __repr__(self) -> str:
        return f"PauliOperator({format_pauli(self) or 'I'}, n={self.n})"

    def __str__(self) -> str:
        return format_pauli(self)


def commutes(p: PauliOperator, q: PauliOperator) -> bool:
    if p.n != q.n:
        raise ValueError(f"qubit counts differ: {p.n} vs {q.n}")
    return symplectic_product(p.vector, q.vector) == 0


def pauli_weight(p) -> int:
    """Number of qubits touched; accepts a PauliOperator or a length-2n vector."""
    if isinstance(p, PauliOperator):
        return p.weight
    x, z = _split(as_bits(p))
    w = np.count_nonzero(x | z, axis=-1)
    return int(w) if np.ndim(w) == 0 else w


_TOKEN = re.compile(r"([XYZ])(\d+)")


def parse_pauli(s: str, n: int) -> PauliOperator:
    """Parse e.g. ``"X3X4Z7"`` with 1-based qubit indices."""
    x = np.zeros(n, np.uint8)
    z = np.zeros(n, np.uint8)
    pos = 0
    while pos < len(s):
        m = _TOKEN.match(s, pos)
        if m is None:
            raise PauliParseError(f"malformed token {s[pos:pos + 4]!r}", pos)
        q = int(m.group(2))
        if not 1 <= q <= n:
            raise PauliParseError(f"qubit index {q} out of range 1..{n}", pos)
        kind = m.group(1)
        if kind in "XY":
            x[q - 1] ^= 1
        if kind in "ZY":
            z[q - 1] ^= 1
        pos = m.end()
    return PauliOperator(x, z)


def format_pauli(p) -> str:
    if not isinstance(p, PauliOperator):
        p = PauliOperator.from_vector(p)
    out = []
    for q in range(p.n):
        if p.x[q] and p.z[q]:
            out.append(f"Y{q + 1}")
        elif p.x[q]:
            out.append(f"X{q + 1}")
        elif p.z[q]:
            out.append(f"Z{q + 1}")
    return "".join(out)
