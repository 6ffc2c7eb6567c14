"""Dense GF(2) linear algebra on numpy uint8 arrays.

Vectors are 1-D ``uint8`` arrays of 0/1 and matrices are 2-D ``uint8`` arrays.
Elimination packs rows into 64-bit words so that matrices with a few thousand
columns reduce quickly.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Iterator, Sequence
from math import comb
from pathlib import Path

import numpy as np

__all__ = [
    "as_bits",
    "zeros",
    "identity",
    "rank",
    "rref",
    "rref_with_transform",
    "kernel",
    "solve",
    "inverse",
    "in_row_space",
    "independent_rows",
    "SpanBasis",
    "matmul",
    "kron",
    "hamming_weight",
    "enumerate_weight_w",
    "support_chunks",
    "combinations",
    "pack_rows",
    "popcount_rows",
    "read_matrix",
    "write_matrix",
    "parse_matrix",
    "format_matrix",
    "MatrixFormatError",
]


class MatrixFormatError(ValueError):
    """Raised when a matrix text file cannot be parsed."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


def as_bits(a) -> np.ndarray:
    """Coerce array-like input to a uint8 array reduced mod 2."""
    arr = np.asarray(a)
    if arr.dtype == np.uint8 and (arr.size == 0 or arr.max() <= 1):
        return arr
    return (arr.astype(np.int64) % 2).astype(np.uint8)


def zeros(rows: int, cols: int) -> np.ndarray:
    return np.zeros((rows, cols), dtype=np.uint8)


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.uint8)


def _as_matrix(M) -> np.ndarray:
    M = as_bits(M)
    if M.ndim == 1:
        M = M.reshape(1, -1)
    return M


# -- packed elimination -----------------------------------------------------


def pack_rows(M: np.ndarray) -> np.ndarray:
    """Pack the rows of a 0/1 matrix into little-endian uint64 words."""
    M = _as_matrix(M)
    rows, cols = M.shape
    words = max(1, (cols + 63) // 64)
    padded = np.zeros((rows, words * 64), dtype=np.uint8)
    padded[:, :cols] = M
    return np.packbits(padded, axis=1, bitorder="little").view(np.uint64).reshape(rows, words)


def _unpack_rows(P: np.ndarray, cols: int) -> np.ndarray:
    if P.shape[0] == 0:
        return np.zeros((0, cols), dtype=np.uint8)
    bits = np.unpackbits(P.view(np.uint8), axis=1, bitorder="little")
    return bits[:, :cols].copy()


def popcount_rows(P: np.ndarray) -> np.ndarray:
    """Hamming weight of every row of a packed matrix."""
    return np.bitwise_count(P).sum(axis=-1, dtype=np.int64)


def _eliminate(P: np.ndarray, cols: int, T: np.ndarray | None = None):
    """In-place Gauss-Jordan on packed rows; returns the pivot columns."""
    rows = P.shape[0]
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        word, bit = divmod(c, 64)
        column = (P[r:, word] >> np.uint64(bit)) & np.uint64(1)
        nz = np.flatnonzero(column)
        if nz.size == 0:
            continue
        p = r + int(nz[0])
        if p != r:
            P[[r, p]] = P[[p, r]]
            if T is not None:
                T[[r, p]] = T[[p, r]]
        hits = np.flatnonzero((P[:, word] >> np.uint64(bit)) & np.uint64(1))
        hits = hits[hits != r]
        if hits.size:
            P[hits] ^= P[r]
            if T is not None:
                T[hits] ^= T[r]
        pivots.append(c)
        r += 1
    return pivots


def rref(M) -> tuple[np.ndarray, list[int]]:
    """Reduced row-echelon form and the (strictly increasing) pivot columns.

    Zero rows are kept at the bottom, so the output has the input's shape.
    """
    M = _as_matrix(M)
    rows, cols = M.shape
    if rows == 0 or cols == 0:
        return M.copy(), []
    P = pack_rows(M)
    pivots = _eliminate(P, cols)
    return _unpack_rows(P, cols), pivots


def rref_with_transform(M) -> tuple[np.ndarray, list[int], np.ndarray]:
    """Like :func:`rref` but also returns ``T`` with ``T @ M == R`` (mod 2)."""
    M = _as_matrix(M)
    rows, cols = M.shape
    T = pack_rows(identity(rows)) if rows else np.zeros((0, 1), dtype=np.uint64)
    if rows == 0 or cols == 0:
        return M.copy(), [], _unpack_rows(T, rows)
    P = pack_rows(M)
    pivots = _eliminate(P, cols, T)
    return _unpack_rows(P, cols), pivots, _unpack_rows(T, rows)


def rank(M) -> int:
    M = _as_matrix(M)
    if M.size == 0:
        return 0
    return len(_eliminate(pack_rows(M), M.shape[1]))


def kernel(M) -> np.ndarray:
    """Basis of ``{v : M v^T = 0}``, returned in reduced row-echelon form."""
    M = _as_matrix(M)
    cols = M.shape[1]
    R, pivots = rref(M)
    free = [c for c in range(cols) if c not in set(pivots)]
    basis = np.zeros((len(free), cols), dtype=np.uint8)
    for i, f in enumerate(free):
        basis[i, f] = 1
        for row, p in enumerate(pivots):
            if R[row, f]:
                basis[i, p] = 1
    if len(free) == 0:
        return basis
    return rref(basis)[0]


def solve(A, b):
    """Solve ``A x = b`` (mod 2).

    ``b`` may be a vector or a matrix whose columns are separate right-hand
    sides. Returns one solution (free variables set to 0), or ``None`` for a
    vector ``b`` with no solution. For matrix ``b`` the result is
    ``(X, ok)`` where ``ok[j]`` says whether column ``j`` was solvable.
    """
    A = _as_matrix(A)
    b = as_bits(b)
    single = b.ndim == 1
    B = b.reshape(-1, 1) if single else b
    R, pivots, T = rref_with_transform(A)
    TB = (T.astype(np.int64) @ B.astype(np.int64)) % 2
    r = len(pivots)
    ok = ~TB[r:].any(axis=0)
    X = np.zeros((A.shape[1], B.shape[1]), dtype=np.uint8)
    if r:
        X[pivots] = TB[:r]
    if single:
        return X[:, 0] if ok[0] else None
    return X, ok


def inverse(M) -> np.ndarray:
    M = _as_matrix(M)
    n = M.shape[0]
    if M.shape != (n, n):
        raise ValueError("inverse needs a square matrix")
    R, pivots, T = rref_with_transform(M)
    if len(pivots) != n:
        raise np.linalg.LinAlgError("matrix is singular over GF(2)")
    return T


def in_row_space(M, v) -> bool:
    M = _as_matrix(M)
    v = as_bits(v).reshape(1, -1)
    if v.shape[1] != M.shape[1]:
        raise ValueError(f"vector length {v.shape[1]} != matrix cols {M.shape[1]}")
    if not v.any():
        return True
    return rank(np.vstack([M, v])) == rank(M)


class SpanBasis:
    """Incrementally grown row space kept in reduced row-echelon form.

    In RREF the coefficient of basis row ``i`` in the reduction of ``v`` is
    simply ``v[pivot_i]``, so every query is one vectorized XOR.
    """

    def __init__(self, cols: int, rows=None):
        self.cols = cols
        self._words = max(1, (cols + 63) // 64)
        self._rows = np.zeros((0, self._words), dtype=np.uint64)
        self._pivots = np.zeros(0, dtype=np.int64)
        if rows is not None:
            for row in _as_matrix(rows):
                self.add(row)

    def __len__(self) -> int:
        return self._rows.shape[0]

    @property
    def rank(self) -> int:
        return len(self)

    def _bits_at(self, packed: np.ndarray, cols: np.ndarray) -> np.ndarray:
        return ((packed[..., cols // 64] >> (cols % 64).astype(np.uint64)) & np.uint64(1)).astype(bool)

    def reduce_packed(self, packed: np.ndarray) -> np.ndarray:
        """Reduce packed row(s) ``(..., words)`` against the basis."""
        if len(self) == 0:
            return packed.copy()
        mask = self._bits_at(packed, self._pivots)
        if packed.ndim == 1:
            return packed ^ np.bitwise_xor.reduce(self._rows[mask], axis=0) if mask.any() else packed.copy()
        out = packed.copy()
        for i in range(len(self)):
            out[mask[:, i]] ^= self._rows[i]
        return out

    def reduce(self, v) -> np.ndarray:
        """Canonical representative of ``v`` modulo the span."""
        return _unpack_rows(self.reduce_packed(pack_rows(v)[0]).reshape(1, -1), self.cols)[0]

    def contains(self, v) -> bool:
        return not self.reduce_packed(pack_rows(v)[0]).any()

    def add(self, v) -> bool:
        """Insert ``v``; returns ``False`` if it was already in the span."""
        red = self.reduce_packed(pack_rows(v)[0])
        if not red.any():
            return False
        nz = int(np.flatnonzero(red)[0])
        word = int(red[nz])
        pivot = nz * 64 + (word & -word).bit_length() - 1
        if len(self):
            hit = self._bits_at(self._rows, np.array([pivot]))[:, 0]
            self._rows[hit] ^= red
        self._rows = np.vstack([self._rows, red])
        self._pivots = np.append(self._pivots, pivot)
        return True

    def matrix(self) -> np.ndarray:
        """Basis rows sorted by pivot (a genuine RREF matrix)."""
        order = np.argsort(self._pivots, kind="stable")
        return _unpack_rows(self._rows[order], self.cols)


def independent_rows(M) -> list[int]:
    """Indices of a maximal independent subset of rows, greedy in row order."""
    M = _as_matrix(M)
    basis = SpanBasis(M.shape[1])
    return [i for i, row in enumerate(M) if basis.add(row)]


def matmul(A, B) -> np.ndarray:
    return ((as_bits(A).astype(np.int64) @ as_bits(B).astype(np.int64)) % 2).astype(np.uint8)


def kron(A, B) -> np.ndarray:
    return np.kron(_as_matrix(A), _as_matrix(B)).astype(np.uint8)


def hamming_weight(v) -> int:
    return int(np.count_nonzero(as_bits(v)))


# -- enumeration --------------------------------------------------------------


def enumerate_weight_w(n: int, w: int) -> Iterator[np.ndarray]:
    """All weight-``w`` vectors of length ``n`` in lexicographic support order."""
    if not 0 <= w <= n:
        raise ValueError(f"need 0 <= w <= n, got w={w}, n={n}")
    for support in itertools.combinations(range(n), w):
        v = np.zeros(n, dtype=np.uint8)
        v[list(support)] = 1
        yield v


def support_chunks(n: int, w: int, chunk: int = 1 << 16) -> Iterator[np.ndarray]:
    """Weight-``w`` supports as ``(m, w)`` int arrays, same order as above."""
    it = itertools.combinations(range(n), w)
    total = comb(n, w)
    done = 0
    while done < total:
        m = min(chunk, total - done)
        flat = np.fromiter(itertools.chain.from_iterable(itertools.islice(it, m)), dtype=np.int64, count=m * w)
        yield flat.reshape(m, w)
        done += m


def combinations(items: Sequence, t: int) -> Iterator[tuple]:
    if t > len(items):
        raise ValueError(f"cannot choose {t} of {len(items)} items")
    return itertools.combinations(items, t)


# -- text format --------------------------------------------------------------


def parse_matrix(text: str) -> np.ndarray:
    """Parse ``"<rows> <cols>"`` followed by one 0/1 string per row."""
    lines = [ln.strip() for ln in text.splitlines()]
    numbered = [(i + 1, ln) for i, ln in enumerate(lines) if ln and not ln.startswith("#")]
    if not numbered:
        raise MatrixFormatError("empty matrix file", 1)
    lineno, header = numbered[0]
    parts = header.split()
    if len(parts) != 2 or not all(p.isdigit() for p in parts):
        raise MatrixFormatError(f"expected '<rows> <cols>', got {header!r}", lineno)
    rows, cols = int(parts[0]), int(parts[1])
    body = numbered[1:]
    if len(body) != rows:
        raise MatrixFormatError(f"expected {rows} rows, found {len(body)}", body[-1][0] if body else lineno)
    M = np.zeros((rows, cols), dtype=np.uint8)
    for r, (ln_no, ln) in enumerate(body):
        if len(ln) != cols:
            raise MatrixFormatError(f"row has {len(ln)} entries, expected {cols}", ln_no)
        for c, ch in enumerate(ln):
            if ch not in "01":
                raise MatrixFormatError(f"bad character {ch!r} at column {c + 1}", ln_no)
            M[r, c] = ch == "1"
    return M


def format_matrix(M) -> str:
    M = _as_matrix(M)
    out = [f"{M.shape[0]} {M.shape[1]}"]
    out.extend("".join("1" if b else "0" for b in row) for row in M)
    return "\n".join(out) + "\n"


def read_matrix(path) -> np.ndarray:
    return parse_matrix(Path(path).read_text())


def write_matrix(path, M) -> None:
    Path(path).write_text(format_matrix(M))


def rows_to_strings(M) -> list[str]:
    return ["".join("1" if b else "0" for b in row) for row in _as_matrix(M)]


def strings_to_rows(rows: Iterable[str], cols: int) -> np.ndarray:
    rows = list(rows)
    M = np.zeros((len(rows), cols), dtype=np.uint8)
    for i, s in enumerate(rows):
        if len(s) != cols or set(s) - {"0", "1"}:
            raise ValueError(f"row {i} is not a length-{cols} 0/1 string")
        M[i] = [ch == "1" for ch in s]
    return M
