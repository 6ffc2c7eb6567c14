"""Product code builders over the binary circulant ring F2[x]/(x^L - 1).

Ring matrices are stored as ``(rows, cols, L)`` coefficient arrays. Lifting
replaces each entry by its L x L circulant, which turns ring products into
binary matrix products and conjugate transposes into plain transposes.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import gf2
from .tableau import CodeParams, CssCode, Tableau, build_css_tableau, compute_group_params, css_logicals

__all__ = [
    "RingError",
    "RingOrthogonalityError",
    "RingElement",
    "RingMatrix",
    "ring_mul",
    "ring_matmul",
    "conjugate_transpose",
    "lift",
    "ClassicalCode",
    "SubsystemCodeSpec",
    "generator_from_parity",
    "shp",
    "slp",
    "lp",
    "paper_catalog",
    "CATALOG_NAMES",
    "CATALOG_CONVENTIONS",
    "entrywise_conjugate",
    "parse_ring_matrix",
    "read_ring_matrix",
    "format_ring_matrix",
    "parse_qc_exponents",
]


class RingError(ValueError):
    pass


class RingOrthogonalityError(RingError):
    pass


# -- ring elements and matrices ------------------------------------------------------


@dataclass(frozen=True)
class RingElement:
    L: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if len(self.coeffs) != self.L:
            raise RingError(f"need {self.L} coefficients, got {len(self.coeffs)}")

    @classmethod
    def from_array(cls, c) -> RingElement:
        c = np.asarray(c, dtype=np.uint8) & 1
        return cls(len(c), tuple(int(v) for v in c))

    @classmethod
    def monomial(cls, L: int, j: int) -> RingElement:
        c = [0] * L
        c[j % L] = 1
        return cls(L, tuple(c))

    @classmethod
    def parse(cls, text: str, L: int) -> RingElement:
        return cls.from_array(_parse_poly(text, L))

    @property
    def array(self) -> np.ndarray:
        return np.array(self.coeffs, dtype=np.uint8)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __add__(self, other: RingElement) -> RingElement:
        _same_L(self.L, other.L)
        return RingElement.from_array(self.array ^ other.array)

    def __mul__(self, other: RingElement) -> RingElement:
        return ring_mul(self, other)

    def conj(self) -> RingElement:
        return RingElement.from_array(np.roll(self.array[::-1], 1))

    def __str__(self) -> str:
        return _format_poly(self.array)


def _same_L(a: int, b: int) -> None:
    if a != b:
        raise RingError(f"circulant sizes differ: {a} vs {b}")


_TERM = re.compile(r"^(?:(\d+)|x(?:\^\{?(\d+)\}?)?)$")


def _parse_poly(text: str, L: int) -> np.ndarray:
    c = np.zeros(L, dtype=np.uint8)
    text = text.replace(" ", "")
    if text == "0":
        return c
    for term in text.split("+"):
        m = _TERM.match(term)
        if m is None:
            raise RingError(f"bad monomial {term!r} in {text!r}")
        if m.group(1) is not None:
            if int(m.group(1)) % 2:
                c[0] ^= 1
        else:
            c[int(m.group(2) or 1) % L] ^= 1
    return c


def _format_poly(c: np.ndarray) -> str:
    terms = []
    for j in np.flatnonzero(c):
        terms.append("1" if j == 0 else "x" if j == 1 else f"x^{j}")
    return "+".join(terms) or "0"


def _conv(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Cyclic convolution along the last axis (mod 2), broadcasting the rest."""
    L = a.shape[-1]
    out = np.zeros(np.broadcast_shapes(a.shape, b.shape), dtype=np.uint8)
    for s in np.flatnonzero(a.reshape(-1, L).any(axis=0)):
        out ^= a[..., s : s + 1] & np.roll(b, s, axis=-1)
    return out


class RingMatrix:
    """Matrix over F2[x]/(x^L - 1) with coefficient array of shape (rows, cols, L)."""

    __slots__ = ("L", "coeffs")

    def __init__(self, coeffs):
        coeffs = np.asarray(coeffs, dtype=np.uint8) & 1
        if coeffs.ndim != 3:
            raise RingError("coefficient array must be (rows, cols, L)")
        self.coeffs = coeffs
        self.L = coeffs.shape[2]

    @classmethod
    def from_strings(cls, rows: list[list[str]], L: int) -> RingMatrix:
        if len({len(r) for r in rows}) > 1:
            raise RingError("ragged ring matrix")
        return cls(np.array([[_parse_poly(e, L) for e in r] for r in rows], dtype=np.uint8).reshape(len(rows), -1, L))

    @classmethod
    def from_binary(cls, M, L: int = 1) -> RingMatrix:
        """Constant matrix: each 1 becomes the ring unit."""
        M = gf2.as_bits(np.atleast_2d(M))
        c = np.zeros((*M.shape, L), dtype=np.uint8)
        c[..., 0] = M
        return cls(c)

    @classmethod
    def identity(cls, size: int, L: int) -> RingMatrix:
        return cls.from_binary(np.eye(size, dtype=np.uint8), L)

    @property
    def shape(self) -> tuple[int, int]:
        return self.coeffs.shape[0], self.coeffs.shape[1]

    def __getitem__(self, ij) -> RingElement:
        return RingElement.from_array(self.coeffs[ij])

    def __eq__(self, other) -> bool:
        return isinstance(other, RingMatrix) and np.array_equal(self.coeffs, other.coeffs)

    def __add__(self, other: RingMatrix) -> RingMatrix:
        _same_L(self.L, other.L)
        return RingMatrix(self.coeffs ^ other.coeffs)

    def __matmul__(self, other: RingMatrix) -> RingMatrix:
        return ring_matmul(self, other)

    def is_zero(self) -> bool:
        return not self.coeffs.any()

    def conj_t(self) -> RingMatrix:
        return conjugate_transpose(self)

    def kron(self, other: RingMatrix) -> RingMatrix:
        _same_L(self.L, other.L)
        (a, b), (c, d) = self.shape, other.shape
        out = _conv(self.coeffs[:, None, :, None, :], other.coeffs[None, :, None, :, :])
        return RingMatrix(out.reshape(a * c, b * d, self.L))

    def lift(self) -> np.ndarray:
        return lift(self)

    def to_strings(self) -> list[list[str]]:
        return [[_format_poly(e) for e in row] for row in self.coeffs]

    def __repr__(self) -> str:
        return f"RingMatrix(L={self.L}, {self.to_strings()})"


def ring_mul(a: RingElement, b: RingElement) -> RingElement:
    _same_L(a.L, b.L)
    return RingElement.from_array(_conv(a.array, b.array))


def ring_matmul(A: RingMatrix, B: RingMatrix) -> RingMatrix:
    _same_L(A.L, B.L)
    if A.shape[1] != B.shape[0]:
        raise RingError(f"inner dimensions differ: {A.shape} @ {B.shape}")
    prod = _conv(A.coeffs[:, :, None, :], B.coeffs[None, :, :, :])
    return RingMatrix(np.bitwise_xor.reduce(prod, axis=1))


def conjugate_transpose(A: RingMatrix) -> RingMatrix:
    # x^j -> x^{-j}: reverse then rotate so the constant term stays put
    return RingMatrix(np.roll(A.coeffs[:, :, ::-1], 1, axis=2).transpose(1, 0, 2))


def lift(A: RingMatrix) -> np.ndarray:
    """Binary (rows*L) x (cols*L) matrix; x^j maps to the shift with 1s at (i, i+j mod L)."""
    r, c = A.shape
    L = A.L
    idx = (np.arange(L)[None, :] - np.arange(L)[:, None]) % L  # idx[i, col] = col - i
    blocks = A.coeffs[:, :, idx]  # (r, c, L, L)
    return np.ascontiguousarray(blocks.transpose(0, 2, 1, 3).reshape(r * L, c * L))


# -- classical codes and product constructions --------------------------------------------


@dataclass
class ClassicalCode:
    H: np.ndarray
    G: np.ndarray

    def __post_init__(self):
        self.H = np.atleast_2d(gf2.as_bits(self.H))
        self.G = gf2.as_bits(self.G).reshape(-1, self.H.shape[1])
        if gf2.matmul(self.G, self.H.T).any():
            raise ValueError("G H^T != 0")
        if gf2.rank(self.G) != self.n - gf2.rank(self.H):
            raise ValueError("G does not span the full kernel of H")

    @property
    def n(self) -> int:
        return self.H.shape[1]

    @property
    def k(self) -> int:
        return gf2.rank(self.G)


def generator_from_parity(H) -> ClassicalCode:
    H = np.atleast_2d(gf2.as_bits(H))
    return ClassicalCode(H, gf2.kernel(H))


@dataclass
class SubsystemCodeSpec:
    """Binary gauge, logical and stabilizer candidates of a product construction.

    Candidate matrices are kept raw (possibly rank-deficient); parameters are
    always computed from the gauge group.
    """

    n: int
    gx: np.ndarray
    gz: np.ndarray
    lx: np.ndarray
    lz: np.ndarray
    sx: np.ndarray
    sz: np.ndarray
    ring: dict = field(default_factory=dict, repr=False)

    def gauge_group(self) -> np.ndarray:
        return _css_rows(self.gx, self.gz, self.n)

    def stabilizer_candidates(self) -> np.ndarray:
        return _css_rows(self.sx, self.sz, self.n)

    def params(self) -> CodeParams:
        return compute_group_params(self.gauge_group(), self.n)

    def stabilizer_weights(self) -> dict[str, list[int]]:
        return {"X": _weights(self.sx), "Z": _weights(self.sz)}

    def gauge_weights(self) -> dict[str, list[int]]:
        return {"X": _weights(self.gx), "Z": _weights(self.gz)}

    def check(self) -> list[str]:
        """Names of violated relations; empty when the construction is consistent."""
        bad = []
        pairs = {
            "S_X/G_Z": (self.sx, self.gz),
            "S_Z/G_X": (self.sz, self.gx),
            "S_X/S_Z": (self.sx, self.sz),
            "L_X/G_Z": (self.lx, self.gz),
            "L_Z/G_X": (self.lz, self.gx),
            "L_X/S_Z": (self.lx, self.sz),
            "L_Z/S_X": (self.lz, self.sx),
        }
        for name, (a, b) in pairs.items():
            if len(a) and len(b) and gf2.matmul(a, b.T).any():
                bad.append(name)
        if len(self.sx) and gf2.rank(np.vstack([self.gx, self.sx])) != gf2.rank(self.gx):
            bad.append("S_X outside G_X")
        if len(self.sz) and gf2.rank(np.vstack([self.gz, self.sz])) != gf2.rank(self.gz):
            bad.append("S_Z outside G_Z")
        return bad

    def verify(self) -> None:
        bad = self.check()
        if bad:
            raise RingOrthogonalityError("construction fails: " + ", ".join(bad))

    def seed(self) -> tuple[Tableau, tuple[int, ...]]:
        """Gauge-fixed stabilizer seed and the 0-based rows holding the fixed Z gauges.

        Checks are S_X and S_Z (independent subsets) followed by the Z gauges
        that enlarge the Z span. Logical rows are bare representatives.
        Splitting the extra rows recovers the subsystem structure.
        """
        hx = self.sx[gf2.independent_rows(self.sx)] if len(self.sx) else np.zeros((0, self.n), np.uint8)
        span = gf2.SpanBasis(self.n)
        hz = [row for row in self.sz if span.add(row)]
        base = len(hz)
        hz += [row for row in self.gz if span.add(row)]
        hz = np.array(hz, dtype=np.uint8).reshape(-1, self.n)
        # bare representatives, so the seed logicals commute with every gauge
        hx_sz = self.sz[gf2.independent_rows(self.sz)] if len(self.sz) else hz[:0]
        logicals = css_logicals(hx, hx_sz, x_dual=self.gz, z_dual=self.gx)
        T = build_css_tableau(CssCode(hx, hz), logicals=logicals)
        first = T.k + len(hx) + base
        return T, tuple(range(first, first + len(hz) - base))


def _css_rows(x: np.ndarray, z: np.ndarray, n: int) -> np.ndarray:
    zero = lambda m: np.zeros((len(m), n), dtype=np.uint8)  # noqa: E731
    return np.vstack([np.hstack([x, zero(x)]), np.hstack([zero(z), z])])


def _weights(M: np.ndarray) -> list[int]:
    return sorted({int(w) for w in M.sum(axis=1) if w})


def _ring_orthogonal(A: RingMatrix, G: RingMatrix) -> None:
    prod = A @ G.conj_t()
    if not prod.is_zero():
        i, j = (int(v) for v in np.argwhere(prod.coeffs.any(axis=2))[0])
        raise RingOrthogonalityError(
            f"A G_A* is nonzero at row {i + 1}, column {j + 1}: {_format_poly(prod.coeffs[i, j])}"
        )


def entrywise_conjugate(A: RingMatrix) -> RingMatrix:
    return RingMatrix(np.roll(A.coeffs[:, :, ::-1], 1, axis=2))


def slp(A: RingMatrix, G_A: RingMatrix, convention: str = "conjugate") -> SubsystemCodeSpec:
    """Subsystem product of ``A`` and its ring generator matrix, lifted.

    Templates: G_X = A (x) I, G_Z = I (x) A, L_X = I (x) G_A, L_Z = G_A (x) I,
    S_X = A (x) G_A, S_Z = G_A (x) A, with I of size ``A.cols``. Every
    X/Z pair is checked over GF(2) after lifting.

    ``convention="conjugate"`` expects ``A G_A* = 0``. Generators written for
    the opposite circulant orientation satisfy ``A G_A^T = 0`` instead; pass
    ``convention="transpose"`` and ``G_A`` is conjugated entrywise first.
    """
    _same_L(A.L, G_A.L)
    if A.shape[1] != G_A.shape[1]:
        raise RingError(f"A has {A.shape[1]} columns but G_A has {G_A.shape[1]}")
    if convention == "transpose":
        G_A = entrywise_conjugate(G_A)
    elif convention != "conjugate":
        raise ValueError(f"unknown convention {convention!r}")
    _ring_orthogonal(A, G_A)
    I = RingMatrix.identity(A.shape[1], A.L)
    ring = {
        "G_X": A.kron(I),
        "G_Z": I.kron(A),
        "L_X": I.kron(G_A),
        "L_Z": G_A.kron(I),
        "S_X": A.kron(G_A),
        "S_Z": G_A.kron(A),
    }
    b = {name: lift(M) for name, M in ring.items()}
    spec = SubsystemCodeSpec(
        A.L * A.shape[1] ** 2, b["G_X"], b["G_Z"], b["L_X"], b["L_Z"], b["S_X"], b["S_Z"], ring
    )
    spec.verify()
    return spec


def shp(code: ClassicalCode) -> SubsystemCodeSpec:
    return slp(RingMatrix.from_binary(code.H), RingMatrix.from_binary(code.G))


def lp(A: RingMatrix) -> CssCode:
    """Lifted product of ``A`` (m x n) with ``A*``.

    H_X = [A (x) I_n, I_m (x) A*] and H_Z = [I_n (x) A, A* (x) I_m], on
    L(n^2 + m^2) qubits.
    """
    m, n = A.shape
    As = A.conj_t()
    In, Im = RingMatrix.identity(n, A.L), RingMatrix.identity(m, A.L)
    hx = np.hstack([lift(A.kron(In)), lift(Im.kron(As))])
    hz = np.hstack([lift(In.kron(A)), lift(As.kron(Im))])
    if gf2.matmul(hx, hz.T).any():
        raise RingOrthogonalityError("lifted H_X H_Z^T != 0")
    return CssCode(hx, hz)


# -- catalog ----------------------------------------------------------------------------


def _bits(rows: list[str]) -> np.ndarray:
    return np.array([[int(c) for c in r] for r in rows], dtype=np.uint8)


def _poly(*exps: int) -> str:
    return "+".join(f"x^{e}" for e in exps)


_F31 = "+".join(f"x^{e}" for e in range(31))
_U = {
    "u11": _poly(28, 25, 18, 16, 5, 1),
    "u12": _poly(23, 22, 20, 17, 7, 4),
    "u13": _poly(29, 25, 21, 12, 5, 1),
    "u14": _poly(28, 18, 16, 14, 9, 8),
    "u21": _poly(27, 24, 19, 11, 10, 2),
    "u22": _poly(30, 28, 26, 18, 16, 6),
    "u23": _poly(20, 14, 9, 8, 7, 4),
}
_U["u25"] = _U["u14"]


def _catalog_entries():
    f = _F31
    u = _U
    return {
        "H10_5": _bits(["1111000000", "1000111000", "0100100110", "0010010101", "0001001011"]),
        "H_hamming": _bits(["1110100", "1101010", "1011001"]),
        "A_2x3": _bits(["011", "110"]),
        "GA_1x3": _bits(["111"]),
        "B_L2": (2, [["1", "x", "x"], ["x", "x", "1"]]),
        "GB_L2": (2, [["1+x", "1+x", "0"], ["1+x", "0", "1+x"], ["x", "0", "1"]]),
        "A_27": (3, [["1+x+x^2", "1+x", "x"]]),
        "GA_27": (3, [["x^2", "x", "1"], ["x", "x^2", "x"], ["1", "0", "1+x+x^2"]]),
        "B_31": (
            31,
            [
                ["x", "x^2", "x^4", "x^8", "x^16"],
                ["x^5", "x^10", "x^20", "x^9", "x^18"],
                ["x^25", "x^19", "x^7", "x^14", "x^28"],
            ],
        ),
        "GB_31": (
            31,
            [
                [u["u11"], u["u12"], u["u13"], u["u14"], "0"],
                [u["u21"], u["u22"], u["u23"], "0", u["u25"]],
                [f, f, "0", "0", "0"],
                [f, "0", f, "0", "0"],
                [f, "0", "0", f, "0"],
                [f, "0", "0", "0", f],
            ],
        ),
    }


CATALOG_NAMES = tuple(_catalog_entries())

# generators transcribed in the opposite circulant orientation (A G^T = 0)
CATALOG_CONVENTIONS = {"GB_31": "transpose"}


def paper_catalog(name: str):
    """Named base matrices: binary ones as bit arrays, ring ones as :class:`RingMatrix`."""
    entries = _catalog_entries()
    if name not in entries:
        raise KeyError(f"unknown catalog entry {name!r}; choose from {', '.join(entries)}")
    value = entries[name]
    if isinstance(value, np.ndarray):
        return value.copy()
    L, rows = value
    return RingMatrix.from_strings(rows, L)


# -- file formats -----------------------------------------------------------------------


def parse_ring_matrix(text: str) -> RingMatrix:
    """Header ``<rows> <cols> <L>`` then row-major entries such as ``1+x^3`` or ``0``."""
    tokens = text.split()
    if len(tokens) < 3:
        raise gf2.MatrixFormatError("missing '<rows> <cols> <L>' header", 1)
    try:
        r, c, L = (int(t) for t in tokens[:3])
    except ValueError:
        raise gf2.MatrixFormatError("header must be three integers", 1) from None
    body = tokens[3:]
    if len(body) != r * c:
        raise gf2.MatrixFormatError(f"expected {r * c} entries, found {len(body)}", 2)
    return RingMatrix.from_strings([body[i * c : (i + 1) * c] for i in range(r)], L)


def read_ring_matrix(path) -> RingMatrix:
    return parse_ring_matrix(Path(path).read_text())


def format_ring_matrix(A: RingMatrix) -> str:
    r, c = A.shape
    lines = [f"{r} {c} {A.L}"] + [" ".join(row) for row in A.to_strings()]
    return "\n".join(lines) + "\n"


def parse_qc_exponents(text: str, L: int | None = None) -> RingMatrix:
    """Quasi-cyclic exponent table: one row per line, ``-1`` for a zero block.

    A leading ``<rows> <cols> <L>`` header line is honoured when present.
    """
    lines = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if L is None:
        if not lines or len(lines[0]) != 3:
            raise gf2.MatrixFormatError("circulant size not given and no header line", 1)
        L = int(lines[0][2])
        lines = lines[1:]
    elif lines and len(lines[0]) == 3 and len(lines) > 1 and len(lines[1]) != 3:
        lines = lines[1:]
    rows = []
    for i, ln in enumerate(lines, 1):
        try:
            exps = [int(t) for t in ln]
        except ValueError:
            raise gf2.MatrixFormatError("exponents must be integers", i) from None
        rows.append(["0" if e < 0 else f"x^{e % L}" for e in exps])
    return RingMatrix.from_strings(rows, L)
