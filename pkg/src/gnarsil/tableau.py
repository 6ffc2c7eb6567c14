"""Symplectic tableaux U = [L_X; S; L_Z; S'] for CSS seeds and their subsystem variants."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import gf2
from .pauli import omega, symplectic_gram

__all__ = [
    "CssCode",
    "CssError",
    "CodeParams",
    "Tableau",
    "build_css_tableau",
    "css_logicals",
    "complete_destabilizers",
    "verify_symplectic",
    "verify_subsystem",
    "center_of",
    "compute_group_params",
    "multiply_stabilizer_rows",
]


class CssError(ValueError):
    pass


@dataclass
class CssCode:
    hx: np.ndarray
    hz: np.ndarray

    def __post_init__(self):
        self.hx = np.atleast_2d(gf2.as_bits(self.hx))
        self.hz = np.atleast_2d(gf2.as_bits(self.hz))
        if self.hx.shape[1] != self.hz.shape[1]:
            raise CssError(f"H_X has {self.hx.shape[1]} columns but H_Z has {self.hz.shape[1]}")
        bad = np.argwhere(gf2.matmul(self.hx, self.hz.T))
        if bad.size:
            i, j = bad[0]
            raise CssError(f"H_X row {i + 1} and H_Z row {j + 1} overlap on an odd number of qubits")

    @property
    def n(self) -> int:
        return self.hx.shape[1]


@dataclass
class CodeParams:
    n: int
    k: int
    r: int
    s: int
    d: int | None = None

    def __str__(self) -> str:
        d = "?" if self.d is None else str(self.d)
        if self.r:
            return f"[[{self.n},{self.k},{self.r},{d}]]"
        return f"[[{self.n},{self.k},{d}]]"

    def as_dict(self) -> dict:
        return {"n": self.n, "k": self.k, "r": self.r, "s": self.s, "d": self.d}


@dataclass
class Tableau:
    """Rows 0..k-1 are L_X, k..n-1 are S, n..n+k-1 are L_Z, n+k..2n-1 are S'.

    ``gauge_rows`` marks rows (always in pairs ``i, i + n``) that have been
    promoted to gauge generators. Row indices here are 0-based.
    """

    n: int
    k: int
    U: np.ndarray
    gauge_rows: tuple[int, ...] = field(default=())

    def __post_init__(self):
        self.U = gf2.as_bits(self.U)
        self.gauge_rows = tuple(sorted(int(i) for i in self.gauge_rows))
        if self.U.shape != (2 * self.n, 2 * self.n):
            raise ValueError(f"U must be {2 * self.n}x{2 * self.n}, got {self.U.shape}")

    @property
    def r(self) -> int:
        return len(self.gauge_rows) // 2

    @property
    def stabilizer_rows(self) -> list[int]:
        g = set(self.gauge_rows)
        return [i for i in range(self.k, self.n) if i not in g]

    @property
    def logical_x(self) -> np.ndarray:
        return self.U[: self.k]

    @property
    def logical_z(self) -> np.ndarray:
        return self.U[self.n : self.n + self.k]

    @property
    def stabilizers(self) -> np.ndarray:
        return self.U[self.stabilizer_rows]

    @property
    def gauges(self) -> np.ndarray:
        return self.U[list(self.gauge_rows)]

    def gauge_group(self) -> np.ndarray:
        """Generators of the gauge group: remaining stabilizers plus gauge rows."""
        return np.vstack([self.stabilizers, self.gauges])

    def row_kind(self, i: int) -> str:
        if i in self.gauge_rows:
            return "gauge"
        if i < self.k:
            return "L_X"
        if i < self.n:
            return "S"
        if i < self.n + self.k:
            return "L_Z"
        return "S'"

    def copy(self) -> Tableau:
        return Tableau(self.n, self.k, self.U.copy(), self.gauge_rows)

    def to_json(self) -> dict:
        n, k = self.n, self.k
        return {
            "schema": 1,
            "n": n,
            "k": k,
            "regions": {"L_X": [0, k], "S": [k, n], "L_Z": [n, n + k], "S_prime": [n + k, 2 * n]},
            "rows": gf2.rows_to_strings(self.U),
            "gauge_rows": list(self.gauge_rows),
        }

    @classmethod
    def from_json(cls, data: dict) -> Tableau:
        n = int(data["n"])
        U = gf2.strings_to_rows(data["rows"], 2 * n)
        return cls(n, int(data["k"]), U, tuple(data.get("gauge_rows", ())))

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_json(), indent=1) + "\n")

    @classmethod
    def load(cls, path) -> Tableau:
        return cls.from_json(json.loads(Path(path).read_text()))


def css_logicals(hx: np.ndarray, hz: np.ndarray, x_dual=None, z_dual=None) -> tuple[np.ndarray, np.ndarray]:
    """Paired X- and Z-type logical representatives (length n each).

    Representatives come from the RREF kernel bases, reduced modulo the
    same-type checks; the Z side is then transformed so that
    ``lx @ lz.T == I``. ``x_dual`` (``z_dual``) replaces ``hz`` (``hx``) as
    the matrix whose kernel supplies X (Z) representatives, e.g. the full
    Z (X) gauge checks when bare logicals are wanted.
    """
    n = hx.shape[1]

    def pick(checks, dual):
        checks_only = gf2.SpanBasis(n, checks)
        span = gf2.SpanBasis(n, checks)
        reps = [rep for rep in (checks_only.reduce(v) for v in gf2.kernel(dual)) if span.add(rep)]
        return np.array(reps, dtype=np.uint8).reshape(len(reps), n)

    lx = pick(hx, hz if x_dual is None else x_dual)
    lz = pick(hz, hx if z_dual is None else z_dual)
    if len(lx) != len(lz):
        raise CssError("inconsistent logical counts; checks are not a valid CSS pair")
    if len(lx) == 0:
        return lx, lz
    pairing = gf2.matmul(lx, lz.T)
    lz = gf2.matmul(gf2.inverse(pairing).T, lz)
    return lx, lz


def complete_destabilizers(fixed: np.ndarray, targets: list[int]) -> np.ndarray:
    """Partners for the rows ``fixed[targets]``.

    Returns ``D`` with ``<D_j, fixed_i> = [i == targets[j]]`` and mutually
    commuting rows. ``fixed`` must be independent and every target must
    commute with all of ``fixed``. Targets of pure X (Z) type get pure Z (X)
    partners whenever the constraints allow it. Partners are fixed up in
    ascending target order, so the result is canonical for a given input.
    """
    m, two_n = fixed.shape
    n = two_n // 2
    D = np.zeros((len(targets), two_n), dtype=np.uint8)
    if not targets:
        return D
    rhs = np.zeros((m, len(targets)), dtype=np.uint8)
    rhs[targets, np.arange(len(targets))] = 1
    # <[0|c], [a|b]> = c.a and <[c|0], [a|b]> = c.b
    zc, z_ok = gf2.solve(fixed[:, :n], rhs)
    xc, x_ok = gf2.solve(fixed[:, n:], rhs)
    swapped = np.hstack([fixed[:, n:], fixed[:, :n]])
    gen, gen_ok = gf2.solve(swapped, rhs)
    for j, t in enumerate(targets):
        row = fixed[t]
        x_type, z_type = not row[n:].any(), not row[:n].any()
        if x_type and z_ok[j]:
            D[j, n:] = zc[:, j]
        elif z_type and x_ok[j]:
            D[j, :n] = xc[:, j]
        elif gen_ok[j]:
            D[j] = gen[:, j]
        else:
            raise CssError(f"row {t} has no symplectic partner; fixed rows are dependent")
    gram = symplectic_gram(D, D)
    for j in range(len(targets)):
        for l in range(j):
            if gram[j, l]:
                # flips only <D_j, D_l>, since fixed[targets[l]] pairs only with D_l
                D[j] ^= fixed[targets[l]]
    return D


def build_css_tableau(code: CssCode, logicals=None) -> Tableau:
    """Tableau with S = [H_X; H_Z] (independent rows, input order kept).

    ``logicals`` optionally supplies paired ``(lx, lz)`` representatives.
    """
    n = code.n
    hx = code.hx[gf2.independent_rows(code.hx)]
    hz = code.hz[gf2.independent_rows(code.hz)]
    s = len(hx) + len(hz)
    k = n - s
    if k < 0:
        raise CssError(f"{s} independent checks on {n} qubits")
    lx, lz = css_logicals(hx, hz) if logicals is None else logicals
    if len(lx) != k:
        raise CssError(f"found {len(lx)} logical pairs, expected {k}")
    zero = lambda rows: np.zeros((rows, n), dtype=np.uint8)  # noqa: E731
    LX = np.hstack([lx, zero(k)])
    S = np.vstack([np.hstack([hx, zero(len(hx))]), np.hstack([zero(len(hz)), hz])])
    LZ = np.hstack([zero(k), lz])
    top = np.vstack([LX, S, LZ])
    D = complete_destabilizers(top, list(range(k, n)))
    return Tableau(n, k, np.vstack([top, D]))


def verify_symplectic(T: Tableau) -> bool:
    return bool(np.array_equal(symplectic_gram(T.U, T.U), omega(T.n)))


def verify_subsystem(T: Tableau) -> bool:
    n = T.n
    rows = set(T.gauge_rows)
    for i in rows:
        partner = i + n if i < n else i - n
        if partner not in rows or not (T.k <= i % n < n):
            return False
    return verify_symplectic(T)


def center_of(G, n: int) -> np.ndarray:
    """Independent basis of the center {v in rowspace(G) : v commutes with G}."""
    G = np.atleast_2d(gf2.as_bits(G))
    if G.shape[1] != 2 * n:
        raise ValueError(f"rows must have length {2 * n}")
    R, pivots = gf2.rref(G)
    B = R[: len(pivots)]
    if len(B) == 0:
        return B
    M = symplectic_gram(B, G)
    coeffs = gf2.kernel(M.T)
    if len(coeffs) == 0:
        return np.zeros((0, 2 * n), dtype=np.uint8)
    return gf2.rref(gf2.matmul(coeffs, B))[0]


def compute_group_params(G, n: int) -> CodeParams:
    G = np.atleast_2d(gf2.as_bits(G)).reshape(-1, 2 * n)
    g = gf2.rank(G)
    s = len(center_of(G, n))
    if (g - s) % 2:
        raise ArithmeticError(f"gauge rank {g} minus center rank {s} is odd; malformed group")
    r = (g - s) // 2
    return CodeParams(n=n, k=n - s - r, r=r, s=s)


def multiply_stabilizer_rows(T: Tableau, target: int, sources: list[int]) -> Tableau:
    """Replace stabilizer row ``target`` by its product with ``sources``.

    The destabilizers follow the inverse-transpose rule (each source's
    partner absorbs the target's partner), which keeps U symplectic.
    """
    stab = set(T.stabilizer_rows)
    for i in [target, *sources]:
        if i not in stab:
            raise ValueError(f"row {i} is not a stabilizer row")
    odd = sorted(i for i in set(sources) if sources.count(i) % 2)
    if target in odd:
        raise ValueError(f"row {target} would become dependent on the other stabilizers")
    out = T.copy()
    n = T.n
    for i in odd:
        out.U[target] ^= T.U[i]
        out.U[i + n] ^= T.U[target + n]
    return out
