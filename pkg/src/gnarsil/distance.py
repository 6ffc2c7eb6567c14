"""Exact minimum distance by bounded brute force over low-weight Paulis."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import gf2
from .tableau import Tableau

__all__ = [
    "DistanceRefused",
    "DistanceQuery",
    "min_weight_logical",
    "dressed_distance",
    "bare_distance",
    "stabilizer_distance",
]

MAX_QUBITS = 150
MAX_WEIGHT = 4


class DistanceRefused(RuntimeError):
    pass


def _type_masks(F: np.ndarray, n: int, swap: bool) -> np.ndarray:
    """Per-(type, qubit) packed masks of a linear functional family.

    With ``swap`` the functional is the symplectic product with rows of ``F``,
    otherwise the plain dot product. Types are ordered X, Y, Z.
    """
    F = np.atleast_2d(F)
    fx, fz = F[:, :n], F[:, n:]
    if swap:
        fx, fz = fz, fx
    if F.shape[0] == 0:
        return np.zeros((3, n, 1), dtype=np.uint64)
    mx = gf2.pack_rows(fx.T)
    mz = gf2.pack_rows(fz.T)
    return np.stack([mx, mx ^ mz, mz])


def min_weight_logical(
    stabilizers,
    gauge_group,
    n: int,
    weight_limit: int,
    mode: str = "dressed",
    css_only: bool = False,
    force: bool = False,
):
    """Lightest Pauli in C(S) (dressed) or C(G) (bare) outside rowspace(G).

    Search runs by ascending weight, then support in lexicographic order,
    then the X<Y<Z type assignments; the first hit is returned as
    ``(weight, vector)``. Returns ``None`` when nothing is found up to
    ``weight_limit``. ``css_only`` restricts to pure X and pure Z candidates,
    which is exact when both groups are CSS.
    """
    if not force and (n > MAX_QUBITS or weight_limit > MAX_WEIGHT):
        raise DistanceRefused(f"n={n}, weight limit {weight_limit} exceeds desk scale; pass force=True")
    if weight_limit > n:
        raise ValueError("weight limit exceeds n")
    G = np.atleast_2d(gf2.as_bits(gauge_group)).reshape(-1, 2 * n)
    S = np.atleast_2d(gf2.as_bits(stabilizers)).reshape(-1, 2 * n)
    if mode == "dressed":
        comm_rows = S
    elif mode == "bare":
        comm_rows = G
    else:
        raise ValueError(f"unknown mode {mode!r}")
    comm = _type_masks(comm_rows, n, swap=True)
    member = _type_masks(gf2.kernel(G) if len(G) else np.eye(2 * n, dtype=np.uint8), n, swap=False)

    for w in range(1, weight_limit + 1):
        if css_only:
            patterns = [(0,) * w, (2,) * w]
        else:
            patterns = list(itertools.product(range(3), repeat=w))
        cols = np.arange(w)
        for supports in gf2.support_chunks(n, w, chunk=1 << 14):
            hit = np.zeros((len(supports), len(patterns)), dtype=bool)
            for p, types in enumerate(patterns):
                t = np.asarray(types)
                c = np.bitwise_xor.reduce(comm[t[cols], supports], axis=1)
                m = np.bitwise_xor.reduce(member[t[cols], supports], axis=1)
                hit[:, p] = ~c.any(axis=1) & m.any(axis=1)
            rows = np.flatnonzero(hit.any(axis=1))
            if rows.size:
                i = int(rows[0])
                types = patterns[int(np.flatnonzero(hit[i])[0])]
                v = np.zeros(2 * n, dtype=np.uint8)
                for q, ty in zip(supports[i], types):
                    if ty in (0, 1):
                        v[q] = 1
                    if ty in (1, 2):
                        v[n + q] = 1
                return w, v
    return None


def dressed_distance(stabilizers, gauge_group, n: int, weight_limit: int, **kw) -> int | None:
    """Minimum dressed-logical weight, or ``None`` if it exceeds ``weight_limit``."""
    found = min_weight_logical(stabilizers, gauge_group, n, weight_limit, mode="dressed", **kw)
    return None if found is None else found[0]


def bare_distance(gauge_group, n: int, weight_limit: int, **kw) -> int | None:
    found = min_weight_logical(gauge_group, gauge_group, n, weight_limit, mode="bare", **kw)
    return None if found is None else found[0]


def stabilizer_distance(T: Tableau, weight_limit: int, **kw) -> int | None:
    if T.r:
        raise ValueError("tableau has gauge rows; use dressed_distance")
    S = T.stabilizers
    return dressed_distance(S, S, T.n, weight_limit, **kw)


@dataclass
class DistanceQuery:
    stabilizers: np.ndarray
    gauge_group: np.ndarray
    n: int
    weight_limit: int
    mode: str = "dressed"

    @classmethod
    def from_tableau(cls, T: Tableau, weight_limit: int, mode: str = "dressed") -> DistanceQuery:
        return cls(T.stabilizers, T.gauge_group(), T.n, weight_limit, mode)

    def run(self, **kw) -> int | None:
        found = min_weight_logical(self.stabilizers, self.gauge_group, self.n, self.weight_limit, self.mode, **kw)
        return None if found is None else found[0]
