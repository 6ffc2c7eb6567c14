"""Counting the ways to pick 2r gauge generators inside a 2r-dimensional symplectic space."""

from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "RepCountResult",
    "pair_table",
    "pairing_pattern",
    "formula_count",
    "multiplicity",
    "brute_force_count",
    "MAX_ENUMERATED_R",
]

MAX_ENUMERATED_R = 4


@dataclass
class RepCountResult:
    r: int
    raw: int
    multiplicity: int
    provisional: bool = False
    filter_counts: list[int] = field(default_factory=list)

    def __post_init__(self):
        if self.raw % self.multiplicity:
            raise ArithmeticError(f"raw count {self.raw} not divisible by multiplicity {self.multiplicity}")

    @property
    def unique(self) -> int:
        return self.raw // self.multiplicity

    def __str__(self) -> str:
        return f"{self.raw} / {self.multiplicity} = {self.unique}"

    def as_dict(self) -> dict:
        return {
            "r": self.r,
            "raw": self.raw,
            "multiplicity": self.multiplicity,
            "unique": self.unique,
            "provisional": self.provisional,
            "filter_counts": self.filter_counts,
        }


def _vectors(r: int) -> np.ndarray:
    """All 2^{2r} vectors, index i read as 2r bits (most significant first)."""
    idx = np.arange(1 << (2 * r))
    return ((idx[:, None] >> np.arange(2 * r - 1, -1, -1)) & 1).astype(np.uint8)


def pair_table(r: int) -> np.ndarray:
    """Symplectic products of all vector pairs, in the [x | z] standard basis."""
    if r < 1:
        raise ValueError("r must be positive")
    if r > 6:
        raise ValueError(f"table for r={r} has {1 << (4 * r)} entries; refusing")
    V = _vectors(r).astype(np.int64)
    return ((V[:, :r] @ V[:, r:].T + V[:, r:] @ V[:, :r].T) % 2).astype(np.uint8)


def pairing_pattern(r: int) -> np.ndarray:
    """Required Gram matrix of an ordered block (a1, b1, a2, b2, ...)."""
    P = np.zeros((2 * r, 2 * r), dtype=np.uint8)
    for i in range(r):
        P[2 * i, 2 * i + 1] = P[2 * i + 1, 2 * i] = 1
    return P


def multiplicity(r: int) -> int:
    """Row permutations of a valid 2r-row block that keep its pairing pattern.

    Counted by enumeration for r <= 4; larger r falls back to 2^r r! with a
    warning, since that closed form is only checked up to the enumerated range.
    """
    if r < 1:
        raise ValueError("r must be positive")
    if r > MAX_ENUMERATED_R:
        warnings.warn(f"multiplicity for r={r} uses the unverified closed form 2^r r!", stacklevel=2)
        return 2**r * math.factorial(r)
    pattern = pairing_pattern(r)
    count = 0
    for perm in itertools.permutations(range(2 * r)):
        p = np.array(perm)
        if np.array_equal(pattern[np.ix_(p, p)], pattern):
            count += 1
    return count


def formula_count(r: int) -> RepCountResult:
    if r < 1:
        raise ValueError("r must be positive")
    first = math.prod(2 ** (2 * r - 2 * l) - 1 for l in range(r))
    partners = math.prod(2 ** (2 * r - m) for m in range(1, 2 * r, 2))
    filters = []
    for l in range(r):
        filters += [2 ** (2 * r - 2 * l) - 1, 2 ** (2 * r - 2 * l - 1)]
    return RepCountResult(r, first * partners, multiplicity(r), provisional=r > MAX_ENUMERATED_R, filter_counts=filters)


def brute_force_count(r: int) -> RepCountResult:
    """Enumerate ordered blocks (a1, b1, ..., ar, br) by depth-first search on the pair table.

    ``filter_counts[d]`` is the number of admissible choices at depth ``d``;
    the search asserts it is the same for every prefix.
    """
    if r < 1:
        raise ValueError("r must be positive")
    if r > 2:
        raise ValueError(f"exhaustive count for r={r} is too large; use formula_count")
    P = pair_table(r)
    size = P.shape[0]
    pattern = pairing_pattern(r)
    seen: dict[int, set[int]] = {}

    def extend(chosen: list[int]) -> int:
        depth = len(chosen)
        if depth == 2 * r:
            return 1
        ok = np.ones(size, dtype=bool)
        ok[0] = False
        ok[chosen] = False
        for j, c in enumerate(chosen):
            ok &= P[c] == pattern[depth, j]
        options = np.flatnonzero(ok)
        seen.setdefault(depth, set()).add(len(options))
        return sum(extend([*chosen, int(v)]) for v in options)

    raw = extend([])
    counts = []
    for depth in range(2 * r):
        if len(seen[depth]) != 1:
            raise AssertionError(f"choice count at depth {depth} depends on the prefix: {sorted(seen[depth])}")
        counts.append(seen[depth].pop())
    return RepCountResult(r, raw, multiplicity(r), filter_counts=counts)
