"""Stabilizer splitting: gauge generators (algorithm 1) and gauge operators (algorithm 2).

Both algorithms scan fixed-weight single-type Paulis that commute with the
retained part of the tableau, then pick, per target stabilizer, the
combination of ``gauges_per_stab`` candidates whose product with the
stabilizer leaves the lightest residual operator.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from math import comb

import numpy as np

from . import gf2
from .pauli import format_pauli, pauli_weight, symplectic_gram
from .tableau import CodeParams, Tableau, complete_destabilizers, compute_group_params, verify_subsystem

log = logging.getLogger(__name__)

__all__ = [
    "AlgorithmFailure",
    "ResourceBudgetExceeded",
    "SplitConfig",
    "GaugeSet",
    "TargetSplit",
    "SplitReport",
    "OperatorSplit",
    "commutant_matrix",
    "find_x_candidates",
    "find_candidates",
    "escalate",
    "choose_gauges",
    "pair_z_gauges",
    "evaluate_residuals",
    "gnarsil1",
    "gnarsil2",
]


class AlgorithmFailure(RuntimeError):
    """No usable candidates at any weight below n."""


class ResourceBudgetExceeded(RuntimeError):
    def __init__(self, pool: int, t: int, budget: int):
        self.size = comb(pool, t)
        super().__init__(f"C({pool}, {t}) = {self.size} combinations exceeds budget {budget}")


@dataclass(frozen=True)
class SplitConfig:
    """Search settings.

    ``replace_rows`` are 0-based rows of U inside the S region; the CLI takes
    them 1-based.
    """

    w: int
    replace_rows: tuple[int, ...] = ()
    max_size: int = 64
    gauges_per_stab: int = 2
    combo_budget: int = 10**8
    threads: int = 1
    distance_limit: int = 4

    def __post_init__(self):
        if self.w < 1:
            raise ValueError("w must be at least 1")
        if self.gauges_per_stab < 1:
            raise ValueError("gauges_per_stab must be at least 1")


@dataclass
class GaugeSet:
    g_x: np.ndarray
    g_z: np.ndarray

    def to_json(self) -> dict:
        return {"g_x": [format_pauli(v) for v in self.g_x], "g_z": [format_pauli(v) for v in self.g_z]}


@dataclass
class TargetSplit:
    target_row: int
    kind: str
    gauge_indices: tuple[int, ...]
    gauges: np.ndarray
    residual: np.ndarray
    residual_weight: int
    stabilizer_weight: int

    @property
    def useful(self) -> bool:
        return self.residual_weight < self.stabilizer_weight

    def to_json(self) -> dict:
        return {
            "target_row": self.target_row,
            "kind": self.kind,
            "gauge_indices": list(self.gauge_indices),
            "gauge_paulis": [format_pauli(g) for g in self.gauges],
            "residual_pauli": format_pauli(self.residual),
            "residual_weight": self.residual_weight,
            "stabilizer_weight": self.stabilizer_weight,
        }


@dataclass
class SplitReport:
    algorithm: int
    entries: list[TargetSplit] = field(default_factory=list)
    weights: dict[str, int] = field(default_factory=dict)
    pool_sizes: dict[str, int] = field(default_factory=dict)
    dependent_gauges: list[dict] = field(default_factory=list)

    def residual_weights(self, kind: str) -> list[int]:
        return [e.residual_weight for e in self.entries if e.kind == kind]

    def to_json(self) -> dict:
        return {
            "algorithm": self.algorithm,
            "weights": self.weights,
            "pool_sizes": self.pool_sizes,
            "entries": [e.to_json() for e in self.entries],
            "dependent_gauges": self.dependent_gauges,
        }


@dataclass
class OperatorSplit:
    """Algorithm-2 output: retained tableau rows plus gauge operator lists."""

    n: int
    logical_x: np.ndarray
    logical_z: np.ndarray
    stabilizers: np.ndarray
    gauges: GaugeSet

    def rows(self) -> np.ndarray:
        return np.vstack([self.logical_x, self.stabilizers, self.gauges.g_x, self.logical_z, self.gauges.g_z])

    def gauge_group(self) -> np.ndarray:
        return np.vstack([self.stabilizers, self.gauges.g_x, self.gauges.g_z])


# -- candidate scan -----------------------------------------------------------


class _LinearTest:
    """Evaluates ``F v^T`` for single-type ``v`` given as a support set.

    ``F`` is restricted to the half of the columns that ``v`` occupies, and its
    columns are packed per qubit so a syndrome is the XOR of ``w`` masks.
    """

    def __init__(self, F: np.ndarray):
        F = np.atleast_2d(F)
        self.rows = F.shape[0]
        self.masks = gf2.pack_rows(F.T) if self.rows else np.zeros((F.shape[1], 1), dtype=np.uint64)

    def syndromes(self, supports: np.ndarray) -> np.ndarray:
        return np.bitwise_xor.reduce(self.masks[supports], axis=1)

    def zero(self, supports: np.ndarray) -> np.ndarray:
        return ~self.syndromes(supports).any(axis=1)

    def weight(self, supports: np.ndarray) -> np.ndarray:
        return gf2.popcount_rows(self.syndromes(supports))


def _half(M: np.ndarray, kind: str, n: int) -> np.ndarray:
    return M[:, :n] if kind == "X" else M[:, n:]


def _embed(supports: np.ndarray, kind: str, n: int) -> np.ndarray:
    out = np.zeros((len(supports), 2 * n), dtype=np.uint8)
    offset = 0 if kind == "X" else n
    np.put_along_axis(out, supports + offset, 1, axis=1)
    return out


def commutant_matrix(T: Tableau, cfg: SplitConfig) -> np.ndarray:
    """Rows ``0..n+k-1`` of U with the rows slated for replacement removed.

    Keeping the replaced rows would leave no candidate that both commutes with
    every row and lies outside their span.
    """
    drop = set(cfg.replace_rows)
    return T.U[[i for i in range(T.n + T.k) if i not in drop]]


def find_candidates(
    V: np.ndarray,
    n: int,
    w: int,
    kind: str,
    mode: str,
    max_size: int,
    existing: np.ndarray | None = None,
    anticommute_with: np.ndarray | None = None,
    exactly_one: bool = True,
    stabilizers: np.ndarray | None = None,
    logicals: np.ndarray | None = None,
) -> np.ndarray:
    """Weight-``w`` single-type candidates in enumeration order.

    ``mode="generator"`` keeps vectors that commute with ``V``, are outside
    rowspace(V) and are independent of ``existing`` plus earlier keeps.
    ``mode="operator"`` keeps vectors that commute with ``V`` and are not bare
    logicals, i.e. not in span(stabilizers + logicals) unless already in
    span(stabilizers). With ``anticommute_with`` the candidate must also
    anticommute with exactly one (or at least one) of those rows.
    """
    other = "Z" if kind == "X" else "X"
    comm = _LinearTest(_half(V, other, n))
    tests = []
    if mode == "generator":
        outside = _LinearTest(_half(gf2.kernel(V), kind, n))
        tests.append(lambda s: ~outside.zero(s))
    elif mode == "operator":
        if stabilizers is not None and logicals is not None and len(logicals):
            in_s = _LinearTest(_half(gf2.kernel(stabilizers), kind, n)) if len(stabilizers) else None
            in_sl = _LinearTest(_half(gf2.kernel(np.vstack([stabilizers, logicals])), kind, n))

            def not_bare(s, in_s=in_s, in_sl=in_sl):
                bare = in_sl.zero(s)
                if in_s is not None:
                    bare &= ~in_s.zero(s)
                return ~bare

            tests.append(not_bare)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    if anticommute_with is not None:
        anti = _LinearTest(_half(anticommute_with, other, n))
        tests.append((lambda s: anti.weight(s) == 1) if exactly_one else (lambda s: anti.weight(s) >= 1))

    basis = gf2.SpanBasis(2 * n, existing) if mode == "generator" else None
    kept: list[np.ndarray] = []
    for supports in gf2.support_chunks(n, w):
        ok = comm.zero(supports)
        for test in tests:
            if not ok.any():
                break
            idx = np.flatnonzero(ok)
            ok[idx] = test(supports[idx])
        for vec in _embed(supports[ok], kind, n):
            if basis is not None and not basis.add(vec):
                continue
            kept.append(vec)
            if len(kept) >= max_size:
                return np.array(kept, dtype=np.uint8)
    return np.array(kept, dtype=np.uint8).reshape(len(kept), 2 * n)


def find_x_candidates(V: np.ndarray, cfg: SplitConfig, mode: str, existing=None, n: int | None = None, **kw):
    n = V.shape[1] // 2 if n is None else n
    return find_candidates(V, n, cfg.w, "X", mode, cfg.max_size, existing=existing, **kw)


def escalate(cfg: SplitConfig, n: int, pool_size: int = 0) -> SplitConfig:
    """Next weight after an empty pool; raises once the weight reaches n."""
    if pool_size:
        return cfg
    w = cfg.w + 1
    if w >= n:
        raise AlgorithmFailure(f"no gauge candidates at any weight below n={n}")
    log.info("escalating candidate weight to %d", w)
    return replace(cfg, w=w)


# -- residual minimization ----------------------------------------------------


def _pack_pauli(M: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    return gf2.pack_rows(M[:, :n]), gf2.pack_rows(M[:, n:])


def _best_combination(target: np.ndarray, pool: np.ndarray, t: int, threads: int = 1):
    """(combo index tuple, residual weight) with the lowest weight, lowest index on ties."""
    n = pool.shape[1] // 2
    px, pz = _pack_pauli(pool, n)
    tx, tz = _pack_pauli(target.reshape(1, -1), n)
    chunks = list(gf2.support_chunks(len(pool), t, chunk=1 << 15))

    def scan(combos):
        rx = tx[0] ^ np.bitwise_xor.reduce(px[combos], axis=1)
        rz = tz[0] ^ np.bitwise_xor.reduce(pz[combos], axis=1)
        wts = gf2.popcount_rows(rx | rz)
        i = int(np.argmin(wts))
        return int(wts[i]), tuple(int(c) for c in combos[i])

    if threads > 1:
        with ThreadPoolExecutor(threads) as ex:
            results = list(ex.map(scan, chunks))
    else:
        results = [scan(c) for c in chunks]
    # chunks are in enumeration order, so the first minimum is the lowest index
    best = min(results, key=lambda r: r[0])
    return best[1], best[0]


def evaluate_residuals(
    targets: np.ndarray, pool: np.ndarray, gauges_per_stab: int, budget: int = 10**8, threads: int = 1, rows=None
) -> list[TargetSplit]:
    """Best residual of each target row against a fixed gauge pool."""
    targets = np.atleast_2d(targets)
    t = min(gauges_per_stab, len(pool))
    if t == 0:
        raise ValueError("empty gauge pool")
    if comb(len(pool), t) > budget:
        raise ResourceBudgetExceeded(len(pool), t, budget)
    rows = range(len(targets)) if rows is None else rows
    n = targets.shape[1] // 2
    out = []
    for row, target in zip(rows, targets):
        combo, weight = _best_combination(target, pool, t, threads)
        chosen = pool[list(combo)]
        residual = target ^ np.bitwise_xor.reduce(chosen, axis=0)
        kind = "X" if not target[n:].any() else "Z" if not target[:n].any() else "mixed"
        out.append(TargetSplit(row, kind, combo, chosen, residual, weight, pauli_weight(target)))
    return out


def choose_gauges(
    T: Tableau, targets: list[int], pool: np.ndarray, cfg: SplitConfig, limit: int | None = None, independent_of=None
):
    """Pick the minimum-residual combination for each target row in order.

    Members of a chosen combination join the gauge list unless they are
    already present. With ``independent_of`` (a :class:`gf2.SpanBasis`) a
    member that adds nothing new to that span is logged as a dependent gauge
    instead. Collection stops once ``limit`` gauges are held.

    Returns ``(chosen rows, entries, dependent)``.
    """
    if len(pool) == 0:
        raise ValueError("empty candidate pool")
    t = min(cfg.gauges_per_stab, len(pool))
    if comb(len(pool), t) > cfg.combo_budget:
        raise ResourceBudgetExceeded(len(pool), t, cfg.combo_budget)
    chosen: list[int] = []
    entries: list[TargetSplit] = []
    dependent: list[dict] = []
    for row in targets:
        entry = evaluate_residuals(T.U[row], pool, t, cfg.combo_budget, cfg.threads, rows=[row])[0]
        entries.append(entry)
        for idx in entry.gauge_indices:
            if idx in chosen:
                continue
            if independent_of is not None and not independent_of.add(pool[idx]):
                dependent.append({"pauli": format_pauli(pool[idx]), "pool_index": idx, "target_row": row})
                continue
            chosen.append(idx)
        if limit is not None and len(chosen) >= limit:
            chosen = chosen[:limit]
            break
    return chosen, entries, dependent


def pair_z_gauges(z_pool: np.ndarray, g_x: np.ndarray, preferred: list[int], taken=()) -> list[int | None]:
    """Assign each X gauge one Z candidate that anticommutes with it alone.

    Every candidate has exactly one X partner, so a greedy pass (preferred
    candidates first, then pool order) finds a perfect assignment whenever
    one exists. X gauges listed in ``taken`` are skipped. Returns, per X
    gauge, the index into ``z_pool`` or ``None``.
    """
    partner: list[int | None] = [None] * len(g_x)
    taken = set(taken)
    if len(z_pool) == 0:
        return partner
    gram = symplectic_gram(z_pool, g_x)
    order = list(dict.fromkeys([*preferred, *range(len(z_pool))]))
    for idx in order:
        hits = np.flatnonzero(gram[idx])
        if len(hits) != 1:
            continue
        j = int(hits[0])
        if partner[j] is None and j not in taken:
            partner[j] = idx
    return partner


# -- the two algorithms ---------------------------------------------------------


def _targets(T: Tableau, rows: list[int], kind: str) -> list[int]:
    n = T.n
    if kind == "X":
        return [i for i in rows if not T.U[i, n:].any() and T.U[i, :n].any()]
    return [i for i in rows if not T.U[i, :n].any() and T.U[i, n:].any()]


def _check_config(T: Tableau, cfg: SplitConfig) -> None:
    bad = [i for i in cfg.replace_rows if not T.k <= i < T.n or i in T.gauge_rows]
    if bad:
        raise ValueError(f"replace rows {bad} are not stabilizer rows of the tableau")
    if len(set(cfg.replace_rows)) != len(cfg.replace_rows):
        raise ValueError("replace rows must be distinct")
    if cfg.w >= T.n:
        raise ValueError(f"w={cfg.w} must be below n={T.n}")


def gnarsil1(T: Tableau, cfg: SplitConfig, compute_distance: bool = True):
    """Replace ``cfg.replace_rows`` with X gauge generators and their Z partners.

    Returns ``(tableau, params, report)``.
    """
    from .distance import DistanceRefused, dressed_distance

    _check_config(T, cfg)
    n, k = T.n, T.k
    r = len(cfg.replace_rows)
    report = SplitReport(algorithm=1)
    if r == 0:
        params = compute_group_params(T.gauge_group(), n)
        return T.copy(), params, report

    V = commutant_matrix(T, cfg)
    retained = [i for i in T.stabilizer_rows if i not in cfg.replace_rows]

    # X gauge generators
    span = gf2.SpanBasis(2 * n, V)
    g_x: list[np.ndarray] = []
    xcfg = cfg
    while True:
        existing = np.array(g_x, dtype=np.uint8).reshape(len(g_x), 2 * n)
        pool = find_candidates(V, n, xcfg.w, "X", "generator", xcfg.max_size, existing=existing)
        log.info("X pool at w=%d: %d candidates", xcfg.w, len(pool))
        if len(pool):
            report.pool_sizes["X"] = len(pool)
            chosen, entries, dep = choose_gauges(
                T, _targets(T, retained, "X"), pool, xcfg, limit=r - len(g_x), independent_of=span
            )
            report.entries += entries
            report.dependent_gauges += dep
            g_x += [pool[i] for i in chosen]
            # top up from the pool when the targets did not supply r generators
            for vec in pool:
                if len(g_x) >= r:
                    break
                if span.add(vec):
                    g_x.append(vec)
        if len(g_x) >= r:
            break
        xcfg = escalate(xcfg, n, 0)
    report.weights["X"] = xcfg.w
    G_X = np.array(g_x[:r], dtype=np.uint8)

    # Z partners
    partners: list[np.ndarray | None] = [None] * r
    zcfg = cfg
    while True:
        have = np.array([p for p in partners if p is not None], dtype=np.uint8).reshape(-1, 2 * n)
        pool = find_candidates(V, n, zcfg.w, "Z", "generator", zcfg.max_size, existing=have, anticommute_with=G_X)
        log.info("Z pool at w=%d: %d candidates", zcfg.w, len(pool))
        if len(pool):
            report.pool_sizes["Z"] = len(pool)
            preferred, entries, _ = choose_gauges(T, _targets(T, retained, "Z"), pool, zcfg)
            report.entries += entries
            taken = {j for j in range(r) if partners[j] is not None}
            assign = pair_z_gauges(pool, G_X, preferred, taken)
            for j, idx in enumerate(assign):
                if idx is not None:
                    partners[j] = pool[idx]
            used = {idx for idx in assign if idx is not None}
            for idx in preferred:
                if idx not in used:
                    report.dependent_gauges.append({"pauli": format_pauli(pool[idx]), "pool_index": idx, "kind": "Z"})
        if all(p is not None for p in partners):
            break
        zcfg = escalate(zcfg, n, 0)
    report.weights["Z"] = zcfg.w
    G_Z = np.array(partners, dtype=np.uint8)

    U = T.U.copy()
    rows = list(cfg.replace_rows)
    U[rows] = G_X
    U[[n + i for i in rows]] = G_Z
    fixed_idx = list(range(n + k)) + [n + i for i in rows]
    fixed = U[fixed_idx]
    targets = [fixed_idx.index(i) for i in retained]
    U[[n + i for i in retained]] = complete_destabilizers(fixed, targets)
    out = Tableau(n, k, U, tuple(rows) + tuple(n + i for i in rows))
    if not verify_subsystem(out):
        raise AssertionError("split tableau is not symplectic")
    params = compute_group_params(out.gauge_group(), n)
    if compute_distance:
        try:
            params.d = dressed_distance(out.stabilizers, out.gauge_group(), n, weight_limit=min(cfg.distance_limit, n))
        except DistanceRefused:
            params.d = None
    return out, params, report


def gnarsil2(T: Tableau, cfg: SplitConfig, compute_params: bool = True):
    """Find gauge operators (not necessarily independent) that split stabilizers.

    Returns ``(OperatorSplit, params or None, report)``.
    """
    _check_config(T, cfg)
    n = T.n
    report = SplitReport(algorithm=2)
    V = commutant_matrix(T, cfg)
    retained = [i for i in T.stabilizer_rows if i not in cfg.replace_rows]
    S = T.U[retained]

    def collect(kind, anticommute_with=None):
        c = cfg
        logicals = T.logical_x if kind == "X" else T.logical_z
        while True:
            pool = find_candidates(
                V, n, c.w, kind, "operator", c.max_size,
                anticommute_with=anticommute_with, exactly_one=False, stabilizers=S, logicals=logicals,
            )
            log.info("%s operator pool at w=%d: %d candidates", kind, c.w, len(pool))
            if len(pool):
                return c, pool
            c = escalate(c, n, 0)

    xcfg, xpool = collect("X")
    x_targets = _targets(T, retained, "X")
    chosen_x, entries, _ = choose_gauges(T, x_targets, xpool, xcfg)
    report.entries += entries
    G_X = xpool[chosen_x]
    report.weights["X"], report.pool_sizes["X"] = xcfg.w, len(xpool)

    zcfg, zpool = collect("Z", anticommute_with=G_X)
    z_targets = _targets(T, retained, "Z")
    chosen_z, entries, _ = choose_gauges(T, z_targets, zpool, zcfg)
    report.entries += entries
    G_Z = zpool[chosen_z]
    report.weights["Z"], report.pool_sizes["Z"] = zcfg.w, len(zpool)
    report.pool_sizes["numXGauges"] = cfg.gauges_per_stab * len(x_targets)
    report.pool_sizes["numZGauges"] = cfg.gauges_per_stab * len(z_targets)

    result = OperatorSplit(n, T.logical_x.copy(), T.logical_z.copy(), S.copy(), GaugeSet(G_X, G_Z))
    params = compute_group_params(result.gauge_group(), n) if compute_params else None
    return result, params, report
