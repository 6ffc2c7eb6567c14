"""Command-line front end.

Usage:
    gnarsil build HX HZ -o code.json
    gnarsil split code.json --alg 1 --rows 5,6 --w 3 [--seed-preprocess prep.txt]
    gnarsil construct shp --catalog H10_5 --out-dir shp100
    gnarsil distance code.json --weight-limit 3
    gnarsil params code.json
    gnarsil count-reps --r 2
    gnarsil verify code.json

Exit codes:
    0 - success (verify: checks pass)
    1 - verify failed, or the input code is invalid
    2 - malformed input file
    3 - splitting found no usable candidates
    4 - combination search exceeds the resource budget
    5 - ring orthogonality failure during construction
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import sys
import time
from importlib.metadata import PackageNotFoundError, version
from pathlib import Path

import numpy as np

from . import constructions as cons
from . import distance as dist
from . import gf2, repcount
from .pauli import format_pauli
from .splitting import AlgorithmFailure, ResourceBudgetExceeded, SplitConfig, gnarsil1, gnarsil2
from .tableau import CodeParams, CssCode, CssError, Tableau, build_css_tableau, center_of, compute_group_params
from .tableau import multiply_stabilizer_rows, verify_subsystem

log = logging.getLogger("gnarsil")

EXIT_FAIL, EXIT_INPUT, EXIT_ALGORITHM, EXIT_BUDGET, EXIT_RING = 1, 2, 3, 4, 5


class InputError(Exception):
    pass


def _version() -> str:
    try:
        return version("artifact")
    except PackageNotFoundError:
        return "0+unknown"


def _digest(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


class RunReport:
    """JSON report: command echo, input digests, results and tool version."""

    def __init__(self, argv: list[str], inputs: list[str]):
        self.data = {
            "schema": 1,
            "command": ["gnarsil", *argv],
            "inputs": {str(p): _digest(p) for p in inputs if Path(p).is_file()},
            "version": _version(),
        }
        self._t0 = time.perf_counter()

    def __setitem__(self, key, value):
        self.data[key] = value

    def finish(self, args) -> None:
        if getattr(args, "timing", False):
            self.data["timing_s"] = round(time.perf_counter() - self._t0, 3)
        text = json.dumps(self.data, indent=1, sort_keys=True) + "\n"
        if getattr(args, "report", None):
            Path(args.report).write_text(text)
        if getattr(args, "json", False):
            sys.stdout.write(text)


# -- input helpers -------------------------------------------------------------------


def _load_tableau(path) -> Tableau:
    try:
        return Tableau.load(path)
    except (json.JSONDecodeError, KeyError, ValueError) as exc:
        raise InputError(f"{path}: not a tableau file ({exc})") from exc


def _load_group(path):
    """Gauge group and qubit count from a tableau file or a construct output directory."""
    p = Path(path)
    if p.is_dir():
        gx, gz = gf2.read_matrix(p / "gx.txt"), gf2.read_matrix(p / "gz.txt")
        n = gx.shape[1]
        zero = lambda m: np.zeros_like(m)  # noqa: E731
        G = np.vstack([np.hstack([gx, zero(gx)]), np.hstack([zero(gz), gz])])
        return G, center_of(G, n), n
    T = _load_tableau(p)
    return T.gauge_group(), T.stabilizers, T.n


def _parse_rows(text: str | None) -> tuple[int, ...]:
    if not text:
        return ()
    try:
        rows = [int(t) for t in text.replace(" ", "").split(",") if t]
    except ValueError:
        raise InputError(f"--rows expects comma-separated integers, got {text!r}") from None
    if any(r < 1 for r in rows):
        raise InputError("--rows are 1-based")
    return tuple(r - 1 for r in rows)


def parse_preprocess(text: str) -> list[tuple[int, list[int]]]:
    """Lines ``target <- s1 s2 ...`` with 1-based rows; returns 0-based directives."""
    out = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        lhs, sep, rhs = line.partition("<-")
        try:
            if not sep:
                raise ValueError
            target = int(lhs) - 1
            sources = [int(t) - 1 for t in rhs.split()]
        except ValueError:
            raise gf2.MatrixFormatError(f"expected 'target <- s1 s2 ...', got {raw!r}", lineno) from None
        if target < 0 or not sources or min(sources) < 0:
            raise gf2.MatrixFormatError("rows are 1-based and need at least one source", lineno)
        out.append((target, sources))
    return out


def _params_dict(p: CodeParams | None):
    return None if p is None else {**p.as_dict(), "label": str(p)}


# -- commands ------------------------------------------------------------------------


def cmd_build(args) -> int:
    report = RunReport(args.argv, [args.hx, args.hz])
    code = CssCode(gf2.read_matrix(args.hx), gf2.read_matrix(args.hz))
    T = build_css_tableau(code)
    T.save(args.output)
    params = CodeParams(T.n, T.k, 0, T.n - T.k)
    print(str(params))
    report["params"] = _params_dict(params)
    report["output"] = args.output
    report.finish(args)
    return 0


def cmd_split(args) -> int:
    inputs = [args.tableau] + ([args.seed_preprocess] if args.seed_preprocess else [])
    report = RunReport(args.argv, inputs)
    T = _load_tableau(args.tableau)
    if args.seed_preprocess:
        for target, sources in parse_preprocess(Path(args.seed_preprocess).read_text()):
            T = multiply_stabilizer_rows(T, target, sources)
    cfg = SplitConfig(
        w=args.w,
        replace_rows=_parse_rows(args.rows),
        max_size=args.max_size,
        gauges_per_stab=args.gauges_per_stab,
        threads=args.threads,
        combo_budget=args.combo_budget,
        distance_limit=args.distance_limit,
    )
    if args.alg == 1:
        out, params, split = gnarsil1(T, cfg, compute_distance=args.distance_limit > 0)
        gauges = [format_pauli(g) for g in out.gauges]
        if args.output:
            out.save(args.output)
            report["output"] = args.output
        report["verified"] = verify_subsystem(out)
    else:
        ops, params, split = gnarsil2(T, cfg)
        gauges = [format_pauli(g) for g in np.vstack([ops.gauges.g_x, ops.gauges.g_z])]
    report["params"] = _params_dict(params)
    report["split"] = split.to_json()
    report["gauges"] = gauges
    if not args.json:
        print(f"code {params}")
        print(f"{'target':>7} {'kind':>4} {'stab wt':>7} {'residual':>8}  gauges")
        for e in split.entries:
            names = " ".join(format_pauli(g) for g in e.gauges)
            print(f"{e.target_row + 1:>7} {e.kind:>4} {e.stabilizer_weight:>7} {e.residual_weight:>8}  {names}")
        print("gauge generators:" if args.alg == 1 else "gauge operators:", ", ".join(gauges))
    report.finish(args)
    return 0


def _catalog_ring(name: str):
    try:
        M = cons.paper_catalog(name)
    except KeyError as exc:
        raise InputError(exc.args[0]) from None
    return cons.RingMatrix.from_binary(M) if isinstance(M, np.ndarray) else M


def cmd_construct(args) -> int:
    files = [f for f in (args.matrix, args.generator) if f]
    report = RunReport(args.argv, files)
    convention = args.convention
    if args.catalog:
        A = _catalog_ring(args.catalog[0])
        G = _catalog_ring(args.catalog[1]) if len(args.catalog) > 1 else None
        if G is not None and convention is None:
            convention = cons.CATALOG_CONVENTIONS.get(args.catalog[1])
    elif args.matrix:
        A = _read_any_matrix(args.matrix)
        G = _read_any_matrix(args.generator) if args.generator else None
    else:
        raise InputError("give --catalog NAME [GEN] or --matrix FILE [--generator FILE]")
    convention = convention or "conjugate"

    out_dir = Path(args.out_dir) if args.out_dir else None
    if out_dir:
        out_dir.mkdir(parents=True, exist_ok=True)
    if args.kind == "lp":
        code = cons.lp(A)
        k = code.n - gf2.rank(code.hx) - gf2.rank(code.hz)
        params = CodeParams(code.n, k, 0, code.n - k)
        mats = {"hx": code.hx, "hz": code.hz}
    else:
        if args.kind == "shp":
            if A.L != 1:
                raise InputError("shp takes a binary matrix; use slp for ring matrices")
            H = A.coeffs[:, :, 0]
            G = cons.RingMatrix.from_binary(gf2.kernel(H)) if G is None else G
        elif G is None:
            raise InputError("slp needs a generator matrix")
        spec = cons.slp(A, G, convention=convention)
        params = spec.params()
        mats = {"gx": spec.gx, "gz": spec.gz, "lx": spec.lx, "lz": spec.lz, "sx": spec.sx, "sz": spec.sz}
        report["stabilizer_weights"] = spec.stabilizer_weights()
        report["gauge_weights"] = spec.gauge_weights()
    if out_dir:
        for name, M in mats.items():
            gf2.write_matrix(out_dir / f"{name}.txt", M)
        report["output"] = str(out_dir)
    report["params"] = _params_dict(params)
    if not args.json:
        print(f"{args.kind} code {params} (n={params.n}, k={params.k}, r={params.r})")
    report.finish(args)
    return 0


def _read_any_matrix(path):
    text = Path(path).read_text()
    header = next((ln.split() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")), [])
    if len(header) == 3:
        return cons.parse_ring_matrix(text)
    return cons.RingMatrix.from_binary(gf2.parse_matrix(text))


def cmd_distance(args) -> int:
    report = RunReport(args.argv, [args.code])
    G, S, n = _load_group(args.code)
    found = dist.min_weight_logical(S, G, n, args.weight_limit, mode=args.mode, force=args.force)
    d = None if found is None else found[0]
    report["distance"] = {"mode": args.mode, "weight_limit": args.weight_limit, "value": d,
                          "witness": None if found is None else format_pauli(found[1])}
    if not args.json:
        print(d if d is not None else f">{args.weight_limit}")
    report.finish(args)
    return 0


def cmd_params(args) -> int:
    report = RunReport(args.argv, [args.code])
    G, _, n = _load_group(args.code)
    params = compute_group_params(G, n)
    report["params"] = _params_dict(params)
    if not args.json:
        print(params)
    report.finish(args)
    return 0


def cmd_count_reps(args) -> int:
    report = RunReport(args.argv, [])
    result = repcount.brute_force_count(args.r) if args.brute_force else repcount.formula_count(args.r)
    report["repcount"] = result.as_dict()
    if not args.json:
        print(result)
        if args.table:
            for row in repcount.pair_table(args.r):
                print(" ".join(str(int(b)) for b in row))
    report.finish(args)
    return 0


def cmd_verify(args) -> int:
    report = RunReport(args.argv, [args.tableau])
    T = _load_tableau(args.tableau)
    ok = verify_subsystem(T)
    report["verified"] = ok
    if not args.json:
        print("ok" if ok else "FAILED")
    report.finish(args)
    return 0 if ok else EXIT_FAIL


# -- parser ------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gnarsil", description="Derive subsystem codes from stabilizer seeds.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--report", help="write the JSON run report here")
    common.add_argument("--json", action="store_true", help="print the JSON report instead of a table")
    common.add_argument("--timing", action="store_true", help="include wall time in the report")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", parents=[common], help="CSS checks -> tableau")
    p.add_argument("hx")
    p.add_argument("hz")
    p.add_argument("-o", "--output", default="tableau.json")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("split", parents=[common], help="run a splitting algorithm")
    p.add_argument("tableau")
    p.add_argument("--alg", type=int, choices=(1, 2), default=1)
    p.add_argument("--rows", help="1-based stabilizer rows to replace, e.g. 5,6")
    p.add_argument("--w", type=int, required=True, help="candidate weight")
    p.add_argument("--gauges-per-stab", type=int, default=2)
    p.add_argument("--max-size", type=int, default=64)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--combo-budget", type=float, default=1e8, help="abort when C(pool, t) exceeds this")
    p.add_argument("--distance-limit", type=int, default=4, help="0 skips the distance")
    p.add_argument("--seed-preprocess", help="file of 'target <- s1 s2' row products")
    p.add_argument("-o", "--output", help="write the split tableau (algorithm 1)")
    p.set_defaults(func=cmd_split)

    p = sub.add_parser("construct", parents=[common], help="SHP, LP or SLP code")
    p.add_argument("kind", choices=("shp", "lp", "slp"))
    p.add_argument("--catalog", nargs="+", metavar="NAME", help=f"one of {', '.join(cons.CATALOG_NAMES)}")
    p.add_argument("--matrix", help="binary or ring matrix file")
    p.add_argument("--generator", help="generator matrix file")
    p.add_argument("--convention", choices=("conjugate", "transpose"))
    p.add_argument("--out-dir")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("distance", parents=[common], help="brute-force minimum distance")
    p.add_argument("code", help="tableau file or construct output directory")
    p.add_argument("--weight-limit", type=int, required=True)
    p.add_argument("--mode", choices=("dressed", "bare"), default="dressed")
    p.add_argument("--force", action="store_true", help="skip the size guard")
    p.set_defaults(func=cmd_distance)

    p = sub.add_parser("params", parents=[common], help="[[n,k,r]] of a gauge group")
    p.add_argument("code", help="tableau file or construct output directory")
    p.set_defaults(func=cmd_params)

    p = sub.add_parser("count-reps", parents=[common], help="count gauge-block representations")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--brute-force", action="store_true")
    p.add_argument("--table", action="store_true", help="also print the pair table")
    p.set_defaults(func=cmd_count_reps)

    p = sub.add_parser("verify", parents=[common], help="check a split tableau")
    p.add_argument("tableau")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    args.argv = argv
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except gf2.MatrixFormatError as exc:
        print(f"error: malformed input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (InputError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except CssError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except AlgorithmFailure as exc:
        print(f"Algorithm Fails: {exc}", file=sys.stderr)
        return EXIT_ALGORITHM
    except ResourceBudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except cons.RingOrthogonalityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RING
    except dist.DistanceRefused as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
