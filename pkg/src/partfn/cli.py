"""Command-line entry point: ``partfn <subcommand> ...``.

Exit codes: 0 success, 1 theorem-backed verification failure, 2 usage error,
3 capacity exceeded.  Numbers are printed as exact rational strings.
"""
from __future__ import annotations

import argparse
import json
import os
import re
import sys
from fractions import Fraction
from typing import Optional, Sequence

from .enumerate import CapacityError
from .exact import parse_rat, rat_str
from .graph import Graph, make_named

EXIT_OK, EXIT_THEOREM, EXIT_USAGE, EXIT_CAPACITY = 0, 1, 2, 3

_RAT = re.compile(r"^-?\d+(/\d+)?$")


class UsageError(ValueError):
    pass


# input parsing ----------------------------------------------------------------

def read_graph(text: str) -> Graph:
    """Named graph, graph6 string, or path to a JSON graph file."""
    if text.endswith(".json") or os.path.isfile(text):
        with open(text) as fh:
            return Graph.from_json(json.load(fh))
    try:
        return make_named(text)
    except ValueError:
        pass
    try:
        return Graph.from_graph6(text)
    except Exception as exc:
        raise UsageError(f"cannot read graph {text!r}: not a known name, graph6 string or JSON file") from exc


def rat_list(text: str) -> list[Fraction]:
    try:
        return [parse_rat(x) for x in text.split(",") if x.strip()]
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad rational list {text!r}") from exc


def int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise UsageError(f"bad integer list {text!r}") from exc


def k_range(text: Optional[str]) -> Optional[range]:
    if text is None:
        return None
    m = re.fullmatch(r"(\d+)(?:[-:](\d+))?", text.strip())
    if not m:
        raise UsageError(f"bad k-range {text!r}; use K or LO-HI")
    lo = int(m.group(1))
    hi = int(m.group(2)) if m.group(2) else lo
    return range(lo, hi + 1)


def _check_kind(args) -> None:
    if args.kind == "potts" and args.q is None:
        raise UsageError("--kind potts needs --q")
    if args.kind != "potts" and args.q is not None:
        raise UsageError("--q only applies to --kind potts")


# output ------------------------------------------------------------------------

def float_view(obj):
    """Lossy companion view: every exact rational string also as a float."""
    if isinstance(obj, dict):
        return {k: float_view(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [float_view(v) for v in obj]
    if isinstance(obj, str) and _RAT.match(obj):
        return float(Fraction(obj))
    return obj


def emit(args, obj, text: Optional[str] = None) -> None:
    if text is None:
        if getattr(args, "float", False):
            obj = {"exact": obj, "float_view_lossy": float_view(obj)}
        text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# subcommands --------------------------------------------------------------------

def cmd_poly(args) -> int:
    from .polys import coeffs
    _check_kind(args)
    g = read_graph(args.graph)
    emit(args, coeffs(g, args.kind, args.q).to_json())
    return EXIT_OK


def cmd_obs(args) -> int:
    from .observables import (free_volume, local_view_distribution, mean_size, occupancy_fraction,
                              partition_value, size_distribution, tune_lambda)
    from .polys import coeffs
    _check_kind(args)
    g = read_graph(args.graph)
    c = coeffs(g, args.kind, args.q)
    out = {"graph": g.to_graph6(), "kind": args.kind, "points": []}
    for lam in rat_list(args.lam):
        pt = {"lambda": rat_str(lam), "Z": rat_str(partition_value(c, lam)),
              "mean_size": rat_str(mean_size(c, lam)),
              "occupancy": rat_str(occupancy_fraction(c, (g.n, g.m), lam))}
        if args.sizes:
            pt["size_distribution"] = size_distribution(c, lam).to_json()
        if args.views:
            pt["local_views"] = local_view_distribution(g, args.kind, lam, args.q).to_json()
        out["points"].append(pt)
    if args.tune is not None:
        out["tuned_lambda"] = rat_str(tune_lambda(c, parse_rat(args.tune)))
    if args.free_volume is not None:
        out["free_volume"] = {str(k): rat_str(free_volume(c, k)) for k in int_list(args.free_volume)}
    emit(args, out)
    return EXIT_OK


def cmd_dist(args) -> int:
    from .sampling import sampling_distance, sampling_distance_exact
    g, h = read_graph(args.g), read_graph(args.h)
    if args.rmax < 1:
        raise UsageError("--rmax must be at least 1")
    out = sampling_distance(g, h, args.rmax).to_json()
    if args.exact:
        out["exact"] = rat_str(sampling_distance_exact(g, h))
    emit(args, out)
    return EXIT_OK


def cmd_lp(args) -> int:
    from .lp import build_lp, lp_certificate_json, solve_lp, stability_constant
    lam = parse_rat(args.lam)
    lp = build_lp(args.d, args.kind, lam)
    if args.format == "lp":
        emit(args, None, lp.to_text())
        return EXIT_OK
    sol = solve_lp(lp)
    out = json.loads(lp_certificate_json(lp, sol))
    if args.stability:
        out["stability"] = stability_constant(args.d, args.kind, lam).to_json()
    emit(args, out)
    return EXIT_OK


def cmd_hier(args) -> int:
    from .hierarchy import dominance
    from .polys import coeffs
    if args.zg and args.zh:
        zg, zh = int_list(args.zg), int_list(args.zh)
    elif args.g and args.h:
        _check_kind(args)
        zg = list(coeffs(read_graph(args.g), args.kind, args.q).coeffs)
        zh = list(coeffs(read_graph(args.h), args.kind, args.q).coeffs)
    else:
        raise UsageError("give --zg and --zh, or --g and --h")
    emit(args, dominance(zg, zh).to_json())
    return EXIT_OK


def cmd_llt(args) -> int:
    from .llt import gnedenko_deviation, ratio_lemma_check
    from .graph import k_dd
    from .observables import size_distribution
    from .polys import coeffs
    if args.mode == "gnedenko":
        _check_kind(args)
        base_graph = read_graph(args.graph) if args.graph else k_dd(args.d)
        base = size_distribution(coeffs(base_graph, args.kind, args.q), parse_rat(args.lam))
        res = gnedenko_deviation(base, args.K)
        if args.csv:
            emit(args, None, res.to_csv())
        else:
            emit(args, {"K": res.K, "argmax": res.argmax, "deviation": str(res.deviation),
                        "deviation_times_sqrtK": str(res.scaled),
                        "deviation_interval": [str(x) for x in res.deviation_interval],
                        "note": "Gaussian comparison is floating point (mpmath)"})
        return EXIT_OK
    if args.n is None or args.k is None:
        raise UsageError("ratio mode needs --n and --k")
    chk = ratio_lemma_check(args.d, args.n, args.k, args.rmax, parse_rat(args.delta), args.kind, args.q)
    emit(args, {"lambda": rat_str(chk.lam), "ok": chk.ok, "ratios": [rat_str(r) for r in chk.ratios],
                "lambda_bounds": [rat_str(chk.lam_lower), None if chk.lam_upper is None else rat_str(chk.lam_upper)],
                "lambda_in_bounds": chk.lam_in_bounds, "eps": rat_str(chk.eps)})
    return EXIT_OK


def cmd_verify(args) -> int:
    from . import verifier as V
    graphs = [read_graph(args.graph6)] if args.graph6 else None
    lams = rat_list(args.lambdas) if args.lambdas else None
    st = args.statement
    if st in ("coef", "part", "stability", "feasibility") and (args.d is None or args.n is None):
        raise UsageError(f"verify {st} needs --d and --n")
    if st == "coef":
        _check_kind(args)
        v = V.verify_coefficient_dominance(args.d, args.n, args.kind, args.q, k_range(args.k_range),
                                           jobs=args.jobs, graphs=graphs)
    elif st == "part":
        _check_kind(args)
        v = V.verify_partition_dominance(args.d, args.n, args.kind, lams or V.DEFAULT_GRID, args.q,
                                         jobs=args.jobs, graphs=graphs)
    elif st == "girth5":
        v = V.verify_girth5(args.n or 14, k_range(args.k_range), jobs=args.jobs, graphs=graphs)
    elif st == "bregman":
        if args.d is None or args.n is None:
            raise UsageError("verify bregman needs --d and --n")
        v = V.verify_bregman_regular(args.d, args.n, jobs=args.jobs, graphs=graphs)
    elif st == "stability":
        v = V.verify_stability(args.d, args.n, args.kind, lams or V.DEFAULT_GRID, graphs, args.delta)
    else:
        v = V.verify_view_feasibility(args.d, args.n, args.kind, lams or V.DEFAULT_GRID, graphs)
    emit(args, None, v.dumps())
    return EXIT_THEOREM if v.theorem_failure else EXIT_OK


def cmd_audit(args) -> int:
    from .llt import transfer_inequality_audit
    _check_kind(args)
    g = read_graph(args.graph)
    emit(args, transfer_inequality_audit(g, args.d, args.n, args.k, args.case,
                                         delta=parse_rat(args.delta), delta_prime=parse_rat(args.delta_prime),
                                         kind=args.kind, q=args.q))
    return EXIT_OK


# parser ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    from .verifier import default_jobs
    p = argparse.ArgumentParser(prog="partfn", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="cmd", required=True)

    def common(sp, kind=True):
        sp.add_argument("--out", help="write output here instead of stdout")
        sp.add_argument("--float", action="store_true", help="add a lossy float view")
        if kind:
            sp.add_argument("--kind", choices=("match", "ind", "potts"), default="match")
            sp.add_argument("--q", type=int, help="number of colours (potts)")

    sp = sub.add_parser("poly", help="coefficient vector")
    sp.add_argument("--graph", required=True)
    common(sp)
    sp.set_defaults(fn=cmd_poly)

    sp = sub.add_parser("obs", help="observables at rational lambda")
    sp.add_argument("--graph", required=True)
    sp.add_argument("--lam", default="1", help="comma-separated rationals")
    sp.add_argument("--sizes", action="store_true", help="include the size distribution")
    sp.add_argument("--views", action="store_true", help="include the local-view distribution")
    sp.add_argument("--tune", help="tune lambda to this mean size")
    sp.add_argument("--free-volume", help="comma-separated k values")
    common(sp)
    sp.set_defaults(fn=cmd_obs)

    sp = sub.add_parser("dist", help="sampling distance")
    sp.add_argument("--g", required=True)
    sp.add_argument("--h", required=True)
    sp.add_argument("--rmax", type=int, default=6)
    sp.add_argument("--exact", action="store_true", help="also give the full sum")
    common(sp, kind=False)
    sp.set_defaults(fn=cmd_dist)

    sp = sub.add_parser("lp", help="occupancy LP")
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--kind", choices=("match", "ind"), default="match")
    sp.add_argument("--lam", default="1")
    sp.add_argument("--stability", action="store_true")
    sp.add_argument("--format", choices=("json", "lp"), default="json")
    sp.add_argument("--out")
    sp.add_argument("--float", action="store_true")
    sp.set_defaults(fn=cmd_lp)

    sp = sub.add_parser("hier", help="dominance report")
    sp.add_argument("--zg")
    sp.add_argument("--zh")
    sp.add_argument("--g")
    sp.add_argument("--h")
    common(sp)
    sp.set_defaults(fn=cmd_hier)

    sp = sub.add_parser("llt", help="local limit checks")
    sp.add_argument("--mode", choices=("gnedenko", "ratio"), default="gnedenko")
    sp.add_argument("--d", type=int, default=3)
    sp.add_argument("--graph", help="base graph (default K_dd)")
    sp.add_argument("--lam", default="1")
    sp.add_argument("--K", type=int, default=25)
    sp.add_argument("--csv", action="store_true")
    sp.add_argument("--n", type=int)
    sp.add_argument("--k", type=int)
    sp.add_argument("--rmax", type=int, default=6)
    sp.add_argument("--delta", default="1/10")
    common(sp)
    sp.set_defaults(fn=cmd_llt)

    sp = sub.add_parser("verify", help="exhaustive verification harness")
    sp.add_argument("statement", choices=("coef", "part", "girth5", "bregman", "stability", "feasibility"))
    sp.add_argument("--d", type=int)
    sp.add_argument("--n", type=int)
    sp.add_argument("--k-range")
    sp.add_argument("--lambdas", help="comma-separated rational grid")
    sp.add_argument("--delta", choices=("exact", "upper"), default="exact")
    sp.add_argument("--graph6", help="check a single graph")
    sp.add_argument("--jobs", type=int, default=default_jobs())
    common(sp)
    sp.set_defaults(fn=cmd_verify)

    sp = sub.add_parser("audit", help="transfer inequality audit")
    sp.add_argument("--graph", required=True, help="G', with no K_dd component")
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--case", choices=("Small1", "Small2", "Large"), required=True)
    sp.add_argument("--delta", default="1/10")
    sp.add_argument("--delta-prime", default="1/10")
    common(sp)
    sp.set_defaults(fn=cmd_audit)
    return p


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.fn(args)
    except CapacityError as exc:
        print(f"partfn: capacity exceeded: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except (UsageError, ValueError, OSError) as exc:
        print(f"partfn: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
