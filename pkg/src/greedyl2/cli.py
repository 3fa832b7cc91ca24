"""Command-line frontend.

Subcommands: ``generate`` writes a sequence prefix, ``discrepancy`` evaluates
a point file or generated sequence, ``compare`` writes the S* versus van der
Corput comparison table and ``verify`` runs a named check suite.

CSV output reports discrepancies (square roots) in float mode. With
``--exact`` the L2 kinds report the exact squared value instead, under a
``value_squared`` header, since the square root is irrational in general.

Exit codes: 0 success, 1 verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import math
import sys
from typing import IO, Sequence

from .discrepancy import DiscrepancyKind, l2_prefix_curve, l2_sq, star_sup_1d, star_sup_prefix_curve
from .greedy import SearchConfig, SearchQualityError, greedy_nd, greedy_periodic_1d, greedy_star_1d
from .numerics import format_scalar
from .sequences import (
    PointList,
    centered_grid,
    read_points,
    symmetrized_vdc_prefix,
    van_der_corput_prefix,
    write_points,
)
from .verify import SUITES, run_suite

ALGORITHMS = ("greedy-star", "greedy-extreme", "greedy-periodic", "vdc", "vdc-sym", "grid")
_GREEDY_KIND = {
    "greedy-star": DiscrepancyKind.STAR_L2,
    "greedy-extreme": DiscrepancyKind.EXTREME_L2,
    "greedy-periodic": DiscrepancyKind.PERIODIC_L2,
}


class UsageError(Exception):
    pass


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {v}")
    return v


def _add_source_flags(p: argparse.ArgumentParser, required: bool) -> None:
    p.add_argument("--algorithm", choices=ALGORITHMS, required=required)
    p.add_argument("--n", type=_positive, required=required)
    p.add_argument("--dim", type=_positive, default=1)
    p.add_argument("--start", metavar="FILE", help="start points for the greedy algorithms")
    p.add_argument("--grid-resolution", type=_positive, help="candidate grid per axis (dim > 1)")
    p.add_argument("--refinement-rounds", type=int, help="local refinement passes (dim > 1)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="greedyl2", description="Greedy L2-discrepancy sequences.")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a sequence prefix, one point per line")
    _add_source_flags(g, required=True)
    mode = g.add_mutually_exclusive_group()
    mode.add_argument("--exact", action="store_true", help="rational output (the 1D default)")
    mode.add_argument("--float", dest="float_", action="store_true", help="decimal output")

    d = sub.add_parser("discrepancy", help="discrepancy of a point set, or its prefix curve")
    d.add_argument("--kind", required=True, choices=[k.value for k in DiscrepancyKind])
    d.add_argument("--input", metavar="FILE")
    _add_source_flags(d, required=False)
    d.add_argument("--curve", action="store_true", help="every prefix N = 1..n")
    d.add_argument("--exact", action="store_true", help="exact squared values (L2 kinds)")
    d.add_argument("--paranoid", action="store_true", help="recheck every 64th prefix directly")

    c = sub.add_parser("compare", help="S* against the (symmetrized) van der Corput sequence")
    c.add_argument("--n-max", type=int, required=True)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("--suite", required=True, choices=sorted(SUITES))
    v.add_argument("--n", type=_positive, help="suite size (defaults per suite)")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--report", metavar="FILE", help="also write one JSON record per case")
    v.add_argument("--verbose", action="store_true", help="list passing cases too")
    return parser


def _search_config(args) -> SearchConfig | None:
    if args.grid_resolution is None and args.refinement_rounds is None:
        return None
    kw = {}
    if args.grid_resolution is not None:
        kw["grid_resolution"] = args.grid_resolution
    if args.refinement_rounds is not None:
        kw["refinement_rounds"] = args.refinement_rounds
    try:
        return SearchConfig(**kw)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _read_start(path: str | None, dim: int) -> PointList | None:
    if path is None:
        return None
    try:
        with open(path, encoding="utf-8") as fh:
            pts = read_points(fh)
    except OSError as exc:
        raise UsageError(f"cannot read start file: {exc}") from None
    except ValueError as exc:
        raise UsageError(f"malformed start file {path}: {exc}") from None
    if len(pts) == 0:
        raise UsageError(f"start file {path} holds no points")
    if pts.dim != dim:
        raise UsageError(f"start file has dimension {pts.dim}, expected {dim}")
    return pts


def _build_sequence(args, exact_requested: bool) -> PointList:
    algo, n, dim = args.algorithm, args.n, args.dim
    start = _read_start(args.start, dim)
    if start is not None and algo not in _GREEDY_KIND:
        raise UsageError("--start only applies to the greedy algorithms")
    if dim == 1:
        if args.grid_resolution is not None or args.refinement_rounds is not None:
            raise UsageError("grid-search flags only apply to dim > 1")
        if algo == "vdc":
            return van_der_corput_prefix(n)
        if algo == "vdc-sym":
            return symmetrized_vdc_prefix(n)
        if algo == "grid":
            return centered_grid(n)
        if start is not None and not start.is_exact:
            raise UsageError("one-dimensional greedy start points must be rationals (p/q)")
        if algo == "greedy-star":
            return greedy_star_1d(start, n)
        return greedy_periodic_1d(start, n, kind=_GREEDY_KIND[algo])
    if exact_requested:
        raise UsageError("dim > 1 runs in float mode only; drop --exact")
    if algo not in _GREEDY_KIND:
        raise UsageError(f"{algo} is one-dimensional")
    cfg = _search_config(args)
    if cfg is None:
        raise UsageError("dim > 1 needs --grid-resolution and/or --refinement-rounds")
    return greedy_nd(_GREEDY_KIND[algo], start, n, cfg, dim=dim)


def _to_float(pts: PointList) -> PointList:
    return PointList(pts.dim, [tuple(float(c) for c in p) for p in pts])


def cmd_generate(args, out: IO[str]) -> int:
    pts = _build_sequence(args, args.exact)
    if args.float_:
        pts = _to_float(pts)
    write_points(pts, out)
    return 0


def _write_csv(out: IO[str], header: str, rows) -> None:
    out.write(header + "\n")
    for n, v in rows:
        out.write(f"{n},{format_scalar(v)}\n")


def cmd_discrepancy(args, out: IO[str]) -> int:
    kind = DiscrepancyKind(args.kind)
    if args.input is not None:
        if args.algorithm is not None:
            raise UsageError("give either --input or --algorithm, not both")
        try:
            with open(args.input, encoding="utf-8") as fh:
                pts = read_points(fh)
        except OSError as exc:
            raise UsageError(f"cannot read input: {exc}") from None
        except ValueError as exc:
            raise UsageError(f"malformed input {args.input}: {exc}") from None
        if len(pts) == 0:
            raise UsageError("input holds no points")
        if args.n is not None:
            if args.n > len(pts):
                raise UsageError(f"--n {args.n} exceeds the {len(pts)} points in the input")
            pts = pts[: args.n]
    else:
        if args.algorithm is None or args.n is None:
            raise UsageError("need --input, or --algorithm with --n")
        if kind is DiscrepancyKind.STAR_SUP and args.dim > 1:
            raise UsageError("star-sup is only implemented for dim = 1")
        pts = _build_sequence(args, args.exact)
    if kind is DiscrepancyKind.STAR_SUP and pts.dim > 1:
        raise UsageError("star-sup is only implemented for dim = 1")
    if args.exact and not pts.is_exact:
        raise UsageError("--exact needs rational coordinates")
    # rational input is evaluated exactly either way; float mode only rounds the result
    if kind is DiscrepancyKind.STAR_SUP:
        values = star_sup_prefix_curve(pts) if args.curve else [star_sup_1d(pts)]
        header = "N,value"
        if not args.exact:
            values = [float(v) for v in values]
    else:
        every = 64 if args.paranoid else None
        if args.curve:
            values = l2_prefix_curve(kind, pts, paranoid_every=every)
        else:
            values = [l2_sq(kind, pts)]
        if args.exact:
            header = "N,value_squared"
        else:
            header = "N,value"
            values = [math.sqrt(max(float(v), 0.0)) for v in values]
    N = len(pts)
    rows = zip(range(1, N + 1), values) if args.curve else [(N, values[0])]
    _write_csv(out, header, rows)
    return 0


def compare_rows(n_max: int) -> list[tuple]:
    """(N, L2 S*, L2 symmetrized vdC, D* S*, D* vdC) for N = 1..n_max."""
    s_star = greedy_star_1d(None, n_max)
    l2_s = l2_prefix_curve(DiscrepancyKind.STAR_L2, s_star)
    l2_v = l2_prefix_curve(DiscrepancyKind.STAR_L2, symmetrized_vdc_prefix(n_max))
    ds_s = star_sup_prefix_curve(s_star)
    ds_v = star_sup_prefix_curve(van_der_corput_prefix(n_max))
    return [
        (n + 1, math.sqrt(l2_s[n]), math.sqrt(l2_v[n]), float(ds_s[n]), float(ds_v[n]))
        for n in range(n_max)
    ]


def monitored_metrics(rows: Sequence[tuple], n_min: int = 100) -> dict:
    """Finite-range proxies for the two limsup conjectures (never asserted)."""
    tail = [r for r in rows if r[0] >= n_min]
    if not tail:
        return {}
    return {
        "max_L2star_S*/sqrt(logN)": max(r[1] / math.sqrt(math.log(r[0])) for r in tail),
        "max_L2star_symvdc/sqrt(logN)": max(r[2] / math.sqrt(math.log(r[0])) for r in tail),
        "max_Dstar_S*/logN": max(r[3] / math.log(r[0]) for r in tail),
        "max_Dstar_vdc/logN": max(r[4] / math.log(r[0]) for r in tail),
        "fraction_L2_S*_below_symvdc": sum(r[1] < r[2] for r in rows) / len(rows),
    }


def cmd_compare(args, out: IO[str], err: IO[str]) -> int:
    if args.n_max < 2:
        raise UsageError("--n-max must be at least 2")
    rows = compare_rows(args.n_max)
    out.write("N,L2star_S*,L2star_symvdc,Dstar_S*,Dstar_vdc\n")
    for r in rows:
        out.write(",".join([str(r[0])] + [format_scalar(v) for v in r[1:]]) + "\n")
    metrics = monitored_metrics(rows)
    for k, v in metrics.items():
        err.write(f"# monitored {k} = {v:.6f}\n")
    if metrics:
        err.write("# reference targets: 0.319553 (L2, symmetrized vdC), 0.480898 (D*, vdC)\n")
    return 0


def cmd_verify(args, out: IO[str]) -> int:
    rep = run_suite(args.suite, args.n, args.seed)
    out.write(rep.to_text(verbose=args.verbose) + "\n")
    if args.report:
        with open(args.report, "w", encoding="utf-8", newline="\n") as fh:
            rep.write_jsonl(fh)
    return 0 if rep.ok else 1


def main(argv: Sequence[str] | None = None, out: IO[str] | None = None, err: IO[str] | None = None) -> int:
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        if args.command == "generate":
            return cmd_generate(args, out)
        if args.command == "discrepancy":
            return cmd_discrepancy(args, out)
        if args.command == "compare":
            return cmd_compare(args, out, err)
        return cmd_verify(args, out)
    except UsageError as exc:
        err.write(f"greedyl2: error: {exc}\n")
        return 2
    except SearchQualityError as exc:
        err.write(f"greedyl2: search failed: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
