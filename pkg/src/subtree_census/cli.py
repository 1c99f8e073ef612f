"""Command-line front end.

One executable, one subcommand per pipeline, machine-readable output (JSON
by default, CSV with `--format csv`).  Every numeric result is printed as
an exact rational string "p/q"; decimal fields are 12-significant-digit
approximations derived from the rationals and are advisory only.  Identical
invocations produce byte-identical output; the timing field is suppressed
under `--deterministic`.

Exit codes: 0 success, 2 input/parse error, 3 resource limit, 4 internal
invariant violation.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import time
from decimal import Decimal, localcontext
from fractions import Fraction

from . import families, search, stems
from .census import SubtreeStats, density, mean, subtree_stats_kirchhoff
from .errors import Graph6Error, InvariantViolation, TooLargeError
from .graphs import FamilyParams, make_path, parse_graph6

CSV_SCHEMA = "# schema=1"


def _decimal_str(x: Fraction, sig: int = 12) -> str:
    with localcontext() as ctx:
        ctx.prec = sig
        d = Decimal(x.numerator) / Decimal(x.denominator)
    return str(d)


def _rat(x: Fraction) -> str:
    return str(x)


def _emit(record: dict, rows: list[dict], args) -> None:
    """Print one record; `rows` is the tabular part (CSV rows, JSON list)."""
    if args.format == "json":
        out = dict(record)
        if rows is not None:
            out["rows"] = rows
        print(json.dumps(out, sort_keys=True, indent=2, default=str))
        return
    print(CSV_SCHEMA)
    for key, value in sorted(record.items()):
        if key == "rows":
            continue
        if isinstance(value, dict):
            for k2, v2 in sorted(value.items()):
                print(f"# {key}.{k2}={v2}")
        elif isinstance(value, (list, tuple)):
            for v2 in value:
                print(f"# {key}: {v2}")
        else:
            print(f"# {key}={value}")
    if rows:
        writer = csv.DictWriter(sys.stdout, fieldnames=list(rows[0].keys()))
        writer.writeheader()
        writer.writerows(rows)


def _stats_payload(stats: SubtreeStats, n: int) -> dict:
    mu = mean(stats)
    sigma = density(stats, n)
    return {
        "order": str(n),
        "count": str(stats.count),
        "total_order": str(stats.total_order),
        "mu": _rat(mu),
        "mu_decimal": _decimal_str(mu),
        "sigma": _rat(sigma),
        "sigma_decimal": _decimal_str(sigma),
    }


def _parse_chords(text: str) -> tuple[tuple[int, int], ...]:
    chords = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        try:
            a, b = part.split("-")
            chords.append((int(a), int(b)))
        except Exception:
            raise ValueError(f"bad chord {part!r}; expected like 0-5") from None
    return tuple(chords)


# ---------------------------------------------------------------------------
# Subcommands

def cmd_mu(args) -> tuple[dict, list[dict] | None]:
    if args.graph6 is not None:
        g = parse_graph6(args.graph6)
        stats = subtree_stats_kirchhoff(g)
        payload = _stats_payload(stats, g.order)
        params = {"graph6": args.graph6}
    elif args.path is not None:
        g = make_path(args.path)
        stats = subtree_stats_kirchhoff(g)
        payload = _stats_payload(stats, g.order)
        params = {"path": args.path}
    elif args.family is not None:
        if args.L is None or args.s is None:
            raise ValueError("--family needs --L and --s")
        chords = _parse_chords(args.chords) if args.chords else ()
        fam = FamilyParams(args.L, args.s, k=args.k or 0, chords=chords)
        if args.family == "broom":
            stats = families.broom_stats(fam.core_length, fam.star_size)
        elif args.family == "fan":
            stats = families.fan_broom_stats(fam.core_length, fam.star_size, fam.k)
        elif args.family == "chorded":
            stats = families.chorded_broom_stats(fam.core_length, fam.star_size, fam.chords)
        else:
            raise ValueError(f"unknown family {args.family}")
        payload = _stats_payload(stats, fam.n)
        params = {"family": args.family, "L": args.L, "s": args.s,
                  "k": args.k or 0, "chords": args.chords or ""}
    else:
        raise ValueError("one of --graph6 / --path / --family is required")
    return {"command": "mu", "parameters": params, "results": payload}, None


def cmd_decrease(args) -> tuple[dict, list[dict]]:
    k = args.k
    l_min = args.L_min if args.L_min is not None else k + 2
    lengths = range(l_min, args.L_max + 1)
    sizes = families.geometric_star_sizes(args.s_max)
    witnesses = families.find_decrease_witnesses(k, lengths, sizes)
    rows = [{
        "L": w.length,
        "s": w.star_size,
        "n": w.length + 2 * w.star_size,
        "mu_base": _rat(w.mu_base),
        "mu_added": _rat(w.mu_added),
        "mu_base_decimal": _decimal_str(w.mu_base),
        "mu_added_decimal": _decimal_str(w.mu_added),
    } for w in witnesses]
    record = {
        "command": "decrease",
        "parameters": {"k": k, "L_min": l_min, "L_max": args.L_max, "s_max": args.s_max},
        "results": {"witnesses": len(rows)},
    }
    return record, rows


def cmd_threshold(args) -> tuple[dict, list[dict]]:
    report = stems.threshold_search(args.m, args.n_max)
    results = {
        "n_star": report.n_star if report.n_star is not None else "no crossing",
        "persists": report.persists,
        "first_violation": report.first_violation,
    }
    if report.n_star is not None:
        ms = stems.graph_mean_order("split", args.m, report.n_star)
        mb = stems.graph_mean_order("bipartite", args.m, report.n_star)
        results["mu_split_at_n_star"] = _rat(ms)
        results["mu_bipartite_at_n_star"] = _rat(mb)
    rows = []
    if args.full_table:
        for n, sign in report.comparisons:
            ms = stems.graph_mean_order("split", args.m, n)
            mb = stems.graph_mean_order("bipartite", args.m, n)
            rows.append({
                "n": n,
                "sign": sign,
                "mu_split": _rat(ms),
                "mu_bipartite": _rat(mb),
                "mu_split_decimal": _decimal_str(ms),
                "mu_bipartite_decimal": _decimal_str(mb),
            })
    record = {
        "command": "threshold",
        "parameters": {"m": args.m, "n_max": args.n_max},
        "results": results,
    }
    return record, rows


def cmd_scan(args) -> tuple[dict, list[dict]]:
    if args.file == "-":
        lines = sys.stdin.readlines()
        source = "<stdin>"
    else:
        # surrogateescape keeps stray non-ASCII bytes as per-line parse
        # errors instead of aborting the whole scan
        with open(args.file, "r", encoding="ascii", errors="surrogateescape") as fh:
            lines = fh.readlines()
        source = args.file
    report = search.corpus_scan(lines, max_order=args.max_order,
                                jobs=args.jobs, source=source)
    rows = [{
        "order": inst.order,
        "graph6": inst.graph_id,
        "edge": f"{inst.added[0]}-{inst.added[1]}",
        "mu_before": _rat(inst.mu_before),
        "mu_after": _rat(inst.mu_after),
        "mu_before_decimal": _decimal_str(inst.mu_before),
        "mu_after_decimal": _decimal_str(inst.mu_after),
    } for inst in report.instances]
    warnings = [f"line {no}: {msg}" for no, msg in report.parse_errors]
    warnings += [f"line {no}: {msg}" for no, msg in report.skipped]
    record = {
        "command": "scan",
        "parameters": {"file": source, "max_order": args.max_order},
        "results": {
            "graphs_scanned": report.graphs_scanned,
            "instances": len(report.instances),
            "min_order": report.min_order,
        },
        "warnings": warnings,
    }
    return record, rows


def cmd_tree_bound(args) -> tuple[dict, list[dict]]:
    report = search.tree_bound_sweep(args.n_max, jobs=args.jobs)
    rows = [{
        "n": n,
        "equalities": report.equalities[n],
        "paths": report.paths[n],
    } for n in sorted(report.equalities)]
    status = "PASS" if report.passed else "FAIL"
    record = {
        "command": "tree-bound",
        "parameters": {"n_max": args.n_max},
        "results": {
            "summary": f"{status} {report.trees_checked} trees",
            "trees_checked": report.trees_checked,
            "violations": len(report.violations),
        },
    }
    return record, rows


def cmd_stem_table(args) -> tuple[dict, list[dict]]:
    table_split = stems.stem_table("split", args.m)
    table_bip = stems.stem_table("bipartite", args.m)
    rows = []
    for (a, b) in sorted(table_split.entries):
        row = {
            "a": a,
            "b": b,
            "stems_split": str(table_split.entries[(a, b)]),
            "stems_bipartite": str(table_bip.entries[(a, b)]),
        }
        if args.n is not None:
            row["class_size_split"] = str(stems.class_size("split", args.m, args.n, a, b))
            row["class_size_bipartite"] = str(stems.class_size("bipartite", args.m, args.n, a, b))
            row["class_mean"] = _rat(stems.class_mean_order(args.n, a, b))
        rows.append(row)
    record = {
        "command": "stem-table",
        "parameters": {"m": args.m, "n": args.n},
        "results": {"classes": len(rows)},
    }
    return record, rows


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="subtree-census",
        description="Exact subtree counts and mean subtree order")
    parser.add_argument("--format", choices=("json", "csv"), default="json")
    parser.add_argument("--deterministic", action="store_true",
                        help="suppress the timing field")
    parser.add_argument("--jobs", type=int,
                        default=int(os.environ.get("CENSUS_JOBS", "1")),
                        help="worker processes for scans (env CENSUS_JOBS)")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("mu", help="subtree stats of one graph or family member")
    p.add_argument("--graph6")
    p.add_argument("--path", type=int)
    p.add_argument("--family", choices=("broom", "fan", "chorded"))
    p.add_argument("--L", type=int)
    p.add_argument("--s", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--chords", help="comma-separated core chords, like 0-5,5-10")
    p.set_defaults(fn=cmd_mu)

    p = sub.add_parser("decrease", help="scan for mean-decreasing fan chords")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--L-min", dest="L_min", type=int)
    p.add_argument("--L-max", dest="L_max", type=int, default=22)
    p.add_argument("--s-max", dest="s_max", type=int, default=1024)
    p.set_defaults(fn=cmd_decrease)

    p = sub.add_parser("threshold", help="split vs bipartite mean comparison")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n-max", dest="n_max", type=int, required=True)
    p.add_argument("--full-table", dest="full_table", action="store_true")
    p.set_defaults(fn=cmd_threshold)

    p = sub.add_parser("scan", help="edge-addition scan over a graph6 stream")
    p.add_argument("--file", required=True, help="path or - for stdin")
    p.add_argument("--max-order", dest="max_order", type=int, default=12)
    p.set_defaults(fn=cmd_scan)

    p = sub.add_parser("tree-bound", help="mean lower bound over all labeled trees")
    p.add_argument("--n-max", dest="n_max", type=int, default=8)
    p.set_defaults(fn=cmd_tree_bound)

    p = sub.add_parser("stem-table", help="stem counts per class")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int)
    p.set_defaults(fn=cmd_stem_table)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    t0 = time.perf_counter()
    try:
        record, rows = args.fn(args)
    except Graph6Error as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except TooLargeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except InvariantViolation as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 4
    if not args.deterministic:
        record["timing_ms"] = round((time.perf_counter() - t0) * 1000.0, 3)
    _emit(record, rows, args)
    return 0


if __name__ == "__main__":
    sys.exit(main())
