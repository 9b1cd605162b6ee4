"""Command-line front end.

Subcommands build the fan, evaluate intersection monomials, print the
tables, and run the verification suite. Output is deterministic text
or JSON; exact rationals are serialized as decimal-string numerator
and denominator pairs, never as floats. Exit status: 0 on success,
1 on a computation or verification failure, 2 on a usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction
from functools import lru_cache

from .d4fan import StarFan, Stabilizer, build_star_fan, compute_stabilizer
from .exact import int_det
from .intersection import (
    IntersectionEngine,
    MonomialSyntaxError,
    UnsupportedMonomialError,
    format_monomial,
    parse_monomial,
)
from .proportionality import l_top
from .tables import (
    TOP_DEGREE,
    FaberData,
    geometric_basis,
    igusa_table,
    voronoi_table,
)
from .verify import run_all

__all__ = ["main", "console_entry"]


class _UsageError(Exception):
    pass


@lru_cache(maxsize=1)
def _context() -> tuple[StarFan, Stabilizer, IntersectionEngine]:
    star = build_star_fan()
    stabilizer = compute_stabilizer(star)
    engine = IntersectionEngine(star.fan, star.e_index)
    return star, stabilizer, engine


def _rat(x) -> dict[str, str]:
    f = Fraction(x)
    return {"numerator": str(f.numerator), "denominator": str(f.denominator)}


def _document(command: str, inputs: dict, results: dict, reproducible: bool) -> dict:
    doc: dict = {"command": command, "inputs": inputs, "results": results}
    if not reproducible:
        doc["generated_at"] = time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())
    return doc


def _emit(doc: dict, text_lines: list[str], fmt: str) -> None:
    if fmt == "json":
        print(json.dumps(doc, indent=2))
    else:
        for line in text_lines:
            print(line)


def _cmd_fan_report(args: argparse.Namespace) -> int:
    star, stabilizer, _ = _context()
    rays = [
        {
            "index": i + 1,
            "vector": list(v),
            "coordinates": list(g.coords),
        }
        for i, (v, g) in enumerate(zip(star.ray_vectors, star.gammas))
    ]
    facets = [
        {"index": fi + 1, "rays": [i + 1 for i in sorted(f.incident)]}
        for fi, f in enumerate(star.facets)
    ]
    dets = [
        int_det([star.fan.rays[i] for i in sorted(c)]) for c in star.fan.top_cones
    ]
    cones = [
        {"index": fi + 1, "facet": fi + 1, "determinant": d}
        for fi, d in enumerate(dets)
    ]
    all_basic = all(abs(d) == 1 for d in dets)
    results = {
        "ray_count": len(rays),
        "rays": rays,
        "exceptional_ray": {
            "coordinates": list(star.eta.coords),
            "content": star.eta_content,
        },
        "facet_count": len(facets),
        "facets": facets,
        "cone_count": len(cones),
        "cones": cones,
        "all_cones_basic": all_basic,
        "stabilizer_order": stabilizer.order,
    }
    doc = _document("fan report", {}, results, args.reproducible)
    lines = ["fan report", f"ray count: {len(rays)}"]
    for r in rays:
        lines.append(
            f"  ray {r['index']:2d}: vector {tuple(r['vector'])}; "
            f"coordinates {tuple(r['coordinates'])}"
        )
    lines.append(
        f"exceptional ray: coordinates {tuple(star.eta.coords)}; "
        f"content {star.eta_content}"
    )
    lines.append(f"facet count: {len(facets)}")
    for f in facets:
        lines.append(f"  facet {f['index']:2d}: rays " + " ".join(str(i) for i in f["rays"]))
    lines.append(
        f"cone count: {len(cones)}; all basic (|det| = 1): {'yes' if all_basic else 'no'}"
    )
    lines.append(f"stabilizer order: {stabilizer.order}")
    _emit(doc, lines, args.format)
    return 0


def _cmd_intersection(args: argparse.Namespace) -> int:
    star, stabilizer, engine = _context()
    tokens = list(args.expr)
    if tokens and tokens[0] == "eval":
        tokens = tokens[1:]
    if len(tokens) != 1:
        raise _UsageError("expected exactly one monomial expression")
    raw = tokens[0]
    n_rays = len(star.fan.rays)
    if raw == "e10":
        mono = tuple(TOP_DEGREE if i == 0 else 0 for i in range(n_rays))
    else:
        mono = parse_monomial(raw, n_rays)
    if sum(mono) != TOP_DEGREE:
        raise _UsageError(
            f"monomial {format_monomial(mono)} has degree {sum(mono)}; "
            f"the top intersection degree is {TOP_DEGREE}"
        )
    if mono[0] < 1:
        raise _UsageError(
            "the monomial must contain the exceptional factor E: values "
            "without it do not localize to this star fan"
        )
    recursive = engine.evaluate(mono)
    system = engine.system_value(mono)
    agree = None if system is None else system == recursive
    results: dict = {
        "expression": format_monomial(mono),
        "system_value": None if system is None else _rat(system),
        "recursive_value": _rat(recursive),
        "agree": agree,
    }
    is_e_top = mono == tuple(TOP_DEGREE if i == 0 else 0 for i in range(n_rays))
    if is_e_top:
        results["stabilizer_order"] = stabilizer.order
        results["moduli_value"] = _rat(Fraction(recursive, stabilizer.order))
    doc = _document("intersection", {"expression": raw}, results, args.reproducible)
    lines = [f"intersection {format_monomial(mono)}"]
    lines.append(
        "system value:    "
        + ("not a system column" if system is None else str(Fraction(system)))
    )
    lines.append(f"recursive value: {Fraction(recursive)}")
    lines.append(
        "agreement:       " + ("n/a" if agree is None else ("yes" if agree else "no"))
    )
    if is_e_top:
        lines.append(f"stabilizer order: {stabilizer.order}")
        lines.append(f"moduli value:    {Fraction(recursive, stabilizer.order)}")
    _emit(doc, lines, args.format)
    if agree is False:
        return 1
    return 0


def _table_context() -> tuple:
    lt = l_top(4)
    faber = FaberData.default()
    igusa = igusa_table(lt.value, faber)
    return lt, faber, igusa


def _cmd_tables(args: argparse.Namespace) -> int:
    if args.stack and args.which != "ltop":
        raise _UsageError("--stack only applies to the ltop table")
    if args.basis != "lfe" and args.which != "voronoi":
        raise _UsageError("--basis only applies to the voronoi table")
    if args.genus != 4 and args.which != "ltop":
        raise _UsageError("--genus only applies to the ltop table")
    if args.which == "ltop":
        lt = l_top(args.genus)
        selected = lt.stack_value if args.stack else lt.value
        results = {
            "genus": lt.genus,
            "top_power": lt.top_power,
            "variety_value": _rat(lt.value),
            "stack_value": _rat(lt.stack_value),
            "selected": "stack" if args.stack else "variety",
            "value": _rat(selected),
        }
        doc = _document(
            "tables ltop",
            {"genus": args.genus, "stack": bool(args.stack)},
            results,
            args.reproducible,
        )
        lines = [
            "top power of the weight-one class",
            f"genus: {lt.genus}",
            f"top power: {lt.top_power}",
            f"variety value: {lt.value}",
            f"stack value:   {lt.stack_value}",
            f"selected: {results['selected']} ({selected})",
        ]
        _emit(doc, lines, args.format)
        return 0
    lt, faber, igusa = _table_context()
    if args.which == "igusa":
        values = [
            {"k": k, "value": _rat(igusa.a(k))} for k in range(TOP_DEGREE, -1, -1)
        ]
        doc = _document("tables igusa", {}, {"values": values}, args.reproducible)
        lines = ["table igusa: <L^k D^(10-k)> for k = 10 .. 0"]
        for entry in values:
            lines.append(f"  k = {entry['k']:2d}: {igusa.a(entry['k'])}")
        _emit(doc, lines, args.format)
        return 0
    # voronoi
    _, stabilizer, engine = _context()
    vor = voronoi_table(igusa, engine.e_top, stabilizer.order)
    if args.basis == "lfe":
        entries = []
        for k in range(TOP_DEGREE, -1, -1):
            for l in range(0, TOP_DEGREE + 1 - k):
                entries.append({"k": k, "l": l, "value": _rat(vor.a(k, l))})
        results = {
            "basis": "lfe",
            "e_top_toric": _rat(engine.e_top),
            "stabilizer_order": stabilizer.order,
            "entries": entries,
        }
        doc = _document("tables voronoi", {"basis": "lfe"}, results, args.reproducible)
        lines = ["table voronoi: <L^k F^(10-k-l) E^l> for k + l <= 10"]
        lines.append(
            f"corner entry: {engine.e_top}/{stabilizer.order} = "
            f"{Fraction(engine.e_top, stabilizer.order)}"
        )
        for entry in entries:
            val = vor.a(entry["k"], entry["l"])
            if val != 0:
                lines.append(f"  k = {entry['k']:2d}, l = {entry['l']:2d}: {val}")
        lines.append("  all remaining entries: 0")
        _emit(doc, lines, args.format)
        return 0
    entries = []
    for k in range(TOP_DEGREE, -1, -1):
        for l in range(0, TOP_DEGREE + 1 - k):
            m = TOP_DEGREE - k - l
            entries.append(
                {"k": k, "m": m, "l": l, "value": _rat(geometric_basis(vor, k, m, l))}
            )
    results = {
        "basis": "geometric",
        "e_top_toric": _rat(engine.e_top),
        "stabilizer_order": stabilizer.order,
        "entries": entries,
    }
    doc = _document(
        "tables voronoi", {"basis": "geometric"}, results, args.reproducible
    )
    lines = ["table voronoi (geometric basis): <L^k D^m E^l> with D = F - 4E"]
    for entry in entries:
        val = Fraction(int(entry["value"]["numerator"]), int(entry["value"]["denominator"]))
        if val != 0:
            lines.append(
                f"  k = {entry['k']:2d}, m = {entry['m']:2d}, l = {entry['l']:2d}: {val}"
            )
    lines.append("  all remaining entries: 0")
    _emit(doc, lines, args.format)
    return 0


def _cmd_verify(args: argparse.Namespace, faber_override: FaberData | None) -> int:
    star, stabilizer, engine = _context()
    report = run_all(
        faber=faber_override, star=star, stabilizer=stabilizer, engine=engine
    )
    fmt = "json" if args.json else args.format
    checks = [
        {
            "name": c.name,
            "description": c.description,
            "expected": c.expected,
            "actual": c.actual,
            "passed": c.passed,
        }
        for c in report.checks
    ]
    results = {
        "checks": checks,
        "passed_count": sum(c.passed for c in report.checks),
        "failed_count": sum(not c.passed for c in report.checks),
        "all_passed": report.all_passed,
    }
    doc = _document("verify", {}, results, args.reproducible)
    lines = []
    for c in report.checks:
        status = "PASS" if c.passed else "FAIL"
        lines.append(f"[{status}] {c.name}: expected {c.expected}; got {c.actual}")
    lines.append(
        f"{len(report.checks)} checks: {results['passed_count']} passed, "
        f"{results['failed_count']} failed"
    )
    _emit(doc, lines, fmt)
    return 0 if report.all_passed else 1


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--format", choices=("text", "json"), default="text", help="output format"
    )
    common.add_argument(
        "--reproducible",
        action="store_true",
        help="omit the timestamp so output is byte-stable",
    )
    parser = argparse.ArgumentParser(
        prog="a4toric",
        description=(
            "Exact intersection numbers on the toroidal compactifications "
            "of the moduli space of abelian fourfolds"
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)
    fan = sub.add_parser("fan", help="fan construction reports")
    fan_sub = fan.add_subparsers(dest="fan_command", required=True)
    fan_sub.add_parser(
        "report", parents=[common], help="rays, facets, cones, stabilizer"
    )
    inter = sub.add_parser(
        "intersection",
        parents=[common],
        help="evaluate a degree-10 boundary monomial (e10, or E^a*Di*... grammar)",
    )
    inter.add_argument("expr", nargs="+", help="'e10', or a monomial expression")
    tables = sub.add_parser("tables", parents=[common], help="print a table")
    tables.add_argument("which", choices=("igusa", "voronoi", "ltop"))
    tables.add_argument(
        "--basis",
        choices=("lfe", "geometric"),
        default="lfe",
        help="voronoi table basis: L/F/E powers or L/D/E with D = F - 4E",
    )
    tables.add_argument("--genus", type=int, default=4, help="genus for ltop")
    tables.add_argument(
        "--stack", action="store_true", help="use the stack normalization for ltop"
    )
    verify = sub.add_parser(
        "verify", parents=[common], help="run the verification suite"
    )
    verify.add_argument(
        "--json", action="store_true", help="shorthand for --format json"
    )
    return parser


def main(argv: list[str] | None = None, *, _faber_override: FaberData | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "fan":
            return _cmd_fan_report(args)
        if args.command == "intersection":
            return _cmd_intersection(args)
        if args.command == "tables":
            return _cmd_tables(args)
        if args.command == "verify":
            return _cmd_verify(args, _faber_override)
    except (_UsageError, MonomialSyntaxError, UnsupportedMonomialError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, RuntimeError) as exc:
        print(f"computation failed: {exc}", file=sys.stderr)
        return 1
    raise AssertionError("unreachable command")


def console_entry() -> None:
    sys.exit(main())
