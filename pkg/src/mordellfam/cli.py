"""Command-line front end.

Subcommands: gen, verify-identities, scan, torsion, regulator.
Exit codes: 0 success, 1 usage error, 2 degenerate input where heights were
requested, 3 internal verification failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ProcessPoolExecutor

from . import __version__
from .curves import MordellCurve, parse_point
from .family import (
    FamilyParams,
    InstanceInvalidError,
    build_instance,
    verify_derivation,
)
from .heights import DegenerateInputError, height_report, independence_verdict
from .polynomials import format_poly, parse_poly

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DEGENERATE = 2
EXIT_VERIFY_FAILED = 3


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors; 2 is reserved for degenerate inputs here
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _tol_for(digits: int) -> str:
    return f"1e-{max(digits - 10, 6)}"


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mordellfam", description=__doc__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add_common(p, fmt=True):
        p.add_argument("--precision", type=int, default=30, metavar="DIGITS",
                       help="working precision in decimal digits (default 30)")
        if fmt:
            p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--out", metavar="PATH", help="write output to a file instead of stdout")

    p_gen = sub.add_parser("gen", help="build one family instance from (a, b, c)")
    p_gen.add_argument("a", type=int)
    p_gen.add_argument("b", type=int)
    p_gen.add_argument("c", type=int)
    p_gen.add_argument("--with-heights", action="store_true",
                       help="append canonical heights, Gram matrix and regulator")
    add_common(p_gen)

    p_ver = sub.add_parser("verify-identities", help="run the exact symbolic identity suite")
    p_ver.add_argument("--print-poly", action="store_true",
                       help="print each expanded residual polynomial and its term count")
    p_ver.add_argument("--perturb", metavar="NAME:POLY", action="append", default=[],
                       help="add POLY to the named identity's residual (test hook)")
    p_ver.add_argument("--out", metavar="PATH")

    p_scan = sub.add_parser("scan", help="tabulate instances over parameter ranges")
    p_scan.add_argument("--a", required=True, metavar="LO:HI", help="inclusive range for a")
    p_scan.add_argument("--b", required=True, metavar="LO:HI", help="inclusive range for b")
    p_scan.add_argument("--c", required=True, metavar="LO:HI", help="inclusive range for c")
    p_scan.add_argument("--ordered", action="store_true",
                        help="keep only a <= b <= c to cut symmetry")
    p_scan.add_argument("--jobs", type=int, default=1,
                        help="worker processes (output order is deterministic regardless)")
    p_scan.add_argument("--plot", metavar="PATH",
                        help="also render a summary figure to PATH")
    add_common(p_scan)

    p_tor = sub.add_parser("torsion", help="torsion subgroup of y^2 = x^3 + d")
    p_tor.add_argument("d", type=int)
    add_common(p_tor)

    p_reg = sub.add_parser("regulator", help="regulator of points on y^2 = x^3 + d")
    p_reg.add_argument("d", type=int)
    p_reg.add_argument("points", nargs="+", metavar="POINT",
                       help="points as '(x, y)' with optional num/den components")
    add_common(p_reg)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        out_text = _dispatch(args)
    except _CommandError as exc:
        print(f"mordellfam: error: {exc}", file=sys.stderr)
        return exc.exit_code
    except InstanceInvalidError as exc:
        print(f"mordellfam: internal verification failure: {exc}", file=sys.stderr)
        return EXIT_VERIFY_FAILED
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(out_text)
    else:
        sys.stdout.write(out_text)
    return EXIT_OK


class _CommandError(Exception):
    def __init__(self, message, exit_code):
        super().__init__(message)
        self.exit_code = exit_code


def _dispatch(args) -> str:
    if getattr(args, "precision", 30) <= 0:
        raise _CommandError("--precision must be positive", EXIT_USAGE)
    if args.command == "gen":
        return _cmd_gen(args)
    if args.command == "verify-identities":
        return _cmd_verify(args)
    if args.command == "scan":
        return _cmd_scan(args)
    if args.command == "torsion":
        return _cmd_torsion(args)
    if args.command == "regulator":
        return _cmd_regulator(args)
    raise AssertionError(f"unhandled command {args.command}")


# -- gen ----------------------------------------------------------------------


def _cmd_gen(args) -> str:
    try:
        params = FamilyParams(args.a, args.b, args.c)
    except ValueError as exc:
        raise _CommandError(str(exc), EXIT_USAGE)
    instance = build_instance(params)
    record = instance.as_record()
    if args.with_heights:
        if instance.flags or instance.curve is None:
            raise _CommandError(
                f"instance ({args.a}, {args.b}, {args.c}) is degenerate "
                f"({', '.join(sorted(instance.flags))}); heights are not meaningful",
                EXIT_DEGENERATE,
            )
        try:
            report = independence_verdict(
                instance.curve, list(instance.points), _tol_for(args.precision)
            )
        except DegenerateInputError as exc:
            raise _CommandError(str(exc), EXIT_DEGENERATE)
        record["height_report"] = report.to_json_dict(args.precision)
        record["verdict"] = "rank >= 3 witnessed" if report.independent else "independence not established"
    if args.format == "csv":
        return _gen_csv(record)
    return json.dumps(record, indent=2) + "\n"


def _gen_csv(record) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    head = ["a", "b", "c", "k", "d", "x1", "y1", "x2", "y2", "x3", "y3", "flags"]
    row = [record["a"], record["b"], record["c"], record["k"], record["d"]]
    for pt in record["points"]:
        x, y = pt.strip("()").split(",")
        row.extend([x.strip(), y.strip()])
    row.append(";".join(record["flags"]))
    if "height_report" in record:
        head.extend(["regulator", "regulator_error", "independent"])
        hr = record["height_report"]
        row.extend([hr["regulator"], hr["regulator_error"], str(hr["independent"]).lower()])
    writer.writerow(head)
    writer.writerow(row)
    return buf.getvalue()


# -- verify-identities -----------------------------------------------------------


def _cmd_verify(args) -> str:
    perturbations = {}
    for perturb_text in args.perturb:
        name, _, poly_text = perturb_text.partition(":")
        if not poly_text:
            raise _CommandError("--perturb expects NAME:POLY", EXIT_USAGE)
        try:
            perturbations[name] = parse_poly(poly_text)
        except ValueError as exc:
            raise _CommandError(f"bad perturbation polynomial: {exc}", EXIT_USAGE)
    report = verify_derivation(perturbations or None)
    lines = []
    for check in report:
        status = "PASS" if check.passed else "FAIL"
        lines.append(f"{check.name:<24} {status}   {check.description}")
        if args.print_poly:
            lines.append(f"    residual terms: {check.residual_terms}")
            lines.append(f"    residual: {format_poly(check.residual)}")
    lines.append(
        f"{sum(c.passed for c in report.checks)}/{len(report.checks)} identities hold"
    )
    text = "\n".join(lines) + "\n"
    if not report.all_passed:
        sys.stdout.write(text)
        raise _CommandError("identity verification failed", EXIT_VERIFY_FAILED)
    return text


# -- scan ------------------------------------------------------------------------


def _parse_range(text: str) -> range:
    lo, _, hi = text.partition(":")
    try:
        lo_i, hi_i = int(lo), int(hi)
    except ValueError:
        raise _CommandError(f"bad range {text!r}; expected LO:HI", EXIT_USAGE)
    # an empty range (hi < lo) is allowed and yields an empty table
    return range(lo_i, hi_i + 1)


def _scan_row(task) -> dict:
    a, b, c, digits = task
    params = FamilyParams(a, b, c)
    instance = build_instance(params)
    record = instance.as_record()
    row = {
        "a": record["a"], "b": record["b"], "c": record["c"],
        "k": record["k"], "k_digits": str(len(str(abs(instance.k)))),
        "flags": record["flags"],
        "x": [p.split(",")[0].lstrip("(").strip() for p in record["points"]],
        "regulator": "", "regulator_error": "", "independent": "", "error": "",
    }
    if instance.flags or instance.curve is None:
        return row
    try:
        report = height_report(instance.curve, list(instance.points), _tol_for(digits))
        rep = report.to_json_dict(digits)
        row["regulator"] = rep["regulator"]
        row["regulator_error"] = rep["regulator_error"]
        row["independent"] = "true" if report.independent else "false"
    except Exception as exc:  # per-instance failures are recorded, not fatal
        row["error"] = f"{type(exc).__name__}: {exc}"
    return row


def _cmd_scan(args) -> str:
    ra, rb, rc = _parse_range(args.a), _parse_range(args.b), _parse_range(args.c)
    tasks = []
    for a in ra:
        for b in rb:
            for c in rc:
                if args.ordered and not (a <= b <= c):
                    continue
                if a == b == c == 0:
                    continue
                tasks.append((a, b, c, args.precision))

    if args.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(_scan_row, tasks, chunksize=4))
    else:
        rows = [_scan_row(t) for t in tasks]

    clean = [r for r in rows if not r["flags"]]
    degenerate = [r for r in rows if r["flags"]]

    if args.plot:
        from .plots import render_scan_figure

        render_scan_figure(clean, args.plot)

    if args.format == "csv":
        return _scan_csv(clean, degenerate)
    payload = {
        "rows": [
            {k: v for k, v in r.items() if k != "flags"} for r in clean
        ],
        "degenerate": [
            {"a": r["a"], "b": r["b"], "c": r["c"], "k": r["k"], "flags": r["flags"]}
            for r in degenerate
        ],
    }
    return json.dumps(payload, indent=2) + "\n"


def _scan_csv(clean, degenerate) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["a", "b", "c", "k", "k_digits", "x1", "x2", "x3",
                     "regulator", "regulator_error", "independent", "error"])
    for r in clean:
        writer.writerow([r["a"], r["b"], r["c"], r["k"], r["k_digits"],
                         r["x"][0], r["x"][1], r["x"][2],
                         r["regulator"], r["regulator_error"], r["independent"], r["error"]])
    if degenerate:
        writer.writerow([])
        writer.writerow(["# degenerate instances"])
        writer.writerow(["a", "b", "c", "k", "flags"])
        for r in degenerate:
            writer.writerow([r["a"], r["b"], r["c"], r["k"], ";".join(r["flags"])])
    return buf.getvalue()


# -- torsion -----------------------------------------------------------------------


def _cmd_torsion(args) -> str:
    try:
        curve = MordellCurve(args.d)
    except ValueError as exc:
        raise _CommandError(str(exc), EXIT_USAGE)
    group = curve.torsion_subgroup()
    record = {
        "d": str(args.d),
        "structure": group.name,
        "order": group.order,
        "generator": str(group.generator) if group.generator else None,
        "elements": [str(p) for p in group.elements(curve)],
    }
    if args.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["d", "structure", "order", "generator"])
        writer.writerow([record["d"], record["structure"], record["order"],
                         record["generator"] or ""])
        return buf.getvalue()
    return json.dumps(record, indent=2) + "\n"


# -- regulator ------------------------------------------------------------------------


def _cmd_regulator(args) -> str:
    try:
        curve = MordellCurve(args.d)
        points = [parse_point(t) for t in args.points]
    except ValueError as exc:
        raise _CommandError(str(exc), EXIT_USAGE)
    for p in points:
        if not curve.contains(p):
            raise _CommandError(f"point {p} is not on {curve}", EXIT_USAGE)
    try:
        report = height_report(curve, points, _tol_for(args.precision))
    except DegenerateInputError as exc:
        raise _CommandError(str(exc), EXIT_DEGENERATE)
    record = {"d": str(args.d), "points": [str(p) for p in points]}
    record.update(report.to_json_dict(args.precision))
    if args.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["d", "n_points", "regulator", "regulator_error", "independent"])
        writer.writerow([record["d"], len(points), record["regulator"],
                         record["regulator_error"], str(record["independent"]).lower()])
        return buf.getvalue()
    return json.dumps(record, indent=2) + "\n"


if __name__ == "__main__":
    sys.exit(main())
