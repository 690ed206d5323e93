"""Command line entry point: ``sl4cybe <command> ...``."""

from __future__ import annotations

import argparse
import json
import sys
from importlib import resources
from typing import List, Optional

from . import __version__
from .catalog import (ParseError, catalog_dict, compare_up_to_scalar, load_catalog, parse_expression,
                      read_catalog_text, RMATRIX_NAMES)
from .frobenius import (Functional, SingularFormError, borel_plus, form_from_functional, pfaffian,
                        rmatrix_from_functional, standard_parabolics)
from .lie import sl4
from .report import Context, Report, adjudications, entries, parse_params, run_all
from .wedge import BiVector, cybe_residual, schouten_mixed, schouten_self

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _common(p: argparse.ArgumentParser):
    p.add_argument("--catalog", help="catalog file (default: $CYBE_CATALOG or the shipped catalog)")
    p.add_argument("--params", nargs="+", default=[], metavar="K=V",
                   help="substitute exact values for parameters, e.g. a=0 lam=1/2")
    p.add_argument("--jobs", type=int, default=1, metavar="N", help="worker processes for independent checks")
    p.add_argument("--strict", action="store_true",
                   help="treat info-level mismatches against printed claims as failures")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sl4cybe", description="Exact checks of classical r-matrices for sl(4).")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("verify", help="run the complete verification suite")
    _common(p)
    p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("report", help="emit the full report")
    _common(p)
    p.add_argument("--format", choices=("text", "json"), default="json")

    p = sub.add_parser("check", help="CYBE, degree parts and repairs for one catalog r-matrix")
    _common(p)
    p.add_argument("entry")

    p = sub.add_parser("derive", help="invert the form of a functional on a parabolic subalgebra")
    _common(p)
    p.add_argument("functional", help="catalog name (g1a) or dual expression (\"e5* + e4* + e1*\")")
    p.add_argument("parabolic", help="B, P1, P2, P3 or P23")

    p = sub.add_parser("schouten", help="Schouten bracket <<r, s>> of two bivector expressions")
    _common(p)
    p.add_argument("left")
    p.add_argument("right")
    return parser


def _emit(report: Report, fmt: str) -> str:
    if fmt == "json":
        text = report.to_json()
        validate_report(json.loads(text))
        return text
    return report.to_text()


def report_schema() -> dict:
    return json.loads(resources.files("sl4cybe").joinpath("data/report.schema.json").read_text("utf-8"))


def validate_report(obj: dict) -> None:
    import jsonschema
    jsonschema.validate(obj, report_schema())


def _catalog(args):
    try:
        return catalog_dict(load_catalog(args.catalog, sl4()))
    except (OSError, ParseError) as exc:
        raise UsageError(f"cannot load catalog: {exc}") from exc


def cmd_verify(args, out) -> int:
    if args.jobs < 1:
        raise UsageError("--jobs must be at least 1")
    try:
        parse_params(args.params)
    except (KeyError, ValueError) as exc:
        raise UsageError(f"bad --params: {exc}") from exc
    try:
        report = run_all(args.catalog, args.params, jobs=args.jobs, strict=args.strict)
    except (OSError, ParseError) as exc:
        raise UsageError(f"cannot load catalog: {exc}") from exc
    out.write(_emit(report, args.format))
    return EXIT_OK if report.ok else EXIT_FAIL


def _context(args) -> Context:
    try:
        return Context(read_catalog_text(args.catalog), parse_params(args.params))
    except OSError as exc:
        raise UsageError(f"cannot load catalog: {exc}") from exc
    except (KeyError, ValueError) as exc:
        raise UsageError(f"bad --params: {exc}") from exc


def cmd_check(args, out) -> int:
    ctx = _context(args)
    try:
        cat = entries(ctx)
    except ParseError as exc:
        raise UsageError(f"cannot load catalog: {exc}") from exc
    if args.entry not in RMATRIX_NAMES:
        raise UsageError(f"unknown r-matrix {args.entry!r}; choose from {', '.join(RMATRIX_NAMES)}")
    r = cat[args.entry].value
    out.write(f"{args.entry} = {r}\n")
    out.write(f"carrier dimension {r.carrier_dim()}\n")
    a = adjudications(ctx)[args.entry]
    if a.verbatim_ok:
        out.write("CYBE: pass (zero residual)\n")
        status = EXIT_OK
    else:
        res = cybe_residual(r)
        out.write(f"CYBE: printed form fails ({len(res.residual.coeffs)} nonzero residual components)\n")
        for rep in a.repairs:
            out.write(f"  repair: {rep.describe()} => {rep.expression}\n")
        if a.value is None:
            out.write("CYBE: fail, no repair found\n")
            return EXIT_FAIL
        if a.reason:
            out.write(f"  selected: {a.selected} ({a.reason})\n")
        out.write(f"adjudicated = {a.value}\n")
        out.write("CYBE: pass after adjudication\n")
        status = EXIT_FAIL if args.strict else EXIT_OK
    for name, parts in cybe_residual(a.value).per_degree.items():
        for d, part in sorted(parts.items()):
            out.write(f"  residual [{name}^{d}]: {'zero' if part.is_zero() else 'nonzero'}\n")
    return status


def cmd_derive(args, out) -> int:
    g = sl4()
    cat = _catalog(args)
    if args.functional in cat and isinstance(cat[args.functional].value, Functional):
        gstar = cat[args.functional].value
    else:
        try:
            gstar = parse_expression(args.functional, g)
        except ParseError as exc:
            raise UsageError(str(exc)) from exc
        if not isinstance(gstar, Functional):
            raise UsageError("the first argument must be a functional (dual vectors like e1*)")
    subs = standard_parabolics(g)
    subs["B"] = borel_plus(g)
    if args.parabolic not in subs:
        raise UsageError(f"unknown subalgebra {args.parabolic!r}; choose from {', '.join(sorted(subs))}")
    p = subs[args.parabolic]
    pf = pfaffian(form_from_functional(gstar, p))
    out.write(f"functional {gstar} on {p.name} (dimension {p.dim})\n")
    out.write(f"Pfaffian: {pf}\n")
    try:
        r = rmatrix_from_functional(gstar, p, clear_denominators=not pf.is_constant())
    except SingularFormError as exc:
        out.write(f"singular: {exc}\n")
        return EXIT_FAIL
    out.write(f"r = {r}\n")
    out.write("CYBE: pass\n")
    for name in RMATRIX_NAMES:
        c = compare_up_to_scalar(r, cat[name].value, search=False)
        if c.match:
            out.write(f"matches {name} with scalar {c.scalar_text()}\n")
    return EXIT_OK


def cmd_schouten(args, out) -> int:
    g = sl4()
    try:
        r, s = parse_expression(args.left, g), parse_expression(args.right, g)
    except ParseError as exc:
        raise UsageError(str(exc)) from exc
    if not isinstance(r, BiVector) or not isinstance(s, BiVector):
        raise UsageError("both arguments must be bivector expressions")
    t = schouten_self(r) if r == s else schouten_mixed(r, s)
    out.write(f"{t}\n")
    return EXIT_OK


COMMANDS = {"verify": cmd_verify, "report": cmd_verify, "check": cmd_check,
            "derive": cmd_derive, "schouten": cmd_schouten}


def main(argv: Optional[List[str]] = None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args, out)
    except UsageError as exc:
        sys.stderr.write(f"sl4cybe: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
