"""Command line interface: ``wallcross <command> ...`` or ``python -m wallcross``."""

from __future__ import annotations

import argparse
import json
import sys

from .laurent import InexactPullbackError, format_poly, pullback
from .novikov import INF
from .parser import ParseError, parse_expression, parse_floer, parse_param_monomial, parse_polyvector, parse_rational
from .polyvector import format_floer, format_polyvector, hf_bracket, schouten
from .scattering import DiagramError, check_cell, compose_path, defect_as_field, set_parameter_to_zero
from .scenario import (
    Report,
    ScenarioError,
    _judge,
    _kill_expectation,
    emit_report,
    parse_expectation,
    resolve_example,
    run_example,
)


def _common(parser, suppress: bool):
    default = argparse.SUPPRESS if suppress else None
    parser.add_argument("--cutoff", type=parse_rational, default=default, metavar="RAT",
                        help="valuation cutoff for truncated expansions (default: the scenario's, usually 20)")
    parser.add_argument("--kill", default=default, metavar="MONOMIAL",
                        help="set every term divisible by this parameter monomial to zero, e.g. qp*qpp")
    parser.add_argument("--format", choices=("text", "json"), default=argparse.SUPPRESS if suppress else "text",
                        help="output format")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="wallcross", description="Exact checks of wall-crossing data and deformation ledgers.")
    _common(p, suppress=False)
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, help_):
        sp = sub.add_parser(name, help=help_)
        _common(sp, suppress=True)
        return sp

    sp = add("verify", "run every check of a scenario")
    sp.add_argument("scenario", help="main, open, compact or a scenario file")

    sp = add("pullback", "pull a Laurent polynomial back along a wall")
    sp.add_argument("-f", "--function", required=True, metavar="EXPR")
    sp.add_argument("-s", "--wall", required=True)
    sp.add_argument("--scenario", default="main")

    sp = add("compose", "compose walls along a path given in traversal order")
    sp.add_argument("walls", nargs="+")
    sp.add_argument("--scenario", default="main")

    sp = add("cell-check", "compare the two composites around a cell")
    sp.add_argument("scenario")
    sp.add_argument("cell")

    sp = add("bracket", "Schouten or Floer-side bracket of two expressions")
    kind = sp.add_mutually_exclusive_group(required=True)
    kind.add_argument("--schouten", action="store_true", help="polyvector inputs using d1..dN")
    kind.add_argument("--hf", action="store_true", help="Floer classes using g1..gN")
    sp.add_argument("left")
    sp.add_argument("right")
    sp.add_argument("--scenario", default="main", help="scenario providing parameters and coordinate count")

    sp = add("master", "master-equation checks only")
    sp.add_argument("scenario")
    return p


def _kill_vector(args, table):
    return None if args.kill is None else parse_param_monomial(args.kill, table)


def _emit(args, text_lines, payload):
    if args.format == "json":
        sys.stdout.write(json.dumps(payload, indent=2) + "\n")
    else:
        sys.stdout.write("\n".join(text_lines) + "\n")


def _diagram(args):
    ex = resolve_example(args.scenario)
    kill = _kill_vector(args, ex.diagram.table)
    d = ex.diagram if kill is None else set_parameter_to_zero(ex.diagram, kill)
    cutoff = ex.cutoff if args.cutoff is None else args.cutoff
    return ex, d, cutoff


def cmd_verify(args) -> int:
    ex = resolve_example(args.scenario)
    report = run_example(ex, cutoff=args.cutoff, kill=_kill_vector(args, ex.diagram.table))
    sys.stdout.write(emit_report(report, args.format))
    return 0 if report.ok else 1


def cmd_master(args) -> int:
    ex = resolve_example(args.scenario)
    full = run_example(ex, cutoff=args.cutoff, kill=_kill_vector(args, ex.diagram.table))
    report = Report(full.scenario, full.cutoff, [c for c in full.checks if c.id.startswith("master[")], full.killed)
    sys.stdout.write(emit_report(report, args.format))
    return 0 if report.ok else 1


def cmd_pullback(args) -> int:
    ex, d, cutoff = _diagram(args)
    f = parse_expression(args.function, d.table, d.n)
    sub = d.wall(args.wall).substitution
    try:
        result, exact = pullback(f, sub, INF), True
    except InexactPullbackError:
        result, exact = pullback(f, sub, cutoff), False
    note = "exact" if exact else f"truncated at valuation {cutoff}"
    _emit(args, [format_poly(result), f"# {note}"],
          {"result": format_poly(result), "exact": exact, "cutoff": None if exact else str(cutoff)})
    return 0


def cmd_compose(args) -> int:
    ex, d, cutoff = _diagram(args)
    try:
        rho, exact = compose_path(d, args.walls, INF), True
    except InexactPullbackError:
        rho, exact = compose_path(d, args.walls, cutoff), False
    images = {f"z{i}": format_poly(rho.image(i)) for i in range(1, d.n + 1)}
    lines = [f"{k} -> {v}" for k, v in images.items() if v != k]
    lines = lines or ["identity"]
    if not exact:
        lines.append(f"# truncated at valuation {cutoff}")
    _emit(args, lines, {"images": images, "exact": exact})
    return 0


def cmd_cell_check(args) -> int:
    ex, d, cutoff = _diagram(args)
    try:
        rep, exact = check_cell(d, args.cell, INF), True
    except InexactPullbackError:
        rep, exact = check_cell(d, args.cell, cutoff), False
    field_ = None
    if not rep.is_consistent():
        try:
            field_ = defect_as_field(rep)
        except DiagramError:
            field_ = None
    exp_text = ex.expectations.get(f"cell[{args.cell}]", "pass")
    expectation = parse_expectation(exp_text, d.table, d.n)
    kill = _kill_vector(args, d.table)
    if kill is not None:
        expectation = _kill_expectation(expectation, kill)
    status, note = _judge(expectation, rep.is_consistent(), field_, rep.leading_valuation)
    ok = status != "fail"
    lines = [f"cell {args.cell}: first path {' '.join(d.cell(args.cell).first)}, second {' '.join(d.cell(args.cell).second)}"]
    for i, r in rep.residuals.items():
        lines.append(f"residual z{i}: {format_poly(r)}")
    if field_ is not None:
        lines.append(f"defect field: {format_polyvector(field_)}")
        lines.append(f"leading valuation: {rep.leading_valuation}")
    lines.append(f"expected {expectation.text()}: {status}" + (f" ({note})" if note else ""))
    if not exact:
        lines.append(f"# truncated at valuation {cutoff}")
    payload = {
        "cell": args.cell,
        "residuals": {f"z{i}": format_poly(r) for i, r in rep.residuals.items()},
        "defect": None if field_ is None else format_polyvector(field_),
        "valuation": None if rep.leading_valuation == INF else str(rep.leading_valuation),
        "expected": expectation.text(),
        "status": status,
    }
    _emit(args, lines, payload)
    return 0 if ok else 1


def cmd_bracket(args) -> int:
    ex = resolve_example(args.scenario)
    table, n = ex.diagram.table, ex.diagram.n
    kill = _kill_vector(args, table)
    if args.schouten:
        a, b = parse_polyvector(args.left, table, n), parse_polyvector(args.right, table, n)
        result = schouten(a, b, INF if args.cutoff is None else args.cutoff)
        if kill is not None:
            result = result.kill(kill)
        text = format_polyvector(result)
    else:
        a, b = parse_floer(args.left, table, n), parse_floer(args.right, table, n)
        result = hf_bracket(a, b)
        text = format_floer(result)
    _emit(args, [text], {"result": text})
    return 0


COMMANDS = {
    "verify": cmd_verify,
    "pullback": cmd_pullback,
    "compose": cmd_compose,
    "cell-check": cmd_cell_check,
    "bracket": cmd_bracket,
    "master": cmd_master,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (ScenarioError, ParseError, DiagramError, ValueError, KeyError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else str(exc)
        sys.stderr.write(f"wallcross: error: {msg}\n")
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
