"""Command-line front end.

Subcommands: compute, search, compose, obstruct, refute, catalog, validate.
Exit codes: 0 success, 1 usage error, 2 validation failure, 3 a theorem
check failed (which signals an engine bug, not bad input).  Output is
deterministic; ``--json`` renders the report as a stable document with no
timestamps.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import catalog as catalog_mod
from .homology import DescriptorError, pretty, total_betti
from .nu import Bound, heegaard_upper, nu_of_ordering, search_min_nu
from .obstruction import (
    betti1_floor,
    graph_from_json,
    HandleBudget,
    interface_lower_bound,
    pieces_ceiling,
    refute,
)
from .trace import (
    OrderedHandleDecomposition,
    TraceError,
    canonical_dumps,
    replay,
    trace_from_json,
    trace_to_json,
    validate,
)
from .union import GlueError, GlueSpec, check_key_inequality, compose

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INVALID = 2
EXIT_THEOREM = 3

SCHEMA_VERSION = 1


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; this tool reserves 2 for
    # validation failures, so remap.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be a positive integer, got {text}")
    return value


def _load_json(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _load_trace(path: str) -> OrderedHandleDecomposition:
    return trace_from_json(_load_json(path))


def _emit(args, report: dict, human_lines: list[str]) -> None:
    if args.json:
        sys.stdout.write(canonical_dumps({"schema_version": SCHEMA_VERSION, **report}))
    else:
        for line in human_lines:
            print(line)


def _require_valid(d: OrderedHandleDecomposition) -> list[str]:
    report = validate(d)
    if not report.ok:
        for violation in report.violations:
            where = "structure" if violation.mu is None else f"prefix {violation.mu}"
            print(f"invalid trace ({where}): {violation.message}", file=sys.stderr)
        raise TraceError("trace failed validation")
    return list(report.warnings)


def _mu_table(d: OrderedHandleDecomposition) -> tuple[list[str], dict]:
    states = replay(d)
    evaluation = nu_of_ordering(d)
    lines = ["   mu  e_mu  free boundary"]
    for state in states:
        marker = "*" if state.mu == evaluation.argmax_mu else " "
        comps = ", ".join(f"{c.id} {pretty(c.desc)}" for c in state.components) or "(empty)"
        lines.append(f" {marker} {state.mu:>3} {evaluation.e_values[state.mu]:>5}  {comps}")
    mu_note = f"mu range {evaluation.mu_start}..{d.delta}"
    if evaluation.argmax_mu is None:
        lines.append(f"nu(ordering) = {evaluation.nu}   [{mu_note}]")
    else:
        lines.append(
            f"nu(ordering) = {evaluation.nu}   achieved at mu={evaluation.argmax_mu}"
            f" by {evaluation.argmax_component}   [{mu_note}]"
        )
    result = {
        "e_values": list(evaluation.e_values),
        "mu_start": evaluation.mu_start,
        "nu": evaluation.nu,
        "argmax_mu": evaluation.argmax_mu,
        "argmax_component": evaluation.argmax_component,
    }
    return lines, result


def cmd_compute(args) -> int:
    d = _load_trace(args.trace)
    warnings = _require_valid(d)
    lines, result = _mu_table(d)
    _emit(
        args,
        {"command": "compute", "result": result, "warnings": warnings},
        lines + [f"warning: {w}" for w in warnings],
    )
    return EXIT_OK


def _bound_lines(bound: Bound) -> list[str]:
    tag = "exhaustive" if bound.exhaustive else "budget hit"
    lines = [
        f"orderings enumerated: {bound.enumerated} ({tag})",
        f"nu bound: [{bound.lower}, {bound.upper}]",
    ]
    for reason in bound.lower_reasons:
        lines.append(f"  lower {bound.lower}: {reason}")
    if bound.witness_order is not None:
        order = ", ".join(str(i) for i in bound.witness_order) or "(no handles)"
        lines.append(f"  upper {bound.upper}: witness order (original positions) {order}")
    if bound.witness_note:
        lines.append(f"  upper {bound.upper}: {bound.witness_note}")
    return lines


def cmd_search(args) -> int:
    d = _load_trace(args.trace)
    warnings = _require_valid(d)
    budget = None if args.all_orderings else args.budget
    bound = search_min_nu(d, budget=budget)
    result = {
        "lower": bound.lower,
        "upper": bound.upper,
        "exhaustive": bound.exhaustive,
        "enumerated": bound.enumerated,
        "lower_reasons": list(bound.lower_reasons),
        "witness_order": list(bound.witness_order) if bound.witness_order else [],
        "witness": trace_to_json(bound.witness) if bound.witness is not None else None,
    }
    _emit(
        args,
        {"command": "search", "result": result, "warnings": warnings},
        _bound_lines(bound) + [f"warning: {w}" for w in warnings],
    )
    return EXIT_OK


def inequality_exit_code(holds: bool) -> int:
    """A failed union inequality is an engine bug, reported as exit 3."""
    return EXIT_OK if holds else EXIT_THEOREM


def cmd_compose(args) -> int:
    dm = _load_trace(args.first)
    dn = _load_trace(args.second)
    glue_doc = _load_json(args.glue)
    try:
        glue = GlueSpec(tuple((str(a), str(b)) for a, b in glue_doc["pairs"]))
    except (KeyError, TypeError) as exc:
        raise GlueError(f"glue file must contain a 'pairs' list of id pairs: {exc}") from exc

    composite = compose(dm, dn, glue)
    lines = [
        f"first part: {dm.delta} handles, nu(ordering) = {nu_of_ordering(dm).nu}",
        f"second part: {dn.delta} handles, nu(ordering) = {nu_of_ordering(dn).nu}",
        f"composite: {composite.delta} handles over {len(composite.base)} base components, "
        f"nu(ordering) = {nu_of_ordering(composite).nu}",
    ]
    result = {
        "composite": trace_to_json(composite),
        "nu_first": nu_of_ordering(dm).nu,
        "nu_second": nu_of_ordering(dn).nu,
        "nu_composite": nu_of_ordering(composite).nu,
    }
    code = EXIT_OK
    if args.check:
        report = check_key_inequality(dm, dn, glue)
        verdict = "holds" if report.holds else "VIOLATED (engine bug)"
        lines.append(f"check: {report.lhs} <= max({report.nu_first}, {report.nu_second}) "
                     f"= {report.rhs} {verdict}  [case: {report.case}]")
        lines.extend(f"  - {step}" for step in report.steps)
        result["check"] = {
            "lhs": report.lhs,
            "rhs": report.rhs,
            "holds": report.holds,
            "case": report.case,
            "steps": list(report.steps),
        }
        code = inequality_exit_code(report.holds)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(canonical_dumps(trace_to_json(composite)))
        lines.append(f"composite trace written to {args.out}")
    _emit(args, {"command": "compose", "result": result, "warnings": []}, lines)
    return code


def cmd_obstruct(args) -> int:
    graph = graph_from_json(_load_json(args.graph))
    interface = interface_lower_bound(graph)
    l_floor = betti1_floor(graph)
    ceiling = pieces_ceiling(l_floor, graph.z)
    lines = [
        f"pieces w = {graph.w}, interfaces rho = {graph.rho}, free boundaries z = {graph.z}",
        f"interface floor ceil((3w - z)/2) = {interface.floor}; rho >= floor "
        f"{'holds' if interface.holds else 'FAILS'}",
        f"first-Betti floor: {l_floor}",
        f"piece ceiling 2l + z - 2 at that floor: {ceiling}",
    ]
    result = {
        "w": graph.w,
        "rho": graph.rho,
        "z": graph.z,
        "interface_floor": interface.floor,
        "interface_holds": interface.holds,
        "betti1_floor": l_floor,
        "pieces_ceiling": ceiling,
    }
    if graph.handle_costs is not None:
        h_max = max(graph.handle_costs)
        budget = refute(HandleBudget(h_max, l_floor, graph.z), 0)
        lines.append(
            f"handle budget at the floor: {budget.max_pieces} pieces x {h_max} handles "
            f"= {budget.max_handles}"
        )
        result["h_max"] = h_max
        result["max_handles"] = budget.max_handles
    _emit(args, {"command": "obstruct", "result": result, "warnings": []}, lines)
    return EXIT_OK


def cmd_refute(args) -> int:
    verdict = refute(HandleBudget(args.hmax, args.l, args.z), args.hW)
    if verdict.decomposable_possible:
        line = (
            f"possible: target handle count {args.hW} fits the budget "
            f"{verdict.max_pieces} pieces x {args.hmax} = {verdict.max_handles}"
        )
    else:
        line = (
            f"refuted: target handle count {args.hW} exceeds the fixed budget "
            f"{verdict.max_pieces} pieces x {args.hmax} = {verdict.max_handles}"
        )
    result = {
        "decomposable_possible": verdict.decomposable_possible,
        "max_pieces": verdict.max_pieces,
        "max_handles": verdict.max_handles,
        "h_w": args.hW,
    }
    _emit(args, {"command": "refute", "result": result, "warnings": []}, [line])
    return EXIT_OK


def cmd_catalog(args) -> int:
    if args.export:
        try:
            entry = catalog_mod.lookup(args.export)
        except KeyError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_USAGE
        traces = dict(entry.traces)
        label = args.base or entry.traces[0][0]
        if label not in traces:
            print(
                f"error: entry {entry.name!r} has no base {label!r}; "
                f"bases: {', '.join(traces)}",
                file=sys.stderr,
            )
            return EXIT_USAGE
        sys.stdout.write(canonical_dumps(trace_to_json(traces[label])))
        return EXIT_OK

    if args.verify:
        report = catalog_mod.verify_all()
        lines = [
            f"{'ok  ' if item.ok else 'FAIL'} {item.entry}: {item.check} -- {item.detail}"
            for item in report.items
        ]
        lines.append(f"{'all checks passed' if report.ok else 'CHECKS FAILED'}")
        result = {
            "ok": report.ok,
            "items": [
                {"entry": i.entry, "check": i.check, "ok": i.ok, "detail": i.detail}
                for i in report.items
            ],
        }
        _emit(args, {"command": "catalog-verify", "result": result, "warnings": []}, lines)
        return EXIT_OK if report.ok else EXIT_THEOREM

    lines = [f"{'name':<20} {'m':>2}  {'certified':<12} {'genus':<6} traces"]
    rows = []
    for name in catalog_mod.names():
        entry = catalog_mod.lookup(name)
        cert = entry.certified
        if cert is None:
            certified = "-"
        elif cert.lower == cert.upper:
            certified = f"= {cert.upper}" + (" (ord)" if cert.scope == "ordering" else "")
        else:
            certified = f"[{cert.lower}, {cert.upper}]"
        genus = "-" if entry.heegaard_genus is None else str(entry.heegaard_genus)
        if entry.heegaard_asserted:
            genus += "*"
        lines.append(f"{name:<20} {entry.m:>2}  {certified:<12} {genus:<6} {len(entry.traces)}")
        rows.append(
            {
                "name": name,
                "m": entry.m,
                "certified_lower": cert.lower if cert else None,
                "certified_upper": cert.upper if cert else None,
                "scope": cert.scope if cert else None,
                "heegaard_genus": entry.heegaard_genus,
                "traces": len(entry.traces),
            }
        )
    lines.append("(* splitting genus recorded as asserted)")
    _emit(args, {"command": "catalog", "result": {"entries": rows}, "warnings": []}, lines)
    return EXIT_OK


def cmd_validate(args) -> int:
    d = _load_trace(args.trace)
    report = validate(d)
    lines = []
    for violation in report.violations:
        where = "structure" if violation.mu is None else f"prefix {violation.mu}"
        lines.append(f"violation ({where}): {violation.message}")
    for warning in report.warnings:
        lines.append(f"warning: {warning}")
    lines.append("OK" if report.ok else f"{len(report.violations)} violation(s)")
    result = {
        "ok": report.ok,
        "violations": [{"mu": v.mu, "message": v.message} for v in report.violations],
        "warnings": list(report.warnings),
    }
    _emit(args, {"command": "validate", "result": result, "warnings": list(report.warnings)}, lines)
    return EXIT_OK if report.ok else EXIT_INVALID


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="nu", description=__doc__)
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--json", action="store_true", help="emit a stable JSON report")
        p.set_defaults(func=func)
        return p

    p = add("compute", cmd_compute, "replay a trace and print the per-prefix table")
    p.add_argument("trace", help="trace JSON file")

    p = add("search", cmd_search, "minimize over admissible orderings of the handles")
    p.add_argument("trace", help="trace JSON file")
    p.add_argument("--budget", type=_positive_int, default=10000,
                   help="max orderings to replay (default 10000)")
    p.add_argument("--all-orderings", action="store_true",
                   help="ignore the budget and enumerate everything")

    p = add("compose", cmd_compose, "glue two traces along matched boundary components")
    p.add_argument("first", help="trace JSON file of the first part")
    p.add_argument("second", help="trace JSON file of the second part")
    p.add_argument("--glue", required=True, help="JSON file {\"pairs\": [[id, id], ...]}")
    p.add_argument("--check", action="store_true",
                   help="verify the composite against max of the parts")
    p.add_argument("--out", help="write the composite trace JSON here")

    p = add("obstruct", cmd_obstruct, "piece-counting report for a decomposition graph")
    p.add_argument("graph", help="decomposition-graph JSON file")

    p = add("refute", cmd_refute, "handle-budget feasibility for fixed l, z, and piece budget")
    p.add_argument("--l", type=int, required=True, help="first rational Betti number")
    p.add_argument("--z", type=int, required=True, help="free boundary components")
    p.add_argument("--hmax", type=int, required=True, help="max minimal handle count per piece")
    p.add_argument("--hW", type=int, required=True, help="target minimal handle count")

    p = add("catalog", cmd_catalog, "list, verify, or export the built-in entries")
    p.add_argument("--verify", action="store_true", help="recompute all certifications")
    p.add_argument("--export", metavar="NAME", help="print one entry's trace JSON")
    p.add_argument("--base", help="which stored base to export (default: first)")

    p = add("validate", cmd_validate, "diagnostics for a trace file")
    p.add_argument("trace", help="trace JSON file")

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (TraceError, DescriptorError, GlueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
