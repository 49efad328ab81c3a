"""
Command line entry point: ``gene-assembly <subcommand> ...``.

Exit codes: 0 success / true verdict, 1 unsuccessful / false verdict,
2 input error, 3 cap hit or inconclusive search.
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from gene_assembly.characterize import (
    check_success,
    enumerate_successful_orderings,
    lift_certificate,
    literal_theorem_check,
)
from gene_assembly.config import DEFAULT_SAMPLE_SEED, DEFAULT_WORKERS, OracleSettings
from gene_assembly.errors import (
    EnumerationCapError,
    GeneAssemblyError,
    ReductionAborted,
    SearchInconclusive,
)
from gene_assembly.export import graph_from_json, graph_to_dot, graph_to_json, write_report_workbook
from gene_assembly.graph_rules import (
    GraphRuleKind,
    apply_graph_reduction,
    format_ruleset,
    parse_graph_rule_list,
    parse_ruleset,
)
from gene_assembly.marked_graph import SimpleMarkedGraph, build_extended_overlap_graph, projection_as_marked
from gene_assembly.oracle import CharacterizationReport, brute_force_success
from gene_assembly.string_rules import RuleKind, RuleSystem, apply_reduction, parse_rule_list, split_rule_list
from gene_assembly.strings import (
    GeneString,
    domain,
    from_mds_descriptor,
    parse_gene_string,
    parse_mds_descriptor,
    pointer_profile,
)
from gene_assembly.workers import CAMPAIGNS, VerificationWorker


logger = logging.getLogger("gene_assembly")

EXIT_OK = 0
EXIT_FALSE = 1
EXIT_INPUT = 2
EXIT_CAP = 3

Subject = Union[GeneString, SimpleMarkedGraph]


# ============================================================================
# INPUT / OUTPUT
# ============================================================================


def read_subject(args: argparse.Namespace) -> Subject:
    """The one input source of the invocation: inline text, --file or --mds."""
    sources = [s for s in (args.input, args.file, getattr(args, "mds", None)) if s is not None]
    if len(sources) != 1:
        args.parser.error("give exactly one input: a string, --file PATH or --mds DESCRIPTOR")
    if getattr(args, "mds", None) is not None:
        return from_mds_descriptor(parse_mds_descriptor(args.mds, args.kappa))
    text = args.input if args.input is not None else Path(args.file).read_text(encoding="utf-8")
    if text.lstrip().startswith("{"):
        return graph_from_json(text)
    return parse_gene_string(text)


def as_graph(subject: Subject) -> SimpleMarkedGraph:
    if isinstance(subject, SimpleMarkedGraph):
        return subject
    subject.require_valid("graph construction")
    return build_extended_overlap_graph(subject)


def emit(args: argparse.Namespace, payload: Dict[str, Any], lines: List[str]):
    if args.format == "json":
        print(json.dumps(payload, indent=2, ensure_ascii=False))
    else:
        for line in lines:
            print(line)


def _names(text: str) -> List[str]:
    return [piece.split(":")[0].strip().lower() for piece in split_rule_list(text)]


def _is_graph_rule_text(text: str) -> bool:
    graph_names = {kind.value for kind in GraphRuleKind}
    names = _names(text)
    return bool(names) and all(name in graph_names for name in names)


# ============================================================================
# SUBCOMMANDS
# ============================================================================


def cmd_validate(args: argparse.Namespace) -> int:
    subject = read_subject(args)
    if isinstance(subject, SimpleMarkedGraph):
        emit(args, {"graph": subject.to_dict(), "valid": True}, [f"simple marked graph: {subject}"])
        return EXIT_OK
    validity = subject.validity
    payload = {
        "string": subject.render(),
        "validity": validity.kind.value,
        "reason": validity.reason,
        "domain": list(domain(subject)),
    }
    if validity.is_valid:
        payload["profiles"] = [pointer_profile(subject, q).to_dict() for q in domain(subject)]
    emit(args, payload, [str(validity)])
    return EXIT_OK if validity.is_valid else EXIT_FALSE


def cmd_convert(args: argparse.Namespace) -> int:
    if args.mds is None:
        args.parser.error("convert needs --mds DESCRIPTOR")
    descriptor = parse_mds_descriptor(args.mds, args.kappa)
    s = from_mds_descriptor(descriptor)
    emit(args, {"descriptor": descriptor.render(), "string": s.render(), "symbols": s.to_json()}, [str(s)])
    return EXIT_OK


def cmd_graph(args: argparse.Namespace) -> int:
    graph = projection_as_marked(as_graph(read_subject(args)), args.projection)
    if args.format == "dot":
        sys.stdout.write(graph_to_dot(graph))
    elif args.format == "json":
        print(graph_to_json(graph))
    else:
        print(graph.summary())
    return EXIT_OK


def _print_trace(trace, args: argparse.Namespace, error: Optional[str] = None):
    lines = [f"start: {trace.initial}"]
    lines.extend(f"{step.rule}: {step.result}" for step in trace.steps)
    lines.append(f"composition: {trace.composition_notation()}")
    if error:
        lines.append(f"stopped: {error}")
    else:
        lines.append("successful" if trace.success else f"unsuccessful, final {trace.final}")
    payload = trace.to_dict()
    if error:
        payload["error"] = error
    emit(args, payload, lines)


def cmd_reduce(args: argparse.Namespace) -> int:
    subject = read_subject(args)
    try:
        if isinstance(subject, SimpleMarkedGraph) or _is_graph_rule_text(args.rules):
            trace = apply_graph_reduction(as_graph(subject), parse_graph_rule_list(args.rules))
        else:
            trace = apply_reduction(subject, parse_rule_list(args.rules))
    except ReductionAborted as exc:
        _print_trace(exc.trace, args, str(exc))
        return EXIT_FALSE
    _print_trace(trace, args)
    return EXIT_OK if trace.success else EXIT_FALSE


def _search_ruleset(system: Optional[str], subject: Subject):
    if system is None:
        return parse_ruleset("gnr,sgpr") if isinstance(subject, SimpleMarkedGraph) else RuleSystem.SIMPLE
    if system.lower() in (s.value for s in RuleSystem):
        return RuleSystem(system.lower())
    if _is_graph_rule_text(system) or system.strip().lower() in ("none", "{}"):
        return sorted(parse_ruleset(system), key=lambda k: k.value)
    return [RuleKind(name) for name in _names(system)]


def cmd_search(args: argparse.Namespace) -> int:
    subject = read_subject(args)
    try:
        ruleset = _search_ruleset(args.system, subject)
    except ValueError as exc:
        args.parser.error(f"bad --system: {exc}")
    result = brute_force_success(subject, ruleset, args.state_cap)
    lines = [f"{'successful' if result.successful else 'unsuccessful'} ({result.states_explored} states explored)"]
    if result.witness is not None:
        lines.append(f"witness: {result.witness.composition_notation()}")
        lines.extend(f"  {step.rule}: {step.result}" for step in result.witness.steps)
    emit(args, result.to_dict(), lines)
    return EXIT_OK if result.successful else EXIT_FALSE


def cmd_check(args: argparse.Namespace) -> int:
    subject = read_subject(args)
    graph = as_graph(subject)
    kinds = parse_ruleset(args.rules_set)
    name = format_ruleset(kinds)

    if args.literal:
        verdict = literal_theorem_check(graph, kinds)
        emit(args, {"ruleset": name, "literal": verdict},
             [f"{name}: literal conditions {'hold' if verdict else 'fail'}"])
        return EXIT_OK if verdict else EXIT_FALSE

    verdict = check_success(graph, kinds)
    payload = verdict.to_dict()
    if verdict.successful:
        ordering = ", ".join(str(v) for v in verdict.certificate.ordering)
        lines = [f"{name}: successful", f"certificate: ({ordering})", f"roles: {verdict.certificate}"]
        if isinstance(subject, GeneString):
            lifted = lift_certificate(subject, verdict.certificate)
            payload["string_reduction"] = lifted.to_dict()
            lines.append(f"string reduction: {lifted.composition_notation()} -> {lifted.final}")
    else:
        lines = [f"{name}: unsuccessful", f"failed condition: {verdict.failed_condition.value}"]
    emit(args, payload, lines)
    return EXIT_OK if verdict.successful else EXIT_FALSE


def cmd_orderings(args: argparse.Namespace) -> int:
    graph = as_graph(read_subject(args))
    kinds = parse_ruleset(args.rules_set)
    found = sorted(enumerate_successful_orderings(graph, kinds, args.cap), key=lambda c: c.render())
    lines = [f"{len(found)} successful orderings in {format_ruleset(kinds)}"]
    lines.extend(f"  {cert}" for cert in found)
    emit(args, {"ruleset": format_ruleset(kinds), "orderings": [c.to_dict() for c in found]}, lines)
    return EXIT_OK if found else EXIT_FALSE


def cmd_verify(args: argparse.Namespace) -> int:
    campaigns = [c for c in CAMPAIGNS if getattr(args, c)] or list(CAMPAIGNS)
    settings = OracleSettings(exhaustive_cap=args.cap, state_cap=args.state_cap)
    worker = VerificationWorker(
        args.k, campaigns, sample=args.sample, seed=args.seed,
        workers=args.workers, settings=settings,
        progress=lambda message: logger.info(message),
    )

    scope = f"{args.sample} sampled strings (seed {args.seed})" if args.sample else "exhaustive"
    if args.format == "text":
        print("=" * 80)
        print(f"Verification campaigns, k <= {args.k}, {scope}")
        print("=" * 80)
    reports = worker.run()

    passed = all(report.passed for report in reports.values())
    theorems = reports.get("theorems")
    if isinstance(theorems, CharacterizationReport):
        passed = passed and theorems.literal_gap_explained

    if args.format == "json":
        print(json.dumps({name: r.to_dict() for name, r in reports.items()}, indent=2, ensure_ascii=False))
    else:
        for name, report in reports.items():
            print(f"\n[{name}] {'passed' if report.passed else 'FAILED'}")
            for metric, value in report.summary_rows():
                print(f"  {metric:<26} {value}")
        if isinstance(theorems, CharacterizationReport) and theorems.literal_disagreements:
            print("\nliteral condition disagreements:")
            for item in theorems.literal_disagreements[:20]:
                print(f"  {item.string:<30} {item.ruleset:<14} oracle={item.oracle} m-out={item.m_outgoing}")
            if len(theorems.literal_disagreements) > 20:
                print(f"  ... {len(theorems.literal_disagreements) - 20} more")
        print("=" * 80)

    if args.xlsx:
        info = {"k": args.k, "mode": scope, "workers": args.workers, "campaigns": ", ".join(campaigns)}
        write_report_workbook(args.xlsx, reports, info)
        if args.format == "text":
            print(f"report workbook: {args.xlsx}")
    return EXIT_OK if passed else EXIT_FALSE


# ============================================================================
# PARSER
# ============================================================================


def _add_input(sub: argparse.ArgumentParser, mds: bool = True):
    sub.add_argument("input", nargs="?", help="gene string (tokens separated by spaces) or graph JSON")
    sub.add_argument("--file", help="read the string or graph JSON from a UTF-8 file")
    if mds:
        sub.add_argument("--mds", help="MDS descriptor such as 'M3 M4 -M2 M1'")
        sub.add_argument("--kappa", type=int, default=None, help="number of MDSs (default: largest index)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gene-assembly",
        description="Simple gene assembly on strings and extended overlap graphs",
    )
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v info, -vv debug logging")
    subparsers = parser.add_subparsers(dest="command", required=True)

    def add(name: str, handler, help_text: str, formats=("text", "json")) -> argparse.ArgumentParser:
        sub = subparsers.add_parser(name, help=help_text)
        sub.add_argument("--format", choices=formats, default="text", help="output format")
        sub.set_defaults(handler=handler, parser=sub)
        return sub

    sub = add("validate", cmd_validate, "classify a string as legal, extended legal or invalid")
    _add_input(sub)

    sub = add("convert", cmd_convert, "convert an MDS descriptor to its pointer/marker string")
    sub.add_argument("--mds", help="MDS descriptor such as 'M3 M4 -M2 M1'")
    sub.add_argument("--kappa", type=int, default=None, help="number of MDSs (default: largest index)")

    sub = add("graph", cmd_graph, "build the extended overlap graph", formats=("text", "json", "dot"))
    _add_input(sub)
    sub.add_argument("--projection", choices=("overlap", "nesting"), default=None,
                     help="keep only undirected (overlap) or directed (nesting) edges")

    sub = add("reduce", cmd_reduce, "apply rules in order and print the trace")
    _add_input(sub)
    sub.add_argument("--rules", required=True, help="e.g. 'sspr:-6,ssdr:2,3' or 'gnr:4,sgpr:6'")

    sub = add("search", cmd_search, "brute-force search for a successful reduction")
    _add_input(sub)
    sub.add_argument("--system", default=None,
                     help="simple, general, a string rule list (snr,sspr) or graph rule set (gnr,sgpr)")
    sub.add_argument("--state-cap", type=int, default=OracleSettings().state_cap)

    sub = add("check", cmd_check, "decide graph success from the closed-form conditions")
    _add_input(sub)
    sub.add_argument("--rules-set", default="gnr,sgpr", help="subset of gnr,sgpr or 'none'")
    sub.add_argument("--literal", action="store_true", help="evaluate the conditions without the m-outgoing test")

    sub = add("orderings", cmd_orderings, "enumerate every successful ordering")
    _add_input(sub)
    sub.add_argument("--rules-set", default="gnr,sgpr", help="subset of gnr,sgpr or 'none'")
    sub.add_argument("--cap", type=int, default=OracleSettings().enumeration_cap, help="vertex count limit")

    sub = add("verify", cmd_verify, "run oracle campaigns")
    sub.add_argument("--k", type=int, default=1, help="largest number of pointer identities")
    sub.add_argument("--lemmas", action="store_true", help="simulation and structure lemmas")
    sub.add_argument("--theorems", action="store_true", help="closed-form success conditions")
    sub.add_argument("--equivalence", action="store_true", help="{snr,sspr} on s against {Gnr,sGpr} on G_s")
    sub.add_argument("--sample", type=int, default=None, help="random strings instead of exhaustive enumeration")
    sub.add_argument("--seed", type=int, default=DEFAULT_SAMPLE_SEED)
    sub.add_argument("--workers", type=int, default=DEFAULT_WORKERS)
    sub.add_argument("--cap", type=int, default=OracleSettings().exhaustive_cap, help="largest exhaustive k")
    sub.add_argument("--state-cap", type=int, default=OracleSettings().state_cap)
    sub.add_argument("--xlsx", default=None, help="also write the reports to this workbook")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Entry point for the CLI command."""
    parser = build_parser()
    args = parser.parse_args(argv)

    level = logging.WARNING - 10 * min(args.verbose, 2)
    logging.basicConfig(level=level, format="[%(levelname)s] %(name)s: %(message)s")

    try:
        return args.handler(args)
    except (EnumerationCapError, SearchInconclusive) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (GeneAssemblyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
