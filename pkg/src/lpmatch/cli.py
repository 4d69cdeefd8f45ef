"""Command-line interface.

Subcommands: ``rank`` (candidates closest to a target), ``errors`` (relative
errors of the top candidates), ``gaps`` (second-minus-first gap analysis),
``sweep`` (the full built-in analysis grid on stdout) and ``reproduce`` (the
complete document set written to a directory).

Exit codes: 0 on success, 2 on usage errors (bad flags or tokens, unreadable
data file), 1 on data errors (malformed file content, incompatible inputs).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import analysis, report
from .core import MetricSpec, Profile, Unit, fold_name
from .dataset import DistanceTable, builtin_table, parse_table, subset_references
from .errors import InvalidValue, LpmatchError

_BUILTIN_PREFIX = "builtin:"


class _UsageError(Exception):
    """Invalid invocation detected after argument parsing; exits 2."""


def _metric(token: str) -> MetricSpec:
    try:
        return MetricSpec.parse(token)
    except InvalidValue:
        raise argparse.ArgumentTypeError(f"unknown metric {token!r}") from None


def _positive_int(token: str) -> int:
    try:
        value = int(token)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{token!r} is not an integer") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"{token!r} must be >= 1")
    return value


def _add_data_options(parser: argparse.ArgumentParser, top_default: int | None) -> None:
    parser.add_argument(
        "--data",
        default="builtin:km",
        help="data source: builtin:km, builtin:hours, or a path to a "
             "delimiter-separated file (default: builtin:km)",
    )
    parser.add_argument(
        "--unit",
        default="km",
        help="unit of a file data source: km, hours or jornadas (default: km); "
             "ignored for builtin sources",
    )
    parser.add_argument(
        "--decimal",
        choices=("auto", "dot", "comma"),
        default="auto",
        help="decimal separator of a file data source (default: auto)",
    )
    parser.add_argument(
        "--solution",
        default="classic",
        help="target profile: 'classic', 'refined', or a comma-separated list "
             "of jornada values bound positionally to the data's reference "
             "order (default: classic)",
    )
    parser.add_argument(
        "--exclude",
        action="append",
        default=[],
        metavar="REFERENCE",
        help="drop a reference point from both the data and the solution; repeatable",
    )
    if top_default is not None:
        parser.add_argument(
            "--top",
            type=_positive_int,
            default=top_default,
            help=f"number of candidates to show (default: {top_default})",
        )
    parser.add_argument(
        "--format",
        choices=report.FORMATS,
        default="md",
        help="output format (default: md)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lpmatch",
        description="Rank candidates by Minkowski-metric closeness of their "
                    "distance profiles to a target profile.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_rank = sub.add_parser("rank", help="rank candidates by distance to the target")
    _add_data_options(p_rank, top_default=5)
    p_rank.add_argument("--metric", type=_metric, default=MetricSpec.ln(2),
                        help="l1, l2, linf or l<n> (default: l2)")

    p_err = sub.add_parser("errors", help="relative errors of the closest candidates")
    _add_data_options(p_err, top_default=3)
    p_err.add_argument("--metric", type=_metric, default=MetricSpec.ln(2),
                       help="l1, l2, linf or l<n> (default: l2)")

    p_gaps = sub.add_parser("gaps", help="second-minus-first gap analysis")
    _add_data_options(p_gaps, top_default=None)
    p_gaps.add_argument("--metric", type=_metric, default=None,
                        help="accepted for interface symmetry; gaps always "
                             "evaluate the L_inf, L_1, L_2 family")

    p_sweep = sub.add_parser("sweep", help="run the full built-in analysis grid")
    p_sweep.add_argument("--format", choices=report.FORMATS, default="md",
                         help="output format (default: md)")

    p_rep = sub.add_parser("reproduce", help="write the complete document set")
    p_rep.add_argument("--outdir", required=True, help="output directory")
    p_rep.add_argument("--format", choices=report.FORMATS, default="md",
                       help="document format (default: md)")

    return parser


def _load_table(args: argparse.Namespace) -> DistanceTable:
    source: str = args.data
    if source.startswith(_BUILTIN_PREFIX):
        token = source[len(_BUILTIN_PREFIX):]
        if token not in ("km", "hours"):
            raise _UsageError(f"unknown builtin data source {source!r}")
        return builtin_table(token)
    try:
        text = Path(source).read_text(encoding="utf-8")
    except OSError as exc:
        raise _UsageError(f"cannot read data file {source!r}: {exc.strerror}") from None
    try:
        unit = Unit.parse(args.unit)
    except InvalidValue:
        raise _UsageError(f"unknown unit {args.unit!r}") from None
    return parse_table(text, unit=unit, decimal=args.decimal)


def _resolve_solution(token: str, table: DistanceTable) -> analysis.SolutionProfile:
    if token in analysis.BUILTIN_SOLUTIONS:
        return analysis.BUILTIN_SOLUTIONS[token]
    parts = [p.strip() for p in token.split(",")]
    try:
        values = tuple(float(p) for p in parts)
    except ValueError:
        raise _UsageError(
            f"unknown solution {token!r}: expected 'classic', 'refined' or a "
            "comma-separated list of jornada values"
        ) from None
    if len(values) != len(table.references):
        raise _UsageError(
            f"solution {token!r} has {len(values)} values but the data has "
            f"{len(table.references)} references"
        )
    return analysis.SolutionProfile(
        "custom", Profile(table.references, values, Unit.JORNADAS)
    )


def _apply_exclusions(table: DistanceTable, excluded: list[str]) -> DistanceTable:
    if not excluded:
        return table
    known = {fold_name(r) for r in table.references}
    for token in excluded:
        if fold_name(token) not in known:
            raise _UsageError(f"unknown reference {token!r} in --exclude")
    dropped = {fold_name(t) for t in excluded}
    keep = [r for r in table.references if fold_name(r) not in dropped]
    if not keep:
        raise _UsageError("cannot exclude every reference")
    return subset_references(table, keep)


def _prepare(args: argparse.Namespace):
    # a literal --solution binds to the full reference order; --exclude then
    # drops references from the data and the solution simultaneously
    full = _load_table(args)
    solution = _resolve_solution(args.solution, full)
    table = _apply_exclusions(full, args.exclude)
    target = analysis.target_profile(solution, table.unit, table.references)
    return table, solution, target


def _cmd_rank(args: argparse.Namespace) -> str:
    table, solution, target = _prepare(args)
    ranking = analysis.rank_candidates(table, target, args.metric)
    title = (f"{args.metric.label} distances to the {solution.label} target "
             f"({table.unit.short}, {len(table.references)} references)")
    doc = report.build_ranking_table(
        table, target, ranking, args.metric, k=args.top, fmt=args.format, title=title
    )
    return doc.text()


def _cmd_errors(args: argparse.Namespace) -> str:
    table, solution, target = _prepare(args)
    ranking = analysis.rank_candidates(table, target, args.metric)
    title = (f"Relative errors under {args.metric.label} against the "
             f"{solution.label} target ({table.unit.short})")
    doc = report.build_error_listing(
        target, ranking, args.metric, k=args.top, fmt=args.format, title=title
    )
    return doc.text()


def _cmd_gaps(args: argparse.Namespace) -> str:
    table, solution, target = _prepare(args)
    gaps = analysis.gap_report(table, target)
    title = (f"Gap between the two closest candidates: {solution.label} target "
             f"({table.unit.short}, {len(table.references)} references)")
    return report.build_gap_listing(gaps, fmt=args.format, title=title).text()


def _cmd_sweep(args: argparse.Namespace) -> str:
    results = analysis.run_builtin_grid()
    chunks = []
    for config, result in results.items():
        restricted = subset_references(builtin_table(config.unit), config.references)
        target = analysis.target_profile(config.solution, config.unit, config.references)
        title = (f"{config.metric.label} distances to the {config.solution.label} "
                 f"target ({config.unit.short}, {len(config.references)} references)")
        chunks.append(
            report.build_ranking_table(
                restricted, target, result.ranking, config.metric,
                k=5, fmt=args.format, title=title,
            ).text()
        )
    chunks.append(report.build_error_table(results, fmt=args.format).text())
    chunks.append(report.build_gap_table(results, fmt=args.format).text())
    summary = analysis.summarize_conclusions(results)
    chunks.append(report.build_summary_table(summary, fmt=args.format).text())
    # markdown documents read better separated by a blank line; csv and jsonl
    # must stay gap-free streams
    separator = "\n" if args.format == "md" else ""
    return separator.join(chunks)


def _cmd_reproduce(args: argparse.Namespace) -> str:
    written = report.write_document_set(args.outdir, fmt=args.format)
    return "".join(f"{path}\n" for path in written)


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "rank": _cmd_rank,
        "errors": _cmd_errors,
        "gaps": _cmd_gaps,
        "sweep": _cmd_sweep,
        "reproduce": _cmd_reproduce,
    }
    try:
        output = handlers[args.command](args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except LpmatchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    sys.stdout.write(output)
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":  # pragma: no cover
    main()
