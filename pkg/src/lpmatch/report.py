"""Document rendering: ranking tables, error comparisons and gap analyses.

Every document is a RenderedTable that can be emitted as markdown, as
delimiter-separated text or as a stream of JSON records.  Numeric cells are
formatted at two decimals with dot decimal separators, rounding ties away
from zero; all underlying computation stays at full precision.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from pathlib import Path
from typing import Mapping, Sequence

from .analysis import (
    Configuration,
    GapReport,
    GridSummary,
    RankingEntry,
    SweepResult,
    relative_error_percent,
    run_builtin_grid,
    summarize_conclusions,
    target_profile,
    top_k,
)
from .core import DEFAULT_RATES, ConversionRates, MetricSpec, Profile, Unit
from .dataset import DistanceTable, builtin_table, subset_references
from .errors import InvalidValue

__all__ = [
    "FORMATS",
    "TARGET_LABEL",
    "ExternalResultRow",
    "EXTERNAL_ERROR_ROWS",
    "RenderedTable",
    "format_2dp",
    "build_dataset_table",
    "build_ranking_table",
    "build_error_listing",
    "build_gap_listing",
    "build_error_table",
    "build_gap_table",
    "build_summary_table",
    "write_document_set",
]

FORMATS = ("md", "csv", "jsonl")

# Conventional label of the sought place, used as the target row of rankings.
TARGET_LABEL = "LUGAR DE LA MANCHA"


def format_2dp(x: float) -> str:
    """Two-decimal display form, ties rounded away from zero."""
    return str(Decimal(repr(float(x))).quantize(Decimal("0.01"), rounding=ROUND_HALF_UP))


@dataclass(frozen=True)
class ExternalResultRow:
    """A comparison row carried verbatim from earlier published analyses.

    These values are compiled-in constants and are never recomputed.
    """

    source: str
    entries: tuple[tuple[str, float], ...]  # (locality, relative error %)
    gap: float | None = None
    mean: float | None = None


EXTERNAL_ERROR_ROWS = (
    ExternalResultRow(
        "[7]",
        (("Alcubillas", 8.30), ("Villanueva Inf.", 10.38)),
        gap=2.08,
    ),
    ExternalResultRow(
        "[3] con L_inf",
        (("Fuenllana", 12.00), ("Villanueva Inf.", 12.19), ("Carrizosa", 15.12)),
        gap=0.19,
    ),
    ExternalResultRow(
        "[3] con L_1",
        (("Carrizosa", 6.86), ("Fuenllana", 9.24), ("Villanueva Inf.", 9.27)),
        gap=2.37,
        mean=1.10,
    ),
    ExternalResultRow(
        "[3] con L_2",
        (("Carrizosa", 9.15), ("Villanueva Inf.", 9.90), ("Fuenllana", 9.98)),
        gap=0.75,
    ),
)


@dataclass(frozen=True)
class RenderedTable:
    """A titled table of already-formatted cells plus its output format."""

    title: str
    header: tuple[str, ...]
    rows: tuple[tuple[str, ...], ...]
    fmt: str = "md"

    def __post_init__(self) -> None:
        if self.fmt not in FORMATS:
            raise InvalidValue(f"unknown format {self.fmt!r}")
        for row in self.rows:
            if len(row) != len(self.header):
                raise InvalidValue("every row must match the header arity")

    def text(self) -> str:
        if self.fmt == "md":
            return self._markdown()
        if self.fmt == "csv":
            return self._delimited()
        return self._records()

    def _markdown(self) -> str:
        lines = [f"# {self.title}", ""]
        lines.append("| " + " | ".join(self.header) + " |")
        lines.append("| " + " | ".join("---" for _ in self.header) + " |")
        for row in self.rows:
            lines.append("| " + " | ".join(row) + " |")
        return "\n".join(lines) + "\n"

    def _delimited(self) -> str:
        import csv
        import io

        out = io.StringIO()
        writer = csv.writer(out, delimiter=",", lineterminator="\n")
        writer.writerow(self.header)
        writer.writerows(self.rows)
        return out.getvalue()

    def _records(self) -> str:
        def cell_value(cell: str):
            try:
                return float(cell)
            except ValueError:
                return cell

        lines = [json.dumps({"title": self.title, "columns": list(self.header)},
                            ensure_ascii=False)]
        for row in self.rows:
            record = {col: cell_value(cell) for col, cell in zip(self.header, row)}
            lines.append(json.dumps(record, ensure_ascii=False))
        return "\n".join(lines) + "\n"


def build_dataset_table(table: DistanceTable, title: str, fmt: str = "md") -> RenderedTable:
    header = ("locality",) + tuple(f"{r} ({table.unit.short})" for r in table.references)
    rows = tuple(
        (name,) + tuple(format_2dp(v) for v in table.row_values(name))
        for name in table.candidates
    )
    return RenderedTable(title, header, rows, fmt)


def build_ranking_table(
    table: DistanceTable,
    target: Profile,
    ranking: Sequence[RankingEntry],
    metric: MetricSpec,
    k: int = 5,
    fmt: str = "md",
    title: str | None = None,
) -> RenderedTable:
    """The target row (distance 0.00) followed by the k closest candidates."""
    if title is None:
        title = (f"{metric.label} distances to the target profile "
                 f"({table.unit.short}, {len(table.references)} references)")
    header = (
        ("locality",)
        + tuple(f"{r} ({table.unit.short})" for r in table.references)
        + (metric.column,)
    )
    target_values = target.select(table.references).values
    rows = [(TARGET_LABEL,) + tuple(format_2dp(v) for v in target_values) + (format_2dp(0.0),)]
    for entry in top_k(ranking, k):
        values = table.row_values(entry.candidate)
        rows.append(
            (entry.candidate,)
            + tuple(format_2dp(v) for v in values)
            + (format_2dp(entry.distance),)
        )
    return RenderedTable(title, header, tuple(rows), fmt)


def build_error_listing(
    target: Profile,
    ranking: Sequence[RankingEntry],
    metric: MetricSpec,
    k: int = 3,
    fmt: str = "md",
    title: str | None = None,
) -> RenderedTable:
    """Top-k candidates with distances and relative errors for one metric."""
    if title is None:
        title = f"Relative errors under {metric.label}"
    header = ("rank", "locality", metric.column, "relative error (%)")
    rows = tuple(
        (
            str(entry.rank),
            entry.candidate,
            format_2dp(entry.distance),
            format_2dp(relative_error_percent(entry.distance, target, metric)),
        )
        for entry in top_k(ranking, k)
    )
    return RenderedTable(title, header, rows, fmt)


def build_gap_listing(gaps: GapReport, fmt: str = "md", title: str | None = None) -> RenderedTable:
    """One family's per-metric top-two gap rows plus the mean row."""
    if title is None:
        title = "Gap between the two closest candidates"
    header = ("metric", "first", "error 1 (%)", "second", "error 2 (%)", "gap (%)")
    rows = [
        (
            record.metric.label,
            record.first,
            format_2dp(record.first_error),
            record.second,
            format_2dp(record.second_error),
            format_2dp(record.gap),
        )
        for record in gaps.records
    ]
    rows.append(("mean", "", "", "", "", format_2dp(gaps.mean_gap)))
    return RenderedTable(title, header, tuple(rows), fmt)


def build_error_table(
    results: Mapping[Configuration, SweepResult],
    fmt: str = "md",
    include_external: bool = True,
) -> RenderedTable:
    """Three closest candidates with relative errors, one row per configuration.

    External rows (earlier published analyses) are listed first, verbatim.
    """
    header = ("configuration",
              "locality 1", "error 1 (%)",
              "locality 2", "error 2 (%)",
              "locality 3", "error 3 (%)")
    rows: list[tuple[str, ...]] = []
    if include_external:
        for ext in EXTERNAL_ERROR_ROWS:
            cells: list[str] = [ext.source]
            for name, pct in ext.entries:
                cells.extend((name, format_2dp(pct)))
            while len(cells) < len(header):
                cells.append("")
            rows.append(tuple(cells))
    for config, result in results.items():
        cells = [config.label]
        for entry, error in zip(result.ranking[:3], result.errors[:3]):
            cells.extend((entry.candidate, format_2dp(error)))
        while len(cells) < len(header):
            cells.append("")
        rows.append(tuple(cells))
    return RenderedTable(
        "Relative error (%) of the three closest candidates per configuration",
        header,
        tuple(rows),
        fmt,
    )


def build_gap_table(
    results: Mapping[Configuration, SweepResult],
    fmt: str = "md",
    include_external: bool = True,
) -> RenderedTable:
    """Second-minus-first relative-error gap rows with per-family means."""
    header = ("configuration", "second minus first (%)", "family mean (%)")
    rows: list[tuple[str, ...]] = []
    if include_external:
        for ext in EXTERNAL_ERROR_ROWS:
            if ext.gap is None:
                continue
            rows.append((
                ext.source,
                format_2dp(ext.gap),
                format_2dp(ext.mean) if ext.mean is not None else "",
            ))
    seen: set[tuple[str, str, int]] = set()
    for config, result in results.items():
        family = config.key[:3]
        if family in seen:
            continue
        seen.add(family)
        for record in result.gaps.records:
            rows.append((
                f"{config.family_label} {record.metric.label}",
                format_2dp(record.gap),
                format_2dp(result.gaps.mean_gap),
            ))
    return RenderedTable(
        "Gap between the second and the first candidate per configuration",
        header,
        tuple(rows),
        fmt,
    )


def build_summary_table(summary: GridSummary, fmt: str = "md") -> RenderedTable:
    """Headline facts of a grid sweep as fact/value rows."""
    rows: list[tuple[str, str]] = []
    for config, name in summary.top_candidates:
        rows.append((f"top candidate: {config.label}", name))
    for family in summary.families:
        rows.append((f"mean gap: {family.label}", format_2dp(family.mean_gap)))
        rows.append((f"mean top-1 relative error: {family.label}",
                     format_2dp(family.mean_top_error)))
    rows.append(("family with the smallest relative errors",
                 summary.lowest_error_family.label))
    rows.append(("family with the largest mean gap",
                 summary.highest_mean_gap_family.label))
    rows.append(("family with the smallest mean gap",
                 summary.lowest_mean_gap_family.label))
    rows.append(("km and hours runs agree on every top-5 name set",
                 "yes" if summary.unit_pairs_agree else "no"))
    for solution, nrefs, metric in summary.disagreeing_pairs:
        rows.append(("top-5 name sets differ between units",
                     f"{solution} {nrefs}-ref {metric}"))
    return RenderedTable("Analysis summary", ("fact", "value"), tuple(rows), fmt)


# Document numbers of the ranking tables, one triple (L_inf, L_1, L_2) per
# family in grid order; numbers 1 and 5 hold the km and hours datasets.
_FAMILY_DOC_NUMBERS = (
    (2, 3, 4), (6, 7, 8), (9, 10, 11), (12, 13, 14),
    (15, 16, 17), (18, 19, 20), (21, 22, 23), (24, 25, 26),
)


def write_document_set(
    outdir: str | Path,
    fmt: str = "md",
    rates: ConversionRates = DEFAULT_RATES,
) -> list[Path]:
    """Write the complete built-in analysis to ``outdir``; byte-stable.

    Emits the two dataset documents (table_01, table_05), the 24 ranking
    documents (table_02..table_26 at their conventional numbers), the error
    comparison (table_27), the gap analysis (table_28) and a summary
    document.  Returns the written paths in name order.
    """
    if fmt not in FORMATS:
        raise InvalidValue(f"unknown format {fmt!r}")
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)

    results = run_builtin_grid(rates)
    documents: dict[str, RenderedTable] = {
        "table_01": build_dataset_table(
            builtin_table(Unit.KILOMETERS), "Candidate distances in kilometers", fmt
        ),
        "table_05": build_dataset_table(
            builtin_table(Unit.HOURS), "Candidate distances in hours", fmt
        ),
    }

    grid = list(results.items())
    assert len(grid) == 24, "document numbering expects the full builtin grid"
    for family_index, numbers in enumerate(_FAMILY_DOC_NUMBERS):
        for metric_index, number in enumerate(numbers):
            config, result = grid[family_index * 3 + metric_index]
            restricted = subset_references(builtin_table(config.unit), config.references)
            target = target_profile(config.solution, config.unit, config.references, rates)
            title = (f"{config.metric.label} distances to the {config.solution.label} "
                     f"target ({config.unit.short}, {len(config.references)} references)")
            documents[f"table_{number:02d}"] = build_ranking_table(
                restricted, target, result.ranking, config.metric, k=5, fmt=fmt, title=title
            )

    documents["table_27"] = build_error_table(results, fmt)
    documents["table_28"] = build_gap_table(results, fmt)
    documents["summary"] = build_summary_table(summarize_conclusions(results), fmt)

    written = []
    for stem in sorted(documents):
        path = outdir / f"{stem}.{fmt}"
        with open(path, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(documents[stem].text())
        written.append(path)
    return written
