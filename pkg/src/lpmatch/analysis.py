"""Ranking candidates against a target profile, plus error and gap statistics.

A configuration fixes a target (a named solution expressed in jornadas), a
unit, a reference subset and a metric.  Rankings sort every candidate of a
table by its metric distance to the target; exact distance ties are broken by
ascending L2 distance to the target, then by candidate name, which keeps the
result deterministic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

from .core import (
    DEFAULT_RATES,
    ConversionRates,
    MetricSpec,
    Profile,
    Unit,
    convert,
    magnitude,
    metric_distance,
)
from .dataset import REFERENCES, DistanceTable, builtin_table, subset_references
from .errors import (
    DegenerateTarget,
    InsufficientCandidates,
    InvalidValue,
    UnitMismatch,
)

__all__ = [
    "STANDARD_METRICS",
    "SolutionProfile",
    "CLASSIC_SOLUTION",
    "REFINED_SOLUTION",
    "BUILTIN_SOLUTIONS",
    "RankingEntry",
    "Configuration",
    "GapRecord",
    "GapReport",
    "SweepResult",
    "GridSummary",
    "FamilyStats",
    "target_profile",
    "rank_candidates",
    "top_k",
    "relative_error_percent",
    "gap_report",
    "sweep",
    "run_builtin_grid",
    "summarize_conclusions",
]

# The metric family every gap report is computed over.
STANDARD_METRICS = (MetricSpec.infinity(), MetricSpec.ln(1), MetricSpec.ln(2))


@dataclass(frozen=True)
class SolutionProfile:
    """A named target profile, always expressed in jornadas."""

    label: str
    jornadas: Profile

    def __post_init__(self) -> None:
        if self.jornadas.unit is not Unit.JORNADAS:
            raise UnitMismatch("a solution profile must be expressed in jornadas")


CLASSIC_SOLUTION = SolutionProfile(
    "classic", Profile(REFERENCES, (2.0, 2.37, 2.5, 2.0), Unit.JORNADAS)
)
REFINED_SOLUTION = SolutionProfile(
    "refined", Profile(REFERENCES, (2.0, 2.42, 2.8, 2.23), Unit.JORNADAS)
)
BUILTIN_SOLUTIONS = {s.label: s for s in (CLASSIC_SOLUTION, REFINED_SOLUTION)}


@dataclass(frozen=True)
class RankingEntry:
    candidate: str
    distance: float
    rank: int


@dataclass(frozen=True)
class Configuration:
    """One cell of the analysis grid."""

    solution: SolutionProfile
    unit: Unit
    references: tuple[str, ...]
    metric: MetricSpec

    def __post_init__(self) -> None:
        object.__setattr__(self, "references", tuple(self.references))
        if self.unit is Unit.JORNADAS:
            raise UnitMismatch("data tables exist in kilometers and hours, not jornadas")
        if not self.references:
            raise InvalidValue("a configuration needs at least one reference")

    @property
    def key(self) -> tuple[str, str, int, str]:
        """(solution label, unit, reference count, metric token) join key."""
        return (self.solution.label, self.unit.short, len(self.references), self.metric.token)

    @property
    def family_label(self) -> str:
        return f"{self.solution.label} {self.unit.short} {len(self.references)}-ref"

    @property
    def label(self) -> str:
        return f"{self.family_label} {self.metric.label}"


@dataclass(frozen=True)
class GapRecord:
    metric: MetricSpec
    first: str
    first_error: float
    second: str
    second_error: float
    gap: float


@dataclass(frozen=True)
class GapReport:
    """Top-two relative-error gaps per metric, with their arithmetic mean."""

    records: tuple[GapRecord, ...]
    mean_gap: float


@dataclass(frozen=True)
class SweepResult:
    ranking: tuple[RankingEntry, ...]
    errors: tuple[float, ...]  # relative error (%) aligned with ranking
    gaps: GapReport  # shared by the three metric configurations of a family


def target_profile(
    solution: SolutionProfile,
    unit: Unit,
    references: Sequence[str] = REFERENCES,
    rates: ConversionRates = DEFAULT_RATES,
) -> Profile:
    """The solution restricted to ``references`` and converted to ``unit``."""
    return convert(solution.jornadas.select(tuple(references)), unit, rates)


def rank_candidates(
    table: DistanceTable, target: Profile, metric: MetricSpec
) -> list[RankingEntry]:
    """All candidates sorted by ascending metric distance to the target.

    Exact ties are broken by ascending L2 distance to the target, then by
    candidate name.
    """
    if target.unit is not table.unit:
        raise UnitMismatch(
            f"target is in {target.unit.value} but the table is in {table.unit.value}"
        )
    l2 = MetricSpec.ln(2)
    scored = []
    for name, row in table.rows():
        scored.append((metric_distance(metric, row, target),
                       metric_distance(l2, row, target), name))
    scored.sort()
    return [RankingEntry(name, dist, pos + 1)
            for pos, (dist, _, name) in enumerate(scored)]


def top_k(ranking: Sequence[RankingEntry], k: int = 5) -> list[RankingEntry]:
    """First min(k, N) entries of a ranking."""
    if k < 1:
        raise InvalidValue(f"k must be >= 1, got {k!r}")
    return list(ranking[:k])


def relative_error_percent(distance: float, target: Profile, metric: MetricSpec) -> float:
    """Distance as a percentage of the target's own magnitude under ``metric``."""
    if not math.isfinite(distance) or distance < 0.0:
        raise InvalidValue(f"distance must be finite and >= 0, got {distance!r}")
    scale = magnitude(metric, target)
    if scale <= 0.0:
        raise DegenerateTarget("target profile has zero magnitude")
    return 100.0 * distance / scale


def gap_report(table: DistanceTable, target: Profile) -> GapReport:
    """Second-minus-first relative-error gap for each standard metric.

    Gaps are computed from full-precision relative errors; rounding is left
    to the rendering layer.
    """
    if len(table) < 2:
        raise InsufficientCandidates("gap analysis needs at least two candidates")
    records = []
    for metric in STANDARD_METRICS:
        first, second = rank_candidates(table, target, metric)[:2]
        first_error = relative_error_percent(first.distance, target, metric)
        second_error = relative_error_percent(second.distance, target, metric)
        records.append(
            GapRecord(metric, first.candidate, first_error,
                      second.candidate, second_error, second_error - first_error)
        )
    mean = math.fsum(r.gap for r in records) / len(records)
    return GapReport(tuple(records), mean)


def sweep(
    solutions: Sequence[SolutionProfile],
    units: Sequence[Unit],
    reference_subsets: Sequence[Sequence[str]],
    metrics: Sequence[MetricSpec],
    *,
    tables: Mapping[Unit, DistanceTable] | None = None,
    rates: ConversionRates = DEFAULT_RATES,
) -> dict[Configuration, SweepResult]:
    """Evaluate the full cross-product of configurations, deterministically.

    Results are keyed by Configuration in a fixed iteration order (solution,
    then reference subset, then unit, then metric).  The gap report attached
    to each result is the one of its (solution, subset, unit) family and is
    always computed over the standard L_inf/L_1/L_2 family.
    """
    if tables is None:
        tables = {
            Unit.KILOMETERS: builtin_table(Unit.KILOMETERS),
            Unit.HOURS: builtin_table(Unit.HOURS),
        }
    results: dict[Configuration, SweepResult] = {}
    for solution in solutions:
        for refs in reference_subsets:
            for unit in units:
                restricted = subset_references(tables[unit], refs)
                target = target_profile(solution, unit, restricted.references, rates)
                family_gaps = gap_report(restricted, target)
                for metric in metrics:
                    ranking = tuple(rank_candidates(restricted, target, metric))
                    errors = tuple(
                        relative_error_percent(entry.distance, target, metric)
                        for entry in ranking
                    )
                    config = Configuration(solution, unit, restricted.references, metric)
                    results[config] = SweepResult(ranking, errors, family_gaps)
    return results


GRID_REFERENCE_SUBSETS = (REFERENCES, REFERENCES[:3])  # with and without Munera


def run_builtin_grid(rates: ConversionRates = DEFAULT_RATES) -> dict[Configuration, SweepResult]:
    """The standard grid: 2 solutions x 2 subsets x 2 units x 3 metrics."""
    return sweep(
        (CLASSIC_SOLUTION, REFINED_SOLUTION),
        (Unit.KILOMETERS, Unit.HOURS),
        GRID_REFERENCE_SUBSETS,
        STANDARD_METRICS,
        rates=rates,
    )


@dataclass(frozen=True)
class FamilyStats:
    """Aggregates for one (solution, unit, reference subset) family."""

    label: str
    solution: str
    unit: Unit
    references: tuple[str, ...]
    mean_gap: float
    mean_top_error: float  # mean over the metrics of the winner's relative error


@dataclass(frozen=True)
class GridSummary:
    """Machine-checkable conclusions drawn from a full grid sweep."""

    top_candidates: tuple[tuple[Configuration, str], ...]
    families: tuple[FamilyStats, ...]
    lowest_error_family: FamilyStats
    highest_mean_gap_family: FamilyStats
    lowest_mean_gap_family: FamilyStats
    unit_pairs_agree: bool
    disagreeing_pairs: tuple[tuple[str, int, str], ...]  # (solution, refs, metric)


def summarize_conclusions(results: Mapping[Configuration, SweepResult]) -> GridSummary:
    """Condense a full sweep into the headline facts.

    The unit-agreement check compares the top-5 candidate NAME SETS of the
    kilometers run and the hours run of each (solution, subset, metric)
    combination; the two units may order near-ties differently.
    """
    top = tuple((config, result.ranking[0].candidate) for config, result in results.items())

    family_rows: dict[tuple[str, str, int], list[tuple[Configuration, SweepResult]]] = {}
    for config, result in results.items():
        family_rows.setdefault(config.key[:3], []).append((config, result))
    families = []
    for members in family_rows.values():
        config = members[0][0]
        mean_top_error = math.fsum(res.errors[0] for _, res in members) / len(members)
        families.append(
            FamilyStats(
                label=config.family_label,
                solution=config.solution.label,
                unit=config.unit,
                references=config.references,
                mean_gap=members[0][1].gaps.mean_gap,
                mean_top_error=mean_top_error,
            )
        )
    families_t = tuple(families)

    by_units: dict[tuple[str, int, str], dict[str, frozenset[str]]] = {}
    for config, result in results.items():
        label, unit, nrefs, metric = config.key
        names = frozenset(e.candidate for e in result.ranking[:5])
        by_units.setdefault((label, nrefs, metric), {})[unit] = names
    disagreeing = tuple(
        key for key, per_unit in by_units.items()
        if len(per_unit) > 1 and len(set(per_unit.values())) > 1
    )

    return GridSummary(
        top_candidates=top,
        families=families_t,
        lowest_error_family=min(families_t, key=lambda f: f.mean_top_error),
        highest_mean_gap_family=max(families_t, key=lambda f: f.mean_gap),
        lowest_mean_gap_family=min(families_t, key=lambda f: f.mean_gap),
        unit_pairs_agree=not disagreeing,
        disagreeing_pairs=disagreeing,
    )
