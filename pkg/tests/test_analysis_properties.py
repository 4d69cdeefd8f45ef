"""Property-based checks of the ranking machinery.

The brute-force oracle re-computes every distance with inline formulas and
re-sorts from scratch; it shares no code with the implementation under test.
Both sides canonicalize the per-reference differences in descending order,
which is part of the metric's documented deterministic contract.
"""

import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lpmatch.analysis import rank_candidates, relative_error_percent
from lpmatch.core import MetricSpec, Profile, Unit
from lpmatch.dataset import DistanceTable

METRICS = (MetricSpec.infinity(), MetricSpec.ln(1), MetricSpec.ln(2), MetricSpec.ln(3))


def oracle_distance(metric, row_values, target_values):
    diffs = sorted((abs(a - b) for a, b in zip(row_values, target_values)), reverse=True)
    if metric.is_infinity:
        return diffs[0]
    n = metric.order
    if n == 1:
        return math.fsum(diffs)
    if n == 2:
        return math.hypot(*diffs)
    peak = diffs[0]
    if peak == 0.0:
        return 0.0
    return peak * math.fsum((d / peak) ** n for d in diffs) ** (1.0 / n)


def oracle_ranking(table, target, metric):
    """Exhaustive recomputation plus stable sort, aligned positionally."""
    order = [target.names.index(r) for r in table.references]
    target_values = [target.values[i] for i in order]
    scored = []
    for name in table.candidates:
        values = table.row_values(name)
        scored.append((
            oracle_distance(metric, values, target_values),
            oracle_distance(MetricSpec.ln(2), values, target_values),
            name,
        ))
    return [name for _, _, name in sorted(scored)]


def grid_value(rng):
    return rng.randrange(1, 20001) / 100.0


def random_table_and_target(rng, max_candidates=6, max_references=4):
    n_refs = rng.randrange(1, max_references + 1)
    n_rows = rng.randrange(1, max_candidates + 1)
    refs = tuple(f"ref{i}" for i in range(n_refs))
    rows = [
        (f"cand{i}", tuple(grid_value(rng) for _ in refs))
        for i in range(n_rows)
    ]
    table = DistanceTable(Unit.KILOMETERS, refs, rows)
    target = Profile(table.references, tuple(grid_value(rng) for _ in refs), Unit.KILOMETERS)
    return table, target


@pytest.mark.parametrize("metric", METRICS, ids=lambda m: m.token)
def test_matches_brute_force_oracle_on_random_tables(metric):
    rng = random.Random(415)
    for _ in range(100):
        table, target = random_table_and_target(rng)
        expected = oracle_ranking(table, target, metric)
        actual = [e.candidate for e in rank_candidates(table, target, metric)]
        assert actual == expected


@pytest.mark.parametrize("scale", [0.5, 2.0, 31.0, 1024.0])
def test_ranking_order_invariant_under_positive_scaling(scale):
    rng = random.Random(97)
    for _ in range(50):
        table, target = random_table_and_target(rng)
        scaled_table = DistanceTable(
            table.unit,
            table.references,
            [(n, tuple(v * scale for v in table.row_values(n))) for n in table.candidates],
        )
        scaled_target = Profile(
            target.names, tuple(v * scale for v in target.values), target.unit
        )
        for metric in METRICS:
            before = [e.candidate for e in rank_candidates(table, target, metric)]
            after = [e.candidate for e in rank_candidates(scaled_table, scaled_target, metric)]
            assert after == before


def test_ranking_invariant_under_reference_permutation():
    rng = random.Random(7)
    for _ in range(50):
        table, target = random_table_and_target(rng)
        order = list(range(len(table.references)))
        rng.shuffle(order)
        permuted = DistanceTable(
            table.unit,
            tuple(table.references[i] for i in order),
            [
                (n, tuple(table.row_values(n)[i] for i in order))
                for n in table.candidates
            ],
        )
        for metric in METRICS:
            assert rank_candidates(permuted, target, metric) == \
                rank_candidates(table, target, metric)


def test_dominated_candidates_never_rank_better():
    rng = random.Random(2024)
    checked = 0
    while checked < 200:
        table, target = random_table_and_target(rng, max_candidates=6, max_references=3)
        if len(table) < 2:
            continue
        diffs = {
            name: [abs(a - b) for a, b in zip(table.row_values(name), target.values)]
            for name in table.candidates
        }
        for a in table.candidates:
            for b in table.candidates:
                if a == b or not all(x <= y for x, y in zip(diffs[a], diffs[b])):
                    continue
                checked += 1
                for metric in METRICS:
                    ranking = rank_candidates(table, target, metric)
                    position = {e.candidate: e.rank for e in ranking}
                    distance = {e.candidate: e.distance for e in ranking}
                    assert distance[a] <= distance[b] + 1e-12
                    if all(x < y for x, y in zip(diffs[a], diffs[b])):
                        assert position[a] < position[b]


@given(st.lists(st.integers(min_value=0, max_value=20000).map(lambda k: k / 100.0),
                min_size=2, max_size=6, unique=True))
@settings(max_examples=100)
def test_relative_error_strictly_monotone_in_distance(distances):
    target = Profile(("a", "b"), (10.0, 20.0), Unit.HOURS)
    for metric in METRICS:
        errors = [relative_error_percent(d, target, metric) for d in sorted(distances)]
        assert all(x < y for x, y in zip(errors, errors[1:]))
