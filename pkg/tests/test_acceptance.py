"""Acceptance gate: every exit criterion at its stated tolerance.

Each test prints one PASS/FAIL line (run with ``pytest -s`` to see them on
success; failures print the line and the assertion detail).
"""

import json
import random
import time
from contextlib import contextmanager
from dataclasses import replace
from fractions import Fraction
from math import comb

import numpy as np
import pytest

from conftest import TABLE_CSV
from dxrec.formats import (
    BadCellError,
    NonRectangularError,
    SchemaError,
    parse_matrix,
    parse_spec,
    serialize_matrix,
    serialize_spec,
)
from dxrec.generators import (
    DisorderSpec,
    FixedSet,
    SubsetChoice,
    count,
    count_disorder,
    enumerate_sets,
    simplify_max,
    simplify_min,
)
from dxrec.matrix import ProfileMatrix, aggregate, backtrack, filter_matrix, informative_sets
from dxrec.model import ObservationSet, SymptomSpace
from dxrec.recommend import Dataset, recommend, recommend_lazy
from randgen import random_dataset_specs, random_disorder, random_observation_names
from test_formats import random_csv_matrix


@contextmanager
def criterion(number: int, description: str):
    try:
        yield
    except BaseException:
        print(f"ACCEPTANCE {number}: FAIL - {description}")
        raise
    print(f"ACCEPTANCE {number}: PASS - {description}")


def best_of(runs: int, fn):
    """Smallest wall time over a few runs; returns (result, seconds)."""
    best = None
    result = None
    for _ in range(runs):
        start = time.perf_counter()
        result = fn()
        elapsed = time.perf_counter() - start
        best = elapsed if best is None else min(best, elapsed)
    return result, best


def test_criterion_1_golden_worked_example():
    with criterion(1, "golden worked example: candidates, sizes, exact aggregates, S-sets, <50ms"):
        def run():
            matrix, _ = parse_matrix(TABLE_CSV)
            dataset = Dataset.from_matrix("t", matrix)
            return recommend(dataset, ObservationSet.from_names(present=["S5", "S6", "S7", "S8"]))

        rec, elapsed = best_of(3, run)
        assert rec.candidates == ("D1", "D2", "D3")
        assert rec.excluded == ("D4",)
        assert rec.group_sizes == {"D1": 3, "D2": 2, "D3": 1}

        matrix, _ = parse_matrix(TABLE_CSV)
        table = aggregate(filter_matrix(matrix, ObservationSet.from_names(present=["S5", "S6", "S7", "S8"])))
        assert table.space.symptoms == ("S1", "S2", "S3", "S4", "S9", "S10")
        assert table.row("D1") == (Fraction(1), Fraction(2, 3), Fraction(1, 3), Fraction(0), Fraction(2, 3), Fraction(1, 3))
        assert table.row("D2") == (Fraction(0), Fraction(0), Fraction(1), Fraction(1, 2), Fraction(0), Fraction(1, 2))
        assert table.row("D3") == (Fraction(1), Fraction(0), Fraction(0), Fraction(1), Fraction(1), Fraction(1))

        assert rec.informative.s1 == {"S1", "S3", "S4", "S9", "S10"}
        assert rec.informative.s0 == {"S1", "S2", "S3", "S4", "S9"}
        assert rec.informative.s_inter == {"S1", "S3", "S4", "S9"}
        assert elapsed < 0.050, f"golden query took {elapsed * 1000:.1f}ms"


def test_criterion_2_generator_counts():
    with criterion(2, "generator counts 93/163, conditioned 26/31 and 15/16, each <10ms"):
        g1 = DisorderSpec("A", (SubsetChoice(frozenset("abcdefgh"), 5),))
        g2 = DisorderSpec("B", (SubsetChoice(frozenset("defghijk"), 4),))

        checks = [
            (lambda: count_disorder(g1), 93),
            (lambda: count_disorder(g2), 163),
            (lambda: count_disorder(simplify_max(g1, frozenset("dfh"))), 26),
            (lambda: count_disorder(simplify_max(g2, frozenset("dfh"))), 31),
            (lambda: count_disorder(simplify_max(g1, frozenset("dfgh"))), 15),
            (lambda: count_disorder(simplify_max(g2, frozenset("dfgh"))), 16),
        ]
        for fn, expected in checks:
            value, elapsed = best_of(3, fn)
            assert value == expected
            assert elapsed < 0.010, f"count took {elapsed * 1000:.2f}ms"


def test_criterion_3_simplification_structure():
    with criterion(3, "max-overlap and min-difference rewrites match the reference shapes"):
        d1 = DisorderSpec("D1", (SubsetChoice(frozenset("abcd"), 3),))
        d2 = DisorderSpec("D2", (SubsetChoice(frozenset("cdefg"), 4),))

        out1 = simplify_max(d1, frozenset("cd"))
        out2 = simplify_max(d2, frozenset("cd"))
        assert out1.generators == (FixedSet(frozenset("cd")), SubsetChoice(frozenset("ab"), 1))
        assert out2.generators == (FixedSet(frozenset("cd")), SubsetChoice(frozenset("efg"), 2))

        min1, min2 = simplify_min(d1, d2)
        # residuals pinned to the lexicographically smallest k-subset
        assert min1.generators == (FixedSet(frozenset("cd")), SubsetChoice(frozenset("a"), 1))
        assert min2.generators == (FixedSet(frozenset("cd")), SubsetChoice(frozenset("ef"), 2))
        assert count_disorder(min1) == 1 and count_disorder(min2) == 1


def test_criterion_4_oracle_equivalence_property_suite():
    with criterion(4, ">=1000 randomized instances: lazy==eager and count==|enumerate|, <60s"):
        start = time.perf_counter()
        rng = random.Random(0xACCE97)
        instances = 0
        while instances < 1000:
            specs = random_dataset_specs(rng)
            dataset = Dataset.from_specs("prop", specs)
            present, absent = random_observation_names(rng)
            obs = ObservationSet.from_names(present, absent)

            lazy = recommend_lazy(dataset, obs, budget=10**9)
            eager = recommend(dataset, obs)
            assert replace(lazy, path=eager.path) == eager, (
                specs,
                sorted(present),
                sorted(absent),
            )
            for spec in specs:
                for g in spec.generators:
                    emitted = list(enumerate_sets(g))
                    assert len(emitted) == len(set(emitted)), g
                    assert count(g) == len(emitted), g
            instances += 1
        elapsed = time.perf_counter() - start
        assert elapsed < 60, f"property suite took {elapsed:.1f}s"


def test_criterion_5_backtrack_pairs():
    with criterion(5, "backtrack pairs: S3->(D2,D3), S9->(D3,D2), S1 and S4 per the derived oracle"):
        matrix, _ = parse_matrix(TABLE_CSV)
        table = aggregate(
            filter_matrix(matrix, ObservationSet.from_names(present=["S5", "S6", "S7", "S8"]))
        )
        pairs = backtrack(table, informative_sets(table))
        assert pairs["S3"] == (("D2", "D3"),)
        assert pairs["S9"] == (("D3", "D2"),)
        assert pairs["S1"] == (("D1", "D2"), ("D3", "D2"))
        assert pairs["S4"] == (("D3", "D1"),)
        assert set(pairs) == {"S1", "S3", "S4", "S9"}


def test_criterion_6_scale_targets():
    with criterion(6, "closed-form count in <10ms at 16.7M profiles; 1e5x64 recommend <1s"):
        g = SubsetChoice(frozenset(f"s{i:02d}" for i in range(24)), 5)
        reference = sum(comb(24, i) for i in range(5, 25))
        assert reference > 4_200_000
        value, elapsed = best_of(3, lambda: count(g))
        assert value == reference
        assert elapsed < 0.010, f"count took {elapsed * 1000:.2f}ms"

        rng = np.random.default_rng(0xB16)
        space = SymptomSpace([f"sym{i}" for i in range(64)])
        bits = (rng.random((100_000, 64)) < 0.5).astype(np.uint8)
        bits[:, 0] = 1  # keep the filter from emptying the matrix
        labels = [f"D{i % 50 + 1}" for i in range(100_000)]
        dataset = Dataset.from_matrix("big", ProfileMatrix(space, labels, bits))
        obs = ObservationSet.from_names(present=["sym0"], absent=["sym1"])
        start = time.perf_counter()
        rec = recommend(dataset, obs)
        elapsed = time.perf_counter() - start
        assert rec.candidates
        assert elapsed < 1.0, f"large recommend took {elapsed:.3f}s"


def test_criterion_7_format_round_trips():
    with criterion(7, "CSV and spec JSON round-trip over 500 fuzz cases each; errors carry locations"):
        rng = random.Random(0xF0F0)
        for _ in range(500):
            matrix = random_csv_matrix(rng)
            again, warnings = parse_matrix(serialize_matrix(matrix))
            assert warnings == ()
            assert again == matrix
        for _ in range(500):
            spec = random_disorder(rng, f"Dis{rng.randint(1, 9)}")
            assert parse_spec(serialize_spec(spec)) == spec

        with pytest.raises(BadCellError) as bad_cell:
            parse_matrix("disorder,a\nD1,2\n")
        assert (bad_cell.value.row, bad_cell.value.col) == (2, 2)
        with pytest.raises(NonRectangularError) as non_rect:
            parse_matrix("disorder,a,b\nD1,1\n")
        assert non_rect.value.row == 2
        with pytest.raises(SchemaError) as schema:
            parse_spec(json.dumps({"name": "X", "generators": [{"type": "G1", "set": ["a"]}]}))
        assert schema.value.path == "$.generators[0]"
