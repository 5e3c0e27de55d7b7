import random
from fractions import Fraction

import numpy as np
import pytest

from conftest import table_rows_as_sets
from dxrec.matrix import (
    InformativeSets,
    ProfileMatrix,
    aggregate,
    backtrack,
    filter_matrix,
    informative_sets,
    max_profiles,
    mp_prefilter,
)
from dxrec.model import Observation, ObservationSet, ObservationState, SymptomSpace
from oracles import naive_aggregate, row_scan_filter


def random_matrix(rng: random.Random, max_rows=200, max_cols=16) -> ProfileMatrix:
    n_cols = rng.randint(1, max_cols)
    space = SymptomSpace([f"c{i}" for i in range(n_cols)])
    n_rows = rng.randint(0, max_rows)
    labels = [f"D{rng.randint(1, 5)}" for _ in range(n_rows)]
    bits = (np.random.default_rng(rng.randint(0, 2**31)).random((n_rows, n_cols)) < 0.45).astype(np.uint8)
    return ProfileMatrix(space, labels, bits)


def random_observations(rng: random.Random, space: SymptomSpace) -> ObservationSet:
    pool = list(space.symptoms)
    rng.shuffle(pool)
    count = rng.randint(0, min(4, len(pool)))
    chosen = pool[:count]
    present = [s for s in chosen if rng.random() < 0.6]
    absent = [s for s in chosen if s not in present]
    return ObservationSet.from_names(present, absent)


class TestProfileMatrix:
    def test_duplicate_rows_collapse(self, demo_matrix):
        doubled = ProfileMatrix(
            demo_matrix.space,
            list(demo_matrix.labels) + [demo_matrix.labels[0]],
            np.vstack([demo_matrix.bits, demo_matrix.bits[:1]]),
        )
        assert doubled.n_rows == demo_matrix.n_rows

    def test_same_bits_different_label_kept(self):
        space = SymptomSpace(["a", "b"])
        m = ProfileMatrix(space, ["X", "Y"], np.array([[1, 0], [1, 0]], dtype=np.uint8))
        assert m.n_rows == 2

    def test_catalog_keeps_first_appearance_order(self):
        space = SymptomSpace(["a"])
        m = ProfileMatrix(space, ["B", "A", "B"], np.array([[1], [1], [0]], dtype=np.uint8))
        assert m.catalog == ("B", "A")

    def test_width_mismatch_rejected(self):
        space = SymptomSpace(["a", "b"])
        with pytest.raises(Exception):
            ProfileMatrix(space, ["X"], np.array([[1, 0, 1]], dtype=np.uint8))


class TestFilter:
    def test_worked_example_group_sizes(self, demo_matrix):
        obs = ObservationSet.from_names(present=["S5", "S6", "S7", "S8"])
        out = filter_matrix(demo_matrix, obs)
        assert out.group_sizes() == {"D1": 3, "D2": 2, "D3": 1}
        assert out.space.symptoms == ("S1", "S2", "S3", "S4", "S9", "S10")

    def test_empty_observations_identity(self, demo_matrix):
        out = filter_matrix(demo_matrix, ObservationSet())
        assert out == demo_matrix

    def test_present_and_absent_row_scan(self, demo_matrix):
        # derived by row scan: D1 rows 2-5 survive, D2 row 3, D3 row 2
        obs = ObservationSet.from_names(present=["S5"], absent=["S10"])
        out = filter_matrix(demo_matrix, obs)
        assert out.group_sizes() == {"D1": 4, "D2": 1, "D3": 1}
        expected = row_scan_filter(table_rows_as_sets(), {"S5"}, {"S10"})
        assert out.n_rows == len(expected) == 6

    def test_unknown_present_symptom_eliminates_everything(self, demo_matrix):
        obs = ObservationSet.from_names(present=["S5", "nope"])
        out = filter_matrix(demo_matrix, obs)
        assert out.n_rows == 0
        assert "S5" not in out.space  # known observed columns still dropped

    def test_unknown_absent_symptom_is_noop(self, demo_matrix):
        out = filter_matrix(demo_matrix, ObservationSet.from_names(absent=["nope"]))
        assert out == demo_matrix

    def test_row_survival_matches_row_scan_oracle(self):
        rng = random.Random(0xF17E)
        for _ in range(60):
            m = random_matrix(rng)
            obs = random_observations(rng, m.space)
            out = filter_matrix(m, obs)
            rows = [(m.labels[i], m.symptoms_at(i)) for i in range(m.n_rows)]
            expected = row_scan_filter(rows, obs.present, obs.absent)
            survivors = [
                (out.labels[i], out.symptoms_at(i) | frozenset(obs.present))
                for i in range(out.n_rows)
            ]
            assert len(survivors) == len(expected)
            assert [lab for lab, _ in survivors] == [lab for lab, _ in expected]
            for (lab_got, syms_got), (lab_want, syms_want) in zip(survivors, expected):
                # surviving rows lose observed columns; present ones are re-added above
                assert syms_got == syms_want - frozenset(obs.absent)

    def test_monotonicity_of_survivors(self):
        rng = random.Random(0x330)
        for _ in range(40):
            m = random_matrix(rng, max_rows=80)
            obs = random_observations(rng, m.space)
            base = filter_matrix(m, obs)
            extra_pool = [s for s in m.space.symptoms if s not in obs]
            if not extra_pool:
                continue
            extra = Observation(rng.choice(extra_pool), rng.choice(list(ObservationState)))
            stricter = filter_matrix(m, obs.with_observation(extra))
            assert set(stricter.labels) <= set(base.labels)

    def test_idempotence(self, demo_matrix):
        obs = ObservationSet.from_names(present=["S5", "S6"])
        once = filter_matrix(demo_matrix, obs)
        again = filter_matrix(once, ObservationSet())
        assert once == again


class TestAggregate:
    def test_worked_example_exact_fractions(self, demo_matrix):
        obs = ObservationSet.from_names(present=["S5", "S6", "S7", "S8"])
        table = aggregate(filter_matrix(demo_matrix, obs))
        assert table.labels == ("D1", "D2", "D3")
        assert table.group_sizes == (3, 2, 1)
        assert table.row("D1") == (
            Fraction(1), Fraction(2, 3), Fraction(1, 3),
            Fraction(0), Fraction(2, 3), Fraction(1, 3),
        )
        assert table.row("D2") == (
            Fraction(0), Fraction(0), Fraction(1),
            Fraction(1, 2), Fraction(0), Fraction(1, 2),
        )
        assert table.row("D3") == (
            Fraction(1), Fraction(0), Fraction(0),
            Fraction(1), Fraction(1), Fraction(1),
        )

    def test_single_row_group_equals_bits(self):
        space = SymptomSpace(["a", "b", "c"])
        m = ProfileMatrix(space, ["X"], np.array([[1, 0, 1]], dtype=np.uint8))
        table = aggregate(m)
        assert table.row("X") == (Fraction(1), Fraction(0), Fraction(1))

    def test_matches_naive_summation_oracle(self):
        rng = random.Random(0xA66)
        for _ in range(30):
            m = random_matrix(rng, max_rows=40, max_cols=10)
            table = aggregate(m)
            rows = [(m.labels[i], m.symptoms_at(i)) for i in range(m.n_rows)]
            expected = naive_aggregate(rows, m.space.symptoms)
            assert set(table.labels) == set(expected)
            for label in table.labels:
                assert table.row(label) == expected[label]

    def test_bounds_and_exactness(self):
        rng = random.Random(0xB0B)
        m = random_matrix(rng, max_rows=60, max_cols=8)
        table = aggregate(m)
        for label, freqs in zip(table.labels, table.frequencies):
            for j, f in enumerate(freqs):
                assert 0 <= f <= 1
                column = [
                    int(m.bits[i, j]) for i in range(m.n_rows) if m.labels[i] == label
                ]
                assert (f == 1) == all(column)
                assert (f == 0) == (not any(column))

    def test_grouping_ignores_adjacency(self):
        space = SymptomSpace(["a"])
        m = ProfileMatrix(
            space, ["X", "Y", "X"], np.array([[1], [1], [0]], dtype=np.uint8)
        )
        table = aggregate(m)
        assert table.row("X") == (Fraction(1, 2),)


class TestInformativeSets:
    def test_worked_example(self, demo_matrix):
        obs = ObservationSet.from_names(present=["S5", "S6", "S7", "S8"])
        table = aggregate(filter_matrix(demo_matrix, obs))
        sets = informative_sets(table)
        assert sets.s1 == {"S1", "S3", "S4", "S9", "S10"}
        assert sets.s0 == {"S1", "S2", "S3", "S4", "S9"}
        assert sets.s_inter == {"S1", "S3", "S4", "S9"}

    def test_single_disorder_all_ones(self):
        space = SymptomSpace(["a", "b"])
        m = ProfileMatrix(space, ["X"], np.array([[1, 1]], dtype=np.uint8))
        sets = informative_sets(aggregate(m))
        assert sets.s1 == {"a", "b"}
        assert sets.s0 == frozenset()
        assert sets.s_inter == frozenset()

    def test_complementary_single_column(self):
        space = SymptomSpace(["a"])
        m = ProfileMatrix(space, ["X", "Y"], np.array([[1], [0]], dtype=np.uint8))
        sets = informative_sets(aggregate(m))
        assert sets.s_inter == {"a"}

    def test_intersection_invariant(self):
        rng = random.Random(0x1A7)
        for _ in range(25):
            m = random_matrix(rng, max_rows=30, max_cols=8)
            sets = informative_sets(aggregate(m))
            assert sets.s_inter == sets.s1 & sets.s0
            assert sets.s_inter <= sets.s1 and sets.s_inter <= sets.s0


class TestBacktrack:
    def test_worked_example_pairs(self, demo_matrix):
        obs = ObservationSet.from_names(present=["S5", "S6", "S7", "S8"])
        table = aggregate(filter_matrix(demo_matrix, obs))
        sets = informative_sets(table)
        pairs = backtrack(table, sets)
        assert pairs["S3"] == (("D2", "D3"),)
        assert pairs["S9"] == (("D3", "D2"),)
        assert pairs["S1"] == (("D1", "D2"), ("D3", "D2"))
        assert pairs["S4"] == (("D3", "D1"),)

    def test_every_intersection_symptom_gets_pairs(self):
        rng = random.Random(0xBAC)
        for _ in range(25):
            m = random_matrix(rng, max_rows=30, max_cols=8)
            table = aggregate(m)
            sets = informative_sets(table)
            pairs = backtrack(table, sets)
            assert set(pairs) == set(sets.s_inter)
            for symptom, plist in pairs.items():
                assert plist
                for hi, lo in plist:
                    assert table.frequency(hi, symptom) == 1
                    assert table.frequency(lo, symptom) == 0

    def test_empty_intersection_empty_map(self):
        space = SymptomSpace(["a"])
        m = ProfileMatrix(space, ["X"], np.array([[1]], dtype=np.uint8))
        table = aggregate(m)
        assert backtrack(table, informative_sets(table)) == {}


class TestMaxProfiles:
    def test_single_profile_disorder(self, demo_matrix):
        mps = {mp.label: mp.symptoms for mp in max_profiles(demo_matrix)}
        assert mps["D4"] == {"S1", "S5", "S8", "S10"}

    def test_union_across_rows(self, demo_matrix):
        mps = {mp.label: mp.symptoms for mp in max_profiles(demo_matrix)}
        assert mps["D2"] == {"S3", "S4", "S5", "S6", "S7", "S8", "S10"}

    def test_bit_set_iff_some_profile_sets_it(self):
        rng = random.Random(0x917)
        m = random_matrix(rng, max_rows=40, max_cols=8)
        rows = [(m.labels[i], m.symptoms_at(i)) for i in range(m.n_rows)]
        for mp in max_profiles(m):
            expected = frozenset().union(
                frozenset(), *(syms for lab, syms in rows if lab == mp.label)
            )
            assert mp.symptoms == expected


class TestMpPrefilter:
    def test_worked_example_screen(self, demo_matrix):
        survivors = mp_prefilter(max_profiles(demo_matrix), {"S5", "S6", "S7", "S8"})
        assert survivors == {"D1", "D2", "D3"}

    def test_empty_present_keeps_all(self, demo_matrix):
        survivors = mp_prefilter(max_profiles(demo_matrix), set())
        assert survivors == {"D1", "D2", "D3", "D4"}

    def test_unknown_symptom_clears_all(self, demo_matrix):
        assert mp_prefilter(max_profiles(demo_matrix), {"nope"}) == set()

    def test_sound_over_approximation(self):
        rng = random.Random(0x50A)
        for _ in range(40):
            m = random_matrix(rng, max_rows=60, max_cols=10)
            obs = random_observations(rng, m.space)
            survivors = mp_prefilter(max_profiles(m), obs.present)
            filtered = filter_matrix(m, ObservationSet.from_names(obs.present))
            assert set(filtered.labels) <= survivors
