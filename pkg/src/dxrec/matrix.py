"""Bitset matrix core: profile matrices, observation filtering, per-disorder
aggregation, informative-symptom sets, and disorder-pair backtracking.

Rows are dense bit vectors stored as a numpy uint8 matrix so filtering and
column aggregation stay word-parallel even at hundreds of thousands of rows;
frequencies are exact rationals because the informative-set tests compare
against 0 and 1 with no tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

import numpy as np

from .model import (
    DomainError,
    ObservationSet,
    Profile,
    SymptomSpace,
    make_catalog,
)


class MatrixShapeError(DomainError):
    pass


@dataclass(frozen=True)
class MaxProfileRow:
    """Union of all of one disorder's profiles: every symptom it can ever show."""

    label: str
    symptoms: frozenset[str]


@dataclass(frozen=True)
class InformativeSets:
    """Always-present (s1), always-absent (s0) symptom sets and their intersection."""

    s1: frozenset[str]
    s0: frozenset[str]
    s_inter: frozenset[str]

    @classmethod
    def build(cls, s1: Iterable[str], s0: Iterable[str]) -> "InformativeSets":
        f1 = frozenset(s1)
        f0 = frozenset(s0)
        return cls(f1, f0, f1 & f0)

    @classmethod
    def empty(cls) -> "InformativeSets":
        return cls(frozenset(), frozenset(), frozenset())


class ProfileMatrix:
    """Disorder-labeled stack of profile bit rows over one symptom space.

    Duplicate (label, profile) rows collapse on construction: a disorder is a
    set of profiles, so duplicates are representation noise. The catalog is
    the canonical disorder order and survives filtering even when a
    disorder's rows are all eliminated.
    """

    __slots__ = ("_space", "_catalog", "_labels", "_bits", "_groups")

    def __init__(
        self,
        space: SymptomSpace,
        labels: Sequence[str],
        bits: np.ndarray,
        *,
        catalog: Sequence[str] | None = None,
        dedupe: bool = True,
    ):
        bits = np.ascontiguousarray(bits, dtype=np.uint8)
        if bits.ndim != 2:
            raise MatrixShapeError(f"bit matrix must be 2-D, got shape {bits.shape}")
        if bits.shape[0] != len(labels):
            raise MatrixShapeError(
                f"{len(labels)} labels for {bits.shape[0]} rows"
            )
        if bits.shape[1] != len(space):
            raise MatrixShapeError(
                f"rows are {bits.shape[1]} columns wide but the space has {len(space)}"
            )
        if bits.size and bits.max() > 1:
            raise MatrixShapeError("bit matrix cells must be 0 or 1")
        if dedupe and len(labels):
            seen: set[tuple[str, bytes]] = set()
            keep: list[int] = []
            for i, label in enumerate(labels):
                key = (label, bits[i].tobytes())
                if key not in seen:
                    seen.add(key)
                    keep.append(i)
            if len(keep) != len(labels):
                labels = [labels[i] for i in keep]
                bits = bits[keep]
        self._space = space
        self._labels = tuple(labels)
        self._bits = bits
        self._bits.setflags(write=False)
        groups: dict[str, list[int]] = {}
        for i, label in enumerate(self._labels):
            groups.setdefault(label, []).append(i)
        self._groups = {label: np.asarray(rows, dtype=np.intp) for label, rows in groups.items()}
        if catalog is None:
            self._catalog = make_catalog(groups)
        else:
            self._catalog = make_catalog(catalog)
            missing = set(groups) - set(self._catalog)
            if missing:
                raise MatrixShapeError(f"rows carry labels missing from the catalog: {sorted(missing)}")

    @classmethod
    def from_profiles(
        cls,
        space: SymptomSpace,
        rows: Iterable[tuple[str, Iterable[str]]],
        *,
        catalog: Sequence[str] | None = None,
    ) -> "ProfileMatrix":
        labels: list[str] = []
        masks: list[Iterable[str]] = []
        for label, symptoms in rows:
            labels.append(label)
            masks.append(symptoms)
        bits = np.zeros((len(labels), len(space)), dtype=np.uint8)
        for i, symptoms in enumerate(masks):
            for s in symptoms:
                bits[i, space.index_of(s)] = 1
        return cls(space, labels, bits, catalog=catalog)

    @property
    def space(self) -> SymptomSpace:
        return self._space

    @property
    def catalog(self) -> tuple[str, ...]:
        return self._catalog

    @property
    def labels(self) -> tuple[str, ...]:
        return self._labels

    @property
    def bits(self) -> np.ndarray:
        return self._bits

    @property
    def n_rows(self) -> int:
        return self._bits.shape[0]

    @property
    def n_cols(self) -> int:
        return self._bits.shape[1]

    def profile_at(self, i: int) -> Profile:
        row = self._bits[i]
        mask = 0
        for j in np.flatnonzero(row):
            mask |= 1 << int(j)
        return Profile(mask, self.n_cols)

    def symptoms_at(self, i: int) -> frozenset[str]:
        syms = self._space.symptoms
        return frozenset(syms[int(j)] for j in np.flatnonzero(self._bits[i]))

    def rows(self) -> Iterator[tuple[str, frozenset[str]]]:
        for i, label in enumerate(self._labels):
            yield label, self.symptoms_at(i)

    def group_rows(self, label: str) -> np.ndarray:
        """Row indices of one disorder's profiles (empty when filtered out)."""
        return self._groups.get(label, np.empty(0, dtype=np.intp))

    def group_sizes(self) -> dict[str, int]:
        """Rows per disorder, catalog order, only disorders with surviving rows."""
        return {
            label: len(self._groups[label])
            for label in self._catalog
            if label in self._groups
        }

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ProfileMatrix):
            return NotImplemented
        return (
            self._space == other._space
            and self._labels == other._labels
            and self._bits.shape == other._bits.shape
            and bool(np.array_equal(self._bits, other._bits))
        )

    def __repr__(self) -> str:
        return f"ProfileMatrix({self.n_rows} rows x {self.n_cols} columns, {len(self._catalog)} disorders)"


@dataclass(frozen=True)
class AggregateTable:
    """Per-disorder symptom frequencies over a (possibly column-reduced) space.

    Frequencies are exact Fractions (ones count over group size); a value is
    1 or 0 only when the column is constant within the group.
    """

    space: SymptomSpace
    labels: tuple[str, ...]
    frequencies: tuple[tuple[Fraction, ...], ...]
    group_sizes: tuple[int, ...]

    def row(self, label: str) -> tuple[Fraction, ...]:
        return self.frequencies[self.labels.index(label)]

    def frequency(self, label: str, symptom: str) -> Fraction:
        return self.row(label)[self.space.index_of(symptom)]


def filter_matrix(matrix: ProfileMatrix, obs: ObservationSet) -> ProfileMatrix:
    """Keep rows consistent with the observations, then drop observed columns.

    A row survives when it has 1 in every present column and 0 in every
    absent column. A present symptom missing from the space eliminates every
    row (no profile can show it); an absent symptom missing from the space is
    a no-op. The output space is the input space minus the observed symptoms
    that exist in it.
    """
    space = matrix.space
    present_known = [s for s in obs.present if s in space]
    absent_known = [s for s in obs.absent if s in space]

    n = matrix.n_rows
    keep_rows = np.ones(n, dtype=bool)
    if len(present_known) < len(obs.present):
        keep_rows[:] = False
    else:
        if present_known:
            cols = [space.index_of(s) for s in present_known]
            keep_rows &= matrix.bits[:, cols].all(axis=1)
        if absent_known:
            cols = [space.index_of(s) for s in absent_known]
            keep_rows &= ~matrix.bits[:, cols].any(axis=1)

    observed = set(present_known) | set(absent_known)
    keep_cols = [j for j, s in enumerate(space.symptoms) if s not in observed]
    new_space = space.without(observed)
    new_bits = matrix.bits[np.flatnonzero(keep_rows)][:, keep_cols]
    new_labels = [matrix.labels[int(i)] for i in np.flatnonzero(keep_rows)]
    # survivors agree on every observed column, so dropping those columns
    # cannot merge previously distinct rows; no re-dedupe needed
    return ProfileMatrix(new_space, new_labels, new_bits, catalog=matrix.catalog, dedupe=False)


def aggregate(matrix: ProfileMatrix) -> AggregateTable:
    """Group rows by disorder (catalog order, adjacency not required) and
    compute each column's exact mean within the group."""
    out_labels: list[str] = []
    out_rows: list[tuple[Fraction, ...]] = []
    out_sizes: list[int] = []
    for label in matrix.catalog:
        idx = matrix.group_rows(label)
        if not len(idx):
            continue
        ones = matrix.bits[idx].sum(axis=0, dtype=np.int64)
        size = int(len(idx))
        out_labels.append(label)
        out_rows.append(tuple(Fraction(int(o), size) for o in ones))
        out_sizes.append(size)
    return AggregateTable(
        space=matrix.space,
        labels=tuple(out_labels),
        frequencies=tuple(out_rows),
        group_sizes=tuple(out_sizes),
    )


def informative_sets(table: AggregateTable) -> InformativeSets:
    """Columns at frequency 1 (s1) or 0 (s0) in at least one disorder; their
    intersection supports hard include/exclude tests."""
    s1: list[str] = []
    s0: list[str] = []
    for j, symptom in enumerate(table.space.symptoms):
        column = [row[j] for row in table.frequencies]
        if any(f == 1 for f in column):
            s1.append(symptom)
        if any(f == 0 for f in column):
            s0.append(symptom)
    return InformativeSets.build(s1, s0)


def backtrack(
    table: AggregateTable, sets: InformativeSets
) -> dict[str, tuple[tuple[str, str], ...]]:
    """Map each intersection symptom to the disorder pairs it separates.

    A pair (Di, Dj) means the symptom is always present in Di and never in
    Dj, so observing it rules one of the two in or out. The always-present
    disorder comes first; pairs follow catalog order.
    """
    out: dict[str, tuple[tuple[str, str], ...]] = {}
    for j, symptom in enumerate(table.space.symptoms):
        if symptom not in sets.s_inter:
            continue
        ones = [label for label, row in zip(table.labels, table.frequencies) if row[j] == 1]
        zeros = [label for label, row in zip(table.labels, table.frequencies) if row[j] == 0]
        pairs = tuple((hi, lo) for hi in ones for lo in zeros)
        if pairs:
            out[symptom] = pairs
    return out


def max_profiles(matrix: ProfileMatrix) -> tuple[MaxProfileRow, ...]:
    """One row per disorder: the bitwise OR of all its profiles."""
    rows: list[MaxProfileRow] = []
    syms = matrix.space.symptoms
    for label in matrix.catalog:
        idx = matrix.group_rows(label)
        if not len(idx):
            continue
        union = matrix.bits[idx].any(axis=0)
        rows.append(MaxProfileRow(label, frozenset(syms[int(j)] for j in np.flatnonzero(union))))
    return tuple(rows)


def mp_prefilter(mps: Sequence[MaxProfileRow], present: Iterable[str]) -> set[str]:
    """Labels whose maximum profile covers every present symptom.

    Sound over-approximation of full row filtering: a disorder whose union
    row misses a present symptom cannot have any matching profile.
    """
    p = frozenset(present)
    return {mp.label for mp in mps if p <= mp.symptoms}
