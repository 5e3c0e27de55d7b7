"""End-to-end recommendation pipeline: filter, aggregate, informative sets,
and pair backtracking, over either a materialized profile matrix or lazily
generated profiles conditioned on the observations.

The lazy path rewrites each disorder's generators against the observations
so only consistent profiles are ever materialized; its result is
field-for-field identical to running the materialized path on the fully
enumerated matrix (the `path` field records which route ran).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .generators import (
    DisjointPairs,
    DisorderSpec,
    FixedSet,
    MultiSetChoice,
    SubsetChoice,
    TieredChoice,
    apply_absent,
    count_disorder,
    disorder_support,
    enumerate_disorder,
    g3_exclusion_check,
    simplify_max,
    validate_disorder,
)
from .matrix import (
    InformativeSets,
    ProfileMatrix,
    aggregate,
    backtrack,
    filter_matrix,
    informative_sets,
    max_profiles,
    mp_prefilter,
)
from .model import (
    DomainError,
    ObservationSet,
    SymptomSpace,
    build_symptom_space,
    make_catalog,
)

DEFAULT_BUDGET = 1_000_000

PATH_MATERIALIZED = "materialized"
PATH_LAZY = "lazy-generated"


class DatasetError(DomainError):
    pass


class OverbudgetError(DomainError):
    def __init__(self, label: str, needed: int, budget: int):
        self.label = label
        self.needed = needed
        self.budget = budget
        super().__init__(
            f"disorder {label!r} needs {needed} profiles after conditioning, "
            f"which exceeds the budget of {budget}"
        )


@dataclass(frozen=True)
class Recommendation:
    """The engine's answer for one observation set.

    candidates and excluded partition the catalog; pair_map only names
    candidate disorders; group_sizes counts each candidate's surviving
    profiles. When s_inter is empty, s1 and s0 remain available as one-sided
    fallbacks.
    """

    candidates: tuple[str, ...]
    excluded: tuple[str, ...]
    informative: InformativeSets
    pair_map: dict[str, tuple[tuple[str, str], ...]]
    group_sizes: dict[str, int]
    path: str
    diagnosis_complete: bool
    warnings: tuple[str, ...] = ()


def _spec_column_order(d: DisorderSpec) -> list[str]:
    """Deterministic per-disorder column order: generator order, sets in
    declaration order, symptoms sorted within each set."""
    out: list[str] = []
    for g in d.generators:
        if isinstance(g, (FixedSet, SubsetChoice)):
            out.extend(sorted(g.symptoms))
        elif isinstance(g, MultiSetChoice):
            for s in g.sets:
                out.extend(sorted(s))
        elif isinstance(g, (DisjointPairs, TieredChoice)):
            for s in g.list_a + g.list_b:
                out.extend(sorted(s))
    return out


def materialize_matrix(
    specs: Sequence[DisorderSpec],
    space: SymptomSpace,
    catalog: Sequence[str],
) -> ProfileMatrix:
    """Fully enumerate every disorder into one matrix over the shared space."""
    labels: list[str] = []
    row_sets: list[frozenset[str]] = []
    for spec in specs:
        for profile in enumerate_disorder(spec):
            labels.append(spec.label)
            row_sets.append(profile)
    bits = np.zeros((len(labels), len(space)), dtype=np.uint8)
    for i, profile in enumerate(row_sets):
        for s in profile:
            bits[i, space.index_of(s)] = 1
    return ProfileMatrix(space, labels, bits, catalog=catalog, dedupe=False)


@dataclass(frozen=True)
class Dataset:
    """A disorder collection backed by a materialized matrix, generator
    specs, or both (validated to agree when both are present)."""

    id: str
    catalog: tuple[str, ...]
    space: SymptomSpace
    matrix: ProfileMatrix | None = None
    specs: tuple[DisorderSpec, ...] | None = None

    @classmethod
    def from_matrix(cls, dataset_id: str, matrix: ProfileMatrix) -> "Dataset":
        return cls(
            id=dataset_id,
            catalog=matrix.catalog,
            space=matrix.space,
            matrix=matrix,
            specs=None,
        )

    @classmethod
    def from_specs(cls, dataset_id: str, specs: Sequence[DisorderSpec]) -> "Dataset":
        if not specs:
            raise DatasetError("a generator dataset needs at least one disorder spec")
        for spec in specs:
            validate_disorder(spec)
        catalog = make_catalog(spec.label for spec in specs)
        space = build_symptom_space(_spec_column_order(spec) for spec in specs)
        return cls(
            id=dataset_id,
            catalog=catalog,
            space=space,
            matrix=None,
            specs=tuple(specs),
        )

    @classmethod
    def from_both(
        cls, dataset_id: str, matrix: ProfileMatrix, specs: Sequence[DisorderSpec]
    ) -> "Dataset":
        """Pair a matrix with the specs that generated it; spot-checked."""
        for spec in specs:
            validate_disorder(spec)
        spec_labels = make_catalog(spec.label for spec in specs)
        if spec_labels != matrix.catalog:
            raise DatasetError(
                f"matrix catalog {list(matrix.catalog)} does not match "
                f"spec labels {list(spec_labels)}"
            )
        sizes = matrix.group_sizes()
        row_sets: dict[str, set[frozenset[str]]] = {}
        for label, symptoms in matrix.rows():
            row_sets.setdefault(label, set()).add(symptoms)
        for spec in specs:
            expected = count_disorder(spec)
            if sizes.get(spec.label, 0) != expected:
                raise DatasetError(
                    f"disorder {spec.label!r}: spec generates {expected} profiles "
                    f"but the matrix holds {sizes.get(spec.label, 0)}"
                )
            for i, profile in enumerate(enumerate_disorder(spec)):
                if i >= 64:
                    break
                if profile not in row_sets[spec.label]:
                    raise DatasetError(
                        f"disorder {spec.label!r}: generated profile "
                        f"{sorted(profile)} is missing from the matrix"
                    )
        return cls(
            id=dataset_id,
            catalog=matrix.catalog,
            space=matrix.space,
            matrix=matrix,
            specs=tuple(specs),
        )

    @property
    def has_matrix(self) -> bool:
        return self.matrix is not None

    @property
    def has_specs(self) -> bool:
        return self.specs is not None


def observation_warnings(space: SymptomSpace, obs: ObservationSet) -> tuple[str, ...]:
    """Structured warnings for observed symptoms outside the dataset's space."""
    out: list[str] = []
    for s in sorted(obs.present):
        if s not in space:
            out.append(
                f"present symptom {s!r} is not in the dataset's symptom space; "
                "no disorder can match"
            )
    for s in sorted(obs.absent):
        if s not in space:
            out.append(
                f"absent symptom {s!r} is not in the dataset's symptom space; ignored"
            )
    return tuple(out)


def _assemble(
    dataset: Dataset,
    filtered: ProfileMatrix,
    path: str,
    warnings: tuple[str, ...],
) -> Recommendation:
    table = aggregate(filtered)
    candidates = table.labels
    if candidates:
        sets = informative_sets(table)
        pairs = backtrack(table, sets)
    else:
        sets = InformativeSets.empty()
        pairs = {}
    excluded = tuple(l for l in dataset.catalog if l not in set(candidates))
    return Recommendation(
        candidates=candidates,
        excluded=excluded,
        informative=sets,
        pair_map=pairs,
        group_sizes=dict(zip(table.labels, table.group_sizes)),
        path=path,
        diagnosis_complete=len(candidates) == 1,
        warnings=warnings,
    )


def recommend(dataset: Dataset, obs: ObservationSet) -> Recommendation:
    """Materialized path: row filter, column drop, aggregate, informative
    sets, backtrack. Generator-only datasets are enumerated eagerly first."""
    matrix = dataset.matrix
    if matrix is None:
        if not dataset.specs:
            raise DatasetError(f"dataset {dataset.id!r} has no profile source")
        matrix = materialize_matrix(dataset.specs, dataset.space, dataset.catalog)
    warnings = observation_warnings(dataset.space, obs)

    # cheap union-row screen before the row-level filter
    surviving = mp_prefilter(max_profiles(matrix), obs.present)
    if len(surviving) < len(matrix.catalog):
        keep = [i for i, label in enumerate(matrix.labels) if label in surviving]
        matrix = ProfileMatrix(
            matrix.space,
            [matrix.labels[i] for i in keep],
            matrix.bits[keep],
            catalog=matrix.catalog,
            dedupe=False,
        )
    filtered = filter_matrix(matrix, obs)
    return _assemble(dataset, filtered, PATH_MATERIALIZED, warnings)


def recommend_lazy(
    dataset: Dataset, obs: ObservationSet, budget: int = DEFAULT_BUDGET
) -> Recommendation:
    """Generator path: condition each disorder's spec on the observations and
    enumerate only the consistent profiles.

    Per disorder: G3 exclusion screen, absent-symptom rewrite (infeasible
    means excluded), support check against the present symptoms, conditioning
    rewrite, then a closed-form count against the budget before any
    enumeration. Oversized disorders raise OverbudgetError rather than
    truncating silently.
    """
    if not dataset.specs:
        raise DatasetError(f"dataset {dataset.id!r} carries no generator specs")
    warnings = observation_warnings(dataset.space, obs)
    present = frozenset(obs.present)
    absent = frozenset(obs.absent)

    labels: list[str] = []
    row_sets: list[frozenset[str]] = []
    for spec in dataset.specs:
        if g3_exclusion_check(spec, present):
            continue
        reduced = apply_absent(spec, absent)
        if reduced is None:
            continue
        if not present <= disorder_support(reduced):
            continue  # some present symptom can never appear in this disorder
        conditioned = simplify_max(reduced, present)
        needed = count_disorder(conditioned)
        if needed > budget:
            raise OverbudgetError(spec.label, needed, budget)
        has_g3 = any(isinstance(g, DisjointPairs) for g in conditioned.generators)
        for profile in enumerate_disorder(conditioned):
            if has_g3 and not present <= profile:
                continue  # G3 components are not rewritten; enforce here
            labels.append(spec.label)
            row_sets.append(profile)

    observed_known = {s for s in (present | absent) if s in dataset.space}
    reduced_space = dataset.space.without(observed_known)
    bits = np.zeros((len(labels), len(reduced_space)), dtype=np.uint8)
    for i, profile in enumerate(row_sets):
        for s in profile:
            if s in reduced_space:
                bits[i, reduced_space.index_of(s)] = 1
    matrix = ProfileMatrix(reduced_space, labels, bits, catalog=dataset.catalog)
    return _assemble(dataset, matrix, PATH_LAZY, warnings)


def session_recommend(
    dataset: Dataset, obs: ObservationSet, budget: int = DEFAULT_BUDGET
) -> Recommendation:
    """Materialized path when a matrix exists, lazy generation otherwise."""
    if dataset.has_matrix:
        return recommend(dataset, obs)
    return recommend_lazy(dataset, obs, budget)


def recommendation_to_dict(rec: Recommendation, space: SymptomSpace) -> dict:
    """Canonical JSON-ready form; symptom lists follow the space's column
    order so identical inputs serialize to identical bytes."""
    order = {s: j for j, s in enumerate(space.symptoms)}

    def sorted_syms(syms: Iterable[str]) -> list[str]:
        return sorted(syms, key=lambda s: order.get(s, len(order)))

    return {
        "candidates": list(rec.candidates),
        "excluded": list(rec.excluded),
        "s1": sorted_syms(rec.informative.s1),
        "s0": sorted_syms(rec.informative.s0),
        "s_inter": sorted_syms(rec.informative.s_inter),
        "pairs": {
            s: [list(p) for p in rec.pair_map[s]]
            for s in sorted_syms(rec.pair_map)
        },
        "group_sizes": {label: rec.group_sizes[label] for label in rec.candidates},
        "path": rec.path,
        "diagnosis_complete": rec.diagnosis_complete,
        "warnings": list(rec.warnings),
    }


def recommendation_to_json(rec: Recommendation, space: SymptomSpace) -> bytes:
    return (
        json.dumps(recommendation_to_dict(rec, space), indent=2, ensure_ascii=False) + "\n"
    ).encode("utf-8")
