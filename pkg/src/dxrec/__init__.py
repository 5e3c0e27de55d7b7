"""dxrec: differential-diagnosis recommender over binary symptom matrices.

Given observed present/absent symptoms, the engine filters binary
symptom-profile representations of disorders and reports the surviving
candidates, the most informative symptoms to assess next, and the disorder
pairs each such symptom separates. Profile stacks come either from explicit
matrices or lazily from combinatorial generator specs conditioned on the
observations.
"""

from .generators import (
    DisjointPairs,
    DisorderSpec,
    FixedSet,
    GeneratorSpec,
    MultiSetChoice,
    SpecValidationError,
    SubsetChoice,
    TieredChoice,
    apply_absent,
    bracket_notation,
    count,
    count_disorder,
    disorder_support,
    enumerate_disorder,
    enumerate_sets,
    g3_exclusion_check,
    simplify_max,
    simplify_min,
)
from .matrix import (
    AggregateTable,
    InformativeSets,
    MaxProfileRow,
    ProfileMatrix,
    aggregate,
    backtrack,
    filter_matrix,
    informative_sets,
    max_profiles,
    mp_prefilter,
)
from .model import (
    ContradictoryObservationError,
    DomainError,
    Observation,
    ObservationSet,
    ObservationState,
    Profile,
    SymptomSpace,
    build_symptom_space,
)
from .recommend import (
    DEFAULT_BUDGET,
    Dataset,
    OverbudgetError,
    Recommendation,
    materialize_matrix,
    recommend,
    recommend_lazy,
    recommendation_to_dict,
    recommendation_to_json,
    session_recommend,
)
from .sessions import DatasetStore, Session, SessionStore

__version__ = "0.1.0"

__all__ = [
    "AggregateTable",
    "ContradictoryObservationError",
    "Dataset",
    "DatasetStore",
    "DEFAULT_BUDGET",
    "DisjointPairs",
    "DisorderSpec",
    "DomainError",
    "FixedSet",
    "GeneratorSpec",
    "InformativeSets",
    "MaxProfileRow",
    "MultiSetChoice",
    "Observation",
    "ObservationSet",
    "ObservationState",
    "OverbudgetError",
    "Profile",
    "ProfileMatrix",
    "Recommendation",
    "Session",
    "SessionStore",
    "SpecValidationError",
    "SubsetChoice",
    "SymptomSpace",
    "TieredChoice",
    "aggregate",
    "apply_absent",
    "backtrack",
    "bracket_notation",
    "build_symptom_space",
    "count",
    "count_disorder",
    "disorder_support",
    "enumerate_disorder",
    "enumerate_sets",
    "filter_matrix",
    "g3_exclusion_check",
    "informative_sets",
    "materialize_matrix",
    "max_profiles",
    "mp_prefilter",
    "recommend",
    "recommend_lazy",
    "recommendation_to_dict",
    "recommendation_to_json",
    "session_recommend",
    "simplify_max",
    "simplify_min",
]
