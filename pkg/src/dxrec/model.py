"""Shared domain vocabulary: symptoms, symptom spaces, observations, profiles.

Everything in this module is immutable after construction and safe to share
between concurrent readers.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator


class DomainError(Exception):
    """Base class for all engine-domain failures."""


class InvalidSymptomError(DomainError):
    pass


class InvalidLabelError(DomainError):
    pass


class DuplicateSymptomError(DomainError):
    pass


class DuplicateLabelError(DomainError):
    pass


class EmptyCatalogError(DomainError):
    pass


class UnknownSymptomError(DomainError):
    pass


class ContradictoryObservationError(DomainError):
    def __init__(self, symptom: str, old_state: "ObservationState", new_state: "ObservationState"):
        self.symptom = symptom
        self.old_state = old_state
        self.new_state = new_state
        super().__init__(
            f"symptom {symptom!r} is already recorded as {old_state.value}; "
            f"re-recording it as {new_state.value} requires an explicit replace"
        )


def validate_symptom_name(name: str) -> str:
    """Check a symptom identifier: non-empty token, no commas, no surrounding whitespace."""
    if not isinstance(name, str) or not name:
        raise InvalidSymptomError(f"symptom name must be a non-empty string, got {name!r}")
    if name != name.strip():
        raise InvalidSymptomError(f"symptom name {name!r} has leading/trailing whitespace")
    if "," in name or "\n" in name or "\r" in name:
        raise InvalidSymptomError(f"symptom name {name!r} contains a comma or line break")
    return name


def validate_label(name: str) -> str:
    """Check a disorder label: non-empty, no commas or line breaks (CSV-safe)."""
    if not isinstance(name, str) or not name:
        raise InvalidLabelError(f"disorder label must be a non-empty string, got {name!r}")
    if name != name.strip():
        raise InvalidLabelError(f"disorder label {name!r} has leading/trailing whitespace")
    if "," in name or "\n" in name or "\r" in name:
        raise InvalidLabelError(f"disorder label {name!r} contains a comma or line break")
    return name


def make_catalog(labels: Iterable[str]) -> tuple[str, ...]:
    """Validate an ordered disorder catalog: unique, CSV-safe labels."""
    out: list[str] = []
    seen: set[str] = set()
    for label in labels:
        validate_label(label)
        if label in seen:
            raise DuplicateLabelError(f"duplicate disorder label {label!r} in catalog")
        seen.add(label)
        out.append(label)
    return tuple(out)


class ObservationState(str, Enum):
    PRESENT = "present"
    ABSENT = "absent"


@dataclass(frozen=True, slots=True)
class Observation:
    """One recorded finding: a symptom known to be present or known to be absent."""

    symptom: str
    state: ObservationState

    def __post_init__(self) -> None:
        validate_symptom_name(self.symptom)
        if not isinstance(self.state, ObservationState):
            object.__setattr__(self, "state", ObservationState(self.state))

    @classmethod
    def present(cls, symptom: str) -> "Observation":
        return cls(symptom, ObservationState.PRESENT)

    @classmethod
    def absent(cls, symptom: str) -> "Observation":
        return cls(symptom, ObservationState.ABSENT)


class ObservationSet:
    """An immutable, contradiction-free set of observations.

    The present and absent halves are disjoint by construction. Changing the
    state of an already-observed symptom is only possible through an explicit
    replace, never silently.
    """

    __slots__ = ("_present", "_absent")

    def __init__(self, observations: Iterable[Observation] = ()):
        present: set[str] = set()
        absent: set[str] = set()
        for obs in observations:
            if obs.state is ObservationState.PRESENT:
                if obs.symptom in absent:
                    raise ContradictoryObservationError(
                        obs.symptom, ObservationState.ABSENT, ObservationState.PRESENT
                    )
                present.add(obs.symptom)
            else:
                if obs.symptom in present:
                    raise ContradictoryObservationError(
                        obs.symptom, ObservationState.PRESENT, ObservationState.ABSENT
                    )
                absent.add(obs.symptom)
        self._present = frozenset(present)
        self._absent = frozenset(absent)

    @classmethod
    def from_names(cls, present: Iterable[str] = (), absent: Iterable[str] = ()) -> "ObservationSet":
        return cls(
            [Observation.present(s) for s in present]
            + [Observation.absent(s) for s in absent]
        )

    @property
    def present(self) -> frozenset[str]:
        return self._present

    @property
    def absent(self) -> frozenset[str]:
        return self._absent

    def state_of(self, symptom: str) -> ObservationState | None:
        if symptom in self._present:
            return ObservationState.PRESENT
        if symptom in self._absent:
            return ObservationState.ABSENT
        return None

    def with_observation(self, obs: Observation, replace: bool = False) -> "ObservationSet":
        """Return a new set including `obs`; contradictions raise unless `replace`."""
        current = self.state_of(obs.symptom)
        if current is obs.state:
            return self
        if current is not None and not replace:
            raise ContradictoryObservationError(obs.symptom, current, obs.state)
        out = ObservationSet.__new__(ObservationSet)
        if obs.state is ObservationState.PRESENT:
            out._present = self._present | {obs.symptom}
            out._absent = self._absent - {obs.symptom}
        else:
            out._present = self._present - {obs.symptom}
            out._absent = self._absent | {obs.symptom}
        return out

    def without(self, symptom: str) -> "ObservationSet":
        """Return a new set with any observation of `symptom` removed."""
        if symptom not in self._present and symptom not in self._absent:
            return self
        out = ObservationSet.__new__(ObservationSet)
        out._present = self._present - {symptom}
        out._absent = self._absent - {symptom}
        return out

    def __len__(self) -> int:
        return len(self._present) + len(self._absent)

    def __bool__(self) -> bool:
        return bool(self._present or self._absent)

    def __contains__(self, symptom: str) -> bool:
        return symptom in self._present or symptom in self._absent

    def __iter__(self) -> Iterator[Observation]:
        for s in sorted(self._present):
            yield Observation.present(s)
        for s in sorted(self._absent):
            yield Observation.absent(s)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ObservationSet):
            return NotImplemented
        return self._present == other._present and self._absent == other._absent

    def __hash__(self) -> int:
        return hash((self._present, self._absent))

    def __repr__(self) -> str:
        return f"ObservationSet(present={sorted(self._present)}, absent={sorted(self._absent)})"


@dataclass(frozen=True, slots=True)
class Profile:
    """One valid symptom combination as a fixed-width bit row.

    Bit j corresponds to column j of the owning SymptomSpace; the width must
    equal the space size, which is checked on every construction.
    """

    mask: int
    width: int

    def __post_init__(self) -> None:
        if self.width < 0:
            raise DomainError(f"profile width must be non-negative, got {self.width}")
        if self.mask < 0 or self.mask >> self.width:
            raise DomainError(
                f"profile mask {self.mask:#x} does not fit in {self.width} columns"
            )

    @property
    def size(self) -> int:
        return self.mask.bit_count()

    def __contains__(self, column: int) -> bool:
        return 0 <= column < self.width and bool(self.mask >> column & 1)


class SymptomSpace:
    """The ordered catalog of symptom identifiers; column indices are stable."""

    __slots__ = ("_symptoms", "_index")

    def __init__(self, symptoms: Iterable[str]):
        syms = tuple(validate_symptom_name(s) for s in symptoms)
        index: dict[str, int] = {}
        for j, s in enumerate(syms):
            if s in index:
                raise DuplicateSymptomError(f"duplicate symptom {s!r} in symptom space")
            index[s] = j
        self._symptoms = syms
        self._index = index

    @property
    def symptoms(self) -> tuple[str, ...]:
        return self._symptoms

    def index_of(self, symptom: str) -> int:
        try:
            return self._index[symptom]
        except KeyError:
            raise UnknownSymptomError(f"symptom {symptom!r} is not in this space") from None

    def mask(self, symptoms: Iterable[str]) -> int:
        """Bit mask over the space's columns; unknown symptoms raise."""
        m = 0
        for s in symptoms:
            m |= 1 << self.index_of(s)
        return m

    def names(self, mask: int) -> tuple[str, ...]:
        return tuple(s for j, s in enumerate(self._symptoms) if mask >> j & 1)

    def profile(self, symptoms: Iterable[str]) -> Profile:
        return Profile(self.mask(symptoms), len(self._symptoms))

    def without(self, symptoms: Iterable[str]) -> "SymptomSpace":
        """A new space with the given columns removed, order otherwise preserved."""
        drop = set(symptoms)
        return SymptomSpace(s for s in self._symptoms if s not in drop)

    def __contains__(self, symptom: str) -> bool:
        return symptom in self._index

    def __len__(self) -> int:
        return len(self._symptoms)

    def __iter__(self) -> Iterator[str]:
        return iter(self._symptoms)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SymptomSpace):
            return NotImplemented
        return self._symptoms == other._symptoms

    def __hash__(self) -> int:
        return hash(self._symptoms)

    def __repr__(self) -> str:
        return f"SymptomSpace({list(self._symptoms)!r})"


def build_symptom_space(sources: Iterable[Iterable[str]]) -> SymptomSpace:
    """Union of all per-disorder symptom names, in first-seen order.

    `sources` holds one ordered symptom-name collection per disorder, in
    catalog order; the combined space lists each symptom at the position of
    its first occurrence.
    """
    ordered: list[str] = []
    seen: set[str] = set()
    any_source = False
    for source in sources:
        any_source = True
        for name in source:
            validate_symptom_name(name)
            if name not in seen:
                seen.add(name)
                ordered.append(name)
    if not any_source:
        raise EmptyCatalogError("cannot build a symptom space from zero disorders")
    return SymptomSpace(ordered)
