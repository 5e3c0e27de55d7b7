"""Interactive diagnostic sessions: incremental observations over a dataset.

Sessions are immutable values; the stores hold the current revision of each
and serialize mutations per session, so concurrent observation posts cannot
lose updates. Datasets are append-only and shared read-only.
"""

from __future__ import annotations

import threading
import uuid
from dataclasses import dataclass, replace

from .model import DomainError, Observation, ObservationSet
from .recommend import Dataset


class UnknownDatasetError(DomainError):
    def __init__(self, dataset_id: str):
        self.dataset_id = dataset_id
        super().__init__(f"no dataset with id {dataset_id!r}")


class UnknownSessionError(DomainError):
    def __init__(self, session_id: str):
        self.session_id = session_id
        super().__init__(f"no session with id {session_id!r}")


class DuplicateDatasetError(DomainError):
    pass


@dataclass(frozen=True)
class Session:
    """One clinician's in-progress differential, as accumulated observations."""

    id: str
    dataset_id: str
    observations: ObservationSet
    revision: int


class DatasetStore:
    """Append-only, thread-safe dataset registry."""

    def __init__(self) -> None:
        self._datasets: dict[str, Dataset] = {}
        self._lock = threading.Lock()

    def add(self, dataset: Dataset) -> Dataset:
        with self._lock:
            if dataset.id in self._datasets:
                raise DuplicateDatasetError(f"dataset id {dataset.id!r} already exists")
            self._datasets[dataset.id] = dataset
        return dataset

    def get(self, dataset_id: str) -> Dataset:
        with self._lock:
            try:
                return self._datasets[dataset_id]
            except KeyError:
                raise UnknownDatasetError(dataset_id) from None

    def list(self) -> list[Dataset]:
        with self._lock:
            return list(self._datasets.values())

    def __contains__(self, dataset_id: str) -> bool:
        with self._lock:
            return dataset_id in self._datasets


class SessionStore:
    """Session registry with per-session mutation locks (single writer each)."""

    def __init__(self, datasets: DatasetStore):
        self._datasets = datasets
        self._sessions: dict[str, Session] = {}
        self._locks: dict[str, threading.Lock] = {}
        self._lock = threading.Lock()

    def create(self, dataset_id: str) -> Session:
        self._datasets.get(dataset_id)  # raises UnknownDatasetError
        session = Session(
            id=uuid.uuid4().hex,
            dataset_id=dataset_id,
            observations=ObservationSet(),
            revision=0,
        )
        with self._lock:
            self._sessions[session.id] = session
            self._locks[session.id] = threading.Lock()
        return session

    def get(self, session_id: str) -> Session:
        with self._lock:
            try:
                return self._sessions[session_id]
            except KeyError:
                raise UnknownSessionError(session_id) from None

    def _mutation_lock(self, session_id: str) -> threading.Lock:
        with self._lock:
            if session_id not in self._locks:
                raise UnknownSessionError(session_id)
            return self._locks[session_id]

    def observe(self, session_id: str, obs: Observation, replace_state: bool = False) -> Session:
        """Record an observation; contradictions raise unless replacing."""
        with self._mutation_lock(session_id):
            session = self.get(session_id)
            updated = session.observations.with_observation(obs, replace=replace_state)
            if updated is session.observations:
                return session  # no-op re-observation, revision unchanged
            session = replace(session, observations=updated, revision=session.revision + 1)
            with self._lock:
                self._sessions[session_id] = session
            return session

    def retract(self, session_id: str, symptom: str) -> Session:
        """Remove any observation of the symptom; unobserved symptoms no-op."""
        with self._mutation_lock(session_id):
            session = self.get(session_id)
            updated = session.observations.without(symptom)
            if updated is session.observations:
                return session
            session = replace(session, observations=updated, revision=session.revision + 1)
            with self._lock:
                self._sessions[session_id] = session
            return session
