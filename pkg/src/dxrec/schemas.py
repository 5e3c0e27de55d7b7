"""Pydantic request/response models for the HTTP service."""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field

from .model import SymptomSpace
from .recommend import Dataset, Recommendation, recommendation_to_dict
from .sessions import Session


class ApiError(BaseModel):
    """Uniform error body carried by every non-2xx response."""

    status: int
    code: str
    detail: str
    location: Optional[str] = None


class DatasetCreateRequest(BaseModel):
    name: Optional[str] = None
    matrix_csv: Optional[str] = None
    specs: Optional[list[dict]] = None


class DatasetSummary(BaseModel):
    dataset_id: str
    disorders: list[str]
    symptom_count: int
    symptoms: list[str]
    has_matrix: bool
    has_specs: bool
    profile_count: Optional[int] = None
    warnings: list[str] = Field(default_factory=list)

    @classmethod
    def from_dataset(cls, dataset: Dataset, warnings: list[str] | None = None) -> "DatasetSummary":
        return cls(
            dataset_id=dataset.id,
            disorders=list(dataset.catalog),
            symptom_count=len(dataset.space),
            symptoms=list(dataset.space.symptoms),
            has_matrix=dataset.has_matrix,
            has_specs=dataset.has_specs,
            profile_count=dataset.matrix.n_rows if dataset.matrix is not None else None,
            warnings=warnings or [],
        )


class SessionCreateRequest(BaseModel):
    dataset_id: str


class SessionCreated(BaseModel):
    session_id: str
    dataset_id: str
    revision: int


class ObservationRequest(BaseModel):
    symptom: str
    state: Literal["present", "absent"]
    replace: bool = False
    strict: bool = False


class ObservationOut(BaseModel):
    symptom: str
    state: str


class SessionSummary(BaseModel):
    session_id: str
    dataset_id: str
    revision: int
    observations: list[ObservationOut]
    unknown_symptom: bool = False
    warnings: list[str] = Field(default_factory=list)

    @classmethod
    def from_session(
        cls,
        session: Session,
        *,
        unknown_symptom: bool = False,
        warnings: list[str] | None = None,
    ) -> "SessionSummary":
        return cls(
            session_id=session.id,
            dataset_id=session.dataset_id,
            revision=session.revision,
            observations=[
                ObservationOut(symptom=o.symptom, state=o.state.value)
                for o in session.observations
            ],
            unknown_symptom=unknown_symptom,
            warnings=warnings or [],
        )


class RecommendationOut(BaseModel):
    candidates: list[str]
    excluded: list[str]
    s1: list[str]
    s0: list[str]
    s_inter: list[str]
    pairs: dict[str, list[list[str]]]
    group_sizes: dict[str, int]
    path: str
    diagnosis_complete: bool
    warnings: list[str]

    @classmethod
    def from_recommendation(cls, rec: Recommendation, space: SymptomSpace) -> "RecommendationOut":
        return cls(**recommendation_to_dict(rec, space))
