"""HTTP facade: datasets and interactive diagnostic sessions over JSON.

The service keeps everything in memory (datasets append-only, sessions
mutation-locked) and recomputes recommendations on GET; an ETag keyed on
(dataset, revision) lets clients skip unchanged bodies. There is no
authentication: bind it to loopback unless you know what you are doing.
"""

from __future__ import annotations

import uuid
from pathlib import Path

from fastapi import FastAPI, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse

from . import formats
from .generators import PresentOutsideSupportError, SpecValidationError, UnsupportedRewriteError
from .model import (
    ContradictoryObservationError,
    DomainError,
    Observation,
    ObservationState,
)
from .recommend import (
    DEFAULT_BUDGET,
    Dataset,
    DatasetError,
    OverbudgetError,
    recommendation_to_dict,
    session_recommend,
)
from .schemas import (
    ApiError,
    DatasetCreateRequest,
    DatasetSummary,
    ObservationRequest,
    RecommendationOut,
    SessionCreated,
    SessionCreateRequest,
    SessionSummary,
)
from .sessions import (
    DatasetStore,
    DuplicateDatasetError,
    SessionStore,
    UnknownDatasetError,
    UnknownSessionError,
)

class UnknownSymptomRequestError(DomainError):
    """Raised when a strict observation names a symptom outside the dataset."""


_ERROR_STATUS: list[tuple[type[Exception], int]] = [
    (UnknownSymptomRequestError, 422),
    (UnknownDatasetError, 404),
    (UnknownSessionError, 404),
    (ContradictoryObservationError, 409),
    (DuplicateDatasetError, 409),
    (OverbudgetError, 422),
    (PresentOutsideSupportError, 422),
    (UnsupportedRewriteError, 422),
    (formats.FormatError, 400),
    (SpecValidationError, 400),
    (DatasetError, 400),
    (DomainError, 400),
]


def _error_response(status: int, code: str, detail: str, location: str | None = None) -> JSONResponse:
    body = ApiError(status=status, code=code, detail=detail, location=location)
    return JSONResponse(status_code=status, content=body.model_dump())


def _location_of(exc: Exception) -> str | None:
    if isinstance(exc, formats.SchemaError):
        return exc.path
    if isinstance(exc, formats.BadCellError):
        return f"row {exc.row}, col {exc.col}"
    if isinstance(exc, formats.NonRectangularError):
        return f"row {exc.row}"
    if isinstance(exc, formats.DuplicateSymptomColumnError):
        return f"row 1, col {exc.col}"
    if isinstance(exc, SpecValidationError):
        return exc.path
    return None


def load_data_dir(store: DatasetStore, data_dir: str | Path) -> list[str]:
    """Register every matrix CSV and spec JSON found in a directory.

    A ``*.csv`` file becomes a matrix dataset; a ``*.json`` file holds one
    spec document or an array of them and becomes a generator dataset. The
    file stem is the dataset id.
    """
    loaded: list[str] = []
    root = Path(data_dir)
    for path in sorted(root.glob("*.csv")):
        matrix, _ = formats.parse_matrix(path.read_bytes())
        store.add(Dataset.from_matrix(path.stem, matrix))
        loaded.append(path.stem)
    for path in sorted(root.glob("*.json")):
        import json as _json

        obj = _json.loads(path.read_text("utf-8"))
        docs = obj if isinstance(obj, list) else [obj]
        specs = [formats.parse_spec_object(doc, f"$[{i}]") for i, doc in enumerate(docs)]
        store.add(Dataset.from_specs(path.stem, specs))
        loaded.append(path.stem)
    return loaded


def create_app(
    data_dir: str | Path | None = None,
    budget: int = DEFAULT_BUDGET,
    ui_dir: str | Path | None = None,
) -> FastAPI:
    app = FastAPI(title="dxrec", version="0.1.0")
    # prototype scope: no auth, so permissive CORS is only safe together with
    # the default loopback bind
    from fastapi.middleware.cors import CORSMiddleware

    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
        expose_headers=["ETag"],
    )
    datasets = DatasetStore()
    sessions = SessionStore(datasets)
    app.state.datasets = datasets
    app.state.sessions = sessions
    app.state.budget = budget
    if data_dir is not None:
        load_data_dir(datasets, data_dir)
    if ui_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/ui", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    @app.exception_handler(Exception)
    async def on_unexpected(request: Request, exc: Exception) -> JSONResponse:
        return _error_response(500, "InternalError", f"unexpected failure: {exc}")

    @app.exception_handler(DomainError)
    async def on_domain_error(request: Request, exc: DomainError) -> JSONResponse:
        for exc_type, status in _ERROR_STATUS:
            if isinstance(exc, exc_type):
                return _error_response(status, type(exc).__name__, str(exc), _location_of(exc))
        return _error_response(400, type(exc).__name__, str(exc))

    @app.exception_handler(RequestValidationError)
    async def on_validation_error(request: Request, exc: RequestValidationError) -> JSONResponse:
        first = exc.errors()[0] if exc.errors() else {}
        loc = ".".join(str(p) for p in first.get("loc", ()))
        return _error_response(422, "RequestValidation", first.get("msg", "invalid request"), loc or None)

    @app.post("/v1/datasets", response_model=DatasetSummary, status_code=201)
    def create_dataset(req: DatasetCreateRequest) -> DatasetSummary:
        if req.matrix_csv is None and not req.specs:
            raise DatasetError("provide matrix_csv, specs, or both")
        dataset_id = req.name or f"ds-{uuid.uuid4().hex[:8]}"
        warnings: list[str] = []
        matrix = None
        if req.matrix_csv is not None:
            matrix, parse_warnings = formats.parse_matrix(req.matrix_csv)
            warnings.extend(parse_warnings)
        specs = None
        if req.specs:
            specs = [
                formats.parse_spec_object(doc, f"$.specs[{i}]")
                for i, doc in enumerate(req.specs)
            ]
        if matrix is not None and specs:
            dataset = Dataset.from_both(dataset_id, matrix, specs)
        elif matrix is not None:
            dataset = Dataset.from_matrix(dataset_id, matrix)
        else:
            assert specs is not None
            dataset = Dataset.from_specs(dataset_id, specs)
        datasets.add(dataset)
        return DatasetSummary.from_dataset(dataset, warnings)

    @app.get("/v1/datasets", response_model=list[DatasetSummary])
    def list_datasets() -> list[DatasetSummary]:
        return [DatasetSummary.from_dataset(d) for d in datasets.list()]

    @app.get("/v1/datasets/{dataset_id}", response_model=DatasetSummary)
    def get_dataset(dataset_id: str) -> DatasetSummary:
        return DatasetSummary.from_dataset(datasets.get(dataset_id))

    @app.post("/v1/sessions", response_model=SessionCreated, status_code=201)
    def create_session(req: SessionCreateRequest) -> SessionCreated:
        session = sessions.create(req.dataset_id)
        return SessionCreated(
            session_id=session.id, dataset_id=session.dataset_id, revision=session.revision
        )

    @app.post("/v1/sessions/{session_id}/observations", response_model=SessionSummary)
    def post_observation(session_id: str, req: ObservationRequest) -> SessionSummary:
        session = sessions.get(session_id)
        dataset = datasets.get(session.dataset_id)
        unknown = req.symptom not in dataset.space
        warnings: list[str] = []
        if unknown:
            detail = f"symptom {req.symptom!r} is not in dataset {dataset.id!r}"
            if req.strict:
                raise UnknownSymptomRequestError(detail)
            warnings.append(detail)
        obs = Observation(req.symptom, ObservationState(req.state))
        session = sessions.observe(session_id, obs, replace_state=req.replace)
        return SessionSummary.from_session(session, unknown_symptom=unknown, warnings=warnings)

    @app.delete("/v1/sessions/{session_id}/observations/{symptom}", response_model=SessionSummary)
    def delete_observation(session_id: str, symptom: str) -> SessionSummary:
        session = sessions.retract(session_id, symptom)
        return SessionSummary.from_session(session)

    @app.get("/v1/sessions/{session_id}/recommendation", response_model=RecommendationOut)
    def get_recommendation(session_id: str, request: Request, response: Response):
        session = sessions.get(session_id)
        dataset = datasets.get(session.dataset_id)
        etag = f'"{dataset.id}:{session.revision}"'
        if request.headers.get("if-none-match") == etag:
            return Response(status_code=304, headers={"ETag": etag})
        rec = session_recommend(dataset, session.observations, budget=app.state.budget)
        response.headers["ETag"] = etag
        return RecommendationOut(**recommendation_to_dict(rec, dataset.space))

    return app


app = create_app()
