"""Local HTTP interface over the workbench for the companion UI and scripts.

Every endpoint is a thin transport over the corresponding library operation;
request and response bodies use the same JSON grammar as the document store,
numbers at full precision. Errors are structured payloads with a code that
drives the HTTP status: bad-request 400, not-found 404, infeasible 422,
storage 409. The service binds to loopback by default and has no
authentication: it is a local decision-support tool, not a shared deployment.
"""

from __future__ import annotations

from pathlib import Path
from typing import Any, Mapping

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from .aggregate import extremize
from .cascade import NOT_APPLICABLE, EvaluationReport, apply_overrides, evaluate_cascade
from .errors import (
    CascadeError,
    InfeasibleError,
    NotFoundError,
    StorageError,
    ValidationError,
)
from .grids import JointGrid, LogBucketDistribution, QualifierRule, build_joint_grid
from .hazard import HorizonRisk, rescale
from .sensitivity import FactorSubset, scale_factors, solve_uniform_multiplier, tornado
from .store import ModelStore, _parse_distribution, _parse_probability, dump_model, parse_json

_STATUS = {"bad-request": 400, "not-found": 404, "infeasible": 422, "storage": 409}


def _error_response(code: str, message: str, detail: Any = None) -> JSONResponse:
    body: dict[str, Any] = {"code": code, "message": message}
    if detail is not None:
        body["detail"] = detail
    return JSONResponse(status_code=_STATUS[code], content=body)


def _overrides_from_json(raw: Mapping[str, Any]) -> dict:
    return {fid: _parse_probability(v, f"override '{fid}'") for fid, v in raw.items()}


def _report_to_json(report: EvaluationReport) -> dict:
    return {
        "model": report.model_name,
        "joint_odds": report.joint_odds,
        "per_factor": [
            {
                "factor_id": c.factor_id,
                "probability": c.probability_used,
                "cumulative": c.cumulative,
            }
            for c in report.per_factor
        ],
    }


def _grid_to_json(grid: JointGrid) -> dict:
    return {
        "qualifying_mass": grid.qualifying_mass,
        "threshold": grid.rule.threshold,
        "strict": grid.rule.strict,
        "row_labels": [b.label for b in grid.row_dist.buckets],
        "col_labels": [b.label for b in grid.col_dist.buckets],
        "cell_cost": [list(r) for r in grid.cell_cost],
        "cell_mass": [list(r) for r in grid.cell_mass],
        "cell_qualifies": [list(r) for r in grid.cell_qualifies],
    }


def _subset_from_json(raw: Any) -> FactorSubset:
    if raw is None or raw == "all":
        return FactorSubset.all()
    if isinstance(raw, str):
        return FactorSubset.by_group(raw)
    if isinstance(raw, Mapping):
        if "group" in raw:
            return FactorSubset.by_group(raw["group"])
        if "ids" in raw:
            return FactorSubset.by_ids(raw["ids"])
    raise ValidationError(
        "subset must be \"all\", a group name, {\"group\": ...} or {\"ids\": [...]}"
    )


def _require(body: Mapping[str, Any], key: str) -> Any:
    if key not in body:
        raise ValidationError(f"request body is missing '{key}'")
    return body[key]


def _distribution_from_json(raw: Any, fallback_unit: str) -> LogBucketDistribution:
    if not isinstance(raw, Mapping):
        raise ValidationError("distribution must be an object with buckets and weights")
    data = dict(raw)
    data.setdefault("name", "inline")
    data.setdefault("unit", fallback_unit)
    _, dist = _parse_distribution(data)
    return dist


def create_app(store: ModelStore | None = None, ui_dir: str | Path | None = None) -> FastAPI:
    store = store or ModelStore()
    app = FastAPI(title="cascadecalc", docs_url=None, redoc_url=None)

    @app.exception_handler(RequestValidationError)
    async def handle_request_validation(request: Request, exc: RequestValidationError):
        return _error_response("bad-request", f"malformed request body: {exc.errors()[:1]}")

    @app.exception_handler(ValueError)
    async def handle_value_error(request: Request, exc: ValueError):
        return _error_response("bad-request", f"malformed value in request: {exc}")

    @app.exception_handler(CascadeError)
    async def handle_cascade_error(request: Request, exc: CascadeError):
        if isinstance(exc, NotFoundError):
            return _error_response("not-found", str(exc))
        if isinstance(exc, InfeasibleError):
            return _error_response(
                "infeasible", str(exc), detail={"max_achievable": exc.max_achievable}
            )
        if isinstance(exc, StorageError):
            return _error_response("storage", str(exc))
        return _error_response("bad-request", str(exc))

    @app.get("/api/models")
    def list_models():
        models = []
        for model_id in store.list_models():
            doc = store.get_model(model_id)
            models.append(
                {
                    "id": model_id,
                    "name": doc.model.name,
                    "horizon_year": doc.model.horizon_year,
                    "joint_odds": evaluate_cascade(doc.model).joint_odds,
                    "factor_count": len(doc.model.factors),
                }
            )
        return {"models": models}

    @app.get("/api/models/{model_id}")
    def get_model(model_id: str):
        doc = store.get_model(model_id)
        return JSONResponse(content=parse_json(dump_model(doc)))

    @app.post("/api/evaluate")
    def evaluate(body: dict):
        model_id = _require(body, "model")
        overrides = _overrides_from_json(body.get("overrides", {}))
        doc = store.get_model(model_id)
        report = evaluate_cascade(apply_overrides(doc.model, overrides))
        return _report_to_json(report)

    @app.post("/api/solve")
    def solve(body: dict):
        model_id = _require(body, "model")
        target = float(_require(body, "target"))
        subset = _subset_from_json(body.get("subset"))
        overrides = _overrides_from_json(body.get("overrides", {}))
        model = apply_overrides(store.get_model(model_id).model, overrides)
        multiplier = solve_uniform_multiplier(model, target, subset)
        scaled = model if multiplier == 1.0 else scale_factors(model, multiplier, subset)
        report = evaluate_cascade(scaled)
        return {
            "multiplier": multiplier,
            "achieved_joint": report.joint_odds,
            "scaled_factors": {
                f.id: (None if f.is_not_applicable else f.effective_probability)
                for f in scaled.factors
            },
        }

    @app.post("/api/tornado")
    def tornado_endpoint(body: dict):
        model_id = _require(body, "model")
        raw_ranges = _require(body, "ranges")
        overrides = _overrides_from_json(body.get("overrides", {}))
        model = apply_overrides(store.get_model(model_id).model, overrides)
        ranges = {}
        for fid, bounds in raw_ranges.items():
            if not isinstance(bounds, (list, tuple)) or len(bounds) != 2:
                raise ValidationError(f"range for '{fid}' must be [low, high]")
            ranges[fid] = (float(bounds[0]), float(bounds[1]))
        entries = tornado(model, ranges)
        return {
            "entries": [
                {
                    "factor_id": e.factor_id,
                    "low_input": e.low_input,
                    "high_input": e.high_input,
                    "joint_low": e.joint_low,
                    "joint_high": e.joint_high,
                }
                for e in entries
            ]
        }

    @app.post("/api/grids/evaluate")
    def grids_evaluate(body: dict):
        rows = _distribution_from_json(_require(body, "rows"), "FLOPS")
        cols = _distribution_from_json(_require(body, "cols"), "FLOPS/$-hr")
        rule = QualifierRule(
            threshold=float(_require(body, "threshold")),
            strict=bool(body.get("strict", True)),
        )
        return _grid_to_json(build_joint_grid(rows, cols, rule))

    @app.post("/api/hazard/rescale")
    def hazard_rescale(body: dict):
        risk = HorizonRisk(
            probability=float(_require(body, "probability")),
            horizon_years=float(_require(body, "horizon_years")),
        )
        out = rescale(risk, float(_require(body, "target_years")))
        return {"probability": out.probability, "horizon_years": out.horizon_years}

    @app.post("/api/aggregate/extremize")
    def aggregate_extremize(body: dict):
        return {
            "probability": extremize(
                float(_require(body, "probability")), float(_require(body, "exponent"))
            )
        }

    @app.get("/api/scenarios")
    def list_scenarios():
        return {
            "scenarios": [
                {
                    "id": s.id,
                    "base_model": s.base_model,
                    "overrides": {
                        k: (None if v is NOT_APPLICABLE else v) for k, v in s.overrides.items()
                    },
                    "created_at": s.created_at,
                    "note": s.note,
                }
                for s in store.list_scenarios()
            ]
        }

    @app.post("/api/scenarios")
    def save_scenario(body: dict):
        doc = store.save_scenario(
            base_model=_require(body, "base_model"),
            overrides=_overrides_from_json(body.get("overrides", {})),
            note=body.get("note", ""),
        )
        return {
            "id": doc.id,
            "base_model": doc.base_model,
            "created_at": doc.created_at,
            "note": doc.note,
        }

    if ui_dir is not None and Path(ui_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app


def default_ui_dir() -> Path | None:
    """The built companion UI, when the frontend has been compiled in-tree."""
    candidate = Path(__file__).resolve().parents[2] / "frontend" / "dist"
    return candidate if candidate.is_dir() else None
