"""Durable, hand-editable model and scenario documents.

Documents are JSON with a required schema_version. The schema is strict:
unknown keys are rejected so a typo in a hand-edited file fails loudly instead
of being silently ignored. Models live in ``models/*.model``, scenarios in
``scenarios/*.scenario``; two reference models and a worked scenario ship
inside the package and are always available read-only.

Scenario identifiers are content-hash prefixes, so saving the same overrides
twice yields the same id, and concurrent writers racing on one id fail cleanly
rather than interleaving.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import os
import tempfile
from dataclasses import dataclass, field
from datetime import datetime, timezone
from importlib import resources
from pathlib import Path
from typing import Any, Mapping

from .cascade import (
    NOT_APPLICABLE,
    CascadeModel,
    EvaluationReport,
    Factor,
    FactorProbability,
    apply_overrides,
    evaluate_cascade,
    validate_model,
)
from .econ import DeviceSpec
from .errors import NotFoundError, StorageError, ValidationError
from .grids import LogBucketDistribution, MagnitudeBucket
from .numerics import format_percent

SCHEMA_VERSION = 1
MODEL_SUFFIX = ".model"
SCENARIO_SUFFIX = ".scenario"
_SCENARIO_ID_LENGTH = 12


@dataclass(frozen=True)
class ModelDocument:
    schema_version: int
    model: CascadeModel
    distributions: dict[str, LogBucketDistribution] = field(default_factory=dict)
    device_specs: dict[str, DeviceSpec] = field(default_factory=dict)
    annotations: dict[str, str] = field(default_factory=dict)


@dataclass(frozen=True)
class ScenarioDocument:
    id: str
    base_model: str
    overrides: dict[str, FactorProbability]
    created_at: str
    note: str = ""
    schema_version: int = SCHEMA_VERSION


def _require_keys(raw: Mapping[str, Any], allowed: set[str], required: set[str], where: str):
    unknown = set(raw) - allowed
    if unknown:
        raise ValidationError(f"{where}: unknown field(s) {sorted(unknown)}")
    missing = required - set(raw)
    if missing:
        raise ValidationError(f"{where}: missing field(s) {sorted(missing)}")


def _parse_probability(value: Any, where: str) -> FactorProbability:
    if value is None or (isinstance(value, str) and value.strip().upper() == "N/A"):
        return NOT_APPLICABLE
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValidationError(f"{where}: probability must be a number or \"N/A\", got {value!r}")
    return float(value)


def _probability_to_json(value: FactorProbability) -> Any:
    return "N/A" if value is NOT_APPLICABLE else value


def _parse_factor(raw: Mapping[str, Any]) -> Factor:
    where = f"factor '{raw.get('id', '?')}'"
    _require_keys(
        raw,
        allowed={"id", "label", "group", "probability", "rationale", "source", "source_ref"},
        required={"id", "label", "group", "probability"},
        where=where,
    )
    return Factor(
        id=raw["id"],
        label=raw["label"],
        group=raw["group"],
        probability=_parse_probability(raw["probability"], where),
        rationale=raw.get("rationale", ""),
        source=raw.get("source", "manual"),
        source_ref=raw.get("source_ref"),
    )


def _parse_bucket(raw: Mapping[str, Any], unit: str, where: str) -> MagnitudeBucket:
    _require_keys(
        raw,
        allowed={"label", "lower", "upper", "open_low", "open_high"},
        required={"label", "lower", "upper"},
        where=where,
    )
    return MagnitudeBucket(
        label=raw["label"],
        lower=raw["lower"],
        upper=raw["upper"],
        unit=unit,
        open_low=bool(raw.get("open_low", False)),
        open_high=bool(raw.get("open_high", False)),
    )


def _parse_distribution(raw: Mapping[str, Any]) -> tuple[str, LogBucketDistribution]:
    where = f"distribution '{raw.get('name', '?')}'"
    _require_keys(
        raw,
        allowed={"name", "unit", "buckets", "weights"},
        required={"name", "unit", "buckets", "weights"},
        where=where,
    )
    buckets = tuple(
        _parse_bucket(b, raw["unit"], f"{where} bucket[{i}]") for i, b in enumerate(raw["buckets"])
    )
    return raw["name"], LogBucketDistribution(buckets, tuple(raw["weights"]))


def _parse_device_spec(raw: Mapping[str, Any]) -> tuple[str, DeviceSpec]:
    where = f"device spec '{raw.get('name', '?')}'"
    _require_keys(
        raw,
        allowed={"name", "useful_flops", "power_draw", "devices_per_wafer", "price_per_hour"},
        required={"name", "useful_flops", "power_draw", "devices_per_wafer"},
        where=where,
    )
    return raw["name"], DeviceSpec(
        name=raw["name"],
        useful_flops=raw["useful_flops"],
        power_draw=raw["power_draw"],
        devices_per_wafer=raw["devices_per_wafer"],
        price_per_hour=raw.get("price_per_hour"),
    )


def _unique_names(pairs, where: str) -> dict:
    out = {}
    for name, value in pairs:
        if name in out:
            raise ValidationError(f"{where}: duplicate name '{name}'")
        out[name] = value
    return out


def parse_json(data: bytes | str, where: str = "document") -> Any:
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        return json.loads(data)
    except json.JSONDecodeError as exc:
        raise StorageError(
            f"{where}: parse error at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc


def load_model(data: bytes | str, where: str = "model document") -> ModelDocument:
    """Parse and fully validate a model document from raw bytes or text."""
    raw = parse_json(data, where)
    if not isinstance(raw, dict):
        raise ValidationError(f"{where}: top level must be an object")
    _require_keys(
        raw,
        allowed={"schema_version", "model", "distributions", "device_specs", "annotations"},
        required={"schema_version", "model"},
        where=where,
    )
    if raw["schema_version"] != SCHEMA_VERSION:
        raise ValidationError(
            f"{where}: unsupported schema_version {raw['schema_version']!r} "
            f"(this build reads {SCHEMA_VERSION})"
        )
    m = raw["model"]
    _require_keys(
        m,
        allowed={"name", "horizon_year", "factors", "notes"},
        required={"name", "horizon_year", "factors"},
        where=f"{where}: model",
    )
    model = CascadeModel(
        name=m["name"],
        horizon_year=int(m["horizon_year"]),
        factors=tuple(_parse_factor(f) for f in m["factors"]),
        notes=m.get("notes", ""),
    )
    violations = validate_model(model)
    if violations:
        raise ValidationError(f"{where}: " + "; ".join(violations))

    distributions = _unique_names(
        (_parse_distribution(d) for d in raw.get("distributions", [])),
        f"{where}: distributions",
    )
    device_specs = _unique_names(
        (_parse_device_spec(d) for d in raw.get("device_specs", [])),
        f"{where}: device_specs",
    )
    annotations = raw.get("annotations", {})
    if not all(isinstance(k, str) and isinstance(v, str) for k, v in annotations.items()):
        raise ValidationError(f"{where}: annotations must map text to text")
    return ModelDocument(
        schema_version=raw["schema_version"],
        model=model,
        distributions=distributions,
        device_specs=device_specs,
        annotations=dict(annotations),
    )


def dump_model(doc: ModelDocument) -> str:
    payload = {
        "schema_version": doc.schema_version,
        "model": {
            "name": doc.model.name,
            "horizon_year": doc.model.horizon_year,
            "notes": doc.model.notes,
            "factors": [
                {
                    "id": f.id,
                    "label": f.label,
                    "group": f.group.value,
                    "probability": _probability_to_json(f.probability),
                    "rationale": f.rationale,
                    "source": f.source.value,
                    **({"source_ref": f.source_ref} if f.source_ref else {}),
                }
                for f in doc.model.factors
            ],
        },
        "distributions": [
            {
                "name": name,
                "unit": dist.unit,
                "buckets": [
                    {
                        "label": b.label,
                        "lower": b.lower,
                        "upper": b.upper,
                        **({"open_low": True} if b.open_low else {}),
                        **({"open_high": True} if b.open_high else {}),
                    }
                    for b in dist.buckets
                ],
                "weights": list(dist.weights),
            }
            for name, dist in doc.distributions.items()
        ],
        "device_specs": [
            {
                "name": s.name,
                "useful_flops": s.useful_flops,
                "power_draw": s.power_draw,
                "devices_per_wafer": s.devices_per_wafer,
                **({"price_per_hour": s.price_per_hour} if s.price_per_hour is not None else {}),
            }
            for s in doc.device_specs.values()
        ],
        "annotations": doc.annotations,
    }
    return json.dumps(payload, indent=2) + "\n"


def load_scenario(data: bytes | str, where: str = "scenario document") -> ScenarioDocument:
    raw = parse_json(data, where)
    if not isinstance(raw, dict):
        raise ValidationError(f"{where}: top level must be an object")
    _require_keys(
        raw,
        allowed={"schema_version", "id", "base_model", "overrides", "created_at", "note"},
        required={"schema_version", "id", "base_model", "overrides", "created_at"},
        where=where,
    )
    if raw["schema_version"] != SCHEMA_VERSION:
        raise ValidationError(f"{where}: unsupported schema_version {raw['schema_version']!r}")
    overrides = {
        fid: _parse_probability(v, f"{where}: override '{fid}'")
        for fid, v in raw["overrides"].items()
    }
    return ScenarioDocument(
        id=raw["id"],
        base_model=raw["base_model"],
        overrides=overrides,
        created_at=raw["created_at"],
        note=raw.get("note", ""),
    )


def dump_scenario(doc: ScenarioDocument) -> str:
    payload = {
        "schema_version": doc.schema_version,
        "id": doc.id,
        "base_model": doc.base_model,
        "overrides": {k: _probability_to_json(v) for k, v in doc.overrides.items()},
        "created_at": doc.created_at,
        "note": doc.note,
    }
    return json.dumps(payload, indent=2) + "\n"


def scenario_id(base_model: str, overrides: Mapping[str, FactorProbability], note: str) -> str:
    """Deterministic content-hash prefix over what the scenario means."""
    canonical = json.dumps(
        {
            "base_model": base_model,
            "overrides": {k: _probability_to_json(v) for k, v in sorted(overrides.items())},
            "note": note,
        },
        sort_keys=True,
    )
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:_SCENARIO_ID_LENGTH]


def bundled_data_dir() -> Path:
    """Package directory holding the reference documents."""
    return Path(str(resources.files("cascadecalc") / "data"))


class ModelStore:
    """Bundled reference documents plus a user data directory.

    Reads are freely concurrent. Scenario writes publish atomically via a
    hard link, so two writers racing on the same id cannot interleave: the
    second one either sees identical content (idempotent success) or fails.
    """

    def __init__(self, data_dir: str | Path | None = None):
        if data_dir is None:
            data_dir = os.environ.get("CASCADE_DATA_DIR") or (
                Path.home() / ".cascadecalc"
            )
        self.data_dir = Path(data_dir)
        self.bundled_dir = bundled_data_dir()

    # -- models --------------------------------------------------------------

    def _model_paths(self) -> dict[str, Path]:
        paths: dict[str, Path] = {}
        for base in (self.bundled_dir / "models", self.data_dir / "models"):
            if base.is_dir():
                for path in sorted(base.glob(f"*{MODEL_SUFFIX}")):
                    paths[path.stem] = path
        return paths

    def list_models(self) -> list[str]:
        return sorted(self._model_paths())

    def get_model(self, model_id: str) -> ModelDocument:
        path = self._model_paths().get(model_id)
        if path is None:
            raise NotFoundError(f"no model '{model_id}' in the store")
        try:
            data = path.read_bytes()
        except OSError as exc:
            raise StorageError(f"cannot read model '{model_id}': {exc}") from exc
        return load_model(data, where=f"model '{model_id}'")

    def add_model(self, doc: ModelDocument) -> str:
        """Install a user model; bundled reference documents cannot be shadowed."""
        model_id = doc.model.name
        bundled = self.bundled_dir / "models" / f"{model_id}{MODEL_SUFFIX}"
        if bundled.exists():
            raise StorageError(f"'{model_id}' is a bundled reference model and is read-only")
        target = self.data_dir / "models" / f"{model_id}{MODEL_SUFFIX}"
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(dump_model(doc), encoding="utf-8")
        return model_id

    # -- scenarios -------------------------------------------------------------

    def _scenario_paths(self) -> dict[str, Path]:
        paths: dict[str, Path] = {}
        for base in (self.bundled_dir / "scenarios", self.data_dir / "scenarios"):
            if base.is_dir():
                for path in sorted(base.glob(f"*{SCENARIO_SUFFIX}")):
                    paths[path.stem] = path
        return paths

    def list_scenarios(self) -> list[ScenarioDocument]:
        return [self.get_scenario(sid) for sid in sorted(self._scenario_paths())]

    def get_scenario(self, scenario_id_: str) -> ScenarioDocument:
        path = self._scenario_paths().get(scenario_id_)
        if path is None:
            raise NotFoundError(f"no scenario '{scenario_id_}' in the store")
        try:
            data = path.read_bytes()
        except OSError as exc:
            raise StorageError(f"cannot read scenario '{scenario_id_}': {exc}") from exc
        doc = load_scenario(data, where=f"scenario '{scenario_id_}'")
        self._check_scenario_base(doc)
        return doc

    def _check_scenario_base(self, doc: ScenarioDocument):
        if doc.base_model not in self._model_paths():
            raise NotFoundError(
                f"scenario '{doc.id}' references unknown base model '{doc.base_model}'"
            )

    def save_scenario(
        self,
        base_model: str,
        overrides: Mapping[str, FactorProbability],
        note: str = "",
    ) -> ScenarioDocument:
        """Persist a scenario; returns the stored document with its stable id."""
        base = self.get_model(base_model)
        apply_overrides(base.model, overrides)  # validates factor ids and ranges
        sid = scenario_id(base_model, overrides, note)
        doc = ScenarioDocument(
            id=sid,
            base_model=base_model,
            overrides=dict(overrides),
            created_at=datetime.now(timezone.utc).isoformat(timespec="seconds"),
            note=note,
        )
        content = dump_scenario(doc)

        target_dir = self.data_dir / "scenarios"
        target_dir.mkdir(parents=True, exist_ok=True)
        target = target_dir / f"{sid}{SCENARIO_SUFFIX}"
        bundled = self.bundled_dir / "scenarios" / f"{sid}{SCENARIO_SUFFIX}"
        if bundled.exists() or target.exists():
            raise StorageError(f"scenario '{sid}' already exists")

        fd, tmp_name = tempfile.mkstemp(dir=target_dir, suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                fh.write(content)
            try:
                os.link(tmp_name, target)
            except FileExistsError:
                raise StorageError(f"scenario '{sid}' already exists") from None
        except OSError as exc:
            raise StorageError(f"cannot write scenario '{sid}': {exc}") from exc
        finally:
            try:
                os.unlink(tmp_name)
            except OSError:
                pass
        return doc

    # -- evaluation helpers ------------------------------------------------------

    def evaluate_model(
        self, model_id: str, overrides: Mapping[str, FactorProbability] | None = None
    ) -> EvaluationReport:
        doc = self.get_model(model_id)
        model = apply_overrides(doc.model, overrides or {})
        return evaluate_cascade(model)

    def evaluate_scenario(self, scenario_id_: str) -> EvaluationReport:
        sc = self.get_scenario(scenario_id_)
        return self.evaluate_model(sc.base_model, sc.overrides)


def export_report(model: CascadeModel, fmt: str = "text", precise: bool = False) -> str:
    """Render the summary table: one row per factor with the running product,
    ending with the joint odds. Percentages print at one decimal place unless
    full precision is requested.
    """
    report = evaluate_cascade(model)
    show = repr if precise else format_percent
    labels = {f.id: f.label for f in model.factors}

    rows = []
    for c in report.per_factor:
        rows.append(
            (
                labels[c.factor_id],
                "N/A" if model.factor(c.factor_id).is_not_applicable else show(c.probability_used),
                show(c.cumulative),
            )
        )
    rows.append(("Joint odds", show(report.joint_odds), ""))

    if fmt == "csv":
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["event", "probability", "running product"])
        writer.writerows(rows)
        return out.getvalue()
    if fmt == "doc":
        return json.dumps(
            {
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
            },
            indent=2,
        )
    header = ("Event", "Probability", "Running product")
    widths = [
        max(len(header[i]), max(len(r[i]) for r in rows)) for i in range(3)
    ]
    lines = ["  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip()]
    lines.append("  ".join("-" * w for w in widths))
    for r in rows:
        lines.append("  ".join(cell.ljust(w) for cell, w in zip(r, widths)).rstrip())
    return "\n".join(lines) + "\n"
