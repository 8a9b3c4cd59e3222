import json

import pytest

from cascadecalc import NOT_APPLICABLE, NotFoundError, StorageError, ValidationError
from cascadecalc.store import (
    ModelStore,
    dump_model,
    dump_scenario,
    export_report,
    load_model,
    load_scenario,
    scenario_id,
)

JOINT_2043 = 0.003996179712


def test_bundled_models_load_and_evaluate(store):
    assert store.list_models() == ["tagi-2043", "tagi-2100"]
    assert store.evaluate_model("tagi-2043").joint_odds == pytest.approx(JOINT_2043, abs=1e-12)
    assert store.evaluate_model("tagi-2100").joint_odds == pytest.approx(0.40692671105625, abs=1e-12)


def test_get_unknown_model(store):
    with pytest.raises(NotFoundError):
        store.get_model("nope")


def test_load_model_rejects_bad_probability(tagi2043):
    raw = json.loads(dump_model(tagi2043))
    raw["model"]["factors"][0]["probability"] = 1.3
    with pytest.raises(ValidationError) as err:
        load_model(json.dumps(raw))
    assert "algorithms" in str(err.value)


def test_load_model_rejects_unknown_fields(tagi2043):
    raw = json.loads(dump_model(tagi2043))
    raw["model"]["factors"][0]["probabilty"] = 0.5  # typo must not pass silently
    with pytest.raises(ValidationError) as err:
        load_model(json.dumps(raw))
    assert "probabilty" in str(err.value)

    raw = json.loads(dump_model(tagi2043))
    raw["extra_top_level"] = {}
    with pytest.raises(ValidationError):
        load_model(json.dumps(raw))


def test_load_model_rejects_bad_schema_version(tagi2043):
    raw = json.loads(dump_model(tagi2043))
    raw["schema_version"] = 99
    with pytest.raises(ValidationError):
        load_model(json.dumps(raw))


def test_parse_error_carries_position():
    with pytest.raises(StorageError) as err:
        load_model(b'{"schema_version": 1,,}')
    assert "line 1" in str(err.value)


def test_model_round_trip(tagi2043):
    text = dump_model(tagi2043)
    again = load_model(text)
    assert again.model == tagi2043.model
    assert again.distributions == tagi2043.distributions
    assert again.device_specs == tagi2043.device_specs
    assert again.annotations == tagi2043.annotations
    assert dump_model(again) == text


def test_scenario_save_reload_round_trip(store):
    doc = store.save_scenario("tagi-2043", {"robots": 1.0}, note="no robot gap")
    assert doc.id == scenario_id("tagi-2043", {"robots": 1.0}, "no robot gap")
    again = store.get_scenario(doc.id)
    assert again.overrides == {"robots": 1.0}
    report = store.evaluate_scenario(doc.id)
    assert report.joint_odds == pytest.approx(JOINT_2043 / 0.60, rel=1e-12)

    path = store.data_dir / "scenarios" / f"{doc.id}.scenario"
    assert load_scenario(path.read_bytes()) == again
    assert dump_scenario(again) == path.read_text()


def test_scenario_with_na_override_round_trips(store):
    doc = store.save_scenario("tagi-2043", {"learning-speed": NOT_APPLICABLE})
    again = store.get_scenario(doc.id)
    assert again.overrides["learning-speed"] is NOT_APPLICABLE
    assert store.evaluate_scenario(doc.id).joint_odds == pytest.approx(
        JOINT_2043 / 0.40, rel=1e-12
    )


def test_scenario_empty_overrides(store):
    doc = store.save_scenario("tagi-2043", {})
    assert store.evaluate_scenario(doc.id).joint_odds == pytest.approx(JOINT_2043, abs=1e-12)


def test_scenario_unknown_base_model(store):
    with pytest.raises(NotFoundError):
        store.save_scenario("missing-model", {"robots": 1.0})


def test_scenario_invalid_override_rejected(store):
    with pytest.raises(NotFoundError):
        store.save_scenario("tagi-2043", {"bogus": 0.5})
    with pytest.raises(ValidationError):
        store.save_scenario("tagi-2043", {"robots": 1.5})


def test_scenario_duplicate_write_fails(store):
    store.save_scenario("tagi-2043", {"robots": 1.0})
    with pytest.raises(StorageError) as err:
        store.save_scenario("tagi-2043", {"robots": 1.0})
    assert "already exists" in str(err.value)


def test_bundled_scenario_listed(store):
    ids = [s.id for s in store.list_scenarios()]
    assert "7b39abdd784e" in ids
    report = store.evaluate_scenario("7b39abdd784e")
    assert report.joint_odds == pytest.approx(0.14095872, abs=1e-12)


def test_bundled_models_not_shadowable(store, tagi2043):
    with pytest.raises(StorageError):
        store.add_model(tagi2043)


def test_user_model_added_and_listed(store, tagi2043):
    import dataclasses

    renamed = dataclasses.replace(
        tagi2043, model=dataclasses.replace(tagi2043.model, name="my-variant")
    )
    store.add_model(renamed)
    assert "my-variant" in store.list_models()
    assert store.evaluate_model("my-variant").joint_odds == pytest.approx(JOINT_2043, abs=1e-12)


def test_export_report_reference_rows(tagi2043, tagi2100):
    text = export_report(tagi2043.model)
    assert text.rstrip().splitlines()[-1].startswith("Joint odds")
    assert "0.4%" in text.rstrip().splitlines()[-1]

    text2100 = export_report(tagi2100.model)
    last = text2100.rstrip().splitlines()[-1]
    assert "40.7%" in last  # full-precision 0.40693 at the one-decimal display rule
    assert "N/A" in text2100

    csv_text = export_report(tagi2043.model, fmt="csv")
    assert csv_text.splitlines()[0] == "event,probability,running product"
    assert csv_text.rstrip().splitlines()[-1].startswith("Joint odds,0.4%")

    doc_text = json.loads(export_report(tagi2043.model, fmt="doc"))
    assert doc_text["joint_odds"] == pytest.approx(JOINT_2043, abs=1e-12)


def test_export_report_all_ones(tagi2043):
    from cascadecalc import apply_overrides

    ones = apply_overrides(
        tagi2043.model, {f.id: 1.0 for f in tagi2043.model.factors}
    )
    assert "100.0%" in export_report(ones).rstrip().splitlines()[-1]


def test_data_dir_env_override(tmp_path, monkeypatch):
    monkeypatch.setenv("CASCADE_DATA_DIR", str(tmp_path / "envdata"))
    assert ModelStore().data_dir == tmp_path / "envdata"
    assert ModelStore(data_dir=tmp_path / "explicit").data_dir == tmp_path / "explicit"


def test_corrupted_bundled_file_is_storage_error(store, tmp_path, monkeypatch):
    import shutil

    broken = tmp_path / "bundled"
    shutil.copytree(store.bundled_dir, broken)
    (broken / "models" / "tagi-2043.model").write_text("{not json", encoding="utf-8")
    monkeypatch.setattr(store, "bundled_dir", broken)
    with pytest.raises(StorageError):
        store.get_model("tagi-2043")
