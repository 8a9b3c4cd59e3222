import pytest
from fastapi.testclient import TestClient

from cascadecalc import QualifierRule, build_joint_grid, evaluate_cascade
from cascadecalc.api import create_app
from cascadecalc.hazard import HorizonRisk, rescale

JOINT_2043 = 0.003996179712


@pytest.fixture()
def client(store):
    return TestClient(create_app(store=store))


def snapshot(store):
    files = sorted(p for p in store.data_dir.rglob("*") if p.is_file())
    return [(p, p.read_bytes()) for p in files]


def test_list_models(client):
    body = client.get("/api/models").json()
    ids = [m["id"] for m in body["models"]]
    assert ids == ["tagi-2043", "tagi-2100"]
    by_id = {m["id"]: m for m in body["models"]}
    assert by_id["tagi-2043"]["joint_odds"] == pytest.approx(JOINT_2043, abs=1e-12)


def test_get_model_document(client, tagi2043):
    body = client.get("/api/models/tagi-2043").json()
    assert body["model"]["name"] == "tagi-2043"
    probs = [f["probability"] for f in body["model"]["factors"]]
    assert probs == [0.60, 0.40, 0.16, 0.60, 0.46, 0.70, 0.90, 0.70, 0.90, 0.95]
    assert {d["name"] for d in body["distributions"]} >= {
        "agi-compute-needs",
        "compute-efficiency",
    }


def test_get_model_not_found(client):
    resp = client.get("/api/models/nope")
    assert resp.status_code == 404
    body = resp.json()
    assert body["code"] == "not-found" and body["message"]


def test_evaluate_baseline(client):
    resp = client.post("/api/evaluate", json={"model": "tagi-2043", "overrides": {}})
    assert resp.status_code == 200
    body = resp.json()
    assert body["joint_odds"] == pytest.approx(JOINT_2043, abs=1e-12)
    assert body["per_factor"][-1]["cumulative"] == body["joint_odds"]


def test_evaluate_override_and_equivalence(client, tagi2043):
    resp = client.post(
        "/api/evaluate", json={"model": "tagi-2043", "overrides": {"war-derailment": 1.0}}
    )
    body = resp.json()
    assert body["joint_odds"] == pytest.approx(0.00570882816, rel=1e-12)
    # golden equivalence with the library path
    from cascadecalc import apply_overrides

    direct = evaluate_cascade(apply_overrides(tagi2043.model, {"war-derailment": 1.0}))
    assert body["joint_odds"] == direct.joint_odds


def test_evaluate_unknown_factor_is_bad_request(client):
    resp = client.post("/api/evaluate", json={"model": "tagi-2043", "overrides": {"bogus": 0.5}})
    assert resp.status_code == 404 or resp.status_code == 400
    body = resp.json()
    assert body["code"] in ("bad-request", "not-found")
    assert "bogus" in body["message"]


def test_evaluate_na_override(client):
    resp = client.post(
        "/api/evaluate", json={"model": "tagi-2043", "overrides": {"robots": "N/A"}}
    )
    assert resp.json()["joint_odds"] == pytest.approx(JOINT_2043 / 0.60, rel=1e-12)


def test_solve_identity(client):
    resp = client.post(
        "/api/solve", json={"model": "tagi-2043", "target": JOINT_2043, "subset": "all"}
    )
    assert resp.json()["multiplier"] == pytest.approx(1.0, abs=1e-9)


def test_solve_ten_percent(client):
    resp = client.post("/api/solve", json={"model": "tagi-2043", "target": 0.10, "subset": "all"})
    body = resp.json()
    assert body["achieved_joint"] == pytest.approx(0.10, abs=1e-6)
    assert body["multiplier"] > 1.0
    assert set(body["scaled_factors"]) == {
        "algorithms", "learning-speed", "inference-cost", "robots", "chips-and-power",
        "regulation", "ai-delay", "war-derailment", "pandemic-derailment",
        "depression-derailment",
    }


def test_solve_infeasible_carries_max_achievable(client):
    controllable = [
        "algorithms", "learning-speed", "inference-cost", "robots", "chips-and-power",
        "regulation", "ai-delay",
    ]
    resp = client.post(
        "/api/solve",
        json={"model": "tagi-2043", "target": 0.99, "subset": {"ids": controllable}},
    )
    assert resp.status_code == 422
    body = resp.json()
    assert body["code"] == "infeasible"
    assert body["detail"]["max_achievable"] == pytest.approx(0.5985, abs=1e-12)


def test_tornado_endpoint(client):
    resp = client.post(
        "/api/tornado",
        json={"model": "tagi-2043", "ranges": {"inference-cost": [0.05, 0.50]}},
    )
    entry = resp.json()["entries"][0]
    assert entry["joint_low"] == pytest.approx(0.00124880616, rel=1e-12)
    assert entry["joint_high"] == pytest.approx(0.0124880616, rel=1e-12)


def test_grids_evaluate_matches_library(client, tagi2043):
    rows = tagi2043.distributions["agi-compute-needs"]
    cols = tagi2043.distributions["compute-efficiency"]

    def dist_json(d):
        return {
            "unit": d.unit,
            "buckets": [
                {
                    "label": b.label,
                    "lower": b.lower,
                    "upper": b.upper,
                    "open_low": b.open_low,
                    "open_high": b.open_high,
                }
                for b in d.buckets
            ],
            "weights": list(d.weights),
        }

    resp = client.post(
        "/api/grids/evaluate",
        json={"rows": dist_json(rows), "cols": dist_json(cols), "threshold": 25.0, "strict": True},
    )
    body = resp.json()
    grid = build_joint_grid(rows, cols, QualifierRule(25.0, strict=True))
    assert body["qualifying_mass"] == grid.qualifying_mass == pytest.approx(0.156, abs=1e-9)
    assert body["cell_mass"] == [list(r) for r in grid.cell_mass]


def test_hazard_rescale_endpoint(client):
    resp = client.post(
        "/api/hazard/rescale",
        json={"probability": 0.14, "horizon_years": 5, "target_years": 15},
    )
    body = resp.json()
    assert body["probability"] == pytest.approx(0.3644, abs=5e-4)
    assert body["probability"] == rescale(HorizonRisk(0.14, 5), 15).probability
    assert body["horizon_years"] == 15


def test_extremize_endpoint(client):
    resp = client.post("/api/aggregate/extremize", json={"probability": 0.5, "exponent": 3.0})
    assert resp.json()["probability"] == 0.5


def test_scenario_save_and_list(client, store):
    resp = client.post(
        "/api/scenarios",
        json={"base_model": "tagi-2043", "overrides": {"robots": 1.0}, "note": "ui save"},
    )
    assert resp.status_code == 200
    sid = resp.json()["id"]

    listed = client.get("/api/scenarios").json()["scenarios"]
    assert sid in {s["id"] for s in listed}

    evaluated = client.post(
        "/api/evaluate",
        json={"model": "tagi-2043", "overrides": {"robots": 1.0}},
    ).json()
    assert evaluated["joint_odds"] == pytest.approx(0.00666029952, rel=1e-12)


def test_scenario_duplicate_save_conflict(client):
    payload = {"base_model": "tagi-2043", "overrides": {"robots": 1.0}, "note": "dup"}
    assert client.post("/api/scenarios", json=payload).status_code == 200
    resp = client.post("/api/scenarios", json=payload)
    assert resp.status_code == 409
    assert resp.json()["code"] == "storage"


def test_scenario_save_unknown_base(client):
    resp = client.post("/api/scenarios", json={"base_model": "nope", "overrides": {}})
    assert resp.status_code == 404


def test_malformed_body_is_structured_error(client):
    resp = client.post("/api/evaluate", json={"overrides": {}})
    assert resp.status_code == 400
    assert resp.json()["code"] == "bad-request"


def test_compute_endpoints_leave_store_untouched(client, store):
    before = snapshot(store)
    client.post("/api/evaluate", json={"model": "tagi-2043", "overrides": {"robots": 0.9}})
    client.post("/api/tornado", json={"model": "tagi-2043", "ranges": {"robots": [0.1, 0.9]}})
    client.post("/api/solve", json={"model": "tagi-2043", "target": 0.05, "subset": "all"})
    client.post("/api/hazard/rescale", json={"probability": 0.1, "horizon_years": 5, "target_years": 10})
    assert snapshot(store) == before
