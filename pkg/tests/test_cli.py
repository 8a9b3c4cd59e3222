import json

import pytest

from cascadecalc.cli import main


@pytest.fixture()
def run(tmp_path, capsys):
    data_dir = str(tmp_path / "userdata")

    def invoke(*argv):
        code = main(["--data-dir", data_dir, *argv])
        captured = capsys.readouterr()
        return code, captured.out, captured.err

    return invoke


def test_evaluate_reference_model(run):
    code, out, err = run("evaluate", "--model", "tagi-2043")
    assert code == 0 and err == ""
    last = out.rstrip().splitlines()[-1]
    assert last.startswith("Joint odds") and "0.4%" in last


def test_evaluate_with_override(run):
    code, out, _ = run("evaluate", "--model", "tagi-2043", "--override", "robots=1.0",
                       "--format", "doc")
    assert code == 0
    assert json.loads(out)["joint_odds"] == pytest.approx(0.00666029952, rel=1e-12)


def test_evaluate_unknown_model_exits_1(run):
    code, out, err = run("evaluate", "--model", "missing")
    assert code == 1 and out == "" and "missing" in err


def test_unknown_flag_exits_1(run):
    code, _, err = run("evaluate", "--model", "tagi-2043", "--frobnicate")
    assert code == 1 and "frobnicate" in err


def test_hazard_rescale(run):
    code, out, _ = run("hazard", "rescale", "--p", "0.14", "--from", "5", "--to", "10")
    assert code == 0
    assert out.strip() == "0.2604"


def test_hazard_survival(run):
    code, out, _ = run("hazard", "survival", "--event", "0.10,0.70", "--event", "0.05,1.0")
    assert code == 0
    assert float(out) == pytest.approx(0.93 * 0.95, rel=1e-12)


def test_grid_eval(run):
    code, out, _ = run("grid", "eval", "--model", "tagi-2043", "--precise")
    assert code == 0
    assert "0.156" in out
    code, out, _ = run("grid", "eval", "--model", "tagi-2043", "--inclusive", "--precise")
    assert "0.256" in out


def test_grid_expect_linked(run):
    wafer = "0.99,0.99,0.90,0.50,0.10,0.05,0.02"
    power = "0.99,0.99,0.95,0.67,0.33,0.05,0.005"
    code, out, _ = run(
        "grid", "expect", "--model", "tagi-2043", "--dist", "wafer-need",
        "--achievement", wafer, "--linked", power, "--precise",
    )
    assert code == 0
    assert float(out) == pytest.approx(0.4551142857142857, abs=1e-12)


def test_econ_subcommands(run):
    code, out, _ = run("econ", "inference-cost", "--flops", "1e20", "--efficiency", "4e14")
    assert code == 0 and float(out) == pytest.approx(250000.0)
    code, out, _ = run("econ", "cagr", "--target", "2e5", "--base", "2e4", "--years", "15")
    assert float(out) == pytest.approx(0.1659, abs=1e-4)
    code, out, _ = run("econ", "bill", "--format", "csv")
    assert code == 0 and "1E+08" in out


def test_aggregate_subcommands(run):
    code, out, _ = run("aggregate", "extremize", "--p", "0.5", "--exponent", "3.0")
    assert code == 0 and float(out) == 0.5
    code, out, _ = run("aggregate", "solve-exponent", "--p-in", "0.30", "--p-out", "0.15")
    assert float(out) == pytest.approx(2.0472, abs=1e-3)
    code, out, _ = run("aggregate", "prior", "--favorable", "2", "--total", "22")
    assert float(out) == pytest.approx(2 / 22, abs=1e-6)


def test_tornado_command(run):
    code, out, _ = run(
        "tornado", "--model", "tagi-2043", "--range", "inference-cost=0.05:0.5",
        "--format", "doc",
    )
    assert code == 0
    entry = json.loads(out)[0]
    assert entry["joint_low"] == pytest.approx(0.00124880616, rel=1e-12)


def test_solve_feasible(run):
    code, out, _ = run("solve", "--model", "tagi-2043", "--target", "0.10", "--format", "doc")
    assert code == 0
    body = json.loads(out)
    assert body["achieved_joint"] == pytest.approx(0.10, abs=1e-6)


def test_solve_infeasible_exits_2(run):
    code, out, err = run(
        "solve", "--model", "tagi-2043", "--target", "0.5", "--subset", "sociopolitical"
    )
    assert code == 2
    assert out == ""
    assert "max achievable" in err


def test_export_scenario_round_trip(run, tmp_path):
    from cascadecalc.store import ModelStore

    store = ModelStore(data_dir=tmp_path / "userdata")
    doc = store.save_scenario("tagi-2043", {"robots": 1.0}, note="cli test")
    code, out, _ = run("export", "--scenario", doc.id)
    assert code == 0
    assert "0.7%" in out.rstrip().splitlines()[-1]


def test_cli_matches_library_bit_for_bit(run, tmp_path):
    from cascadecalc import apply_overrides, evaluate_cascade
    from cascadecalc.store import ModelStore

    store = ModelStore(data_dir=tmp_path / "userdata")
    doc = store.get_model("tagi-2043")

    code, out, _ = run("evaluate", "--model", "tagi-2043", "--format", "doc")
    assert code == 0
    assert json.loads(out)["joint_odds"] == evaluate_cascade(doc.model).joint_odds

    code, out, _ = run("evaluate", "--model", "tagi-2043", "--override", "robots=0.5",
                       "--format", "doc")
    direct = evaluate_cascade(apply_overrides(doc.model, {"robots": 0.5}))
    assert json.loads(out)["joint_odds"] == direct.joint_odds


def test_reproduce_full_run(run):
    code, out, err = run("reproduce")
    assert code == 0, err
    assert "checks passed" in out
    assert "FAIL" not in out


def test_reproduce_only_subset(run):
    code, out, _ = run("reproduce", "--only", "hazard")
    assert code == 0
    assert "hazard/" in out and "econ/" not in out


def test_reproduce_csv_format(run):
    code, out, _ = run("reproduce", "--format", "csv")
    assert code == 0
    assert out.splitlines()[0] == "status,module,check,computed,published,note"


def test_reproduce_corrupted_bundle_exits_3(tmp_path, capsys, monkeypatch):
    import shutil

    from cascadecalc import store as store_module

    broken = tmp_path / "bundled"
    shutil.copytree(store_module.bundled_data_dir(), broken)
    (broken / "models" / "tagi-2043.model").write_text("{broken", encoding="utf-8")
    # ModelStore resolves the bundled directory through this module hook
    monkeypatch.setattr(store_module, "bundled_data_dir", lambda: broken)

    code = main(["--data-dir", str(tmp_path / "u"), "reproduce"])
    err = capsys.readouterr().err
    assert code == 3
    assert "parse error" in err
