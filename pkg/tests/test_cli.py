import json
import os

import pytest

from amgeo.cli import main, write_atomic
from amgeo.suites import REGISTRY, SCHEMA, SUITES, ConfigError, SuiteConfig, run, sub_seed


def test_function_model_all_suites_pass(tmp_path, capsys):
    path = tmp_path / "report.json"
    code = main(["--model", "function", "--dim", "4", "--seed", "1", "--report", str(path)])
    assert code == 0
    doc = json.loads(path.read_text())
    assert doc["schema"] == SCHEMA
    assert doc["summary"]["mandatory_failures"] == 0
    assert {r["verdict"] for r in doc["records"]} <= {"pass", "skip"}
    assert "elapsed" in doc["timing"]
    assert "passed" in capsys.readouterr().out


def test_matrix_states_records(tmp_path):
    path = tmp_path / "states.json"
    assert main(["--model", "matrix", "--dim", "2", "--suite", "states", "--report", str(path)]) == 0
    checks = {r["check"] for r in json.loads(path.read_text())["records"]}
    assert {"states.bohnenblust_karlin", "states.moore_spanning"} <= checks


@pytest.mark.parametrize(
    "argv",
    [
        ["--model", "function", "--dim", "100"],
        ["--model", "entire", "--dim", "5"],
        ["--model", "banach"],
        ["--suite", "nonsense"],
        ["--tol-rel", "2"],
        ["--dim", "not-a-number"],
    ],
)
def test_usage_errors(argv):
    assert main(argv) == 2


def test_help_exits_cleanly(capsys):
    assert main(["--help"]) == 0
    assert "--model" in capsys.readouterr().out


def test_config_file(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"model": "function", "dim": 3, "suite": "lattice"}))
    assert main(["--config", str(cfg)]) == 0
    cfg.write_text(json.dumps({"model": "function", "colour": "blue"}))
    assert main(["--config", str(cfg)]) == 2
    assert main(["--config", str(tmp_path / "missing.json")]) == 2


def test_flags_override_config(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"model": "function", "dim": 100}))
    assert main(["--config", str(cfg), "--dim", "2", "--suite", "lattice"]) == 0


def test_config_validation():
    with pytest.raises(ConfigError):
        SuiteConfig(model="function", dim=0)
    assert SuiteConfig(model="matrix").dim == 2
    assert SuiteConfig(model="entire").make_chart().model.n == 1


def test_sub_seeds_are_stable_and_distinct():
    assert sub_seed(0, "lattice.meet_join") == sub_seed(0, "lattice.meet_join")
    assert sub_seed(0, "lattice.meet_join") != sub_seed(1, "lattice.meet_join")
    ids = [c.id for c in REGISTRY]
    assert len(set(ids)) == len(ids)
    assert {c.suite for c in REGISTRY} == set(SUITES)


def test_reports_are_deterministic():
    cfg = SuiteConfig(model="function", dim=3, seed=7)
    assert run(cfg).body_text() == run(cfg).body_text()


def test_suite_selection_skips_inapplicable_checks():
    rep = run(SuiteConfig(model="matrix", dim=2, suite="scheme"))
    assert rep.records and all(r["verdict"] == "skip" for r in rep.records)
    assert rep.ok


def test_atomic_write_replaces_file(tmp_path):
    path = tmp_path / "out.json"
    path.write_text("old")
    write_atomic(str(path), "new")
    assert path.read_text() == "new\n"
    assert [p for p in os.listdir(tmp_path) if p.endswith(".tmp")] == []
