import csv
import json

import jsonschema
import pytest

from qd3 import cli
from qd3.params import default_params, to_config


def run(argv, capsys):
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def cfg1(tmp_path):
    path = tmp_path / "n1.json"
    path.write_text(json.dumps(to_config(default_params(1))))
    return str(path)


def test_verify_local(capsys):
    code, out, _ = run(["verify", "--scope", "local"], capsys)
    rep = json.loads(out)
    assert code == 0
    jsonschema.validate(rep, cli.REPORT_SCHEMA)
    assert rep["summary"]["failed"] == 0 and rep["summary"]["total"] == len(rep["records"]) == 55


def test_report_bytes_identical(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run(["verify", "--scope", "local", "--seed", "4", "--out", str(a)], capsys)[0] == 0
    assert run(["verify", "--scope", "local", "--seed", "4", "--out", str(b)], capsys)[0] == 0
    assert a.read_bytes() == b.read_bytes()


def test_seed_precedence(tmp_path, capsys, monkeypatch):
    cfg = to_config(default_params(1))
    cfg["seed"] = 11
    path = tmp_path / "c.json"
    path.write_text(json.dumps(cfg))
    seed_of = lambda argv: json.loads(run(argv, capsys)[1])["seed"]
    base = ["verify", "--scope", "local", "--samples", "1", "--config", str(path)]
    assert seed_of(base) == 11
    monkeypatch.setenv("QD3_SEED", "22")
    assert seed_of(base) == 22
    assert seed_of(base + ["--seed", "33"]) == 33


def test_bad_env_seed(capsys, monkeypatch):
    monkeypatch.setenv("QD3_SEED", "x")
    assert run(["verify", "--scope", "local"], capsys)[0] == 2


def test_invalid_params_exit_2(tmp_path, capsys):
    cfg = to_config(default_params(1))
    cfg["theta"] = [[0.2, 0.0]]
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(cfg))
    code, _, err = run(["verify", "--config", str(path)], capsys)
    assert code == 2 and "degeneration" in err


@pytest.mark.parametrize("text", ["{not json", json.dumps({"left": {"c": 1, "c1": 1, "c2": 0, "c3": 2}}),
                                  json.dumps({"unknown": 1})])
def test_malformed_config(tmp_path, capsys, text):
    path = tmp_path / "m.json"
    path.write_text(text)
    assert run(["verify", "--config", str(path)], capsys)[0] == 2


def test_missing_config(capsys):
    assert run(["verify", "--config", "/nonexistent.json"], capsys)[0] == 2


def test_usage_errors(capsys):
    assert run([], capsys)[0] == 2
    assert run(["verify", "--scope", "nope"], capsys)[0] == 2


def test_spectrum_with_csv(tmp_path, cfg1, capsys):
    out_csv = tmp_path / "curves.csv"
    code, out, _ = run(["spectrum", "--config", cfg1, "--grid-points", "8", "--csv", str(out_csv)], capsys)
    rep = json.loads(out)
    assert code == 0
    jsonschema.validate(rep, cli.REPORT_SCHEMA)
    n_pts = len(rep["spectrum"]["u_grid"])
    rows = list(csv.reader(out_csv.open()))
    assert rows[0][0] == "state" and len(rows) == 1 + 6 * n_pts


def test_spectrum_refuses_n4(tmp_path, capsys):
    path = tmp_path / "n4.json"
    path.write_text(json.dumps({"n_sites": 4}))
    assert run(["spectrum", "--config", str(path)], capsys)[0] == 2


def test_bae(cfg1, capsys):
    code, out, _ = run(["bae", "1", "0", "0", "--config", cfg1, "--starts", "16", "--grid-points", "8"], capsys)
    rep = json.loads(out)
    assert code == 0
    jsonschema.validate(rep, cli.REPORT_SCHEMA)
    assert rep["states"] and rep["matching"]["matches"]
    assert rep["energies"] is None  # inhomogeneous config
    assert all(r["passed"] for r in rep["records"])


def test_bae_counting_exit(cfg1, capsys):
    code, _, err = run(["bae", "1", "1", "0", "--config", cfg1], capsys)
    assert code == 2 and "L1" in err


def test_schema_command(capsys):
    code, out, _ = run(["schema"], capsys)
    assert code == 0
    jsonschema.Draft202012Validator.check_schema(json.loads(out))


def test_clean_handles_nonfinite():
    text = cli.dumps_report({"a": float("nan"), "b": complex(1, 2), "c": [float("inf")]})
    assert json.loads(text) == {"a": "nan", "b": [1.0, 2.0], "c": ["inf"]}
