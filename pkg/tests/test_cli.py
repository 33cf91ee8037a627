import csv
import io
import json
import math
import subprocess
import sys

import pytest

from spinrotor.cli import run


def call(argv, capsys):
    code = run(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_transform_example(capsys):
    code, out, _ = call(["transform", "--r", "1", "--omega", "0.6", "--event", "0,0,1"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["schema_version"] == 1
    assert doc["transformed_event"] == pytest.approx([-0.6, 0.45, 1.25], abs=1e-15)
    assert doc["invariant"] == -1
    assert doc["invariant_transformed"] == pytest.approx(-1, abs=1e-14)
    assert doc["config"] == {"r": 1.0, "Omega": 0.6, "v": 0.0, "event": [0.0, 0.0, 1.0]}


def test_radius_bound_exit_code(capsys):
    code, out, err = call(["transform", "--r", "2", "--omega", "0.6"], capsys)
    assert code == 2 and out == ""
    assert err.startswith("error_code=radius_bound:")


def test_usage_error(capsys):
    code, _, err = call(["transform", "--bogus", "1"], capsys)
    assert code == 2
    assert err.startswith("error_code=usage:")
    assert call([], capsys)[0] == 2


def test_kinematics(capsys):
    code, out, _ = call(["kinematics", "--r", "1", "--Omega", "0.6", "--omega", "0.6"], capsys)
    doc = json.loads(out)
    assert (doc["omega_rot"], doc["v_rot"]) == (0, 0)


def test_pauli_csv(capsys):
    argv = ["pauli", "--g", "2", "--Hz", "-0.5", "--Omega", "1.0", "--H", "0.1",
            "--t-max", "31.42", "--dt", "0.001", "--lab"]
    code, out, _ = call(argv, capsys)
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert list(rows[0]) == ["t", "s1", "s2", "s3", "frame"]
    assert rows[0]["frame"] == "lab"
    near = min(rows, key=lambda r: abs(float(r["t"]) - 5 * math.pi))
    assert float(near["s3"]) == pytest.approx(-1, abs=1e-5)
    # repr-formatted floats round-trip exactly
    for r in rows[:50]:
        assert repr(float(r["s2"])) == r["s2"]


def test_output_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (a, b):
        assert run(["pauli", "--t-max", "3", "--output", str(path)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert b"\r" not in a.read_bytes()


def test_config_file_and_override(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"r": 0.5, "Omega": 1.2, "event": [0.1, 0.2, 0.3]}))
    doc = json.loads(call(["transform", "--config", str(cfg), "--omega", "0.6"], capsys)[1])
    assert doc["config"] == {"r": 0.5, "Omega": 0.6, "v": 0.0, "event": [0.1, 0.2, 0.3]}


def test_config_unknown_key(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"r": 1, "spin": 3}))
    code, _, err = call(["transform", "--config", str(cfg)], capsys)
    assert code == 2 and err.startswith("error_code=config_error:")


def test_config_not_an_object(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text("[1, 2]")
    assert call(["transform", "--config", str(cfg)], capsys)[0] == 2


@pytest.mark.parametrize(
    "argv",
    [
        ["transform", "--r", "0.9", "--omega", "0.3", "--event", "1,2,3"],
        ["dirac-modes", "--Hz", "-0.4", "--H", "0.002", "--Omega", "0.2"],
        ["pauli", "--t-max", "2", "--H", "0.3"],
    ],
)
def test_config_echo_roundtrip(argv, tmp_path, capsys):
    meta = tmp_path / "meta.json"
    first_out = call(argv + ["--meta", str(meta)], capsys)[1]
    echoed = json.loads(meta.read_text())["config"]
    cfg = tmp_path / "replay.json"
    cfg.write_text(json.dumps(echoed))
    meta2 = tmp_path / "meta2.json"
    second_out = call([argv[0], "--config", str(cfg), "--meta", str(meta2)], capsys)[1]
    assert json.loads(meta2.read_text())["config"] == echoed
    assert second_out == first_out


def test_dirac_modes(capsys):
    code, out, _ = call(["dirac", "modes"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["derived"] == pytest.approx({"d": 0.25, "h": 0.01, "E0": 2.0})
    assert {m["branch"] for m in doc["modes"]} == {"plus-singular", "minus-singular", "regular"}
    cal = doc["calibration"]
    assert cal["representation"] == "dirac-pauli"
    assert cal["d2_convention"] == "plain"
    assert cal["norm_factor"] == 2.0
    assert cal["residual_margin"] >= 1e4
    assert len(doc["roots"]) == 3
    assert call(["dirac-modes"], capsys)[1] == out


def test_dirac_modes_si(capsys):
    code, out, _ = call(["dirac", "modes", "--units", "si", "--Bz", "3.57", "--Bwave", "1e-3", "--f", "1e11"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["derived"]["E0"] == pytest.approx(1.0, rel=1e-3)
    assert doc["derived"]["h"] < 1e-3


def test_dirac_modes_si_missing(capsys):
    code, _, err = call(["dirac-modes", "--units", "si"], capsys)
    assert code == 2 and err.startswith("error_code=config_error:")


def test_dirac_modes_non_normalizable(capsys):
    code, _, err = call(["dirac-modes", "--Hz", "0.5"], capsys)
    assert code == 2 and err.startswith("error_code=non_normalizable:")


def test_dirac_spin(capsys):
    code, out, _ = call(["dirac", "spin", "--samples", "5"], capsys)
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["t", "s1", "s2", "s3"]
    assert len(rows) == 6


def test_verify_subset(capsys):
    code, out, _ = call(["verify", "--suite", "transform,kinematics", "--parallel", "2"], capsys)
    doc = json.loads(out)
    assert code == 0 and doc["passed"]
    assert [c["name"] for c in doc["checks"]] == ["transform", "kinematics"]


def test_verify_unknown(capsys):
    assert call(["verify", "--suite", "nope"], capsys)[0] == 2


def test_verify_failure_exit_code(capsys, monkeypatch):
    from spinrotor import suite

    monkeypatch.setitem(suite.CHECKS, "kinematics", lambda: suite.CheckResult("kinematics", False, {}, {}))
    assert call(["verify", "--suite", "kinematics"], capsys)[0] == 1


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "spinrotor", "kinematics", "--r", "1", "--Omega", "0.6"],
        capture_output=True, text=True, check=True,
    )
    assert json.loads(proc.stdout)["omega_rot"] == pytest.approx(-0.48)
