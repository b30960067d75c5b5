import csv
import io
import json
import math

import numpy as np
import pytest

from finsler_polydisc.cli import emit_indicatrix, load_config, main
from finsler_polydisc.core import MetricParams, Rng


def _run(argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(argv, out, err)
    return code, out.getvalue(), err.getvalue()


def _json(argv):
    code, out, err = _run(argv)
    assert code == 0, err
    return json.loads(out)


def test_eval_origin():
    rep = _json(["eval", "--t", "1", "--k", "2", "--z", "0,0", "--v", "1,1"])
    assert rep["value"]["F2"] == pytest.approx((2 + math.sqrt(2)) / 2)


def test_eval_with_map(tmp_path):
    spec = tmp_path / "map.json"
    spec.write_text(json.dumps({"type": "extremal", "m": 2, "n": 2}))
    rep = _json(["eval", "--map", str(spec), "--tt", "1", "--kk", "2", "--z", "0,0", "--v", "1,0"])
    assert rep["value"]["ratio"] == pytest.approx(rep["value"]["sharp_constant"], abs=1e-12)


def test_eval_inadmissible_map_is_config_error(tmp_path):
    spec = tmp_path / "map.json"
    spec.write_text(json.dumps({"type": "linear", "matrix": [[0.8, 0.3]]}))
    code, _, err = _run(["eval", "--map", str(spec), "--z", "0,0"])
    assert code == 1 and "row-sum" in err


def test_verify_schwarz_small_grid(tmp_path):
    out = tmp_path / "r.json"
    hist = tmp_path / "h.csv"
    code, _, _ = _run([
        "verify", "schwarz", "--m", "2", "--n", "3", "--t", "1", "--k", "2", "--tt", "0,1", "--kk", "2",
        "--trials", "2000", "--force-witness", "--out", str(out), "--histogram-out", str(hist),
    ])
    assert code == 0
    rep = json.loads(out.read_text())
    assert len(rep["cells"]) == 2
    for cell in rep["cells"]:
        assert cell["max_ratio"] <= cell["sharp_constant"] * (1 + 1e-9)
        assert cell["max_ratio"] == pytest.approx(cell["sharp_constant"], abs=1e-10)
    assert rep["replay"]["seed"] == 0
    rows = list(csv.reader(io.StringIO(hist.read_text())))
    assert len(rows) == 3


def test_verify_schwarz_is_deterministic():
    argv = ["verify-schwarz", "--m", "2", "--n", "2", "--tt", "1", "--kk", "3", "--trials", "500", "--seed", "9"]
    a, b = _json(argv), _json(argv)
    assert a["worst_case"] == b["worst_case"] and a["max_ratio"] == b["max_ratio"]


def test_config_file_and_flag_precedence(tmp_path):
    conf = tmp_path / "c.json"
    conf.write_text(json.dumps({"trials": 7, "seed": 3, "m": 2}))
    cfg = load_config(["check-levi", "--config", str(conf), "--seed", "5"])
    assert cfg["trials"] == 7 and cfg["seed"] == 5 and cfg["m"] == [2]


@pytest.mark.parametrize("argv", [
    [],
    ["bogus"],
    ["check-levi", "--trials", "0"],
    ["check-levi", "--t", "-1"],
    ["check-levi", "--k", "1"],
    ["check-levi", "--radius-cap", "1.5"],
    ["check-levi", "--config", "/nonexistent.json"],
    ["emit-indicatrix", "--resolution", "4"],
])
def test_config_errors_exit_one(argv):
    code, _, err = _run(argv)
    assert code == 1 and "configuration error" in err


def test_unknown_config_key(tmp_path):
    conf = tmp_path / "c.json"
    conf.write_text(json.dumps({"trails": 7}))
    assert _run(["check-levi", "--config", str(conf)])[0] == 1


def test_violation_exits_two():
    code, out, err = _run(["check-einstein", "--t", "1", "--k", "2", "--m", "2", "--trials", "5", "--einstein-rtol", "1e-30"])
    assert code == 2 and "violated" in err
    assert json.loads(out)["violated"]


@pytest.mark.parametrize("argv", [
    ["verify-norm-schwarz", "--t", "1", "--k", "2", "--tt", "1", "--kk", "3", "--trials", "200", "--degree", "3"],
    ["verify-distortion", "--t", "0,1", "--k", "2", "--trials", "500"],
    ["check-levi", "--t", "0.5", "--k", "3", "--trials", "50"],
    ["check-kahler-berwald", "--t", "3", "--k", "5", "--m", "2", "--trials", "5", "--fibre-samples", "4"],
    ["check-einstein", "--t", "0,3", "--k", "2", "--trials", "20"],
])
def test_commands_succeed(argv):
    rep = _json(argv)
    assert rep["command"] == argv[0]
    assert not rep["violated"]
    for key in ("grid_cell", "trials", "max_ratio", "sharp_constant", "worst_case", "residuals", "seed", "elapsed_ms"):
        assert key in rep


def test_distortion_with_map_file(tmp_path):
    spec = tmp_path / "f.json"
    spec.write_text(json.dumps({"factors": [{"type": "moebius", "c": [1.0, 0.0]}, {"type": "log"}]}))
    rep = _json(["verify-distortion", "--map", str(spec), "--m", "2", "--t", "1", "--k", "2", "--trials", "100"])
    assert rep["worst_case"]["map_spec"]["factors"][1]["type"] == "log"
    assert _run(["verify-distortion", "--map", str(spec), "--m", "3", "--trials", "10"])[0] == 1


def _read_indicatrix(text):
    rows = list(csv.reader(io.StringIO(text)))
    header, body = rows[0], np.array(rows[1:], dtype=float)
    m = (len(header) - 1) // 2
    d = body[:, 0:2 * m:2] + 1j * body[:, 1:2 * m:2]
    return header, d * body[:, -1:]


def test_emit_indicatrix_csv(tmp_path):
    out = tmp_path / "ind.csv"
    code, _, _ = _run(["emit", "indicatrix", "--t", "1", "--k", "2", "--m", "2", "--resolution", "200", "--out", str(out)])
    assert code == 0
    header, pts = _read_indicatrix(out.read_text())
    assert header == ["dir_re_1", "dir_im_1", "dir_re_2", "dir_im_2", "radius"]
    assert len(pts) == 200
    assert np.all(np.linalg.norm(pts, axis=1) >= 1 - 1e-10)
    assert np.all(np.max(np.abs(pts), axis=1) <= 1 + 1e-10)


def test_indicatrix_examples():
    dirs, r = emit_indicatrix(MetricParams(0.0, 2), 3, 50, Rng(1))
    np.testing.assert_allclose(r, 1.0, rtol=1e-15)
    for p in (MetricParams(1.0, 2), MetricParams(50.0, 7)):
        dirs, r = emit_indicatrix(p, 2, 16, Rng(1))
        np.testing.assert_allclose(r[:2], 1.0, rtol=1e-15)
    dirs, r = emit_indicatrix(MetricParams(1.0, 2), 2, 16, Rng(1))
    assert r[2] == pytest.approx(2 / math.sqrt(2 + math.sqrt(2)), rel=1e-14)
    with pytest.raises(ValueError):
        emit_indicatrix(MetricParams(), 2, 7, Rng(1))


def test_console_script_entry_point():
    import subprocess
    import sys

    out = subprocess.run(
        [sys.executable, "-m", "finsler_polydisc.cli", "eval", "--z", "0.5", "--v", "1", "--t", "0", "--m", "1"],
        capture_output=True, text=True, check=True,
    )
    assert json.loads(out.stdout)["value"]["F2"] == pytest.approx(16 / 9)
