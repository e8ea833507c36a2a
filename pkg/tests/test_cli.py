import csv
import io
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from diracdelta import cli
from diracdelta.checks import CheckResult
from diracdelta.config import parse_config


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    body = [l for l in text.splitlines() if not l.startswith("#")]
    return list(csv.DictReader(io.StringIO("\n".join(body))))


def footer(text):
    out = {}
    for line in text.splitlines():
        if line.startswith("# ") and " = " in line:
            k, v = line[2:].split(" = ", 1)
            out[k] = v
    return out


K = ["--k-min", "0.5", "--k-max", "2", "--n-k", "4"]


def test_scatter_half_transmission(capsys):
    code, out, _ = run(capsys, "scatter", "--impurity", "0,pi/2,0",
                       "--k-min", "1", "--k-max", "2", "--n-k", "2")
    assert code == 0
    r = [x for x in rows(out) if float(x["k"]) == 1.0]
    assert len(r) == 2  # both incidence sides
    for x in r:
        assert x["path"] == "analytic"
        assert abs(float(x["abs_sigma2"]) - 0.5) < 1e-15
        assert abs(float(x["abs_rho2"]) - 0.5) < 1e-15
        assert float(x["unitarity_residual"]) < 1e-12


def test_scatter_transparent_and_mixed(capsys):
    _, out, _ = run(capsys, "scatter", "--impurity", "0,0,0", "--species", "both", *K)
    assert all(float(x["abs_sigma2"]) == 1.0 for x in rows(out))
    _, out, _ = run(capsys, "scatter", "--impurity", "0,0.4,0.9", *K)
    rs = rows(out)
    assert {x["path"] for x in rs} == {"numeric"}
    assert all(float(x["unitarity_residual"]) < float(x["residual_bound"]) == 1e-10 for x in rs)
    _, out, _ = run(capsys, "scatter", "--impurity=-1,0.3,0", "--impurity", "1,0.3,0", *K)
    assert {x["path"] for x in rows(out)} == {"numeric"}


def test_bound_quadrant_sweep(capsys):
    qs = []
    for quad in range(4):
        qs += list(quad * math.pi / 2 + (np.arange(8) + 0.5) * math.pi / 16)
    pattern = []
    for q in qs:
        _, out, _ = run(capsys, "bound", "--impurity", f"0,{float(q)!r},0", "--species", "both")
        (r,) = rows(out)
        pattern.append(r["species"][0].upper())
    assert "".join(pattern) == "P" * 8 + "E" * 8 + "P" * 8 + "E" * 8


def test_bound_sweep_mode(capsys):
    _, out, _ = run(capsys, "bound", "--impurity", "0,0,0", "--species", "both",
                    "--sweep-parameter", "lambda", "--sweep-min", "-2", "--sweep-max", "2",
                    "--sweep-n", "9")
    rs = rows(out)
    assert [(float(r["lambda"]) < 0, r["species"]) for r in rs] == \
        [(True, "electron")] * 4 + [(False, "positron")] * 4
    for r in rs:
        lam = float(r["lambda"])
        assert abs(float(r["kappa_b"]) - abs(math.tanh(lam))) < 1e-15
    _, out, _ = run(capsys, "bound", "--impurity", "0,pi,0", "--species", "both")
    assert rows(out) == [] and footer(out)["n_states"] == "0"


def test_bound_numeric_array(capsys):
    _, out, _ = run(capsys, "bound", "--impurity=-1,1,0.3", "--impurity", "1,2,0",
                    "--species", "both")
    rs = rows(out)
    assert len(rs) == 2 and {r["path"] for r in rs} == {"numeric"}
    assert all(float(r["matching_residual"]) < 1e-10 for r in rs)


def test_density_examples(capsys):
    _, out, _ = run(capsys, "density", "--impurity", "0,pi/6,0", "--species", "positron")
    f = footer(out)
    assert float(f["j0_at_center"]) == pytest.approx(-0.5, abs=1e-15)
    assert abs(float(f["total_charge_simpson"]) + 1) < 1e-6
    rs = rows(out)
    assert len(rs) == 2001
    x = np.array([float(r["x"]) for r in rs])
    j = np.array([float(r["j0"]) for r in rs])
    assert x[0] == pytest.approx(-20.0) and np.array_equal(x, -x[::-1])
    assert np.array_equal(j, j[::-1])
    _, out, _ = run(capsys, "density", "--impurity", "0,0,-1")
    f = footer(out)
    assert float(f["j0_at_center"]) == pytest.approx(math.tanh(1), abs=1e-15)
    assert abs(float(f["total_charge_simpson"]) - 1) < 1e-6


def test_density_custom_grid_and_array(capsys):
    _, out, _ = run(capsys, "density", "--impurity", "0,0,-1", "--x-min", "-1", "--x-max", "1",
                    "--n-x", "5")
    assert [float(r["x"]) for r in rows(out)] == [-1, -0.5, 0, 0.5, 1]
    _, out, _ = run(capsys, "density", "--impurity=-1,1,0.3", "--impurity", "1,2,0")
    f = footer(out)
    assert f["path"] == "numeric" and abs(float(f["total_charge_simpson"]) - 1) < 1e-6


def test_density_without_bound_state(capsys):
    code, _, err = run(capsys, "density", "--impurity", "0,pi/6,0", "--species", "electron")
    assert code == 1 and "no bound state" in err
    code, _, err = run(capsys, "density", "--impurity", "0,pi/6,0", "--species", "positron",
                       "--state", "3")
    assert code == 2 and "out of range" in err


def test_phase_examples(capsys):
    _, out, _ = run(capsys, "phase", "--impurity", "0,0,0", *K)
    assert all(float(r["delta"]) == 0 for r in rows(out))
    _, out, _ = run(capsys, "phase", "--impurity", "0,pi/4,0", "--k-min", "1", "--k-max", "2",
                    "--n-k", "2")
    r = rows(out)[0]
    assert float(r["tan_2delta"]) == pytest.approx(2 * math.sqrt(2), rel=1e-14)
    assert float(r["closed_form_tan_2delta"]) == pytest.approx(2 * math.sqrt(2), rel=1e-15)
    _, out, _ = run(capsys, "phase", "--impurity", "0,0,1", "--k-min", "1", "--k-max", "2",
                    "--n-k", "2", "--species", "both")
    for r in rows(out):
        if float(r["k"]) == 1.0:
            sign = 1 if r["species"] == "electron" else -1
            assert float(r["tan_2delta"]) == pytest.approx(-sign * math.sinh(2), rel=1e-14)
            assert float(r["residual"]) < 1e-8


def test_phase_numeric_path_has_no_closed_form(capsys):
    _, out, _ = run(capsys, "phase", "--impurity", "0,0.4,0.9", *K)
    for r in rows(out):
        assert r["path"] == "numeric" and r["closed_form_tan_2delta"] == "nan"


CONFIG = """[job]
species = both
[impurity.1]
position = -0.5
q = 0.4
lambda = 0.9
[impurity.2]
position = 0.5
q = 2*pi/3
[grid]
k_min = 0.01
k_max = 10
n_k = 16
"""


@pytest.mark.parametrize("command", ["scatter", "phase", "bound"])
def test_determinism_and_csv_json_agree(tmp_path, capsys, command):
    path = tmp_path / "job.ini"
    path.write_text(CONFIG)
    outs = []
    for fmt in ("csv", "json", "csv", "json"):
        target = tmp_path / f"out_{len(outs)}.{fmt}"
        assert cli.main([command, "--config", str(path), "--format", fmt,
                         "--output", str(target)]) == 0
        outs.append(target.read_bytes())
    assert outs[0] == outs[2] and outs[1] == outs[3]
    doc = json.loads(outs[1])
    assert list(doc) == ["tool", "command", "config", "columns", "rows", "checks"]
    csv_rows = rows(outs[0].decode())
    assert len(csv_rows) == len(doc["rows"])
    for a, b in zip(csv_rows, doc["rows"]):
        for col, v in zip(doc["columns"], b):
            if isinstance(v, float):
                assert float(a[col]) == v
            elif v is None:
                assert a[col] == "nan"
            else:
                assert a[col] == str(v)


def test_config_errors_reported_with_line(tmp_path, capsys):
    path = tmp_path / "bad.ini"
    path.write_text("[job]\nmass = 1\nspecies = muon\n[impurity]\nq = 1\n")
    code, _, err = run(capsys, "bound", "--config", str(path))
    assert code == 2 and f"{path}:3:" in err
    code, _, err = run(capsys, "bound", "--config", str(tmp_path / "missing.ini"))
    assert code == 2 and "cannot read config" in err


def test_flag_overrides_config(tmp_path, capsys):
    path = tmp_path / "job.ini"
    path.write_text("[job]\nspecies = electron\n[impurity]\nq = 2*pi/3\n")
    _, out, _ = run(capsys, "bound", "--config", str(path), "--impurity", "0,pi/6,0",
                    "--species", "positron")
    (r,) = rows(out)
    assert r["species"] == "positron" and float(r["kappa_b"]) == pytest.approx(0.5)


def test_units_and_argument_errors(capsys):
    code, _, err = run(capsys, "bound", "--impurity", "0,1,0", "--units", "SI")
    assert code == 2 and "natural" in err
    assert run(capsys, "bound", "--impurity", "0,1,0", "--units", "natural")[0] == 0
    with pytest.raises(SystemExit):
        cli.main(["bound", "--impurity", "0,1"])
    with pytest.raises(SystemExit):
        cli.main(["scatter", "--n-k", "2.5"])
    code, _, err = run(capsys, "scatter", "--impurity", "0,1,0", "--k-min", "1")
    assert code == 2 and "together" in err


def test_verify_exit_codes(monkeypatch, capsys):
    import diracdelta.checks as checks
    monkeypatch.setattr(checks, "run_all", lambda seed=None: [CheckResult(1, "a", True, "ok")])
    code, out, _ = run(capsys, "verify")
    assert code == 0 and out == "criterion 1 [PASS] a: ok\n"
    monkeypatch.setattr(checks, "run_all", lambda seed=None: [CheckResult(2, "b", False, "bad")])
    assert run(capsys, "verify")[0] == 1


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "diracdelta", "bound", "--impurity", "0,pi/6,0",
                          "--species", "positron", "--format", "json"],
                         capture_output=True, text=True, check=True)
    doc = json.loads(res.stdout)
    assert doc["rows"][0][0] == "positron"
