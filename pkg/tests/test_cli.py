import csv
import io
import json

import pytest

from floqpol import save_model, two_level_model
from floqpol.cli import DEFAULTS, fmt, main, parse_args, run_compare


@pytest.fixture
def model_file(tmp_path):
    path = tmp_path / "m.json"
    save_model(two_level_model(1.0, 1.0), path)
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def rows_of(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_parse_solve(model_file):
    cfg = parse_args(["solve", "--model", model_file, "--omega", "0.9", "--field", "0.05",
                      "--nmax", "8", "--k", "1"])
    assert (cfg.subcommand, cfg.omega, cfg.amplitude, cfg.k) == ("solve", 0.9, 0.05, 1)
    assert cfg.truncation.n_max == 8
    assert cfg.format == "csv"


def test_parse_scan(model_file):
    cfg = parse_args(["scan", "--variable", "frequency", "--start", "0.8", "--stop", "1.2",
                      "--points", "201", "--field", "0.05", "--model", model_file])
    assert cfg.options["variable"] == "frequency"
    assert cfg.options["points"] == 201
    assert cfg.amplitude == 0.05


@pytest.mark.parametrize("argv", [
    ["solve", "--omega", "0.9", "--field", "0.05"],
    ["solve", "--model", "two_level", "--omega", "0.9", "--field", "0.05", "--bogus"],
    ["scan", "--model", "two_level", "--omega-scan", "--field-scan", "--start", "0.1",
     "--stop", "0.2", "--points", "3", "--field", "0.05"],
    ["scan", "--model", "two_level", "--omega-scan", "--start", "0.1", "--stop", "0.2",
     "--points", "3"],
    ["fit", "--data", "x.csv", "--model", "two_level"],
    ["solve", "--model", "two_level", "--omega", "-1", "--field", "0.05"],
    ["frobnicate"],
])
def test_usage_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert "usage" in err


def test_help(capsys):
    assert main(["solve", "--help"]) == 0
    assert "--nmax" in capsys.readouterr().out


def test_fmt_round_trips():
    for x in (0.1, 1 / 3, -2.5e-300, 123456789.123456789):
        assert float(fmt(x)) == x


def test_solve_csv(capsys, model_file):
    code, out, _ = run(capsys, "solve", "--model", model_file, "--omega", "0.9", "--field", "0.05",
                       "--nmax", "4")
    assert code == 0
    rows = rows_of(out)
    assert list(rows[0]) == ["j", "E_j", "folded_E_j", "dominant_state", "central_weight",
                             "is_representative"]
    assert len(rows) == 2 * 9
    assert sum(r["is_representative"] == "true" for r in rows) == 2


def test_solve_json(capsys):
    code, out, _ = run(capsys, "solve", "--model", "three_level", "--omega", "0.4", "--field", "0.02",
                       "--format", "json")
    assert code == 0
    doc = json.loads(out)
    for key in ("A", "b_condition", "reconstruction_error", "representatives", "quasienergies"):
        assert key in doc
    assert len(doc["A"]) == 3
    assert doc["reconstruction_error"] < 1e-10


def test_fourier_and_timeseries(capsys):
    code, out, _ = run(capsys, "fourier", "--model", "two_level", "--omega", "0.9", "--field", "0.05",
                       "--nreport", "3")
    assert code == 0
    assert [r["n"] for r in rows_of(out)] == ["0", "1", "2", "3"]
    code, out, _ = run(capsys, "timeseries", "--model", "two_level", "--omega", "0.9", "--field",
                       "0.05", "--cycles", "1", "--samples-per-cycle", "400", "--oracle")
    rows = rows_of(out)
    assert code == 0 and len(rows) == 401
    assert max(abs(float(r["P_floquet"]) - float(r["P_oracle"])) for r in rows) < 1e-5


def test_propagate(capsys):
    code, out, _ = run(capsys, "propagate", "--model", "two_level", "--omega", "0.9", "--field",
                       "0.05", "--cycles", "1")
    rows = rows_of(out)
    assert code == 0
    assert list(rows[0]) == ["t", "Re(c_1)", "Im(c_1)", "Re(c_2)", "Im(c_2)", "P"]
    assert float(rows[0]["Re(c_1)"]) == 1.0
    code, _, err = run(capsys, "propagate", "--model", "two_level", "--omega", "0.9", "--field",
                       "0.05", "--cycles", "1", "--dt", "1.0")
    assert code == 1 and "allow" in err


def test_scan_and_fit_from_data(capsys, tmp_path):
    out_path = tmp_path / "scan.csv"
    code, _, _ = run(capsys, "scan", "--model", "two_level", "--field-scan", "--omega", "0.5",
                     "--start", "0.005", "--stop", "0.04", "--points", "8", "--out", str(out_path))
    assert code == 0
    code, out, _ = run(capsys, "fit", "--data", str(out_path), "--format", "json")
    doc = json.loads(out)
    assert code == 0
    assert doc["alpha"] == pytest.approx(2 / 0.75, rel=1e-2)


def test_fit_pipeline_too_few_points(capsys):
    code, _, err = run(capsys, "fit", "--model", "two_level", "--omega", "0.5", "--start", "0.01",
                       "--stop", "0.02", "--points", "3")
    assert code == 1 and "at least 4" in err


def test_analytic(capsys):
    code, out, _ = run(capsys, "analytic", "--d12", "1", "--omega", "0.9", "--omega12", "1",
                       "--field", "0.1", "--format", "json")
    doc = json.loads(out)
    assert code == 0
    assert doc["p1_two_level"] is None
    assert "pole" in doc["note"]
    assert doc["convergence_radius"] == pytest.approx(0.1)


def test_missing_model_file_is_runtime_error(capsys, tmp_path):
    code, _, err = run(capsys, "solve", "--model", str(tmp_path / "nope.json"), "--omega", "0.9",
                       "--field", "0.05")
    assert code == 1 and "error" in err


def compare_cfg(*extra):
    return parse_args(["compare", "--model", "two_level", "--omega", "0.9", *extra])


def test_compare_pass_converged():
    rep = run_compare(compare_cfg("--field", "0.05", "--nmax", "8", "--steps-per-cycle", "2000"))
    assert rep["status"] == "PASS"
    assert rep["max_abs_deviation"] <= DEFAULTS["compare_tol"]


def test_compare_fail_undertruncated(capsys):
    code, out, _ = run(capsys, "compare", "--model", "two_level", "--omega", "0.9", "--field", "0.6",
                       "--nmax", "1", "--format", "json")
    doc = json.loads(out)
    assert doc["status"] == "FAIL" and code == 1
    assert doc["max_abs_deviation"] > 1e-5


def test_compare_zero_field():
    rep = run_compare(compare_cfg("--field", "0"))
    assert rep["status"] == "PASS"
    assert rep["max_abs_deviation"] <= 1e-12


@pytest.mark.parametrize("argv", [
    ["solve", "--model", "three_level", "--omega", "0.4", "--field", "0.1", "--format", "json"],
    ["scan", "--model", "two_level", "--omega-scan", "--field", "0.05", "--start", "0.8",
     "--stop", "1.2", "--points", "7"],
])
def test_byte_identical(capsys, argv):
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert first == second and first
