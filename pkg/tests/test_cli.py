import csv
import json
import math

import pytest

from boxqm.cli import main


def run(tmp_path, *args):
    out = tmp_path / "out"
    code = main([*args, "--out-dir", str(out)])
    return code, out


def read_csv(path):
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    return rows


def test_spectrum_dirichlet(tmp_path):
    code, out = run(tmp_path, "spectrum", "--bc", "dirichlet", "--levels", "3")
    assert code == 0
    rows = read_csv(out / "spectrum.csv")
    assert len(rows) == 3
    for row in rows:
        l = int(row["l"])
        assert float(row["energy"]) == pytest.approx(math.pi**2 * (l + 1) ** 2 / 2.0, rel=1e-15)
        assert row["kind"] == "positive"


def test_spectrum_symmetric_negative_rows(tmp_path):
    code, out = run(tmp_path, "spectrum", "--bc", "symmetric", "--gamma", "-3", "--levels", "6")
    assert code == 0
    rows = read_csv(out / "spectrum.csv")
    assert sum(1 for r in rows if r["kind"] == "negative") == 2


def test_spectrum_antisymmetric_negative_row(tmp_path):
    code, out = run(tmp_path, "spectrum", "--bc", "antisymmetric", "--gamma", "1", "--levels", "5")
    assert code == 0
    rows = read_csv(out / "spectrum.csv")
    neg = [r for r in rows if r["kind"] == "negative"]
    assert len(neg) == 1
    assert float(neg[0]["energy"]) == pytest.approx(-0.5, rel=1e-14)


def test_spectrum_samples_and_sweep(tmp_path):
    code, out = run(tmp_path, "spectrum", "--bc", "symmetric", "--gamma", "0.5",
                    "--levels", "3", "--samples", "33", "--gamma-sweep", "5",
                    "--gamma-min", "-4", "--gamma-max", "4")
    assert code == 0
    assert (out / "levels" / "level_000.csv").exists()
    assert len(read_csv(out / "levels" / "level_002.csv")) == 33
    sweep = read_csv(out / "sweep.csv")
    assert {r["gamma"] for r in sweep} == {"-4", "-2", "0", "2", "4"}
    assert all("atan_gamma_L" in r for r in sweep)


def test_measure_dirichlet_four(tmp_path):
    code, out = run(tmp_path, "measure", "--state", "dirichlet:4",
                    "--n-min", "-64", "--n-max", "64")
    assert code == 0
    rows = {int(r["n"]): float(r["probability"]) for r in read_csv(out / "histogram.csv")}
    assert rows[4] == pytest.approx(0.25, abs=1e-13)
    assert rows[-4] == pytest.approx(0.25, abs=1e-13)
    assert rows[2] == 0.0
    summary = json.loads((out / "summary.json").read_text())
    assert summary["pR"] == pytest.approx(0.0, abs=1e-12)
    assert summary["pR2"] == pytest.approx((4 * math.pi) ** 2, rel=1e-10)
    assert (out / "density.csv").exists()


def test_measure_linear_zero_reports_infinite_pR2(tmp_path):
    code, out = run(tmp_path, "measure", "--state", "linear-zero")
    assert code == 0
    summary = json.loads((out / "summary.json").read_text())
    assert summary["pR2"] == "inf"
    assert summary["pR2_series"] == "inf"


def test_measure_constant_peaks_at_zero(tmp_path):
    code, out = run(tmp_path, "measure", "--state", "constant")
    assert code == 0
    summary = json.loads((out / "summary.json").read_text())
    assert summary["most_probable_n"] == 0
    assert summary["pI"] == pytest.approx(0.0, abs=1e-14)


def test_evolve_revival_rows(tmp_path):
    code, out = run(tmp_path, "evolve", "--bc", "dirichlet",
                    "--times", "0:T:3", "--snapshot-every", "0",
                    "--n-min", "-96", "--n-max", "96")
    assert code == 0
    rows = read_csv(out / "series.csv")
    assert len(rows) == 3
    assert float(rows[0]["overlap"]) == pytest.approx(1.0, abs=1e-12)
    assert float(rows[-1]["overlap"]) >= 1.0 - 1e-10
    # middle row is T/2: mirror revival with reversed momentum
    assert float(rows[1]["pR"]) == pytest.approx(-float(rows[0]["pR"]), rel=1e-10)
    assert float(rows[1]["density_distance"]) <= 1e-8


def test_evolve_mixed_eighth_period_snapshot(tmp_path):
    code, out = run(tmp_path, "evolve", "--bc", "mixed", "--times", "0:T/8:2",
                    "--grid-points", "101", "--n-min", "-80", "--n-max", "80")
    assert code == 0
    snap = read_csv(out / "snapshots" / "001.csv")
    assert len(snap) == 101
    assert set(snap[0].keys()) == {"x", "re", "im", "density"}
    mom = read_csv(out / "snapshots" / "001_momentum.csv")
    assert {int(r["n"]) for r in mom} == set(range(-80, 81))


def test_evolve_rejects_robin_family(tmp_path):
    code, _ = run(tmp_path, "evolve", "--bc", "symmetric", "--gamma", "1")
    assert code == 2


def test_ehrenfest_packet(tmp_path):
    code, out = run(tmp_path, "ehrenfest", "--bc", "dirichlet", "--times", "0:T:20")
    assert code == 0
    rows = read_csv(out / "ehrenfest.csv")
    k_c = 41.0 * math.pi
    assert max(float(r["residual1"]) for r in rows) <= 1e-8 * k_c


def test_ehrenfest_eigenstate_rows_are_static(tmp_path):
    code, out = run(tmp_path, "ehrenfest", "--bc", "dirichlet", "--state", "level:2",
                    "--times", "0:1:5")
    assert code == 0
    for r in read_csv(out / "ehrenfest.csv"):
        assert abs(float(r["dx_dt"])) <= 1e-12
        assert abs(float(r["pR"])) <= 1e-12


def test_ehrenfest_random_robin(tmp_path):
    code, out = run(tmp_path, "ehrenfest", "--bc", "symmetric", "--gamma", "1",
                    "--state", "random:6,7", "--times", "0:0.5:6")
    assert code == 0
    rows = read_csv(out / "ehrenfest.csv")
    assert max(float(r["residual2"]) for r in rows) <= 1e-5
    assert max(float(r["continuity_residual"]) for r in rows) <= 1e-6


def test_uncertainty_exponential_state(tmp_path):
    code, out = run(tmp_path, "uncertainty", "--state", "exp:1")
    assert code == 0
    doc = json.loads((out / "uncertainty.json").read_text())
    assert abs(doc["pR"]) <= 1e-9
    assert abs(doc["anticomm"]) <= 1e-9
    assert doc["holds"] is True
    assert doc["commutator"]["im"] == pytest.approx(1.0, abs=1e-8)


def test_uncertainty_linear_zero(tmp_path):
    code, out = run(tmp_path, "uncertainty", "--state", "linear-zero")
    assert code == 0
    doc = json.loads((out / "uncertainty.json").read_text())
    assert doc["holds"] is True
    assert abs(doc["anticomm"]) <= 1e-9


def test_uncertainty_sweep_no_violations(tmp_path):
    code, out = run(tmp_path, "uncertainty", "--state", "constant",
                    "--sweep", "4", "--seed", "1")
    assert code == 0
    rows = read_csv(out / "uncertainty_sweep.csv")
    assert len(rows) == 20  # 4 seeds x 5 default gamma values
    assert all(r["holds"] == "1" for r in rows)
    assert max(float(r["slack"]) for r in rows) >= 0.0
    assert min(float(r["slack"]) for r in rows) >= -1e-10


def test_cli_determinism(tmp_path):
    _, out1 = run(tmp_path / "a", "measure", "--state", "random:6,3",
                  "--bc", "symmetric", "--gamma", "1")
    _, out2 = run(tmp_path / "b", "measure", "--state", "random:6,3",
                  "--bc", "symmetric", "--gamma", "1")
    for name in ("histogram.csv", "density.csv", "summary.json"):
        assert (out1 / name).read_bytes() == (out2 / name).read_bytes()


def test_usage_error_exit_code(tmp_path):
    code, _ = run(tmp_path, "measure", "--state", "nonsense:1")
    assert code == 2
    code, _ = run(tmp_path, "spectrum", "--bc", "symmetric")  # missing gamma
    assert code == 2


def test_numeric_error_exit_code(tmp_path):
    # Dirichlet eigenstate badly violates Neumann conditions -> precondition
    code, _ = run(tmp_path, "uncertainty", "--state", "dirichlet:1", "--bc", "neumann")
    assert code == 3


def test_config_file_defaults_and_override(tmp_path):
    cfg_path = tmp_path / "run.json"
    cfg_path.write_text(json.dumps({"state": "dirichlet:2", "n_min": -8, "n_max": 8}))
    out = tmp_path / "out"
    code = main(["measure", "--state", "dirichlet:4", "--config", str(cfg_path),
                 "--out-dir", str(out)])
    assert code == 0
    summary = json.loads((out / "summary.json").read_text())
    assert summary["state"] == "dirichlet:4"  # flag wins over the file
    rows = read_csv(out / "histogram.csv")
    assert {int(r["n"]) for r in rows} == set(range(-8, 9))  # file supplied the range

    code = main(["measure", "--config", str(tmp_path / "missing.json"),
                 "--state", "constant", "--out-dir", str(out)])
    assert code == 2
