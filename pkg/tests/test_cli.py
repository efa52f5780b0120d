import json

import numpy as np
import pytest

from frustra.cli import csv_to_rows, main, rows_to_csv


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def rows_by(rows, observable, index=None):
    return [r for r in rows
            if r["observable"] == observable and (index is None or r["index"] == index)]


class TestCriticalPoint:
    def test_trimer_value(self, capsys):
        code, out, _ = run_cli(capsys, "critical-point", "--jbar", "0.01",
                               "--sites", "3")
        assert code == 0
        rows = csv_to_rows(out)
        gc = rows_by(rows, "g_c")[0]["value"]
        assert gc == pytest.approx(0.99498743710662, abs=1e-12)
        eigen = rows_by(rows, "origin_hessian_eigenvalue")
        assert len(eigen) == 3
        assert min(r["value"] for r in eigen) == pytest.approx(0.0, abs=1e-12)

    def test_zero_hopping(self, capsys):
        code, out, _ = run_cli(capsys, "critical-point", "--jbar", "0",
                               "--sites", "5")
        assert code == 0
        assert rows_by(csv_to_rows(out), "g_c")[0]["value"] == 1.0

    def test_sign_mismatch_is_validation_error(self, capsys):
        code, _, err = run_cli(capsys, "critical-point", "--jbar", "0.6",
                               "--sites", "3", "--sign", "negative")
        assert code == 2
        assert "error" in err


class TestGroundState:
    def test_normal_phase_rows(self, capsys):
        code, out, _ = run_cli(capsys, "ground-state", "--jbar", "0.01",
                               "--sites", "3", "--g", "0.5")
        assert code == 0
        rows = csv_to_rows(out)
        for row in rows_by(rows, "alpha"):
            assert row["value"] == 0.0
        for row in rows_by(rows, "theta"):
            assert row["value"] == pytest.approx(np.pi)
        assert rows_by(rows, "phase")[0]["index"] == "Normal"

    def test_fsp_manifold_six_members(self, capsys):
        code, out, _ = run_cli(capsys, "ground-state", "--jbar", "0.01",
                               "--sites", "3", "--g", "1.01", "--manifold")
        assert code == 0
        rows = csv_to_rows(out)
        manifold = rows_by(rows, "manifold_energy")
        assert len(manifold) == 6
        energies = [r["value"] for r in manifold]
        assert max(energies) - min(energies) < 1e-10

    def test_jx_matches_angles(self, capsys):
        code, out, _ = run_cli(capsys, "ground-state", "--jbar", "0.01",
                               "--sites", "3", "--g", "1.02")
        rows = csv_to_rows(out)
        for site in ("1", "2", "3"):
            theta = rows_by(rows, "theta", site)[0]["value"]
            phi = rows_by(rows, "phi", site)[0]["value"]
            jx = rows_by(rows, "jx", site)[0]["value"]
            assert jx == pytest.approx(np.sin(theta) * np.cos(phi), abs=1e-14)

    def test_requires_g(self, capsys):
        code, _, err = run_cli(capsys, "ground-state", "--jbar", "0.01",
                               "--sites", "3")
        assert code == 2


class TestSpectrum:
    def test_emits_all_modes_and_weights(self, capsys):
        code, out, _ = run_cli(capsys, "spectrum", "--jbar", "0.01",
                               "--sites", "3", "--g", "0.9")
        assert code == 0
        rows = csv_to_rows(out)
        energies = rows_by(rows, "excitation_energy")
        assert len(energies) == 6
        values = [r["value"] for r in energies]
        assert values == sorted(values)
        assert len(rows_by(rows, "weight_cavity")) == 18
        assert len(rows_by(rows, "weight_atom")) == 18

    def test_unstable_point_exit_code(self, capsys, tmp_path):
        # diverging hopping magnitude outside the stability window
        code, _, err = run_cli(capsys, "spectrum", "--jbar", "-0.7",
                               "--sites", "3", "--g", "0.5")
        assert code == 2


class TestSweepCommand:
    def test_round_trip_and_determinism(self, capsys, tmp_path):
        args = ("sweep", "--jbar", "0.01", "--sites", "3",
                "--reduced-min", "1e-3", "--reduced-max", "1e-2",
                "--points-per-decade", "4", "--observables", "gaps,energy")
        code, out1, _ = run_cli(capsys, *args)
        assert code == 0
        code, out2, _ = run_cli(capsys, *args)
        assert out1 == out2  # identical bytes for identical config
        rows = csv_to_rows(out1)
        assert rows_to_csv(rows) == out1  # bit-exact round trip
        assert rows_by(rows, "energy")

    def test_json_format(self, capsys):
        code, out, _ = run_cli(capsys, "sweep", "--jbar", "-0.01", "--sites", "3",
                               "--reduced-min", "1e-3", "--reduced-max", "1e-2",
                               "--points-per-decade", "3", "--format", "json",
                               "--observables", "energy")
        assert code == 0
        payload = json.loads(out)
        assert payload["config"]["jbar"] == -0.01
        assert payload["results"]
        reparsed = json.dumps(payload, sort_keys=True, indent=1) + "\n"
        assert reparsed == out

    def test_output_file(self, capsys, tmp_path):
        target = tmp_path / "sweep.csv"
        code, out, _ = run_cli(capsys, "sweep", "--jbar", "0.01", "--sites", "3",
                               "--reduced-min", "1e-3", "--reduced-max", "1e-2",
                               "--points-per-decade", "3",
                               "--observables", "energy",
                               "--output", str(target))
        assert code == 0
        assert out == ""
        assert target.read_text().startswith("g,reduced_coupling,observable")


class TestExponentsCommand:
    def test_trimer_gammas(self, capsys):
        code, out, _ = run_cli(capsys, "exponents", "--jbar", "0.01",
                               "--sites", "3", "--reduced-min", "1e-5",
                               "--points-per-decade", "10")
        assert code == 0
        rows = csv_to_rows(out)
        gamma_mf = rows_by(rows, "gamma", "mf")[0]["value"]
        gamma_f = rows_by(rows, "gamma", "f")[0]["value"]
        assert gamma_mf == pytest.approx(0.5, abs=0.03)
        assert gamma_f == pytest.approx(1.0, abs=0.05)
        checks = rows_by(rows, "check")
        assert checks and all(r["value"] == 1.0 for r in checks)

    def test_negative_hopping_single_gamma(self, capsys):
        code, out, _ = run_cli(capsys, "exponents", "--jbar", "-0.01",
                               "--sites", "3", "--reduced-min", "1e-6",
                               "--points-per-decade", "8")
        assert code == 0
        rows = csv_to_rows(out)
        assert rows_by(rows, "gamma", "mf")[0]["value"] == pytest.approx(0.5, abs=0.03)
        assert not rows_by(rows, "gamma", "f")


class TestConfigFile:
    def test_config_merging_and_flag_precedence(self, capsys, tmp_path):
        config = tmp_path / "run.json"
        config.write_text(json.dumps({"jbar": 0.01, "sites": 5, "g": 0.5}))
        code, out, _ = run_cli(capsys, "critical-point", "--config", str(config),
                               "--sites", "3")
        assert code == 0
        rows = csv_to_rows(out)
        # three eigenvalue rows: the explicit --sites 3 overrode the file's 5
        assert len(rows_by(rows, "origin_hessian_eigenvalue")) == 3

    def test_unknown_config_keys_rejected(self, capsys, tmp_path):
        config = tmp_path / "bad.json"
        config.write_text(json.dumps({"jbar": 0.01, "coupling": 1.0}))
        code, _, err = run_cli(capsys, "critical-point", "--config", str(config))
        assert code == 2
        assert "coupling" in err


class TestExitCodes:
    def test_instability_exit_code(self, capsys):
        # inside the three-site hopping window but past the five-site
        # stability edge: the critical point has no real solution
        code, _, err = run_cli(capsys, "critical-point", "--jbar", "0.63",
                               "--sites", "5")
        assert code == 3
        assert "error" in err

    def test_five_site_exponents(self, capsys):
        code, out, _ = run_cli(capsys, "exponents", "--jbar", "0.01",
                               "--sites", "5", "--points-per-decade", "8")
        assert code == 0
        rows = csv_to_rows(out)
        assert rows_by(rows, "gamma", "f")[0]["value"] == pytest.approx(2.0, abs=0.1)
