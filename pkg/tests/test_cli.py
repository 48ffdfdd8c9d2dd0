import csv
import io
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from photon_pistol.cli import main
from photon_pistol.spectral import TOL_ENV_VAR


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def emit_json(*argv):
    code, text = run("emit", *argv)
    assert code == 0
    return json.loads(text)


class TestEmit:
    def test_equilibrium(self):
        rec = emit_json("--ja", "3", "--jb", "2", "--jc", "3", "--initial", "equilibrium", "--psi", "0")
        assert rec["w"] == pytest.approx(0.857, abs=1e-3)
        assert rec["P"] == pytest.approx(0.0, abs=5e-3)
        assert rec["defined"] is True

    def test_side_drive(self):
        rec = emit_json("--ja", "2", "--jb", "1", "--jc", "1", "--initial", "pure:0", "--psi", "1.5707963")
        assert rec["w"] == pytest.approx(0.25, abs=1e-6)
        assert rec["P"] == pytest.approx(1.0, abs=1e-6)

    def test_no_emission(self):
        rec = emit_json("--ja", "3", "--jb", "2", "--jc", "3", "--initial", "pure:0", "--psi", "0")
        assert rec["w"] == pytest.approx(0.0, abs=1e-10)
        assert rec["defined"] is False and rec["P"] is None

    def test_degrees_match_radians(self):
        base = ("--ja", "2", "--jb", "1", "--jc", "1", "--initial", "pure:0")
        assert emit_json(*base, "--psi-deg", "90") == emit_json(*base, "--psi", str(math.pi / 2))

    def test_explicit_polarization(self):
        base = ("--ja", "2", "--jb", "1", "--jc", "1", "--initial", "pure:0")
        # unnormalized input is normalized
        a = emit_json(*base, "--lc", "2", "0", "0")
        b = emit_json(*base, "--psi", str(math.pi / 2))
        assert a.keys() == b.keys()
        for key in ("w", "xi1", "xi2", "xi3", "P"):
            assert a[key] == pytest.approx(b[key], abs=1e-12)

    def test_csv(self):
        code, text = run("emit", "--ja", "0", "--jb", "1", "--jc", "1", "--initial", "equilibrium",
                         "--psi", "1.5707963267948966", "--format", "csv")
        assert code == 0
        rows = list(csv.DictReader(io.StringIO(text)))
        assert float(rows[0]["w"]) == pytest.approx(1.0, abs=1e-10)
        assert float(rows[0]["xi3"]) == pytest.approx(-1.0, abs=1e-10)

    def test_file_initial_state(self, tmp_path):
        rho = np.zeros((5, 5))
        rho[2, 2] = 1.0
        path = tmp_path / "rho.json"
        path.write_text(json.dumps([[[v, 0.0] for v in row] for row in rho]))
        base = ("--ja", "2", "--jb", "1", "--jc", "1", "--psi", "0.4")
        assert emit_json(*base, "--initial", f"file:{path}") == emit_json(*base, "--initial", "pure:0")
        flat = tmp_path / "flat.json"
        flat.write_text(json.dumps([[v, 0.0] for v in rho.ravel()]))
        assert emit_json(*base, "--initial", f"file:{flat}") == emit_json(*base, "--initial", "pure:0")

    def test_half_integer_scheme(self):
        rec = emit_json("--ja", "1/2", "--jb", "1/2", "--jc", "1/2", "--initial", "equilibrium", "--psi", "0.3")
        assert 0.0 <= rec["w"] <= 1.0


class TestConfigErrors:
    @pytest.mark.parametrize(
        "argv, flag",
        [
            (["--ja", "3", "--jb", "2", "--jc", "3", "--initial", "pure:5", "--psi", "0"], "--initial"),
            (["--ja", "3", "--jb", "2", "--jc", "3", "--initial", "bogus", "--psi", "0"], "--initial"),
            (["--ja", "1/3", "--jb", "2", "--jc", "3", "--initial", "equilibrium", "--psi", "0"], "--ja"),
            (["--ja", "3", "--jb", "0", "--jc", "3", "--initial", "equilibrium", "--psi", "0"], "--ja/--jb/--jc"),
            (["--ja", "3", "--jb", "2", "--jc", "3", "--initial", "equilibrium", "--lc", "0", "0", "0"], "--lc"),
            (["--ja", "3", "--jb", "2", "--jc", "3", "--initial", "equilibrium", "--psi", "0", "--tol-rel", "2"],
             "--tol-rel"),
        ],
    )
    def test_names_flag(self, argv, flag, capsys):
        with np.errstate(invalid="ignore"):
            code, _ = run("emit", *argv)
        assert code == 2
        assert flag in capsys.readouterr().err

    def test_missing_geometry(self):
        code, _ = run("emit", "--ja", "3", "--jb", "2", "--jc", "3", "--initial", "equilibrium")
        assert code == 2

    def test_two_geometries(self):
        code, _ = run("emit", "--ja", "3", "--jb", "2", "--jc", "3", "--initial", "equilibrium",
                      "--psi", "0", "--psi-deg", "0")
        assert code == 2

    def test_bad_file(self, tmp_path, capsys):
        path = tmp_path / "rho.json"
        path.write_text("[[1, 0]]")
        code, _ = run("emit", "--ja", "1", "--jb", "1", "--jc", "1", "--initial", f"file:{path}", "--psi", "0")
        assert code == 2 and "--initial" in capsys.readouterr().err

    def test_non_density_file(self, tmp_path):
        path = tmp_path / "rho.json"
        path.write_text(json.dumps([[1.0, 0.0]] * 9))  # trace 3
        code, _ = run("emit", "--ja", "1", "--jb", "1", "--jc", "1", "--initial", f"file:{path}", "--psi", "0")
        assert code == 2

    def test_bad_env_tolerance(self, monkeypatch, capsys):
        monkeypatch.setenv(TOL_ENV_VAR, "nope")
        code, _ = run("classify", "--ja", "2", "--jb", "1", "--jc", "1", "--psi", "0")
        assert code == 2 and TOL_ENV_VAR in capsys.readouterr().err


class TestSweep:
    ARGS = ("sweep", "--ja", "3", "--jb", "2", "--jc", "3", "--psi-grid", "0:1.5707963:64")

    def test_file_and_round_trip(self, tmp_path):
        path = tmp_path / "fig.csv"
        code, text = run(*self.ARGS, "--initial", "pure:0", "--out", str(path))
        assert code == 0 and text == ""
        lines = path.read_text().splitlines()
        assert lines[0] == "psi,w,xi1,xi2,xi3,P,defined"
        rows = list(csv.DictReader(io.StringIO(path.read_text())))
        assert len(rows) == 64
        assert rows[0]["defined"] == "false" and rows[0]["P"] == "nan"
        assert float(rows[-1]["w"]) == pytest.approx(1.0, abs=1e-6)
        # every number is printed with nine significant digits and parses back unchanged
        for line in lines[1:]:
            for field in line.split(",")[:-1]:
                if field != "nan":
                    assert f"{float(field):.8e}" == field

    def test_equilibrium_constant(self):
        code, text = run(*self.ARGS, "--initial", "equilibrium")
        assert code == 0
        w = [float(r["w"]) for r in csv.DictReader(io.StringIO(text))]
        assert max(w) - min(w) <= 1e-9

    def test_grid_errors(self):
        assert run("sweep", "--ja", "2", "--jb", "1", "--jc", "1", "--initial", "pure:0", "--psi-grid", "0:1:1")[0] == 2
        assert run("sweep", "--ja", "2", "--jb", "1", "--jc", "1", "--initial", "pure:0", "--psi-grid", "0:1")[0] == 2

    def test_unwritable(self, tmp_path):
        target = tmp_path / "missing" / "out.csv"
        code, _ = run(*self.ARGS, "--initial", "equilibrium", "--out", str(target))
        assert code == 1

    def test_deterministic(self):
        assert run(*self.ARGS, "--initial", "equilibrium") == run(*self.ARGS, "--initial", "equilibrium")


class TestClassify:
    @pytest.mark.parametrize("js, N", [(("3", "2", "3"), 24), (("2", "1", "1"), 14), (("0", "1", "1"), 10)])
    def test_dimension(self, js, N):
        code, text = run("classify", "--ja", js[0], "--jb", js[1], "--jc", js[2], "--psi", "0")
        rec = json.loads(text)
        assert code == 0 and rec["N"] == N and rec["ok"] and all(rec["identities"].values())

    def test_csv(self):
        code, text = run("classify", "--ja", "3", "--jb", "2", "--jc", "3", "--psi", "0.5", "--format", "csv")
        (row,) = list(csv.DictReader(io.StringIO(text)))
        assert code == 0 and row["N"] == "24" and row["dark_count"] == "true"

    def test_identity_violation_exit_code(self, monkeypatch):
        from photon_pistol import stirap

        real = stirap.classify

        def broken(*a, **k):
            import dataclasses
            return dataclasses.replace(real(*a, **k), N_f=0)

        monkeypatch.setattr("photon_pistol.cli.classify", broken)
        code, _ = run("classify", "--ja", "2", "--jb", "1", "--jc", "1", "--psi", "0")
        assert code == 3

    def test_env_tolerance(self, monkeypatch):
        monkeypatch.setenv(TOL_ENV_VAR, "1e-9")
        code, text = run("classify", "--ja", "3", "--jb", "2", "--jc", "3", "--psi", "0")
        assert code == 0 and json.loads(text)["N_ab_d"] == 6


class TestValidate:
    def test_unit_emission(self):
        code, text = run("validate", "--ja", "2", "--jb", "1", "--jc", "1", "--initial", "pure:0", "--psi", "0")
        rec = json.loads(text)
        assert code == 0 and rec["pass"] and rec["deviation"] <= 0.02

    def test_drive_off(self):
        code, text = run("validate", "--ja", "3", "--jb", "2", "--jc", "3", "--initial", "equilibrium",
                         "--psi", "0.3", "--omega-a0", "0", "--duration", "20", "--steps", "1000")
        rec = json.loads(text)
        assert code == 0 and rec["w_num"] == 0.0

    def test_tolerance_failure(self):
        # a short pulse is far from adiabatic
        code, text = run("validate", "--ja", "2", "--jb", "1", "--jc", "1", "--initial", "pure:0", "--psi", "0",
                         "--duration", "2", "--steps", "400")
        assert code == 4 and json.loads(text)["pass"] is False

    def test_bad_schedule(self):
        code, _ = run("validate", "--ja", "2", "--jb", "1", "--jc", "1", "--initial", "pure:0", "--psi", "0",
                      "--omega-b0", "0")
        assert code == 2

    def test_numerical_failure(self):
        code, _ = run("validate", "--ja", "2", "--jb", "1", "--jc", "1", "--initial", "pure:0", "--psi", "0",
                      "--omega-a0", "100", "--omega-b0", "100", "--steps", "100")
        assert code == 1


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "photon_pistol", "classify", "--ja", "0", "--jb", "1", "--jc", "1", "--psi", "0"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0 and json.loads(proc.stdout)["N"] == 10
