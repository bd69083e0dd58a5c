import math

import numpy as np
import pytest

from ofdm_ranging.cli import main, run_acf, run_sweep
from ofdm_ranging.config import make_sweep_spec, parse_config
from ofdm_ranging.errors import ConfigError


def _write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return str(path)


BASE = """
# small desk scenario
N = 32
L = 8
M = 1
alpha_db = 10
modulation = QPSK
scheme1 = ofdm-identity
scheme2 = ofdm-identity
seed = 3
trials = 400
"""


class TestConfigParsing:
    def test_roundtrip(self, tmp_path):
        params = parse_config(_write(tmp_path, "a.cfg", BASE))
        assert params["N"] == 32
        assert params["L"] == 8
        assert params["alpha_db"] == 10.0
        assert params["trials"] == 400

    def test_minus_inf(self, tmp_path):
        params = parse_config(_write(tmp_path, "a.cfg", "alpha_db = -inf\n"))
        assert params["alpha_db"] == -math.inf

    def test_unknown_key_named(self, tmp_path):
        with pytest.raises(ConfigError) as err:
            parse_config(_write(tmp_path, "a.cfg", "Nsubcarriers = 12\n"))
        assert "Nsubcarriers" in str(err.value)

    def test_bad_int_named(self, tmp_path):
        with pytest.raises(ConfigError) as err:
            parse_config(_write(tmp_path, "a.cfg", "N = twelve\n"))
        assert "'N'" in str(err.value)

    def test_missing_file(self):
        with pytest.raises(ConfigError):
            parse_config("/nonexistent/path.cfg")

    def test_sweep_spec_validates_L(self, tmp_path):
        params = parse_config(
            _write(tmp_path, "a.cfg", BASE + "sweep_axis = L\nsweep_values = 8,64\n")
        )
        with pytest.raises(ConfigError) as err:
            make_sweep_spec(params)
        assert "sweep_values" in str(err.value)


class TestAcfCommand:
    def test_csv_shape_and_determinism(self, tmp_path):
        cfg = _write(tmp_path, "a.cfg", BASE + f"out_prefix = {tmp_path}/acf\n")
        paths = run_acf(parse_config(cfg))
        assert paths == [f"{tmp_path}/acf.csv"]
        text = (tmp_path / "acf.csv").read_text(encoding="utf-8")
        lines = text.strip().split("\n")
        assert lines[0] == "lag,analytic,analytic_db,mc,mc_db,mc_stderr"
        assert len(lines) - 1 == 2 * 32 - 1
        lags = [int(row.split(",")[0]) for row in lines[1:]]
        assert lags == list(range(-31, 32))
        run_acf(parse_config(cfg))
        assert (tmp_path / "acf.csv").read_text(encoding="utf-8") == text

    def test_round_trip_precision(self, tmp_path):
        cfg = _write(tmp_path, "a.cfg", BASE + f"out_prefix = {tmp_path}/acf\n")
        run_acf(parse_config(cfg))
        rows = (tmp_path / "acf.csv").read_text().strip().split("\n")[1:]
        analytic = np.array([float(r.split(",")[1]) for r in rows])
        from ofdm_ranging.analytic import avg_sq_acf, make_scenario

        scn = make_scenario(32, 8, M=1, alpha_db=10.0, seed=3)
        assert np.array_equal(analytic, avg_sq_acf(scn).values)

    def test_alpha_sweep_writes_one_file_per_value(self, tmp_path):
        cfg = _write(
            tmp_path,
            "a.cfg",
            BASE
            + f"out_prefix = {tmp_path}/fig\n"
            + "sweep_axis = alpha_db\nsweep_values = -inf,0,10\n",
        )
        paths = run_acf(parse_config(cfg))
        assert [p.rsplit("/", 1)[1] for p in paths] == [
            "fig_alpha_db_-inf.csv",
            "fig_alpha_db_0.csv",
            "fig_alpha_db_10.csv",
        ]


class TestSweepCommand:
    def test_long_format(self, tmp_path):
        cfg = _write(
            tmp_path,
            "a.cfg",
            BASE
            + f"out_prefix = {tmp_path}/s\n"
            + "schemes = ofdm-identity,pdpss\neta = 0.9\n"
            + "sweep_axis = alpha_db\nsweep_values = 0,10\n",
        )
        path = run_sweep(parse_config(cfg))
        lines = (tmp_path / "s_sweep.csv").read_text().strip().split("\n")
        assert lines[0] == (
            "scheme,axis,axis_value,alpha_db,M,L,eta,modulation,"
            "eisl_db_analytic,eisl_db_mc,eisl_stderr_db"
        )
        assert len(lines) - 1 == 4
        first = lines[1].split(",")
        assert first[0] == "ofdm-identity"
        assert first[1] == "alpha_db"
        assert first[2] == "0"
        assert path.endswith("s_sweep.csv")

    def test_identity_reports_eta_one(self, tmp_path):
        cfg = _write(
            tmp_path,
            "a.cfg",
            BASE
            + f"out_prefix = {tmp_path}/s\n"
            + "schemes = ofdm-identity\neta = 0.9\n"
            + "sweep_axis = M\nsweep_values = 1,2\n",
        )
        run_sweep(parse_config(cfg))
        rows = (tmp_path / "s_sweep.csv").read_text().strip().split("\n")[1:]
        assert all(r.split(",")[6] == "1.0" for r in rows)


class TestMainEntry:
    def test_acf_exit_zero(self, tmp_path, capsys):
        cfg = _write(tmp_path, "a.cfg", BASE + f"out_prefix = {tmp_path}/x\n")
        assert main(["acf", cfg]) == 0
        assert "x.csv" in capsys.readouterr().out

    def test_validate_single_scenario_single_verdict(self, tmp_path, capsys):
        cfg = _write(tmp_path, "a.cfg", BASE + "trials = 600\nsigma_band = 6\n")
        code = main(["validate", cfg])
        out = capsys.readouterr().out
        assert code == 0
        assert len(out.strip().split("\n")) == 1
        assert "PASS" in out

    def test_invalid_band_nonzero_exit_names_key(self, tmp_path, capsys):
        cfg = _write(tmp_path, "a.cfg", "N = 32\nL = 32\n")
        code = main(["validate", cfg])
        err = capsys.readouterr().err
        assert code == 2
        assert "'L'" in err

    def test_overrides(self, tmp_path):
        cfg = _write(tmp_path, "a.cfg", BASE)
        assert main(["acf", cfg, "--trials", "200", "--out", f"{tmp_path}/o"]) == 0
        assert (tmp_path / "o.csv").exists()
