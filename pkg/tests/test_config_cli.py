import json
from pathlib import Path

import numpy as np
import pytest

from crosskerr import ConfigError, RegimeWarning, cross_kerr, energies_from_junction, JunctionCircuit
from crosskerr.cli import main
from crosskerr.config import load_config
from crosskerr.constants import TWO_PI

REPO = Path(__file__).resolve().parents[1]
CONFIGS = REPO / "configs"


def write_config(tmp_path, body, name="run.toml"):
    path = tmp_path / name
    path.write_text(body)
    return path


class TestConfigLoading:
    def test_builtin_defaults_match_bundled_default_file(self):
        assert load_config(None).digest == load_config(CONFIGS / "default.toml").digest

    def test_design_point_values(self):
        cfg = load_config(CONFIGS / "default.toml")
        assert cfg.couplings.g_zz == pytest.approx(TWO_PI * 250e6)
        assert cfg.couplings.omega_r == pytest.approx(TWO_PI * 7e9)
        assert cfg.probe_power == pytest.approx(1e9)
        assert cfg.chain.bandwidth == pytest.approx(1.0 / (2.0 * 10e-9))  # 50 MHz
        assert cfg.chain.carrier == cfg.couplings.omega_r
        assert cfg.out_format == "csv"

    def test_explicit_bandwidth_and_carrier(self, tmp_path):
        path = write_config(
            tmp_path,
            "[chain]\nnoise_temperature_k = 4.0\nintegration_time_ns = 50.0\n"
            "bandwidth_mhz = 10.0\ncarrier_ghz = 6.5\n",
        )
        cfg = load_config(path)
        assert cfg.chain.bandwidth == pytest.approx(10e6)
        assert cfg.chain.carrier == pytest.approx(TWO_PI * 6.5e9)

    def test_junction_route(self, tmp_path):
        path = write_config(
            tmp_path,
            "[device]\ncritical_current_ua = 0.03\ncapacitance_ff = 60.0\n"
            "inductance_nh = 300.0\nomega_a_mhz = 6750.0\ng_a_mhz = 150.0\n"
            "kappa_mhz = 40.0\n",
        )
        cfg = load_config(path)
        # same unit-conversion arithmetic as the loader, so equality is exact
        expected = cross_kerr(
            energies_from_junction(
                JunctionCircuit(0.03 * 1e-6, 60.0 * 1e-15, 300.0 * 1e-9)
            )
        )
        assert cfg.couplings.g_zz == expected
        assert cfg.couplings.omega_r == cfg.couplings.omega_a + cfg.couplings.g_zz

    def test_unknown_key_rejected(self, tmp_path):
        path = write_config(tmp_path, "[device]\ng_zz_mhz = 250.0\nbogus = 1\n")
        with pytest.raises(ConfigError, match="bogus"):
            load_config(path)

    def test_unknown_block_rejected(self, tmp_path):
        path = write_config(tmp_path, "[nonsense]\nx = 1\n")
        with pytest.raises(ConfigError, match="nonsense"):
            load_config(path)

    def test_mixed_device_routes_rejected(self, tmp_path):
        path = write_config(
            tmp_path,
            "[device]\ng_zz_mhz = 250.0\ncritical_current_ua = 0.03\n"
            "capacitance_ff = 60.0\ninductance_nh = 300.0\nomega_a_mhz = 6750.0\n",
        )
        with pytest.raises(ConfigError):
            load_config(path)

    def test_bad_values_rejected(self, tmp_path):
        for body in (
            "[probe]\npower_photons_per_ns = -1.0\n",
            "[sweep]\nspacing = 'cubic'\n",
            "[output]\nformat = 'xml'\n",
            "[output]\nseed = -4\n",
            "[chain]\nintegration_time_ns = 0.0\n",
        ):
            with pytest.raises(ConfigError):
                load_config(write_config(tmp_path, body))

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError, match="not found"):
            load_config(tmp_path / "absent.toml")

    def test_probe_frequency_override(self, tmp_path):
        path = write_config(
            tmp_path,
            "[probe]\npower_photons_per_ns = 1.0\nfrequency_offset_mhz = 0.0\n",
        )
        cfg = load_config(path)
        # an explicit zero offset parks the tone exactly on the bare cavity
        assert cfg.probe_omega() == cfg.couplings.omega_r
        assert cfg.probe_omega(refine=True) == cfg.couplings.omega_r
        default = load_config(None)
        assert default.probe_omega() > default.couplings.omega_r

    def test_probe_override_reaches_fidelity(self, tmp_path):
        # probing at omega_r instead of omega_r + delta_L collapses the
        # conditional contrast, so the override must visibly change the report
        on_peak = load_config(None)
        cfg = load_config(
            write_config(
                tmp_path,
                "[probe]\npower_photons_per_ns = 1.0\nfrequency_offset_mhz = 0.0\n",
            )
        )
        from crosskerr import fidelity

        f_default = fidelity(on_peak.couplings, on_peak.probe_power, on_peak.chain,
                             probe_omega=on_peak.probe_omega())
        f_detuned = fidelity(cfg.couplings, cfg.probe_power, cfg.chain,
                             probe_omega=cfg.probe_omega())
        assert f_detuned.fidelity < f_default.fidelity

    def test_digest_tracks_content(self, tmp_path):
        a = load_config(write_config(tmp_path, "[probe]\npower_photons_per_ns = 1.0\n", "a.toml"))
        b = load_config(write_config(tmp_path, "[probe]\npower_photons_per_ns = 2.0\n", "b.toml"))
        assert a.digest != b.digest
        assert a.digest == load_config(None).digest  # 1.0 is the default


def read_csv(path):
    rows = []
    header = None
    for line in Path(path).read_text().splitlines():
        if line.startswith("#"):
            continue
        if header is None:
            header = line.split(",")
            continue
        rows.append([float(x) for x in line.split(",")])
    return header, np.array(rows)


class TestSpectrumCommand:
    def test_design_point_peaks(self, tmp_path):
        out = tmp_path / "out"
        code = main(
            [
                "spectrum",
                "--config", str(CONFIGS / "fig2.toml"),
                "--out", str(out),
                "--offsets",
            ]
        )
        assert code == 0
        header, rows = read_csv(out / "spectrum_g.csv")
        assert header == ["omega_mhz", "re_t", "im_t", "power_ratio"]
        assert len(rows) == 1601
        peaks = json.loads((out / "spectrum_peaks.json").read_text())
        g_strong = [
            p
            for p, h in zip(peaks["g"]["peak_positions_mhz"], peaks["g"]["peak_heights"])
            if h > 0.5
        ]
        assert len(g_strong) == 2
        assert abs(g_strong[0] + 150.0) < 0.5
        assert abs(g_strong[1] - 150.0) < 0.5
        e_best = max(
            zip(peaks["e"]["peak_heights"], peaks["e"]["peak_positions_mhz"])
        )
        assert abs(e_best[1] - 41.55) < 0.5
        assert peaks["probe_mhz"] == pytest.approx(41.5476, abs=1e-3)

    def test_decoupled_single_lorentzian(self, tmp_path):
        cfg = write_config(
            tmp_path,
            "[device]\ng_zz_mhz = 250.0\ng_a_mhz = 0.0\nkappa_mhz = 40.0\n"
            "[probe]\npower_photons_per_ns = 1e-4\n",
        )
        out = tmp_path / "out"
        # the decoupled device rightly trips the resolvability regime check
        with pytest.warns(RegimeWarning):
            assert main(["spectrum", "--config", str(cfg), "--out", str(out), "--offsets"]) == 0
        peaks = json.loads((out / "spectrum_peaks.json").read_text())
        for state in ("g", "e"):
            strong = [
                p
                for p, h in zip(
                    peaks[state]["peak_positions_mhz"], peaks[state]["peak_heights"]
                )
                if h > 0.5
            ]
            assert len(strong) == 1
            assert abs(strong[0]) < 0.5

    def test_dispersive_limit_shift(self, tmp_path):
        cfg = write_config(
            tmp_path,
            "[device]\ng_zz_mhz = 1000.0\ng_a_mhz = 150.0\nkappa_mhz = 40.0\n"
            "[probe]\npower_photons_per_ns = 1e-4\n",
        )
        out = tmp_path / "out"
        assert main(["spectrum", "--config", str(cfg), "--out", str(out), "--offsets"]) == 0
        peaks = json.loads((out / "spectrum_peaks.json").read_text())
        e_best = max(
            zip(peaks["e"]["peak_heights"], peaks["e"]["peak_positions_mhz"])
        )
        # g_a^2 / 2 g_zz = 11.25 MHz; exact shift 11.1874 MHz
        assert abs(e_best[1] - 11.1874) < 0.5

    def test_byte_identical_reruns(self, tmp_path):
        out1, out2 = tmp_path / "a", tmp_path / "b"
        for out in (out1, out2):
            assert main(["spectrum", "--config", str(CONFIGS / "fig2.toml"), "--out", str(out)]) == 0
        assert (out1 / "spectrum_g.csv").read_bytes() == (out2 / "spectrum_g.csv").read_bytes()
        assert (out1 / "spectrum_peaks.json").read_bytes() == (out2 / "spectrum_peaks.json").read_bytes()

    def test_provenance_header(self, tmp_path):
        out = tmp_path / "out"
        assert main(["spectrum", "--config", str(CONFIGS / "fig2.toml"), "--out", str(out)]) == 0
        first = (out / "spectrum_g.csv").read_text().splitlines()[0]
        assert first.startswith("# crosskerr 0.1.0 | config ")

    def test_json_mirror(self, tmp_path):
        out = tmp_path / "out"
        assert (
            main(
                [
                    "spectrum", "--config", str(CONFIGS / "fig2.toml"),
                    "--out", str(out), "--format", "json", "--state", "g",
                ]
            )
            == 0
        )
        payload = json.loads((out / "spectrum_g.json").read_text())
        assert set(payload) == {"provenance", "omega_mhz", "re_t", "im_t", "power_ratio"}
        assert len(payload["omega_mhz"]) == 1601


class TestHistogramCommand:
    def test_fig3a_histogram(self, tmp_path):
        out = tmp_path / "out"
        assert main(["histogram", "--config", str(CONFIGS / "fig3a.toml"), "--out", str(out)]) == 0
        header, rows = read_csv(out / "histogram.csv")
        assert header == ["n", "prob_g", "prob_e"]
        assert rows[:, 0].tolist() == list(range(len(rows)))
        assert rows[:, 1].sum() == pytest.approx(1.0, abs=1e-9)
        assert rows[:, 2].sum() == pytest.approx(1.0, abs=1e-9)
        # g concentrates at low counts, e at high counts
        assert rows[: 3, 1].sum() > 0.9
        assert rows[3:, 2].sum() > 0.9


class TestFidelityCommand:
    def test_fig3a_report(self, tmp_path):
        out = tmp_path / "out"
        assert main(["fidelity", "--config", str(CONFIGS / "fig3a.toml"), "--out", str(out)]) == 0
        report = json.loads((out / "fidelity.json").read_text())
        assert 0.9 < report["fidelity"] < 0.99
        assert report["low_state"] == "g"
        assert report["provenance"]["version"] == "0.1.0"
        assert report["parameters"]["couplings_mhz"]["kappa_mhz"] == pytest.approx(40.0)


class TestMapCommand:
    def test_small_map(self, tmp_path):
        cfg = write_config(
            tmp_path,
            "[sweep]\nkappa_min_mhz = 20.0\nkappa_max_mhz = 80.0\nkappa_points = 3\n"
            "power_min_photons_per_ns = 0.3\npower_max_photons_per_ns = 3.0\n"
            "power_points = 3\n",
        )
        out = tmp_path / "out"
        assert main(["map", "--config", str(cfg), "--out", str(out)]) == 0
        header, rows = read_csv(out / "fidelity_map.csv")
        assert header == ["kappa_mhz", "p_photons_per_ns", "fidelity"]
        assert len(rows) == 9
        summary = json.loads((out / "fidelity_map_summary.json").read_text())
        best = rows[np.argmax(rows[:, 2])]
        assert summary["max_fidelity"] == pytest.approx(best[2], rel=1e-12)
        assert summary["argmax_kappa_mhz"] == pytest.approx(best[0], rel=1e-12)


class TestOracleCheckCommand:
    def test_default_passes(self, tmp_path):
        out = tmp_path / "out"
        code = main(["oracle-check", "--out", str(out), "--points", "21"])
        assert code == 0
        header, rows = read_csv(out / "oracle_transmission.csv")
        assert header == ["omega_mhz", "abs_err_t_g", "abs_err_t_e"]
        assert len(rows) == 21
        assert rows[:, 1:].max() < 1e-3
        report = json.loads((out / "oracle_counts.json").read_text())
        assert len(report["cells"]) == 9
        assert {c["seed"] for c in report["cells"]} == {2024}

    def test_violated_tolerance_exits_2(self, tmp_path):
        out = tmp_path / "out"
        code = main(
            [
                "oracle-check",
                "--out", str(out),
                "--points", "5",
                "--tol", "1e-12",
                "--mc-samples", "1000",
            ]
        )
        assert code == 2


class TestExitCodes:
    def test_bad_config_is_usage_error(self, tmp_path):
        bad = write_config(tmp_path, "[device]\nbogus = 1\n")
        assert main(["fidelity", "--config", str(bad), "--out", str(tmp_path / "o")]) == 1

    def test_unknown_option_is_usage_error(self):
        assert main(["spectrum", "--no-such-flag"]) == 1

    def test_missing_config_file(self, tmp_path):
        assert main(["fidelity", "--config", str(tmp_path / "none.toml")]) == 1
