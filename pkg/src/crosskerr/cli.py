"""Command-line front end.

Subcommands: ``spectrum``, ``histogram``, ``fidelity``, ``map`` and
``oracle-check``.  All tabular outputs are CSV (or a JSON mirror via
``--format json``) with a provenance header; frequencies are cyclic MHz,
powers photons/ns, times ns.  Exit codes: 0 success, 1 usage or
configuration error, 2 numerical or oracle failure.
"""

from __future__ import annotations

import sys
from pathlib import Path

import click
import numpy as np

from . import __version__, dynamics, photostatistics, readout
from .config import RunConfig, couplings_summary_mhz, load_config
from .device import angular_to_mhz
from .errors import ConfigError, CrossKerrError
from .output import write_json, write_table
from .transmission import QubitState, spectrum as make_spectrum

MC_GRID_S = (0.5, 5.0, 50.0)
MC_GRID_M = (0.05, 0.5, 5.0)


class OracleFailure(CrossKerrError):
    """An oracle tolerance was violated; maps to exit code 2."""


def _load(config_path):
    cfg = load_config(config_path)
    for message in cfg.regime_warnings():
        click.echo(f"warning: {message}", err=True)
    return cfg


def _out_dir(cfg: RunConfig, out) -> Path:
    return Path(out) if out else cfg.out_dir


def _fmt(cfg: RunConfig, fmt) -> str:
    return fmt if fmt else cfg.out_format


def common_options(fn):
    fn = click.option(
        "--config", "config_path", type=click.Path(), default=None,
        help="Run-configuration TOML file (built-in defaults when omitted).",
    )(fn)
    fn = click.option("--out", default=None, help="Output directory.")(fn)
    fn = click.option(
        "--format", "fmt", type=click.Choice(["csv", "json"]), default=None,
        help="Tabular output format (default from config).",
    )(fn)
    fn = click.option(
        "--seed", type=int, default=None, help="Override the configured RNG seed."
    )(fn)
    return fn


@click.group()
@click.version_option(version=__version__, prog_name="crosskerr")
def cli():
    """Qubit readout through a cross-Kerr coupled ancilla: conditional
    spectra, count histograms, single-shot fidelity and its optimization
    landscape."""


@cli.command()
@common_options
@click.option(
    "--state", type=click.Choice(["g", "e", "both"]), default="both",
    help="Qubit state(s) to sweep.",
)
@click.option("--span-mhz", default=400.0, show_default=True,
              help="Half-width of the grid around the resonator frequency.")
@click.option("--points", default=1601, show_default=True, help="Grid points.")
@click.option("--offsets", is_flag=True,
              help="Write frequencies as offsets from omega_r instead of absolute MHz.")
@click.option("--refine-probe", is_flag=True,
              help="Mark the refined probe tone in the peaks sidecar.")
def spectrum(config_path, out, fmt, seed, state, span_mhz, points, offsets,
             refine_probe):
    """Conditional transmission spectra plus a refined-peak sidecar."""
    cfg = _load(config_path)
    out_dir = _out_dir(cfg, out)
    fmt = _fmt(cfg, fmt)
    if points < 2:
        raise ConfigError("--points must be at least 2")
    c = cfg.couplings
    span = span_mhz * 2e6 * np.pi
    grid = np.linspace(c.omega_r - span, c.omega_r + span, points)
    states = {"g": [QubitState.GROUND], "e": [QubitState.EXCITED]}.get(
        state, [QubitState.GROUND, QubitState.EXCITED]
    )
    peaks_payload = {
        "probe_mhz": _omega_mhz(cfg.probe_omega(refine=refine_probe), c.omega_r, offsets),
        "probe_power_photons_per_ns": cfg.probe_power / 1e9,
    }
    for st in states:
        spec = make_spectrum(st, cfg.probe_power, grid, c)
        rows = [
            (
                _omega_mhz(w, c.omega_r, offsets),
                float(t.real),
                float(t.imag),
                float(pr),
            )
            for w, t, pr in zip(spec.omega, spec.t, spec.power_ratio)
        ]
        suffix = "csv" if fmt == "csv" else "json"
        write_table(
            out_dir / f"spectrum_{st.label}.{suffix}",
            ["omega_mhz", "re_t", "im_t", "power_ratio"],
            rows,
            cfg.digest,
            fmt,
        )
        peaks_payload[st.label] = {
            "peak_positions_mhz": [
                _omega_mhz(p.omega, c.omega_r, offsets) for p in spec.peaks
            ],
            "peak_heights": [p.power_ratio for p in spec.peaks],
        }
    write_json(out_dir / "spectrum_peaks.json", peaks_payload, cfg.digest)
    click.echo(f"spectrum written to {out_dir}")


def _omega_mhz(omega, omega_r, offsets):
    return angular_to_mhz(omega - omega_r) if offsets else angular_to_mhz(omega)


@cli.command()
@common_options
@click.option("--refine-probe", is_flag=True,
              help="Probe at the refined argmax of the e-state response.")
def histogram(config_path, out, fmt, seed, refine_probe):
    """Conditional photon-count histograms at the amplifier input."""
    cfg = _load(config_path)
    out_dir = _out_dir(cfg, out)
    fmt = _fmt(cfg, fmt)
    dist_g, dist_e = readout.histogram_pair(
        cfg.couplings,
        cfg.probe_power,
        cfg.chain,
        probe_omega=cfg.probe_omega(refine=refine_probe),
    )
    width = max(len(dist_g.probs), len(dist_e.probs))
    pg = np.zeros(width)
    pe = np.zeros(width)
    pg[: len(dist_g.probs)] = dist_g.probs
    pe[: len(dist_e.probs)] = dist_e.probs
    rows = [(n, float(pg[n]), float(pe[n])) for n in range(width)]
    suffix = "csv" if fmt == "csv" else "json"
    write_table(
        out_dir / f"histogram.{suffix}",
        ["n", "prob_g", "prob_e"],
        rows,
        cfg.digest,
        fmt,
    )
    click.echo(
        f"histogram written to {out_dir} "
        f"(overlap {photostatistics.overlap(dist_g, dist_e):.4f})"
    )


@cli.command()
@common_options
@click.option("--refine-probe", is_flag=True,
              help="Probe at the refined argmax of the e-state response.")
def fidelity(config_path, out, fmt, seed, refine_probe):
    """Single-shot readout fidelity report."""
    cfg = _load(config_path)
    out_dir = _out_dir(cfg, out)
    report = readout.fidelity(
        cfg.couplings,
        cfg.probe_power,
        cfg.chain,
        probe_omega=cfg.probe_omega(refine=refine_probe),
    )
    payload = {
        "fidelity": report.fidelity,
        "err_g": report.err_g,
        "err_e": report.err_e,
        "threshold": report.threshold,
        "low_state": report.low_state.label,
        "p_t_g_photons_per_ns": report.p_t_g / 1e9,
        "p_t_e_photons_per_ns": report.p_t_e / 1e9,
        "nbar_g": report.nbar_g,
        "nbar_e": report.nbar_e,
        "probe_mhz": angular_to_mhz(report.probe_omega),
        "parameters": {
            "couplings_mhz": couplings_summary_mhz(cfg.couplings),
            "probe_power_photons_per_ns": report.probe_power / 1e9,
            "noise_temperature_k": cfg.chain.noise_temperature,
            "bandwidth_mhz": cfg.chain.bandwidth / 1e6,
            "integration_time_ns": cfg.chain.integration_time * 1e9,
            "carrier_ghz": angular_to_mhz(cfg.chain.carrier) / 1e3,
            "refine_probe": bool(refine_probe),
        },
    }
    write_json(out_dir / "fidelity.json", payload, cfg.digest)
    click.echo(
        f"fidelity {report.fidelity:.4f} "
        f"(threshold {report.threshold}, low side {report.low_state.label}) "
        f"written to {out_dir}"
    )


@cli.command(name="map")
@common_options
@click.option("--refine-probe", is_flag=True,
              help="Probe at the refined argmax of the e-state response.")
def map_cmd(config_path, out, fmt, seed, refine_probe):
    """Fidelity over the configured (kappa, drive power) grid."""
    cfg = _load(config_path)
    out_dir = _out_dir(cfg, out)
    fmt = _fmt(cfg, fmt)
    grid = readout.fidelity_map(
        cfg.kappa_grid,
        cfg.p_grid,
        cfg.chain,
        cfg.couplings,
        probe_omega=cfg.probe_omega(refine=refine_probe),
    )
    rows = [
        (
            angular_to_mhz(kappa),
            float(p / 1e9),
            float(grid.fidelity[i, j]),
        )
        for i, kappa in enumerate(grid.kappa_values)
        for j, p in enumerate(grid.p_values)
    ]
    suffix = "csv" if fmt == "csv" else "json"
    write_table(
        out_dir / f"fidelity_map.{suffix}",
        ["kappa_mhz", "p_photons_per_ns", "fidelity"],
        rows,
        cfg.digest,
        fmt,
    )
    write_json(
        out_dir / "fidelity_map_summary.json",
        {
            "argmax_kappa_mhz": angular_to_mhz(grid.argmax[0]),
            "argmax_p_photons_per_ns": grid.argmax[1] / 1e9,
            "argmax_p_photons_per_10ns": grid.argmax[1] / 1e8,
            "max_fidelity": float(grid.fidelity.max()),
            "kappa_points": len(grid.kappa_values),
            "power_points": len(grid.p_values),
        },
        cfg.digest,
    )
    click.echo(
        f"map written to {out_dir}; best F = {grid.fidelity.max():.4f} at "
        f"kappa/2pi = {angular_to_mhz(grid.argmax[0]):.2f} MHz, "
        f"p = {grid.argmax[1] / 1e9:.3f} photons/ns"
    )


@cli.command(name="oracle-check")
@common_options
@click.option("--points", default=201, show_default=True,
              help="Frequency grid points for the transmission oracle.")
@click.option("--span-mhz", default=400.0, show_default=True,
              help="Half-width of the oracle grid around omega_r.")
@click.option("--p-fraction", default=1e-4, show_default=True,
              help="Drive as a fraction of the local saturation flux.")
@click.option("--tol", default=1e-3, show_default=True,
              help="Gate on max |t_linear - t_ode|.")
@click.option("--mc-samples", default=1_000_000, show_default=True,
              help="Monte Carlo samples per (s, m) cell.")
@click.option("--mc-tol", default=8e-3, show_default=True,
              help="Gate on per-cell total-variation distance (the 1e6-sample "
                   "noise floor of the widest default cell is ~4e-3).")
def oracle_check(config_path, out, fmt, seed, points, span_mhz, p_fraction, tol,
                 mc_samples, mc_tol):
    """Run both independent oracles and gate on their tolerances.

    Writes the transmission comparison CSV and the Monte Carlo counting
    report, then exits 2 if either oracle tolerance is violated.
    """
    cfg = _load(config_path)
    out_dir = _out_dir(cfg, out)
    fmt = _fmt(cfg, fmt)
    use_seed = seed if seed is not None else cfg.seed
    c = cfg.couplings

    sweep = dynamics.oracle_sweep(
        c, n_points=points, span=span_mhz * 2e6 * np.pi, p_fraction=p_fraction
    )
    rows = [
        (angular_to_mhz(r.omega), r.err_g, r.err_e) for r in sweep.rows
    ]
    suffix = "csv" if fmt == "csv" else "json"
    write_table(
        out_dir / f"oracle_transmission.{suffix}",
        ["omega_mhz", "abs_err_t_g", "abs_err_t_e"],
        rows,
        cfg.digest,
        fmt,
    )
    ode_ok = sweep.max_err < tol
    click.echo(
        f"transmission oracle: max |t_linear - t_ode| = {sweep.max_err:.3e} "
        f"at p = {p_fraction:g} p_s  [{'ok' if ode_ok else 'FAIL'} vs {tol:g}]"
    )

    tau = cfg.chain.integration_time
    cells = []
    mc_ok = True
    for s in MC_GRID_S:
        for m in MC_GRID_M:
            exact = photostatistics.count_distribution(s / tau, m / tau, tau)
            sampled = photostatistics.sample_counts(
                s / tau, m / tau, tau, mc_samples, use_seed
            )
            tv = photostatistics.tv_distance(exact, sampled)
            mc_ok = mc_ok and tv < mc_tol
            cells.append(
                {
                    "s": s,
                    "m": m,
                    "tau": tau,
                    "n_samples": mc_samples,
                    "seed": use_seed,
                    "tv_distance": tv,
                }
            )
    write_json(
        out_dir / "oracle_counts.json",
        {"cells": cells, "tv_tolerance": mc_tol},
        cfg.digest,
    )
    worst = max(cell["tv_distance"] for cell in cells)
    click.echo(
        f"counting oracle: worst TV = {worst:.3e} over "
        f"{len(cells)} cells at {mc_samples} samples  "
        f"[{'ok' if mc_ok else 'FAIL'} vs {mc_tol:g}]"
    )

    if not (ode_ok and mc_ok):
        raise OracleFailure("oracle tolerance violated; see files in " + str(out_dir))
    click.echo("oracle-check passed")


def main(argv=None) -> int:
    """Entry point with the documented exit-code mapping."""
    try:
        cli.main(args=argv, standalone_mode=False)
    except click.exceptions.Exit as exc:
        return int(exc.exit_code)
    except (click.UsageError, click.BadParameter) as exc:
        exc.show()
        return 1
    except click.Abort:
        return 1
    except ConfigError as exc:
        click.echo(f"config error: {exc}", err=True)
        return 1
    except OracleFailure as exc:
        click.echo(f"oracle failure: {exc}", err=True)
        return 2
    except CrossKerrError as exc:
        click.echo(f"numerical error: {exc}", err=True)
        return 2
    except OSError as exc:
        click.echo(f"i/o error: {exc}", err=True)
        return 2
    return 0


def entrypoint():
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
