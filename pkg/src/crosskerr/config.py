"""Run-configuration files: strict TOML with fixed blocks and units.

Units at the file level follow the CLI conventions: frequencies in cyclic MHz
(carrier in GHz), powers in photons/ns, times in ns, temperatures in K,
junction parameters in uA / fF / nH.  Everything is converted to internal
angular/SI units on load.  Unknown keys anywhere are rejected.
"""

from __future__ import annotations

import hashlib
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .device import (
    DEFAULT_OMEGA_QB_MHZ,
    DEFAULT_OMEGA_R_MHZ,
    CouplingSet,
    JunctionCircuit,
    angular_to_mhz,
    validate,
)
from .errors import ConfigError
from .photostatistics import DetectionChain
from .transmission import default_probe_omega

_DEVICE_DIRECT_KEYS = {"g_zz_mhz", "g_a_mhz", "kappa_mhz", "omega_r_mhz", "omega_qb_mhz"}
_DEVICE_JUNCTION_KEYS = {
    "critical_current_ua",
    "capacitance_ff",
    "inductance_nh",
    "g_a_mhz",
    "kappa_mhz",
    "omega_a_mhz",
    "omega_qb_mhz",
}
_PROBE_KEYS = {"power_photons_per_ns", "frequency_offset_mhz"}
_CHAIN_KEYS = {
    "noise_temperature_k",
    "bandwidth_mhz",
    "integration_time_ns",
    "carrier_ghz",
}
_SWEEP_KEYS = {
    "kappa_min_mhz",
    "kappa_max_mhz",
    "kappa_points",
    "power_min_photons_per_ns",
    "power_max_photons_per_ns",
    "power_points",
    "spacing",
}
_OUTPUT_KEYS = {"directory", "format", "seed"}
_BLOCKS = {"device", "probe", "chain", "sweep", "output"}

DEFAULTS = {
    "device": {"g_zz_mhz": 250.0, "g_a_mhz": 150.0, "kappa_mhz": 40.0},
    "probe": {"power_photons_per_ns": 1.0},
    "chain": {"noise_temperature_k": 0.14, "integration_time_ns": 10.0},
    "sweep": {
        "kappa_min_mhz": 5.0,
        "kappa_max_mhz": 200.0,
        "kappa_points": 30,
        "power_min_photons_per_ns": 0.01,
        "power_max_photons_per_ns": 10.0,
        "power_points": 30,
        "spacing": "log",
    },
    "output": {"directory": "out", "format": "csv", "seed": 2024},
}


@dataclass(frozen=True)
class RunConfig:
    """Validated configuration plus the normalized tree it came from."""

    couplings: CouplingSet
    probe_power: float  # photons/s
    probe_offset: float | None  # rad/s offset from omega_r, None = default tone
    chain: DetectionChain
    kappa_grid: np.ndarray  # rad/s
    p_grid: np.ndarray  # photons/s
    out_dir: Path
    out_format: str
    seed: int
    tree: dict = field(repr=False)

    @property
    def digest(self) -> str:
        """Short hash of the normalized configuration tree."""
        blob = json.dumps(self.tree, sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:12]

    def probe_omega(self, refine: bool = False) -> float:
        """Probe tone, rad/s: an explicit frequency override wins; otherwise
        omega_r + delta_L, argmax-refined when asked."""
        if self.probe_offset is not None:
            return self.couplings.omega_r + self.probe_offset
        return default_probe_omega(self.couplings, refine=refine)

    def regime_warnings(self) -> list[str]:
        return validate(self.couplings)


def _check_keys(block: str, table: dict, allowed: set[str]):
    unknown = set(table) - allowed
    if unknown:
        raise ConfigError(
            f"unknown key(s) in [{block}]: {', '.join(sorted(unknown))}"
        )


def _require(block: str, table: dict, key: str):
    if key not in table:
        raise ConfigError(f"[{block}] is missing required key {key!r}")
    return table[key]


def _number(block: str, key: str, value) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"[{block}] {key} must be a number, got {value!r}")
    return float(value)


def _positive(block: str, key: str, value) -> float:
    v = _number(block, key, value)
    if not v > 0.0:
        raise ConfigError(f"[{block}] {key} must be strictly positive")
    return v


def _non_negative(block: str, key: str, value) -> float:
    v = _number(block, key, value)
    if v < 0.0:
        raise ConfigError(f"[{block}] {key} must be non-negative")
    return v


def load_config(path: str | Path | None = None) -> RunConfig:
    """Parse and validate a configuration file; ``None`` loads the built-in
    defaults (the bundled configs/default.toml equals them)."""
    if path is None:
        tree = {k: dict(v) for k, v in DEFAULTS.items()}
    else:
        try:
            with open(path, "rb") as fh:
                tree = tomllib.load(fh)
        except FileNotFoundError:
            raise ConfigError(f"configuration file not found: {path}")
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"TOML parse error in {path}: {exc}")
    return _build(tree)


def _build(tree: dict) -> RunConfig:
    if not isinstance(tree, dict):
        raise ConfigError("configuration root must be a table")
    unknown = set(tree) - _BLOCKS
    if unknown:
        raise ConfigError(f"unknown block(s): {', '.join(sorted(unknown))}")

    device = {**DEFAULTS["device"], **tree.get("device", {})}
    probe = {**DEFAULTS["probe"], **tree.get("probe", {})}
    chain_tbl = {**DEFAULTS["chain"], **tree.get("chain", {})}
    sweep = {**DEFAULTS["sweep"], **tree.get("sweep", {})}
    output = {**DEFAULTS["output"], **tree.get("output", {})}

    couplings = _build_device(tree.get("device", {}), device)

    _check_keys("probe", probe, _PROBE_KEYS)
    power = _number("probe", "power_photons_per_ns", probe["power_photons_per_ns"])
    if power < 0.0:
        raise ConfigError("[probe] power_photons_per_ns must be non-negative")
    probe_power = power * 1e9
    probe_offset = None
    if "frequency_offset_mhz" in probe:
        probe_offset = (
            _number("probe", "frequency_offset_mhz", probe["frequency_offset_mhz"])
            * 2e6
            * np.pi
        )

    _check_keys("chain", chain_tbl, _CHAIN_KEYS)
    t_n = _number("chain", "noise_temperature_k", chain_tbl["noise_temperature_k"])
    if t_n < 0.0:
        raise ConfigError("[chain] noise_temperature_k must be non-negative")
    tau = _positive("chain", "integration_time_ns", chain_tbl["integration_time_ns"]) * 1e-9
    if "bandwidth_mhz" in chain_tbl:
        bandwidth = _positive("chain", "bandwidth_mhz", chain_tbl["bandwidth_mhz"]) * 1e6
    else:
        bandwidth = 1.0 / (2.0 * tau)
    if "carrier_ghz" in chain_tbl:
        carrier = _positive("chain", "carrier_ghz", chain_tbl["carrier_ghz"]) * 2e9 * np.pi
    else:
        carrier = couplings.omega_r
    chain = DetectionChain(
        noise_temperature=t_n,
        bandwidth=bandwidth,
        integration_time=tau,
        carrier=carrier,
    )

    _check_keys("sweep", sweep, _SWEEP_KEYS)
    spacing = sweep["spacing"]
    if spacing not in ("log", "linear"):
        raise ConfigError("[sweep] spacing must be 'log' or 'linear'")
    kappa_grid = _grid(
        "sweep",
        _positive("sweep", "kappa_min_mhz", sweep["kappa_min_mhz"]) * 2e6 * np.pi,
        _positive("sweep", "kappa_max_mhz", sweep["kappa_max_mhz"]) * 2e6 * np.pi,
        sweep["kappa_points"],
        spacing,
    )
    p_grid = _grid(
        "sweep",
        _positive("sweep", "power_min_photons_per_ns", sweep["power_min_photons_per_ns"]) * 1e9,
        _positive("sweep", "power_max_photons_per_ns", sweep["power_max_photons_per_ns"]) * 1e9,
        sweep["power_points"],
        spacing,
    )

    _check_keys("output", output, _OUTPUT_KEYS)
    if output["format"] not in ("csv", "json"):
        raise ConfigError("[output] format must be 'csv' or 'json'")
    seed = output["seed"]
    if isinstance(seed, bool) or not isinstance(seed, int) or seed < 0:
        raise ConfigError("[output] seed must be a non-negative integer")

    normalized = {
        "device": device,
        "probe": probe,
        "chain": chain_tbl,
        "sweep": sweep,
        "output": output,
    }
    return RunConfig(
        couplings=couplings,
        probe_power=probe_power,
        probe_offset=probe_offset,
        chain=chain,
        kappa_grid=kappa_grid,
        p_grid=p_grid,
        out_dir=Path(str(output["directory"])),
        out_format=str(output["format"]),
        seed=seed,
        tree=normalized,
    )


def _build_device(raw: dict, device: dict) -> CouplingSet:
    junction_route = any(
        k in raw for k in ("critical_current_ua", "capacitance_ff", "inductance_nh")
    )
    if junction_route:
        _check_keys("device", device, _DEVICE_JUNCTION_KEYS | {"g_zz_mhz"})
        if "g_zz_mhz" in raw:
            raise ConfigError(
                "[device] gives junction parameters and g_zz_mhz; use one route"
            )
        for key in ("critical_current_ua", "capacitance_ff", "inductance_nh", "omega_a_mhz"):
            _require("device", raw, key)
        circuit = JunctionCircuit(
            critical_current=_positive("device", "critical_current_ua", raw["critical_current_ua"]) * 1e-6,
            capacitance=_positive("device", "capacitance_ff", raw["capacitance_ff"]) * 1e-15,
            inductance=_positive("device", "inductance_nh", raw["inductance_nh"]) * 1e-9,
        )
        return CouplingSet.from_junctions(
            circuit,
            g_a=_positive("device", "g_a_mhz", device["g_a_mhz"]),
            kappa=_positive("device", "kappa_mhz", device["kappa_mhz"]),
            omega_a=_positive("device", "omega_a_mhz", raw["omega_a_mhz"]),
            omega_qb=_positive(
                "device", "omega_qb_mhz", device.get("omega_qb_mhz", DEFAULT_OMEGA_QB_MHZ)
            ),
        )
    _check_keys("device", device, _DEVICE_DIRECT_KEYS)
    return CouplingSet.from_mhz(
        g_zz=_positive("device", "g_zz_mhz", device["g_zz_mhz"]),
        g_a=_non_negative("device", "g_a_mhz", device["g_a_mhz"]),
        kappa=_positive("device", "kappa_mhz", device["kappa_mhz"]),
        omega_r=_positive(
            "device", "omega_r_mhz", device.get("omega_r_mhz", DEFAULT_OMEGA_R_MHZ)
        ),
        omega_qb=_positive(
            "device", "omega_qb_mhz", device.get("omega_qb_mhz", DEFAULT_OMEGA_QB_MHZ)
        ),
    )


def _grid(block: str, lo: float, hi: float, n, spacing: str) -> np.ndarray:
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise ConfigError(f"[{block}] grid point counts must be positive integers")
    if hi < lo:
        raise ConfigError(f"[{block}] grid bounds are inverted")
    if n == 1:
        return np.array([lo])
    if spacing == "log":
        return np.geomspace(lo, hi, n)
    return np.linspace(lo, hi, n)


def couplings_summary_mhz(couplings: CouplingSet) -> dict:
    """Cyclic-MHz echo of a coupling set, for provenance fields."""
    return {
        "omega_r_mhz": angular_to_mhz(couplings.omega_r),
        "omega_a_mhz": angular_to_mhz(couplings.omega_a),
        "omega_qb_mhz": angular_to_mhz(couplings.omega_qb),
        "g_zz_mhz": angular_to_mhz(couplings.g_zz),
        "g_a_mhz": angular_to_mhz(couplings.g_a),
        "kappa_mhz": angular_to_mhz(couplings.kappa),
    }
