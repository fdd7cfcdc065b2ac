"""Deterministic output files with a provenance stamp.

Identical configurations produce byte-identical files: floats are written
with ``repr`` (shortest round-trip form), JSON keys are sorted, and no
timestamps are embedded.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from . import __version__

UNITS_NOTE = (
    "frequencies cyclic MHz; powers photons/ns; times ns; temperatures K; "
    "internal state angular rad/s and photons/s"
)


def provenance(config_digest: str) -> dict:
    return {
        "tool": "crosskerr",
        "version": __version__,
        "config_sha256_12": config_digest,
        "units": UNITS_NOTE,
    }


def _fmt(value) -> str:
    if isinstance(value, (float, np.floating)):
        return repr(float(value))  # shortest round-trip form
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return str(value)


def _json_default(value):
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.ndarray):
        return value.tolist()
    raise TypeError(f"not JSON serializable: {type(value)!r}")


def write_table(
    path: Path,
    header: list[str],
    rows: list[tuple],
    config_digest: str,
    fmt: str = "csv",
) -> Path:
    """Write rows as CSV (with '#' provenance comments) or as a JSON mirror
    with the same field names."""
    path.parent.mkdir(parents=True, exist_ok=True)
    if fmt == "csv":
        lines = [
            f"# crosskerr {__version__} | config {config_digest}",
            f"# units: {UNITS_NOTE}",
            ",".join(header),
        ]
        lines.extend(",".join(_fmt(v) for v in row) for row in rows)
        path.write_text("\n".join(lines) + "\n")
    else:
        payload = {
            "provenance": provenance(config_digest),
            **{name: [row[i] for row in rows] for i, name in enumerate(header)},
        }
        write_json(path, payload, config_digest=None)
    return path


def write_json(path: Path, payload: dict, config_digest: str | None) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    if config_digest is not None:
        payload = {"provenance": provenance(config_digest), **payload}
    path.write_text(
        json.dumps(payload, sort_keys=True, indent=2, default=_json_default) + "\n"
    )
    return path
