"""Stepping kernels for the semiclassical dynamics.

The compiled (Cython) backend is selected at import when the extension was
built; otherwise the pure-Python twin is used.  Setting the environment
variable ``CROSSKERR_PURE=1`` forces the pure backend (useful for the
cross-backend tests and the benchmark).
"""

import os

from . import _stepper_py

STATUS_OK = _stepper_py.STATUS_OK
STATUS_UNDERFLOW = _stepper_py.STATUS_UNDERFLOW
STATUS_MAX_STEPS = _stepper_py.STATUS_MAX_STEPS

try:
    from . import _stepper_cy
except ImportError:
    _stepper_cy = None

if os.environ.get("CROSSKERR_PURE") == "1" or _stepper_cy is None:
    _impl = _stepper_py
    BACKEND = "python"
else:
    _impl = _stepper_cy
    BACKEND = "cython"

integrate_semiclassical = _impl.integrate_semiclassical


def available_backends():
    """Name -> kernel function, for benchmarks and equivalence tests."""
    out = {"python": _stepper_py.integrate_semiclassical}
    if _stepper_cy is not None:
        out["cython"] = _stepper_cy.integrate_semiclassical
    return out
