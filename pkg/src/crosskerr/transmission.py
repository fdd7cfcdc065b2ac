"""Steady-state cavity transmission conditioned on the qubit state.

The driven resonator-ancilla system has the closed-form transmission

    t(omega) = t0(omega) * { 1 - [1/(1 + p/p_s)] * [1 - 2i D_a / (Gamma t0)]^-1 }

with t0 the empty-cavity response, D_a = omega_r + delta_j - omega the
detuning from the (qubit-state-shifted) ancilla, Gamma = 2 g_a^2 / kappa the
cavity-induced ancilla linewidth, and p_s the saturation flux.  The p -> 0
limit is the linear two-peak / shifted-peak response; p >> p_s recovers the
bare cavity.

All frequencies are angular (rad/s) and photon fluxes are photons/s.  Every
function accepts scalar or ndarray ``omega``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property

import numpy as np

from .device import CouplingSet
from .errors import DomainError

# Unit convention for the saturation flux: Gamma and kappa enter p_s in
# angular units (rad/s), making p_s directly comparable to the drive flux p
# in photons/s.  The cyclic alternative divides p_s by 2pi, which
# over-saturates the ancilla at the readout operating point and destroys the
# fidelity optimum; see tests/test_acceptance.py where both are evaluated.
SATURATION_FREQUENCY_UNITS = "angular"

POWER_RATIO_SLACK = 1e-9  # numerical headroom on |t|^2 <= 1


class QubitState(Enum):
    """Logical qubit state; sets the ancilla frequency shift."""

    GROUND = "g"
    EXCITED = "e"

    @property
    def label(self) -> str:
        return self.value

    @property
    def sigma_z(self) -> int:
        return -1 if self is QubitState.GROUND else +1

    def ancilla_shift(self, couplings: CouplingSet) -> float:
        """delta_j = -g_zz (1 + sigma_z): 0 for g, -2 g_zz for e, rad/s."""
        return -couplings.g_zz * (1 + self.sigma_z)


@dataclass(frozen=True)
class Probe:
    """Drive tone: angular frequency omega (rad/s) and incident photon flux
    p (photons/s, p = <b_in^dag b_in>)."""

    omega: float
    p: float

    def __post_init__(self):
        if self.p < 0.0:
            raise DomainError("Probe.p must be non-negative")


@dataclass(frozen=True)
class TransmissionPoint:
    omega: float
    t: complex
    power_ratio: float


@dataclass(frozen=True)
class Peak:
    """Local maximum of |t|^2, parabolically refined off the grid."""

    omega: float
    power_ratio: float


@dataclass(frozen=True)
class Spectrum:
    """|t|^2 and t over a strictly increasing frequency grid, one qubit state."""

    qubit_state: QubitState
    probe_power: float
    omega: np.ndarray
    t: np.ndarray
    power_ratio: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.omega.size == 0:
            raise DomainError("Spectrum requires a non-empty grid")
        if np.any(np.diff(self.omega) <= 0.0):
            raise DomainError("Spectrum grid must be strictly increasing")
        if np.any(self.power_ratio > 1.0 + POWER_RATIO_SLACK) or np.any(
            self.power_ratio < 0.0
        ):
            raise DomainError("power_ratio outside [0, 1 + slack]")

    @property
    def points(self) -> list[TransmissionPoint]:
        return [
            TransmissionPoint(w, t, pr)
            for w, t, pr in zip(self.omega, self.t, self.power_ratio)
        ]

    @cached_property
    def peaks(self) -> list[Peak]:
        """Interior local maxima of |t|^2 with three-point parabolic
        refinement, ordered by frequency."""
        return _locate_peaks(self.omega, self.power_ratio)


def ancilla_linewidth(couplings: CouplingSet) -> float:
    """Gamma = 2 g_a^2 / kappa, the cavity-induced ancilla linewidth, rad/s."""
    return 2.0 * couplings.g_a**2 / couplings.kappa


def t_empty(omega, couplings: CouplingSet):
    """Empty-resonator transmission t0 = -[1 + i(omega_r - omega)/kappa]^-1.

    |t0| = 1 on resonance, |t0|^2 = 1/2 at omega_r +- kappa.
    """
    return -1.0 / (1.0 + 1j * (couplings.omega_r - np.asarray(omega)) / couplings.kappa)


def dispersive_shift(couplings: CouplingSet) -> float:
    """Shift delta_L = g_zz (sqrt(1 + g_a^2/g_zz^2) - 1) of the e-state peak
    above omega_r, rad/s.

    Evaluated as g_zz r^2 / (sqrt(1 + r^2) + 1), r = g_a/g_zz, which is free
    of cancellation for r << 1 and tends to g_a^2/(2 g_zz) there.
    """
    r = couplings.g_a / couplings.g_zz
    return couplings.g_zz * r * r / (math.sqrt(1.0 + r * r) + 1.0)


def t_linear(omega, state: QubitState, couplings: CouplingSet):
    """Low-power transmission t_j = [1/t0 + i Gamma / 2(omega_r+delta_j-omega)]^-1.

    At the exact ancilla resonance (omega = omega_r + delta_j) the response
    has a transmission zero; the limit value 0 is returned there.
    """
    omega = np.asarray(omega, dtype=float)
    d_a = couplings.omega_r + state.ancilla_shift(couplings) - omega
    gamma = ancilla_linewidth(couplings)
    if gamma == 0.0:
        return t_empty(omega, couplings)
    on_pole = d_a == 0.0
    d_safe = np.where(on_pole, 1.0, d_a)
    inv = 1.0 / t_empty(omega, couplings) + 1j * gamma / (2.0 * d_safe)
    t = np.where(on_pole, 0.0 + 0.0j, 1.0 / inv)
    if t.ndim == 0:
        return complex(t)
    return t


def saturation_power(
    omega,
    state: QubitState,
    couplings: CouplingSet,
    frequency_units: str | None = None,
):
    """Saturation flux p_s of the driven ancilla-cavity system, photons/s:

        p_s / Gamma = (D_a/Gamma)^2 + [(omega_r-omega) D_a / (Gamma kappa) - 1/2]^2

    with D_a = omega_r + delta_j - omega.  The bracket is a pure frequency
    ratio; only the leading Gamma carries units, fixed by
    SATURATION_FREQUENCY_UNITS (see module docstring).

    At omega = omega_r with delta_j = 0 both detuning terms vanish and
    p_s = Gamma/4; near the vacuum-Rabi peaks p_s dips well below that value
    (resonant normal-mode drive saturates the ancilla early).
    """
    units = frequency_units or SATURATION_FREQUENCY_UNITS
    if units not in ("angular", "cyclic"):
        raise DomainError(f"unknown saturation frequency units: {units!r}")
    omega = np.asarray(omega, dtype=float)
    gamma = ancilla_linewidth(couplings)
    if gamma == 0.0:
        # decoupled ancilla never saturates
        full = np.full_like(omega, np.inf, dtype=float)
        return float(full) if full.ndim == 0 else full
    d_a = couplings.omega_r + state.ancilla_shift(couplings) - omega
    d_r = couplings.omega_r - omega
    p_s = gamma * (
        (d_a / gamma) ** 2 + (d_r * d_a / (gamma * couplings.kappa) - 0.5) ** 2
    )
    if units == "cyclic":
        p_s = p_s / (2.0 * np.pi)
    if p_s.ndim == 0:
        return float(p_s)
    return p_s


def t_full(
    omega,
    state: QubitState,
    p: float,
    couplings: CouplingSet,
    frequency_units: str | None = None,
):
    """Transmission with ancilla saturation at drive flux p (photons/s).

    Continuous in p; equals t_linear at p = 0 and tends to t_empty as
    p/p_s -> infinity.
    """
    if p < 0.0:
        raise DomainError("drive flux p must be non-negative")
    omega = np.asarray(omega, dtype=float)
    t0 = t_empty(omega, couplings)
    gamma = ancilla_linewidth(couplings)
    if gamma == 0.0:
        return complex(t0) if omega.ndim == 0 else np.asarray(t0)
    d_a = couplings.omega_r + state.ancilla_shift(couplings) - omega
    p_s = saturation_power(omega, state, couplings, frequency_units)
    sat = 1.0 / (1.0 + p / np.asarray(p_s))
    x = 2j * d_a / (gamma * t0)
    t = t0 * (1.0 - sat / (1.0 - x))
    if omega.ndim == 0:
        return complex(t)
    return np.asarray(t)


def transmitted_power(omega, state: QubitState, p: float, couplings: CouplingSet):
    """Conditional output flux p_t|j = |t_j|^2 p, photons/s."""
    t = t_full(omega, state, p, couplings)
    return np.abs(t) ** 2 * p


def intracavity_photons(omega, state: QubitState, p: float, couplings: CouplingSet):
    """Mean photon number n_j = p_t|j / kappa (kappa in s^-1, angular)."""
    return transmitted_power(omega, state, p, couplings) / couplings.kappa


def spectrum(
    state: QubitState, p: float, omega_grid, couplings: CouplingSet
) -> Spectrum:
    """Pointwise t_full over a strictly increasing grid."""
    omega_grid = np.asarray(omega_grid, dtype=float)
    if omega_grid.size == 0:
        raise DomainError("spectrum requires a non-empty grid")
    t = np.atleast_1d(t_full(omega_grid, state, p, couplings))
    return Spectrum(
        qubit_state=state,
        probe_power=p,
        omega=omega_grid,
        t=t,
        power_ratio=np.abs(t) ** 2,
    )


def default_probe_omega(
    couplings: CouplingSet, refine: bool = False, n_refine: int = 20001
) -> float:
    """Readout tone frequency omega_r + delta_L.

    With ``refine`` the returned value is instead the parabolically refined
    argmax of the e-state |t|^2 over a fine grid, guarding against any sign
    drift in the shift convention.
    """
    nominal = couplings.omega_r + dispersive_shift(couplings)
    if not refine:
        return nominal
    half_span = 4.0 * couplings.kappa + 2.0 * dispersive_shift(couplings)
    grid = np.linspace(
        couplings.omega_r - half_span, couplings.omega_r + half_span, n_refine
    )
    spec = spectrum(QubitState.EXCITED, 0.0, grid, couplings)
    if not spec.peaks:
        return nominal
    best = max(spec.peaks, key=lambda pk: pk.power_ratio)
    return best.omega


def _locate_peaks(x: np.ndarray, y: np.ndarray) -> list[Peak]:
    """Strict interior local maxima of y with parabolic vertex refinement."""
    peaks = []
    for i in range(1, len(y) - 1):
        if y[i] > y[i - 1] and y[i] >= y[i + 1]:
            ym, y0, yp = y[i - 1], y[i], y[i + 1]
            denom = ym - 2.0 * y0 + yp
            if denom == 0.0:
                peaks.append(Peak(float(x[i]), float(y0)))
                continue
            delta = 0.5 * (ym - yp) / denom
            h = 0.5 * (x[i + 1] - x[i - 1])
            peaks.append(
                Peak(float(x[i] + delta * h), float(y0 - 0.25 * (ym - yp) * delta))
            )
    return peaks
