"""Circuit parameters of the two-transmon device and the model couplings.

Converts junction-level quantities (critical current, capacitance, shunt
inductance) into the energies E_J, E_C, E_L and the cross-Kerr rate, and
holds the validated set of model frequencies.

Unit convention: every public constructor accepts cyclic frequencies in MHz
(the values quoted in captions and configs); all stored state is angular,
rad/s.  ``CouplingSet`` fields are angular.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from .constants import ELEMENTARY_CHARGE, FLUX_QUANTUM, HBAR, TWO_PI
from .errors import DomainError, RegimeWarning

# E_J/E_C band of the charge-insensitive (transmon) regime; the design target
# sits near 50.
TRANSMON_RATIO_BAND = (25.0, 100.0)

# Default absolute frequencies, cyclic MHz.  The readout observables depend on
# the resonator frequency only through the amplifier noise flux; the qubit
# frequency is carried for completeness and affects nothing measurable.
DEFAULT_OMEGA_R_MHZ = 7000.0
DEFAULT_OMEGA_QB_MHZ = 5000.0


def mhz_to_angular(nu_mhz: float) -> float:
    """Cyclic MHz -> angular rad/s."""
    return TWO_PI * nu_mhz * 1e6


def angular_to_mhz(omega: float) -> float:
    """Angular rad/s -> cyclic MHz."""
    return omega / (TWO_PI * 1e6)


@dataclass(frozen=True)
class JunctionCircuit:
    """Per-junction circuit parameters, SI units.

    critical_current : A, capacitance : F, inductance : H (coupling SQUID).
    """

    critical_current: float
    capacitance: float
    inductance: float

    def __post_init__(self):
        for name in ("critical_current", "capacitance", "inductance"):
            if not getattr(self, name) > 0.0:
                raise DomainError(f"JunctionCircuit.{name} must be strictly positive")


@dataclass(frozen=True)
class CircuitEnergies:
    """Josephson, charging and inductive energies in joules."""

    E_J: float
    E_C: float
    E_L: float

    def __post_init__(self):
        for name in ("E_J", "E_C", "E_L"):
            if not getattr(self, name) > 0.0:
                raise DomainError(f"CircuitEnergies.{name} must be strictly positive")

    @property
    def ratio(self) -> float:
        return self.E_J / self.E_C


def energies_from_junction(circuit: JunctionCircuit) -> CircuitEnergies:
    """Junction parameters -> (E_J, E_C, E_L).

    E_J = Phi0 I_c / 2pi,  E_C = e^2 / 2C,  E_L = (Phi0/2pi)^2 / L.

    Warns (RegimeWarning) when E_J/E_C leaves the transmon band.
    """
    e_j = FLUX_QUANTUM * circuit.critical_current / TWO_PI
    e_c = ELEMENTARY_CHARGE**2 / (2.0 * circuit.capacitance)
    e_l = (FLUX_QUANTUM / TWO_PI) ** 2 / circuit.inductance
    energies = CircuitEnergies(e_j, e_c, e_l)
    lo, hi = TRANSMON_RATIO_BAND
    if not lo <= energies.ratio <= hi:
        warnings.warn(
            f"E_J/E_C = {energies.ratio:.1f} is outside the transmon band "
            f"[{lo:.0f}, {hi:.0f}]",
            RegimeWarning,
            stacklevel=2,
        )
    return energies


def cross_kerr(energies: CircuitEnergies) -> float:
    """Cross-Kerr rate g_zz = E_C / (hbar sqrt(1 + 2 E_L/E_J)), rad/s.

    Strictly increasing in E_C, strictly decreasing in E_L.
    """
    return energies.E_C / (HBAR * math.sqrt(1.0 + 2.0 * energies.E_L / energies.E_J))


@dataclass(frozen=True)
class CouplingSet:
    """All model frequencies and rates, angular rad/s.

    omega_r   resonator frequency
    omega_a   ancilla transition frequency
    omega_qb  qubit transition frequency (spectator; no readout observable
              depends on it)
    g_zz      cross-Kerr (qubit-conditional ancilla shift)
    g_a       ancilla-resonator coupling
    kappa     resonator linewidth (amplitude decay rate; |t0|^2 half-width)
    """

    omega_r: float
    omega_a: float
    omega_qb: float
    g_zz: float
    g_a: float
    kappa: float

    def __post_init__(self):
        for name in ("omega_r", "omega_a", "omega_qb", "g_zz", "kappa"):
            if not getattr(self, name) > 0.0:
                raise DomainError(f"CouplingSet.{name} must be strictly positive")
        # g_a = 0 is admitted as the exact decoupled-ancilla (empty cavity)
        # limit; every response formula reduces to the bare resonator there.
        if self.g_a < 0.0:
            raise DomainError("CouplingSet.g_a must be non-negative")

    @classmethod
    def from_mhz(
        cls,
        g_zz: float,
        g_a: float,
        kappa: float,
        omega_r: float | None = None,
        omega_a: float | None = None,
        omega_qb: float = DEFAULT_OMEGA_QB_MHZ,
    ) -> "CouplingSet":
        """Build from cyclic-MHz values.

        Give either ``omega_r`` or ``omega_a``; the other is fixed by the
        operating condition omega_r = omega_a + g_zz (exactly, in angular
        units).  With neither, omega_r defaults to 7 GHz.
        """
        if omega_r is not None and omega_a is not None:
            raise DomainError("give omega_r or omega_a, not both")
        gzz = mhz_to_angular(g_zz)
        if omega_a is not None:
            w_a = mhz_to_angular(omega_a)
            w_r = w_a + gzz
        else:
            w_r = mhz_to_angular(omega_r if omega_r is not None else DEFAULT_OMEGA_R_MHZ)
            w_a = w_r - gzz
        c = cls(
            omega_r=w_r,
            omega_a=w_a,
            omega_qb=mhz_to_angular(omega_qb),
            g_zz=gzz,
            g_a=mhz_to_angular(g_a),
            kappa=mhz_to_angular(kappa),
        )
        for message in validate(c):
            warnings.warn(message, RegimeWarning, stacklevel=2)
        return c

    @classmethod
    def from_junctions(
        cls,
        circuit: JunctionCircuit,
        g_a: float,
        kappa: float,
        omega_a: float,
        omega_qb: float = DEFAULT_OMEGA_QB_MHZ,
    ) -> "CouplingSet":
        """Build from junction parameters; g_a, kappa, omega_a, omega_qb in
        cyclic MHz.  g_zz comes from the circuit energies and the resonator is
        placed at omega_a + g_zz."""
        gzz = cross_kerr(energies_from_junction(circuit))
        w_a = mhz_to_angular(omega_a)
        c = cls(
            omega_r=w_a + gzz,
            omega_a=w_a,
            omega_qb=mhz_to_angular(omega_qb),
            g_zz=gzz,
            g_a=mhz_to_angular(g_a),
            kappa=mhz_to_angular(kappa),
        )
        for message in validate(c):
            warnings.warn(message, RegimeWarning, stacklevel=2)
        return c


def validate(couplings: CouplingSet) -> list[str]:
    """Regime checks for the readout scheme.  Returns violated conditions as
    human-readable strings; never raises, never mutates.

    - g_zz > g_a: the shifted ancilla must sit in the dispersive regime while
      the unshifted one is resonant, otherwise the two conditional spectra
      lose contrast.
    - kappa < g_a: the vacuum-Rabi doublet must be resolvable.
    """
    out = []
    if couplings.g_zz <= couplings.g_a:
        out.append(
            "dispersive contrast requires g_zz > g_a "
            f"(g_zz/2pi = {angular_to_mhz(couplings.g_zz):.3f} MHz, "
            f"g_a/2pi = {angular_to_mhz(couplings.g_a):.3f} MHz)"
        )
    if couplings.kappa >= couplings.g_a:
        out.append(
            "strong-coupling resolvability requires kappa < g_a "
            f"(kappa/2pi = {angular_to_mhz(couplings.kappa):.3f} MHz, "
            f"g_a/2pi = {angular_to_mhz(couplings.g_a):.3f} MHz)"
        )
    return out
