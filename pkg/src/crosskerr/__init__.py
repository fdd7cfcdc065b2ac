"""Cross-Kerr ancilla readout simulator.

End-to-end model of a qubit read out through an ancilla that is resonant or
dispersive with a transmission-line resonator depending on the qubit state:
conditional cavity transmission with saturation, an ODE cross-check of the
linear response, displaced-thermal photon counting at the amplifier, and
single-shot discrimination fidelity with its (kappa, drive) optimization
landscape.
"""

__version__ = "0.1.0"

from .device import CouplingSet, CircuitEnergies, JunctionCircuit  # noqa: F401
from .device import cross_kerr, energies_from_junction, validate  # noqa: F401
from .dynamics import Trajectory, SemiclassicalState  # noqa: F401
from .dynamics import integrate, oracle_sweep, steady_state, t_from_ode  # noqa: F401
from .errors import (  # noqa: F401
    ConfigError,
    CrossKerrError,
    DomainError,
    IntegrationError,
    RegimeWarning,
)
from .photostatistics import (  # noqa: F401
    DetectionChain,
    PhotonDistribution,
    count_distribution,
    moments,
    noise_flux,
    overlap,
    sample_counts,
    tv_distance,
)
from .readout import (  # noqa: F401
    FidelityReport,
    SweepGrid,
    decision_threshold,
    fidelity,
    fidelity_map,
    histogram_pair,
)
from .transmission import (  # noqa: F401
    Probe,
    QubitState,
    Spectrum,
    default_probe_omega,
    dispersive_shift,
    intracavity_photons,
    saturation_power,
    spectrum,
    t_empty,
    t_full,
    t_linear,
    transmitted_power,
)
