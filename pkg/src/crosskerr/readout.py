"""Single-shot state discrimination and the fidelity landscape.

Pipeline: probe the cavity at omega_r + delta_L, propagate the two
conditional transmitted fluxes through the amplifier noise model into count
distributions, and discriminate with the best integer count threshold.

Fidelity is defined with equal priors and symmetric error weighting,
F = 1 - (P(assign e | g) + P(assign g | e)) / 2, the standard figure for
single-shot readout.  The threshold rule is optimal whenever the likelihood
ratio is monotone in n; the exhaustive scan plus orientation swap guarantees
F >= 1/2 regardless.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .device import CouplingSet
from .errors import DomainError
from .photostatistics import (
    DetectionChain,
    PhotonDistribution,
    count_distribution,
    noise_flux,
)
from .transmission import (
    QubitState,
    default_probe_omega,
    transmitted_power,
)


@dataclass(frozen=True)
class FidelityReport:
    """Conditional signals and the single-shot discrimination outcome.

    p_t_g / p_t_e : conditional transmitted fluxes, photons/s
    nbar_g / nbar_e : conditional intracavity populations
    threshold : counts <= threshold are assigned to ``low_state``
    err_g / err_e : misassignment probabilities
    fidelity : 1 - (err_g + err_e)/2
    """

    p_t_g: float
    p_t_e: float
    nbar_g: float
    nbar_e: float
    threshold: int
    low_state: QubitState
    err_g: float
    err_e: float
    fidelity: float
    probe_omega: float
    probe_power: float

    def __post_init__(self):
        for name in ("err_g", "err_e", "fidelity"):
            v = getattr(self, name)
            if not -1e-12 <= v <= 1.0 + 1e-12:
                raise DomainError(f"FidelityReport.{name} = {v!r} outside [0, 1]")
        # the orientation swap in the threshold scan guarantees this
        if self.fidelity < 0.5 - 1e-12:
            raise DomainError(f"FidelityReport.fidelity = {self.fidelity!r} below 1/2")


@dataclass(frozen=True)
class SweepGrid:
    """Fidelity over a (kappa, p) grid; fidelity[i, j] pairs kappa_values[i]
    with p_values[j]."""

    kappa_values: np.ndarray
    p_values: np.ndarray
    fidelity: np.ndarray
    argmax: tuple[float, float]

    def __post_init__(self):
        if self.fidelity.shape != (len(self.kappa_values), len(self.p_values)):
            raise DomainError("fidelity matrix does not match the grid axes")


def decision_threshold(
    dist_g: PhotonDistribution, dist_e: PhotonDistribution
) -> tuple[int, QubitState]:
    """Best integer threshold over both orientations.

    Scans every split {n <= n*} / {n > n*} for n* in [-1, cutoff] (n* = -1
    assigns all counts to the high side), in both orientations, and returns
    the (threshold, state assigned to the low side) minimizing the mean
    error.  Ties resolve to the smallest threshold with ground on the low
    side, making the rule deterministic.
    """
    errs = _threshold_errors(dist_g, dist_e)
    best = None
    for (n_star, low_state), (err_g, err_e) in errs.items():
        mean_err = 0.5 * (err_g + err_e)
        key = (mean_err, n_star, low_state is not QubitState.GROUND)
        if best is None or key < best[0]:
            best = (key, n_star, low_state)
    return best[1], best[2]


def _threshold_errors(dist_g, dist_e):
    """(threshold, low_state) -> (err_g, err_e) for every candidate split."""
    width = max(len(dist_g.probs), len(dist_e.probs))
    pg = np.zeros(width)
    pe = np.zeros(width)
    pg[: len(dist_g.probs)] = dist_g.probs
    pe[: len(dist_e.probs)] = dist_e.probs
    # cdf[k] = P(n <= k-1), so index n*+1 gives P(n <= n*); entry 0 is the
    # empty low side (n* = -1)
    cdf_g = np.concatenate(([0.0], np.cumsum(pg)))
    cdf_e = np.concatenate(([0.0], np.cumsum(pe)))
    sum_g = cdf_g[-1]
    sum_e = cdf_e[-1]
    out = {}
    for idx in range(width + 1):
        n_star = idx - 1
        # ground on the low side: err_g = P(n > n* | g), err_e = P(n <= n* | e)
        out[(n_star, QubitState.GROUND)] = (sum_g - cdf_g[idx], cdf_e[idx])
        out[(n_star, QubitState.EXCITED)] = (cdf_g[idx], sum_e - cdf_e[idx])
    return out


def _classification_errors(dist_g, dist_e, threshold, low_state):
    errs = _threshold_errors(dist_g, dist_e)
    return errs[(threshold, low_state)]


def histogram_pair(
    couplings: CouplingSet,
    probe_power: float,
    chain: DetectionChain,
    refine_probe: bool = False,
    probe_omega: float | None = None,
) -> tuple[PhotonDistribution, PhotonDistribution]:
    """The two conditional count distributions entering the discriminator.

    ``probe_omega`` overrides the default tone (rad/s); otherwise the probe
    sits at omega_r + delta_L, optionally refined.
    """
    w = probe_omega if probe_omega is not None else default_probe_omega(
        couplings, refine=refine_probe
    )
    n_noise = noise_flux(chain)
    dists = []
    for state in (QubitState.GROUND, QubitState.EXCITED):
        p_t = float(transmitted_power(w, state, probe_power, couplings))
        dists.append(count_distribution(p_t, n_noise, chain.integration_time))
    return dists[0], dists[1]


def fidelity(
    couplings: CouplingSet,
    probe_power: float,
    chain: DetectionChain,
    refine_probe: bool = False,
    probe_omega: float | None = None,
) -> FidelityReport:
    """Single-shot readout fidelity (probe at omega_r + delta_L unless
    overridden).

    Noiseless, high-contrast signals give F -> 1; zero drive gives two
    identical thermal distributions and F = 1/2 exactly.
    """
    if probe_power < 0.0:
        raise DomainError("probe_power must be non-negative")
    w = probe_omega if probe_omega is not None else default_probe_omega(
        couplings, refine=refine_probe
    )
    n_noise = noise_flux(chain)
    p_t = {}
    dist = {}
    for state in (QubitState.GROUND, QubitState.EXCITED):
        p_t[state] = float(transmitted_power(w, state, probe_power, couplings))
        dist[state] = count_distribution(p_t[state], n_noise, chain.integration_time)
    threshold, low_state = decision_threshold(
        dist[QubitState.GROUND], dist[QubitState.EXCITED]
    )
    err_g, err_e = _classification_errors(
        dist[QubitState.GROUND], dist[QubitState.EXCITED], threshold, low_state
    )
    return FidelityReport(
        p_t_g=p_t[QubitState.GROUND],
        p_t_e=p_t[QubitState.EXCITED],
        nbar_g=p_t[QubitState.GROUND] / couplings.kappa,
        nbar_e=p_t[QubitState.EXCITED] / couplings.kappa,
        threshold=threshold,
        low_state=low_state,
        err_g=float(err_g),
        err_e=float(err_e),
        fidelity=float(1.0 - 0.5 * (err_g + err_e)),
        probe_omega=w,
        probe_power=probe_power,
    )


def fidelity_map(
    kappa_grid,
    p_grid,
    chain: DetectionChain,
    couplings_template: CouplingSet,
    refine_probe: bool = False,
    probe_omega: float | None = None,
) -> SweepGrid:
    """Fidelity over (kappa, p).

    Each cell substitutes kappa into the couplings and re-derives the probe
    tone; delta_L does not depend on kappa, but the induced ancilla linewidth
    and the saturation flux do.  The argmax is reported at grid-cell
    granularity (first cell on ties, row-major).
    """
    kappa_grid = np.asarray(kappa_grid, dtype=float)
    p_grid = np.asarray(p_grid, dtype=float)
    if kappa_grid.size == 0 or p_grid.size == 0:
        raise DomainError("fidelity_map requires non-empty grids")
    if np.any(np.diff(kappa_grid) <= 0.0) or np.any(np.diff(p_grid) <= 0.0):
        raise DomainError("fidelity_map grids must be strictly increasing")
    grid = np.empty((len(kappa_grid), len(p_grid)))
    for i, kappa in enumerate(kappa_grid):
        c = replace(couplings_template, kappa=float(kappa))
        for j, p in enumerate(p_grid):
            grid[i, j] = fidelity(
                c, float(p), chain, refine_probe, probe_omega=probe_omega
            ).fidelity
    i_best, j_best = np.unravel_index(int(np.argmax(grid)), grid.shape)
    return SweepGrid(
        kappa_values=kappa_grid,
        p_values=p_grid,
        fidelity=grid,
        argmax=(float(kappa_grid[i_best]), float(p_grid[j_best])),
    )
