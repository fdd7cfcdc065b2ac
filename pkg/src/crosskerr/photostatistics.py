"""Photon-count statistics at the amplifier input.

The field reaching the amplifier is the coherent transmitted signal displaced
by the amplifier's input-referred thermal noise.  Over an integration time
tau the count distribution is the displaced-thermal (Laguerre) law

    P(n) = mu^n / (1+mu)^(n+1) * exp(-sigma/(1+mu)) * L_n( -sigma / (mu (1+mu)) )

with sigma = p_t tau the signal mean and mu = N tau the noise mean (N the
Johnson-Nyquist noise flux).  Direct evaluation overflows near n ~ 150
because L_n at negative argument grows as fast as the geometric prefactor
decays; the evaluator below therefore recurses on the ratio
r_n = P(n+1)/P(n), which stays O(1), and accumulates log P(n).  Folding the
prefactor into the Laguerre three-term recurrence gives

    (n+1) r_n = q (2n+1) - q y - n q^2 / r_{n-1},      q = mu/(1+mu),
    r_0 = q (1 - y),                                   q y = -sigma/(1+mu)^2,

where y is the Laguerre argument; q y is evaluated in the combined form so
the mu -> 0 limit is regular.  For mu below 1e-12 the exact Poisson limit
branch is used instead.

A Glauber-Sudarshan P-representation sampler provides the independent Monte
Carlo oracle: the displaced-thermal P-function is an isotropic Gaussian in
the complex amplitude, and counts are Poisson given the amplitude.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .constants import BOLTZMANN, HBAR
from .errors import DomainError, RegimeWarning

POISSON_BRANCH_THRESHOLD = 1e-12  # noise mean below which Eq. 4 -> Poisson
DEFAULT_TAIL_MASS = 1e-12
MAX_CUTOFF = 4_000_000
NORMALIZATION_SLACK = 1e-9

DEFAULT_CHUNK_SIZE = 250_000  # samples per derived-seed chunk of the sampler


@dataclass(frozen=True)
class DetectionChain:
    """Amplifier chain model: input-referred noise temperature (K), detection
    bandwidth (Hz), integration time (s) and carrier frequency (rad/s)."""

    noise_temperature: float
    bandwidth: float
    integration_time: float
    carrier: float

    def __post_init__(self):
        if self.noise_temperature < 0.0:
            raise DomainError("noise_temperature must be non-negative")
        if not self.bandwidth > 0.0:
            raise DomainError("bandwidth must be strictly positive")
        if not self.integration_time > 0.0:
            raise DomainError("integration_time must be strictly positive")
        if not self.carrier > 0.0:
            raise DomainError("carrier must be strictly positive")
        if self.integration_time < 1.0 / (2.0 * self.bandwidth):
            warnings.warn(
                "integration time is below 1/(2B); the counting window is "
                "shorter than the noise correlation time",
                RegimeWarning,
                stacklevel=2,
            )


def noise_flux(chain: DetectionChain) -> float:
    """Johnson-Nyquist noise flux N = (k_B T_N / hbar omega) B, photons/s.

    Linear in both the noise temperature and the bandwidth; zero at T_N = 0.
    """
    return (
        BOLTZMANN
        * chain.noise_temperature
        / (HBAR * chain.carrier)
        * chain.bandwidth
    )


@dataclass(frozen=True)
class PhotonDistribution:
    """Probability vector over photon counts 0..cutoff."""

    probs: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=float)
        if p.ndim != 1 or p.size == 0:
            raise DomainError("probs must be a non-empty 1-d vector")
        if np.any(p < 0.0) or np.any(p > 1.0):
            raise DomainError("probabilities must lie in [0, 1]")
        total = float(p.sum())
        if not (1.0 - NORMALIZATION_SLACK) <= total <= (1.0 + NORMALIZATION_SLACK):
            raise DomainError(f"probabilities sum to {total!r}, expected ~1")
        object.__setattr__(self, "probs", p)

    @property
    def cutoff(self) -> int:
        return len(self.probs) - 1

    @cached_property
    def mean(self) -> float:
        return float(np.arange(len(self.probs)) @ self.probs)

    @cached_property
    def variance(self) -> float:
        n = np.arange(len(self.probs))
        return float((n * n) @ self.probs - self.mean**2)

    def cdf(self) -> np.ndarray:
        return np.cumsum(self.probs)


def moments(dist: PhotonDistribution) -> tuple[float, float]:
    """(mean, variance) of the truncated vector.

    For the displaced-thermal law these match the closed forms
    mean = sigma + mu and variance = mu(mu+1) + sigma(1+2mu) up to the
    truncated tail (validated against the Monte Carlo oracle in the tests).
    """
    return dist.mean, dist.variance


def count_distribution(
    p_t: float, noise: float, tau: float, tail_mass: float = DEFAULT_TAIL_MASS
) -> PhotonDistribution:
    """Displaced-thermal count law for signal flux p_t and noise flux
    ``noise`` integrated over tau.

    The cutoff starts at mean + 10 sqrt(variance) (closed-form moments) and
    doubles until the bounded tail mass is below ``tail_mass``.
    """
    if p_t < 0.0 or noise < 0.0:
        raise DomainError("fluxes must be non-negative")
    if not tau > 0.0:
        raise DomainError("tau must be strictly positive")
    s = p_t * tau
    m = noise * tau
    if m < POISSON_BRANCH_THRESHOLD:
        return PhotonDistribution(_poisson_probs(s, tail_mass))
    return PhotonDistribution(_laguerre_probs(s, m, tail_mass))


def _poisson_probs(s: float, tail_mass: float) -> np.ndarray:
    if s == 0.0:
        return np.array([1.0])
    log_s = math.log(s)
    n_max = max(16, math.ceil(s + 10.0 * math.sqrt(s)))
    while True:
        lgam = np.array([math.lgamma(k + 1.0) for k in range(n_max + 1)])
        logp = -s + np.arange(n_max + 1) * log_s - lgam
        ratio = s / (n_max + 1)
        if ratio < 1.0:
            bound = math.exp(logp[-1]) * ratio / (1.0 - ratio)
            if bound < tail_mass:
                return np.exp(logp)
        if n_max >= MAX_CUTOFF:
            raise DomainError(f"count distribution cutoff overflow at s={s!r}, m=0")
        n_max *= 2


def _laguerre_probs(s: float, m: float, tail_mass: float) -> np.ndarray:
    q = m / (1.0 + m)
    qy = -s / (1.0 + m) ** 2
    log_p0 = -s / (1.0 + m) - math.log1p(m)
    mean = s + m
    var = m * (m + 1.0) + s * (1.0 + 2.0 * m)
    n_max = max(32, math.ceil(mean + 10.0 * math.sqrt(var)))
    while True:
        logp = np.empty(n_max + 1)
        logp[0] = log_p0
        lp = log_p0
        r_prev = q - qy
        for n in range(1, n_max + 1):
            if not r_prev > 0.0:
                raise DomainError(
                    f"count distribution recursion broke down at s={s!r}, m={m!r}"
                )
            lp += math.log(r_prev)
            logp[n] = lp
            r_prev = (q * (2.0 * n + 1.0) - qy) / (n + 1.0) - (n * q * q) / (
                (n + 1.0) * r_prev
            )
        tail_ratio = r_prev if r_prev > q else q
        if tail_ratio < 1.0:
            bound = math.exp(logp[-1]) * tail_ratio / (1.0 - tail_ratio)
            if bound < tail_mass:
                return np.exp(logp)
        if n_max >= MAX_CUTOFF:
            raise DomainError(
                f"count distribution cutoff overflow at s={s!r}, m={m!r}"
            )
        n_max *= 2


def sample_counts(
    p_t: float,
    noise: float,
    tau: float,
    n_samples: int,
    seed: int,
    chunk_size: int = DEFAULT_CHUNK_SIZE,
) -> PhotonDistribution:
    """Monte Carlo oracle via the Glauber-Sudarshan P-representation.

    Draws the complex amplitude from the displaced-thermal P-function (an
    isotropic Gaussian of per-quadrature variance mu/2 centred on
    sqrt(sigma)) and a Poisson count given |amplitude|^2.  Sampling is
    partitioned into fixed-size chunks with seeds derived from ``seed`` via
    SeedSequence.spawn and reduced in chunk order, so results are
    reproducible bit-for-bit (PCG64 generator) and chunks may be evaluated
    concurrently.
    """
    if n_samples < 1:
        raise DomainError("n_samples must be at least 1")
    if p_t < 0.0 or noise < 0.0:
        raise DomainError("fluxes must be non-negative")
    s = p_t * tau
    m = noise * tau
    amp = math.sqrt(s)
    quad_sigma = math.sqrt(m / 2.0)

    n_chunks = (n_samples + chunk_size - 1) // chunk_size
    children = np.random.SeedSequence(seed).spawn(n_chunks)
    partial = []
    remaining = n_samples
    for child in children:
        size = min(chunk_size, remaining)
        remaining -= size
        rng = np.random.default_rng(child)
        x = rng.normal(amp, quad_sigma, size) if m > 0.0 else np.full(size, amp)
        y = rng.normal(0.0, quad_sigma, size) if m > 0.0 else np.zeros(size)
        counts = rng.poisson(x * x + y * y)
        partial.append(np.bincount(counts))
    width = max(len(b) for b in partial)
    total = np.zeros(width, dtype=np.int64)
    for b in partial:
        total[: len(b)] += b
    return PhotonDistribution(total / float(n_samples))


def _padded_pair(d1: PhotonDistribution, d2: PhotonDistribution):
    width = max(len(d1.probs), len(d2.probs))
    p = np.zeros(width)
    q = np.zeros(width)
    p[: len(d1.probs)] = d1.probs
    q[: len(d2.probs)] = d2.probs
    return p, q


def tv_distance(d1: PhotonDistribution, d2: PhotonDistribution) -> float:
    """Total-variation distance, half the L1 difference over the union
    support (truncated tails count as zeros)."""
    p, q = _padded_pair(d1, d2)
    return float(0.5 * np.abs(p - q).sum())


def overlap(d1: PhotonDistribution, d2: PhotonDistribution) -> float:
    """Summed-minimum overlap.  overlap/2 is the least mean error any
    count-based discriminator can reach (equal priors)."""
    p, q = _padded_pair(d1, d2)
    return float(np.minimum(p, q).sum())
