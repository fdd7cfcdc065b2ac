import math
import warnings

import numpy as np
import pytest
from hypothesis import given, strategies as st

from crosskerr import (
    CircuitEnergies,
    CouplingSet,
    DomainError,
    JunctionCircuit,
    RegimeWarning,
    cross_kerr,
    energies_from_junction,
    validate,
)
from crosskerr.constants import ELEMENTARY_CHARGE, FLUX_QUANTUM, HBAR, TWO_PI


def no_regime_warning():
    return warnings.catch_warnings()


class TestEnergies:
    def test_proportionality(self):
        base = JunctionCircuit(30e-9, 60e-15, 300e-9)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RegimeWarning)
            e0 = energies_from_junction(base)
            e_ic = energies_from_junction(JunctionCircuit(60e-9, 60e-15, 300e-9))
            e_c = energies_from_junction(JunctionCircuit(30e-9, 120e-15, 300e-9))
            e_l = energies_from_junction(JunctionCircuit(30e-9, 60e-15, 600e-9))
        assert e_ic.E_J == 2.0 * e0.E_J
        assert e_c.E_C == e0.E_C / 2.0
        assert e_l.E_L == e0.E_L / 2.0

    def test_representative_junction_hand_calc(self):
        # Independent hand calculation with Phi0 = h/2e, CODATA-2018:
        #   E_J = Phi0 * 30 nA / 2pi = 2.0678338485e-15 * 3e-8 / 2pi
        #   E_C = e^2 / (2 * 60 fF),  E_L = (Phi0/2pi)^2 / 300 nH
        e = energies_from_junction(JunctionCircuit(30e-9, 60e-15, 300e-9))
        assert e.E_J == pytest.approx(9.8731793542636e-24, rel=1e-12)
        assert e.E_C == pytest.approx(2.1391416387796415e-25, rel=1e-12)
        assert e.E_L == pytest.approx(3.610358168942851e-25, rel=1e-12)
        assert e.ratio == pytest.approx(46.155, rel=1e-4)

    def test_ratio_50_no_warning(self):
        c = 60e-15
        e_c = ELEMENTARY_CHARGE**2 / (2 * c)
        i_c = 50.0 * e_c * TWO_PI / FLUX_QUANTUM
        with warnings.catch_warnings():
            warnings.simplefilter("error", RegimeWarning)
            e = energies_from_junction(JunctionCircuit(i_c, c, 300e-9))
        assert e.ratio == pytest.approx(50.0, rel=1e-12)

    def test_ratio_outside_band_warns(self):
        with pytest.warns(RegimeWarning):
            energies_from_junction(JunctionCircuit(1e-9, 60e-15, 300e-9))

    def test_nonpositive_inputs_rejected(self):
        with pytest.raises(DomainError):
            JunctionCircuit(0.0, 60e-15, 300e-9)
        with pytest.raises(DomainError):
            JunctionCircuit(30e-9, -1e-15, 300e-9)

    def test_scaling_doubles_all_energies(self):
        a = energies_from_junction(JunctionCircuit(30e-9, 60e-15, 300e-9))
        b = energies_from_junction(JunctionCircuit(60e-9, 30e-15, 150e-9))
        assert b.E_J == 2.0 * a.E_J
        assert b.E_C == 2.0 * a.E_C
        assert b.E_L == 2.0 * a.E_L


class TestCrossKerr:
    def test_vanishing_inductive_energy(self):
        e = CircuitEnergies(E_J=1e-23, E_C=2e-25, E_L=1e-53)
        # 2 E_L / E_J ~ 1e-30 underflows against 1, so the root equals 1
        assert cross_kerr(e) == e.E_C / HBAR

    def test_large_inductive_energy_suppresses(self):
        # g_zz ~ E_C / (hbar sqrt(2 E_L / E_J)) for E_L >> E_J, so a 1e8
        # ratio of E_L/E_J suppresses g_zz by ~sqrt(2e8) ~ 1.4e4
        e_small = CircuitEnergies(1e-23, 2e-25, 1e-24)
        e_large = CircuitEnergies(1e-23, 2e-25, 1e-15)
        assert cross_kerr(e_large) < 1e-3 * cross_kerr(e_small)

    def test_half_josephson_energy(self):
        e = CircuitEnergies(E_J=2e-24, E_C=2e-25, E_L=1e-24)
        assert cross_kerr(e) == pytest.approx(e.E_C / (HBAR * math.sqrt(2.0)), rel=1e-14)

    @given(
        e_c=st.floats(1e-26, 1e-23),
        e_j=st.floats(1e-24, 1e-21),
        e_l1=st.floats(1e-26, 1e-21),
        e_l2=st.floats(1e-26, 1e-21),
    )
    def test_monotone_in_el_and_ec(self, e_c, e_j, e_l1, e_l2):
        lo, hi = sorted((e_l1, e_l2))
        if lo == hi:
            return
        g_lo = cross_kerr(CircuitEnergies(e_j, e_c, hi))
        g_hi = cross_kerr(CircuitEnergies(e_j, e_c, lo))
        assert g_lo < g_hi
        assert cross_kerr(CircuitEnergies(e_j, 2.0 * e_c, lo)) > g_hi


class TestCouplingSet:
    def test_frequency_matching_is_exact(self):
        c = CouplingSet.from_mhz(g_zz=250.0, g_a=150.0, kappa=40.0, omega_a=6750.0)
        assert c.omega_r == c.omega_a + c.g_zz
        assert abs(c.omega_r - c.omega_a - c.g_zz) < 1e-15 * c.omega_r
        c2 = CouplingSet.from_mhz(g_zz=250.0, g_a=150.0, kappa=40.0)
        assert c2.omega_a == c2.omega_r - c2.g_zz
        assert abs(c2.omega_r - c2.omega_a - c2.g_zz) < 1e-15 * c2.omega_r

    def test_junction_route_matches_cross_kerr(self):
        circuit = JunctionCircuit(30e-9, 60e-15, 300e-9)
        c = CouplingSet.from_junctions(circuit, g_a=150.0, kappa=40.0, omega_a=6750.0)
        assert c.g_zz == cross_kerr(energies_from_junction(circuit))
        assert c.omega_r == c.omega_a + c.g_zz

    def test_both_absolute_frequencies_rejected(self):
        with pytest.raises(DomainError):
            CouplingSet.from_mhz(
                g_zz=250.0, g_a=150.0, kappa=40.0, omega_r=7000.0, omega_a=6750.0
            )

    def test_positivity(self):
        with pytest.raises(DomainError):
            CouplingSet(omega_r=1.0, omega_a=1.0, omega_qb=1.0, g_zz=0.0, g_a=1.0, kappa=1.0)


class TestValidate:
    def test_design_point_is_clean(self, design_couplings):
        assert validate(design_couplings) == []

    def test_equal_couplings_flag_dispersive_contrast(self):
        with pytest.warns(RegimeWarning, match="dispersive contrast"):
            c = CouplingSet.from_mhz(g_zz=150.0, g_a=150.0, kappa=40.0)
        assert any("dispersive" in w for w in validate(c))

    def test_wide_cavity_flags_resolvability(self):
        with pytest.warns(RegimeWarning, match="resolvability"):
            c = CouplingSet.from_mhz(g_zz=500.0, g_a=150.0, kappa=300.0)
        warnings_found = validate(c)
        assert any("resolvability" in w for w in warnings_found)
        assert not any("dispersive" in w for w in warnings_found)

    def test_validate_does_not_mutate(self, design_couplings):
        before = design_couplings.kappa
        validate(design_couplings)
        assert design_couplings.kappa == before


def test_random_triples_monotonicity(rng):
    # randomized spot-check mirroring the hypothesis property, fixed seed
    for _ in range(50):
        e_j = 10.0 ** rng.uniform(-24, -21)
        e_c = 10.0 ** rng.uniform(-26, -23)
        e_l = 10.0 ** rng.uniform(-26, -21)
        g = cross_kerr(CircuitEnergies(e_j, e_c, e_l))
        assert cross_kerr(CircuitEnergies(e_j, e_c, e_l * 1.5)) < g
        assert cross_kerr(CircuitEnergies(e_j, e_c * 1.5, e_l)) > g
        assert np.isfinite(g)
