import numpy as np
import pytest

from crosskerr import (
    DetectionChain,
    DomainError,
    PhotonDistribution,
    QubitState,
    count_distribution,
    decision_threshold,
    fidelity,
    fidelity_map,
    histogram_pair,
    overlap,
)
from crosskerr.constants import TWO_PI
from crosskerr.readout import SweepGrid, _classification_errors


def point_mass(n, width):
    p = np.zeros(width)
    p[n] = 1.0
    return PhotonDistribution(p)


def ml_error(dist_g, dist_e):
    """Brute-force maximum-likelihood oracle: assign each count to the more
    likely state; mean error is half the summed minimum."""
    return 0.5 * overlap(dist_g, dist_e)


class TestDecisionThreshold:
    def test_identical_distributions_give_coin_flip(self):
        d = count_distribution(3.0, 0.5, 1.0)
        threshold, low = decision_threshold(d, d)
        err_g, err_e = _classification_errors(d, d, threshold, low)
        assert 0.5 * (err_g + err_e) == pytest.approx(0.5, abs=1e-12)

    def test_disjoint_supports_are_perfect(self):
        d_g = point_mass(0, 11)
        d_e = point_mass(10, 11)
        threshold, low = decision_threshold(d_g, d_e)
        err_g, err_e = _classification_errors(d_g, d_e, threshold, low)
        assert low is QubitState.GROUND
        assert threshold == 0
        assert err_g == 0.0 and err_e == 0.0

    def test_matches_maximum_likelihood_oracle(self):
        # realistic conditional distributions: means 0.8 and 7.0 with thermal
        # noise m = 0.21; the likelihood ratio is monotone so the threshold
        # rule must reach the ML error exactly
        m = 0.21
        d_g = count_distribution(0.8 - m, m, 1.0)
        d_e = count_distribution(7.0 - m, m, 1.0)
        threshold, low = decision_threshold(d_g, d_e)
        err_g, err_e = _classification_errors(d_g, d_e, threshold, low)
        assert low is QubitState.GROUND
        assert 0.5 * (err_g + err_e) == pytest.approx(ml_error(d_g, d_e), abs=1e-12)

    def test_exhaustive_rescan_confirms_optimality(self):
        d_g = count_distribution(0.6, 0.2, 1.0)
        d_e = count_distribution(6.8, 0.2, 1.0)
        threshold, low = decision_threshold(d_g, d_e)
        best = 0.5 * sum(_classification_errors(d_g, d_e, threshold, low))
        width = max(len(d_g.probs), len(d_e.probs))
        for n_star in range(-1, width):
            for orientation in QubitState:
                err = 0.5 * sum(
                    _classification_errors(d_g, d_e, n_star, orientation)
                )
                assert best <= err + 1e-15

    def test_label_swap_symmetry(self):
        d_g = count_distribution(0.6, 0.2, 1.0)
        d_e = count_distribution(6.8, 0.2, 1.0)
        t1, low1 = decision_threshold(d_g, d_e)
        t2, low2 = decision_threshold(d_e, d_g)
        e1 = 0.5 * sum(_classification_errors(d_g, d_e, t1, low1))
        e2 = 0.5 * sum(_classification_errors(d_e, d_g, t2, low2))
        assert e1 == pytest.approx(e2, abs=1e-15)


class TestFidelity:
    def test_zero_drive_is_a_coin_flip(self, design_couplings, quantum_limited_chain):
        report = fidelity(design_couplings, 0.0, quantum_limited_chain)
        assert report.fidelity == pytest.approx(0.5, abs=1e-12)
        assert report.p_t_g == 0.0 and report.p_t_e == 0.0

    def test_noiseless_high_contrast_is_perfect(self, design_couplings):
        chain = DetectionChain(0.0, 50e6, 100e-9, TWO_PI * 7e9)
        report = fidelity(design_couplings, 1e9, chain)
        assert report.fidelity > 0.9999

    def test_report_fields_are_consistent(self, design_couplings, quantum_limited_chain):
        r = fidelity(design_couplings, 1e9, quantum_limited_chain)
        assert r.fidelity == pytest.approx(1.0 - 0.5 * (r.err_g + r.err_e), abs=1e-15)
        assert 0.5 <= r.fidelity <= 1.0
        assert r.nbar_g == pytest.approx(r.p_t_g / design_couplings.kappa, rel=1e-12)
        assert r.nbar_e == pytest.approx(r.p_t_e / design_couplings.kappa, rel=1e-12)
        assert r.p_t_e > r.p_t_g

    def test_monotone_in_noise_temperature(self, design_couplings):
        previous = 1.1
        for t_n in (0.05, 0.14, 0.5, 1.0, 2.0, 4.0):
            chain = DetectionChain(t_n, 50e6, 10e-9, TWO_PI * 7e9)
            f = fidelity(design_couplings, 1e9, chain).fidelity
            assert f <= previous + 1e-12
            previous = f

    def test_refined_probe_changes_little_at_design_point(
        self, design_couplings, quantum_limited_chain
    ):
        a = fidelity(design_couplings, 1e9, quantum_limited_chain)
        b = fidelity(design_couplings, 1e9, quantum_limited_chain, refine_probe=True)
        assert b.fidelity == pytest.approx(a.fidelity, abs=5e-3)


class TestHistogramPair:
    def test_quantum_limited_separation(self, design_couplings, quantum_limited_chain):
        # golden overlap recorded from the first computation at this
        # operating point (consistent with F = 1 - overlap/2 = 0.9355)
        d_g, d_e = histogram_pair(design_couplings, 1e9, quantum_limited_chain)
        assert overlap(d_g, d_e) == pytest.approx(0.12895225221345186, rel=1e-9)
        assert d_e.mean > d_g.mean

    def test_noise_temperature_degrades_overlap(self, design_couplings):
        lo = DetectionChain(0.14, 50e6, 10e-9, TWO_PI * 7e9)
        hi = DetectionChain(4.0, 50e6, 10e-9, TWO_PI * 7e9)
        o_lo = overlap(*histogram_pair(design_couplings, 1e9, lo))
        o_hi = overlap(*histogram_pair(design_couplings, 1e9, hi))
        assert o_lo < o_hi


class TestFidelityMap:
    def test_single_cell_matches_fidelity(self, design_couplings, quantum_limited_chain):
        grid = fidelity_map(
            [design_couplings.kappa], [1e9], quantum_limited_chain, design_couplings
        )
        direct = fidelity(design_couplings, 1e9, quantum_limited_chain)
        assert grid.fidelity.shape == (1, 1)
        assert grid.fidelity[0, 0] == pytest.approx(direct.fidelity, rel=1e-12)
        assert grid.argmax == (design_couplings.kappa, 1e9)

    def test_vanishing_drive_edge_is_coin_flip(self, design_couplings, quantum_limited_chain):
        grid = fidelity_map(
            [design_couplings.kappa],
            [1.0, 10.0],
            quantum_limited_chain,
            design_couplings,
        )
        assert np.all(np.abs(grid.fidelity - 0.5) < 1e-3)

    def test_grid_validation(self, design_couplings, quantum_limited_chain):
        with pytest.raises(DomainError):
            fidelity_map([], [1e9], quantum_limited_chain, design_couplings)
        with pytest.raises(DomainError):
            fidelity_map(
                [2.0 * TWO_PI * 1e6, 1.0 * TWO_PI * 1e6],
                [1e9],
                quantum_limited_chain,
                design_couplings,
            )

    def test_matrix_shape_invariant(self):
        with pytest.raises(DomainError):
            SweepGrid(
                kappa_values=np.array([1.0, 2.0]),
                p_values=np.array([1.0]),
                fidelity=np.zeros((1, 1)),
                argmax=(1.0, 1.0),
            )
