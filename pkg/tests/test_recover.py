import math
from fractions import Fraction

import numpy as np
import pytest

from expmoments import (
    AtomicMeasure,
    Domain,
    DomainError,
    Frequencies,
    HALFLINE,
    JacobiCoefficients,
    MomentSequence,
    UNIT_INTERVAL,
    Uniform,
    UnsolvableError,
    exp_moments,
    first_violation,
    gauss_from_jacobi,
    hausdorff_solvable,
    jacobi_from_moments,
    moment_residual,
    power_moments,
    psd_pivots,
    recover_measure,
    stieltjes_solvable,
    verify_transfer,
)
from expmoments.hankel import HankelSpec, build_hankel
from helpers import random_atomic, random_frequencies

U = (1, Fraction(1, 2), Fraction(1, 3), Fraction(1, 4))


class TestStieltjes:
    def test_delta_one_moments(self):
        rep = stieltjes_solvable(MomentSequence((1, 1, 1, 1), HALFLINE))
        assert rep.solvable and rep.rank == 1
        assert rep.boundary_flags["plain_singular"]

    def test_indefinite(self):
        rep = stieltjes_solvable(MomentSequence((1, 2, 1, 2), HALFLINE))
        assert not rep.solvable
        assert first_violation(rep) == ("plain", 1)
        plain = [fc for fc in rep.checks if fc.form == "plain"][-1]
        assert plain.report.minors == (1, -3)

    def test_zero_sequence(self):
        rep = stieltjes_solvable(MomentSequence((0, 0, 0, 0), HALFLINE))
        assert rep.solvable and rep.rank == 0

    def test_domain_mismatch(self):
        with pytest.raises(DomainError):
            stieltjes_solvable(MomentSequence(U, UNIT_INTERVAL))

    def test_floating_mode(self):
        rep = stieltjes_solvable(MomentSequence((1.0, 0.5, 0.5, 0.6), HALFLINE))
        assert rep.solvable
        assert all(fc.report.mode == "floating" for fc in rep.checks)


class TestHausdorff:
    def test_uniform_moments(self):
        rep = hausdorff_solvable(MomentSequence(U, UNIT_INTERVAL))
        assert rep.solvable
        by_form = {(fc.form, fc.k): fc.report for fc in rep.checks}
        assert by_form[("shifted", 1)].minors == (Fraction(1, 2), Fraction(1, 72))
        assert by_form[("differenced", 1)].minors == (Fraction(1, 2), Fraction(1, 72))
        assert by_form[("shifted", 1)].is_pd

    def test_right_endpoint_atom(self):
        rep = hausdorff_solvable(MomentSequence((1, 1, 1, 1), UNIT_INTERVAL))
        assert rep.solvable
        assert rep.boundary_flags["differenced_singular"]

    def test_growth_violates_interval(self):
        rep = hausdorff_solvable(MomentSequence((1, 2, 4, 8), UNIT_INTERVAL))
        assert not rep.solvable
        assert first_violation(rep) == ("differenced", 0)

    def test_domain_mismatch(self):
        with pytest.raises(DomainError):
            hausdorff_solvable(MomentSequence((1, 1, 1, 1), HALFLINE))

    def test_general_interval_pullback(self):
        # delta at 3 on [0, 4]: admissible there, not on [0, 1]
        dom = Domain("interval", 0, 4)
        c = power_moments(AtomicMeasure.delta(Fraction(3)), 3, dom)
        assert hausdorff_solvable(c).solvable
        c_unit = MomentSequence(c.values, UNIT_INTERVAL)
        assert not hausdorff_solvable(c_unit).solvable


class TestJacobi:
    def test_rank_one(self):
        jc = jacobi_from_moments(MomentSequence((1, 1, 1, 1), HALFLINE))
        assert jc.rank == 1 and jc.alphas == (1.0,) and jc.mass == 1.0

    def test_symmetric_two_point(self):
        jc = jacobi_from_moments(MomentSequence((1, 0, 1, 0), HALFLINE))
        assert jc.alphas == pytest.approx((0.0, 0.0), abs=1e-14)
        assert jc.betas == pytest.approx((1.0,), rel=1e-14)

    def test_two_point_asymmetric(self):
        jc = jacobi_from_moments(MomentSequence((1, 1, 2, 4), HALFLINE))
        assert jc.alphas == pytest.approx((1.0, 1.0), rel=1e-14)
        assert jc.betas == pytest.approx((1.0,), rel=1e-14)

    def test_zero_mass(self):
        jc = jacobi_from_moments(MomentSequence((0, 0, 0, 0), HALFLINE))
        assert jc.rank == 0

    def test_indefinite_rejected(self):
        with pytest.raises(UnsolvableError) as err:
            jacobi_from_moments(MomentSequence((1, 2, 1, 2), HALFLINE))
        assert err.value.stage == "jacobi"

    def test_validation(self):
        with pytest.raises(ValueError):
            JacobiCoefficients((0.0, 0.0), (-1.0,), 1.0, 2)
        with pytest.raises(ValueError):
            JacobiCoefficients((0.0,), (1.0,), 1.0, 1)


class TestGaussRule:
    def test_single_point(self):
        nu = gauss_from_jacobi(JacobiCoefficients((1.0,), (), 1.0, 1))
        assert nu.atoms == ((1.0, 1.0),)

    def test_symmetric_pair(self):
        nu = gauss_from_jacobi(JacobiCoefficients((0.0, 0.0), (1.0,), 1.0, 2))
        assert nu.positions() == pytest.approx((-1.0, 1.0), rel=1e-14)
        assert nu.weights() == pytest.approx((0.5, 0.5), rel=1e-14)

    def test_shifted_pair(self):
        nu = gauss_from_jacobi(JacobiCoefficients((1.0, 1.0), (1.0,), 1.0, 2))
        assert nu.positions() == pytest.approx((0.0, 2.0), abs=1e-14)
        assert nu.weights() == pytest.approx((0.5, 0.5), rel=1e-14)

    def test_empty(self):
        assert gauss_from_jacobi(JacobiCoefficients((), (), 0.0, 0)).atoms == ()


class TestRecoverMeasure:
    def test_single_atom(self):
        nu = recover_measure(MomentSequence((1, 1, 1, 1), HALFLINE))
        assert nu.positions() == pytest.approx((1.0,), rel=1e-12)
        assert nu.weights() == pytest.approx((1.0,), rel=1e-12)

    def test_two_atoms_with_boundary_node(self):
        nu = recover_measure(MomentSequence((1, 1, 2, 4), HALFLINE))
        assert nu.positions() == pytest.approx((0.0, 2.0), abs=1e-12)
        assert nu.weights() == pytest.approx((0.5, 0.5), rel=1e-12)

    def test_zero_sequence(self):
        assert recover_measure(MomentSequence((0, 0, 0, 0), HALFLINE)).atoms == ()

    def test_rejects_stieltjes_violation(self):
        with pytest.raises(UnsolvableError) as err:
            recover_measure(MomentSequence((1, 2, 1, 2), HALFLINE))
        assert err.value.stage == "solvability"
        assert "k=1" in str(err.value)

    def test_rejects_hausdorff_violation(self):
        with pytest.raises(UnsolvableError) as err:
            recover_measure(MomentSequence((1, 2, 4, 8), UNIT_INTERVAL))
        assert err.value.stage == "solvability"
        assert "differenced" in str(err.value)

    def test_halfline_moments_of_negative_atom_rejected(self):
        # moments of (delta_{-1} + delta_{+1})/2 fail the shifted form
        with pytest.raises(UnsolvableError) as err:
            recover_measure(MomentSequence((1, 0, 1, 0), HALFLINE))
        assert err.value.stage == "solvability"
        assert first_violation(stieltjes_solvable(MomentSequence((1, 0, 1, 0), HALFLINE))) == ("shifted", 1)

    def test_interval_recovery_maps_back(self):
        dom = Domain("interval", 0, 2)
        mu = AtomicMeasure(((Fraction(1, 2), 1), (Fraction(3, 2), 2)))
        nu = recover_measure(power_moments(mu, 3, dom))
        assert nu.positions() == pytest.approx((0.5, 1.5), rel=1e-10)
        assert nu.weights() == pytest.approx((1.0, 2.0), rel=1e-10)

    def test_uniform_moments_recovery(self):
        nu = recover_measure(MomentSequence(U, UNIT_INTERVAL))
        # two-point Gauss-Legendre nodes on [0, 1]
        g = math.sqrt(3) / 6
        assert nu.positions() == pytest.approx((0.5 - g, 0.5 + g), rel=1e-12)
        assert nu.weights() == pytest.approx((0.5, 0.5), rel=1e-12)
        assert moment_residual(nu, MomentSequence(U, UNIT_INTERVAL)) < 1e-14

    def test_round_trip_random_atomic(self):
        rng = np.random.default_rng(2718)
        for _ in range(100):
            mu = random_atomic(rng)
            r = len(mu.atoms)
            c = power_moments(mu, 2 * r - 1)
            nu = recover_measure(c)
            assert len(nu.atoms) == r
            assert nu.positions() == pytest.approx(mu.positions(), rel=1e-6)
            assert nu.weights() == pytest.approx(mu.weights(), rel=1e-6)

    def test_moment_reproduction(self):
        rng = np.random.default_rng(999)
        for _ in range(25):
            mu = random_atomic(rng)
            c = power_moments(mu, 5)
            nu = recover_measure(c)
            assert moment_residual(nu, c) <= 1e-8


class TestDegenerateRank:
    def test_exact_rank_counts_atoms(self):
        mus = [
            AtomicMeasure(((Fraction(1, 2), Fraction(2)),)),
            AtomicMeasure(((Fraction(1, 3), 1), (Fraction(5, 2), Fraction(1, 4)))),
            AtomicMeasure(((0, 1), (1, 1), (Fraction(7, 3), Fraction(1, 2)))),
        ]
        for mu in mus:
            c = power_moments(mu, 7)
            n = len(c.values) // 2
            matrix = build_hankel(HankelSpec(c.values, n - 1))
            ok, _, rank = psd_pivots(matrix)
            assert ok and rank == len(mu.atoms)
            rep = stieltjes_solvable(c)
            assert rep.rank == len(mu.atoms)


class TestVerifyTransfer:
    def test_single_atom_halfline(self):
        rep = verify_transfer(Frequencies((1, 2, 3, 4)), AtomicMeasure.delta(1))
        assert rep.passed and rep.max_residual <= 1e-8
        assert len(rep.nu.atoms) <= 2

    def test_zero_measure(self):
        rep = verify_transfer(Frequencies((1, 2)), AtomicMeasure(()))
        assert rep.passed and rep.nu.atoms == ()

    def test_uniform_on_unit_interval(self):
        rep = verify_transfer(
            Frequencies((1, 2, 3, 4)), Uniform(0, 1), UNIT_INTERVAL
        )
        assert rep.passed
        assert all(0 <= p <= 1 for p in rep.nu.positions())
        assert len(rep.nu.atoms) == 2

    def test_requires_positive_frequencies(self):
        with pytest.raises(DomainError):
            verify_transfer(Frequencies((-1, 2)), AtomicMeasure.delta(1))

    def test_support_outside_domain(self):
        with pytest.raises(DomainError):
            verify_transfer(
                Frequencies((1, 2)), AtomicMeasure.delta(2.0), UNIT_INTERVAL
            )

    def test_bulk_halfline(self):
        rng = np.random.default_rng(31415)
        for _ in range(30):
            freq = random_frequencies(rng, lo=0.1, hi=6.0)
            mu = random_atomic(rng, lo=0.0, hi=3.0, gap=0.05, w_lo=0.05)
            rep = verify_transfer(freq, mu)
            assert rep.passed, (freq, mu, rep.failure_stage, rep.diagnostics)

    def test_bulk_interval(self):
        rng = np.random.default_rng(27182)
        for _ in range(30):
            freq = random_frequencies(rng, lo=0.1, hi=6.0)
            mu = random_atomic(rng, lo=0.0, hi=1.0, gap=0.02, w_lo=0.05)
            rep = verify_transfer(freq, mu, UNIT_INTERVAL)
            assert rep.passed, (freq, mu, rep.failure_stage, rep.diagnostics)

    def test_solvability_consistency_of_computed_moments(self):
        # basis moments of any admissible measure satisfy both criteria
        rng = np.random.default_rng(161803)
        for _ in range(20):
            freq = random_frequencies(rng, lo=0.2, hi=5.0)
            mu = random_atomic(rng, lo=0.0, hi=1.0, gap=0.02, w_lo=0.05)
            assert hausdorff_solvable(
                exp_moments(freq, mu, UNIT_INTERVAL)
            ).solvable
            assert stieltjes_solvable(exp_moments(freq, mu)).solvable
