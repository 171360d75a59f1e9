"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest -s tests/test_acceptance.py`` to see the lines as they
happen; the whole suite stays well under the five-minute budget.
"""

import math
from fractions import Fraction

import numpy as np
import pytest

from expmoments import (
    AtomicMeasure,
    Frequencies,
    HALFLINE,
    MomentSequence,
    UNIT_INTERVAL,
    Uniform,
    UnsolvableError,
    barycentric_weights,
    certify_positivity,
    chammam_det,
    chammam_matrix,
    eval_phi_deriv,
    exact_det,
    exp_moments,
    factorial,
    hausdorff_solvable,
    monomial_hankel,
    power_moments,
    recover_measure,
    stieltjes_solvable,
    taylor_coeffs,
    verify_transfer,
)
from helpers import random_atomic, random_frequencies, random_rational_frequencies


def report(number, name, ok):
    print(f"\nacceptance {number} ({name}): {'PASS' if ok else 'FAIL'}", flush=True)
    assert ok, f"acceptance criterion {number} ({name}) failed"


def test_criterion_1_boundary_conditions():
    rng = np.random.default_rng(101)
    ok = True
    for _ in range(50):
        freq = random_frequencies(rng, lo=0.05, hi=10.0, gap=0.05)
        N = freq.top
        scale = factorial(N) * max(1.0, max(freq.floats()) ** N)
        for j in range(N):
            ok = ok and abs(eval_phi_deriv(freq, j, 0.0)) <= 1e-12 * scale
        ok = ok and abs(eval_phi_deriv(freq, N, 0.0) - 1.0) <= 1e-12 * scale
    report(1, "boundary conditions", ok)


def test_criterion_2_taylor_coefficients():
    rng = np.random.default_rng(202)
    ok = True
    for _ in range(20):
        freq = random_rational_frequencies(rng)
        N = freq.top
        series = taylor_coeffs(freq, N + 60)
        ok = ok and series.coeffs[0] == Fraction(1, factorial(N))
        ok = ok and all(a >= 0 for a in series.coeffs)
    report(2, "taylor coefficients", ok)


def test_criterion_3_chammam_identity():
    ok = True
    for alpha in (Fraction(1, 2), 1, 2, 5):
        for beta in (0, Fraction(1, 2), 1, 3):
            for m in range(7):
                ok = ok and chammam_det(alpha, beta, m) == exact_det(
                    chammam_matrix(alpha, beta, m)
                )
    report(3, "chammam determinant identity", ok)


def test_criterion_4_monomial_hankel_factorisation():
    ok = True
    for N in (1, 3, 5):
        for s in range(N + 1, N + 7):
            S = s - N
            for k in range(N // 2 + 1):
                for x in (Fraction(1, 3), 1, Fraction(7, 2)):
                    det = exact_det(monomial_hankel(N, k, s, x))
                    expected = (
                        Fraction(x) ** (k * (k + 1))
                        * Fraction(factorial(s), factorial(S)) ** (k + 1)
                        * chammam_det(1, S - 1, k)
                    )
                    ok = ok and det == expected
        for k in (1, 2):
            ok = ok and exact_det(monomial_hankel(N, k, N, Fraction(7, 2))) == 0
    report(4, "monomial hankel factorisation", ok)


def test_criterion_5_positivity_certificates():
    rng = np.random.default_rng(505)
    ok = True
    for _ in range(200):
        freq = random_frequencies(rng, lo=0.05, hi=8.0, gap=0.05)
        x = float(rng.uniform(0.0, 4.0))
        cert = certify_positivity(freq, x, "halfline", eps=1e-10)
        ok = ok and cert.passed
    for _ in range(200):
        freq = random_frequencies(rng, lo=0.05, hi=8.0, gap=0.05)
        x = float(rng.uniform(0.0, 1.0))
        cert = certify_positivity(freq, x, "unit_interval", eps=1e-10)
        ok = ok and cert.passed
    # semidefinite boundary: basis at 0 is (1, 0, ..., 0)
    cert = certify_positivity(Frequencies((1, 2, 3, 4)), 0, "halfline", exact=True)
    ok = ok and cert.passed
    boundary = {(fc.form, fc.k): fc.report for fc in cert.checks}
    ok = ok and boundary[("Q1", 1)].minors == (1, 0)
    ok = ok and not boundary[("Q1", 1)].is_pd
    report(5, "hankel positivity certificates", ok)


def test_criterion_6_recovery_round_trip():
    rng = np.random.default_rng(606)
    ok = True
    for _ in range(100):
        mu = random_atomic(rng, max_atoms=3, lo=0.25, hi=5.0, gap=0.5, w_lo=0.1, w_hi=2.0)
        r = len(mu.atoms)
        nu = recover_measure(power_moments(mu, 2 * r - 1))
        ok = ok and len(nu.atoms) == r
        for (p, w), (q, v) in zip(mu.atoms, nu.atoms):
            ok = ok and abs(q - p) <= 1e-6 * max(1.0, abs(p))
            ok = ok and abs(v - w) <= 1e-6 * max(1.0, abs(w))
    report(6, "atomic recovery round trip", ok)


def test_criterion_7_transfer_end_to_end():
    rng = np.random.default_rng(707)
    ok = True
    for _ in range(100):
        freq = random_frequencies(rng, lo=0.05, hi=6.0, gap=0.05)
        mu = random_atomic(rng, lo=0.0, hi=3.0, gap=0.05, w_lo=0.05)
        rep = verify_transfer(freq, mu)
        ok = ok and rep.passed and rep.max_residual <= 1e-8
    for _ in range(100):
        freq = random_frequencies(rng, lo=0.05, hi=6.0, gap=0.05)
        mu = random_atomic(rng, lo=0.0, hi=1.0, gap=0.02, w_lo=0.05)
        rep = verify_transfer(freq, mu, UNIT_INTERVAL)
        ok = ok and rep.passed and rep.max_residual <= 1e-8

    freq = Frequencies((1.0, 2.0, 3.0, 4.0))
    rep = verify_transfer(freq, AtomicMeasure.delta(1))
    ok = ok and rep.passed and len(rep.nu.atoms) <= 2
    # independent check of the atom moments: direct closed form b_j(1)
    w = [float(v) for v in barycentric_weights(freq)]
    lam = freq.floats()
    for j in range(4):
        direct = factorial(j) * math.fsum(
            w[l] * lam[l] ** (3 - j) * math.exp(lam[l]) for l in range(4)
        )
        ok = ok and abs(rep.c_hat.values[j] - direct) <= 1e-8 * max(1.0, abs(direct))

    repu = verify_transfer(freq, Uniform(0, 1), UNIT_INTERVAL)
    ok = ok and repu.passed
    ok = ok and all(0 <= p <= 1 for p in repu.nu.positions())
    # independent high-resolution quadrature: 2e6-point midpoint rule
    npts = 2_000_000
    xs = (np.arange(npts) + 0.5) / npts
    ew = np.exp(np.outer(xs, np.asarray(lam))) * np.asarray(w)
    for j in range(4):
        bj = factorial(j) * ew @ np.asarray(lam) ** (3 - j)
        oracle = float(np.mean(bj))
        ok = ok and abs(repu.c_hat.values[j] - oracle) <= 1e-8 * max(1.0, abs(oracle))
    report(7, "moment transfer end to end", ok)


def test_criterion_8_negative_controls():
    ok = True
    bad_half = MomentSequence((1, 2, 1, 2), HALFLINE)
    ok = ok and not stieltjes_solvable(bad_half).solvable
    bad_unit = MomentSequence((1, 2, 4, 8), UNIT_INTERVAL)
    ok = ok and not hausdorff_solvable(bad_unit).solvable
    try:
        recover_measure(bad_half)
        ok = False
    except UnsolvableError as e:
        ok = ok and e.stage == "solvability" and "k=1" in str(e)
    try:
        recover_measure(bad_unit)
        ok = False
    except UnsolvableError as e:
        ok = ok and e.stage == "solvability" and "differenced" in str(e)
    report(8, "negative controls", ok)
