#!/usr/bin/env python3
"""Random sweep of Hankel positivity certificates.

Draws (frequencies, x) pairs for both regions, runs the certificate, and
summarises pass rates together with the worst eigenvalue margin seen
(min_eig / max(1, trace)), which shows how far the matrices sit from the
semidefinite boundary.

    python3 scripts/bulk_certify.py --trials 500 --seed 7
"""

import argparse
import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))
sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))

from expmoments import certify_positivity
from helpers import random_frequencies


def sweep(region, trials, seed, lam_hi, x_hi):
    rng = np.random.default_rng(seed)
    failures = 0
    worst_margin = np.inf
    for _ in range(trials):
        freq = random_frequencies(rng, lo=0.05, hi=lam_hi, gap=0.05)
        x = float(rng.uniform(0.0, x_hi))
        cert = certify_positivity(freq, x, region)
        if not cert.passed:
            failures += 1
        for fc in cert.checks:
            margin = fc.report.min_eig / max(1.0, fc.report.tolerance / 1e-10)
            worst_margin = min(worst_margin, margin)
    return failures, worst_margin


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--trials", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--lam-hi", type=float, default=8.0)
    args = ap.parse_args()

    for region, x_hi in (("halfline", 4.0), ("unit_interval", 1.0)):
        failures, margin = sweep(region, args.trials, args.seed, args.lam_hi, x_hi)
        print(
            f"{region:14s} trials={args.trials} failures={failures} "
            f"worst normalised min_eig={margin:.3e}"
        )


if __name__ == "__main__":
    main()
