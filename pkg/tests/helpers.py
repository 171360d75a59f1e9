"""Shared generators for randomised tests (all seeded by the caller)."""

from fractions import Fraction

import numpy as np

from expmoments import AtomicMeasure, Frequencies


def random_frequencies(rng, n_freq=None, lo=0.05, hi=10.0, gap=0.05):
    """Pairwise separated positive frequencies; n_freq even by default."""
    if n_freq is None:
        n_freq = int(rng.choice([2, 4, 6]))
    while True:
        vals = np.sort(rng.uniform(lo, hi, size=n_freq))
        if np.all(np.diff(vals) >= gap):
            return Frequencies(tuple(float(v) for v in vals))


def random_rational_frequencies(rng, n_freq=None, denom=16, lo=1, hi=160):
    """Distinct positive rationals with denominator ``denom``."""
    if n_freq is None:
        n_freq = int(rng.choice([2, 4, 6]))
    nums = rng.choice(np.arange(lo, hi), size=n_freq, replace=False)
    return Frequencies(tuple(Fraction(int(n), denom) for n in sorted(nums)))


def random_atomic(rng, max_atoms=3, lo=0.25, hi=5.0, gap=0.5, w_lo=0.1, w_hi=2.0):
    """Atomic measure with well-separated positions and bounded weights."""
    r = int(rng.integers(1, max_atoms + 1))
    while True:
        pos = np.sort(rng.uniform(lo, hi, size=r))
        if r == 1 or np.min(np.diff(pos)) >= gap:
            break
    weights = rng.uniform(w_lo, w_hi, size=r)
    return AtomicMeasure(tuple((float(p), float(w)) for p, w in zip(pos, weights)))
