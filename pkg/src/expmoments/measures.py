"""Measures on the nonnegative axis and their moment vectors.

Supported measures: finite atomic combinations, the uniform probability
density on [a, b], the exponential density rate*exp(-rate*x) (optionally
truncated, and then not renormalised), and nonnegative mixtures of these.

``exp_moments`` integrates the factorial-scaled derivative basis against a
measure; ``power_moments`` integrates plain powers.  Atomic and uniform
measures with rational data admit exact results, densities are handled by
adaptive Gauss-Legendre panels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import ConvergenceError, DomainError
from .expcore import Frequencies, basis_matrix, eval_basis, eval_basis_exact
from .numerics import as_fraction, is_exact

_MERGE_REL = 1e-12  # atoms closer than this (relative) are merged
_QUAD_RTOL = 1e-11
_QUAD_MAX_DEPTH = 40
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(15)


@dataclass(frozen=True)
class Domain:
    """Moment-problem domain: the half-line [0, inf) or an interval [a, b]
    with 0 <= a < b."""

    kind: str
    a: object = 0
    b: object = None

    def __post_init__(self):
        if self.kind == "halfline":
            if float(self.a) != 0.0 or self.b is not None:
                raise DomainError("the half-line domain is [0, inf)")
        elif self.kind == "interval":
            if self.b is None:
                raise DomainError("interval domain requires an upper endpoint")
            if not 0 <= float(self.a) < float(self.b):
                raise DomainError("interval must satisfy 0 <= a < b")
        else:
            raise DomainError(f"unknown domain kind {self.kind!r}")

    @property
    def bounds(self) -> tuple:
        if self.kind == "halfline":
            return (0.0, math.inf)
        return (float(self.a), float(self.b))

    def contains(self, x: float, tol: float = 0.0) -> bool:
        lo, hi = self.bounds
        return lo - tol <= x <= hi + tol


HALFLINE = Domain("halfline")
UNIT_INTERVAL = Domain("interval", 0, 1)


def _canonical_atoms(atoms) -> tuple:
    cleaned = []
    for pos, w in atoms:
        if float(w) < 0:
            raise DomainError("atom weights must be nonnegative")
        cleaned.append((pos, w))
    cleaned.sort(key=lambda a: float(a[0]))
    merged = []
    for pos, w in cleaned:
        if merged:
            prev_pos, prev_w = merged[-1]
            gap = abs(float(pos) - float(prev_pos))
            if gap <= _MERGE_REL * max(1.0, abs(float(pos))):
                merged[-1] = (prev_pos, prev_w + w)
                continue
        merged.append((pos, w))
    return tuple((p, w) for p, w in merged)


@dataclass(frozen=True)
class AtomicMeasure:
    """Finitely many (position, weight >= 0) pairs, positions increasing."""

    atoms: tuple

    def __post_init__(self):
        object.__setattr__(self, "atoms", _canonical_atoms(self.atoms))

    @classmethod
    def delta(cls, x, w=1) -> "AtomicMeasure":
        return cls(((x, w),))

    @property
    def mass(self):
        return sum((w for _, w in self.atoms), start=0)

    @property
    def exact(self) -> bool:
        return all(is_exact(p) and is_exact(w) for p, w in self.atoms)

    def positions(self) -> tuple:
        return tuple(p for p, _ in self.atoms)

    def weights(self) -> tuple:
        return tuple(w for _, w in self.atoms)


@dataclass(frozen=True)
class Uniform:
    """Uniform probability measure on [a, b] (density 1/(b-a))."""

    a: object
    b: object

    def __post_init__(self):
        if not float(self.a) < float(self.b):
            raise DomainError("uniform measure requires a < b")
        if float(self.a) < 0:
            raise DomainError("support must lie in [0, inf)")

    @property
    def exact(self) -> bool:
        return is_exact(self.a) and is_exact(self.b)


@dataclass(frozen=True)
class TruncatedExponential:
    """Density rate*exp(-rate*x) on [0, truncate] (or [0, inf) when
    truncate is None); not renormalised after truncation."""

    rate: float
    truncate: float | None = None

    def __post_init__(self):
        if float(self.rate) <= 0:
            raise DomainError("rate must be positive")
        if self.truncate is not None and float(self.truncate) <= 0:
            raise DomainError("truncation point must be positive")


@dataclass(frozen=True)
class Mixture:
    """Nonnegative combination sum_i coeff_i * measure_i."""

    parts: tuple  # of (coefficient, measure)

    def __post_init__(self):
        parts = tuple((c, m) for c, m in self.parts)
        for c, _ in parts:
            if float(c) < 0:
                raise DomainError("mixture coefficients must be nonnegative")
        object.__setattr__(self, "parts", parts)


def support_interval(mu):
    """(lo, hi) hull of the support, or None for the zero measure."""
    if isinstance(mu, AtomicMeasure):
        if not mu.atoms:
            return None
        xs = [float(p) for p, _ in mu.atoms]
        return (min(xs), max(xs))
    if isinstance(mu, Uniform):
        return (float(mu.a), float(mu.b))
    if isinstance(mu, TruncatedExponential):
        hi = math.inf if mu.truncate is None else float(mu.truncate)
        return (0.0, hi)
    if isinstance(mu, Mixture):
        hulls = [support_interval(m) for _, m in mu.parts]
        hulls = [h for h in hulls if h is not None]
        if not hulls:
            return None
        return (min(h[0] for h in hulls), max(h[1] for h in hulls))
    raise TypeError(f"unknown measure type {type(mu).__name__}")


def _require_support(mu, domain: Domain):
    hull = support_interval(mu)
    if hull is None:
        return
    lo, hi = domain.bounds
    tol = 1e-12 * max(1.0, abs(hull[0]), abs(hull[1]))
    if hull[0] < lo - tol or hull[1] > hi + tol:
        raise DomainError(
            f"measure support {hull} is not contained in the domain {domain.kind}"
        )


@dataclass(frozen=True)
class MomentSequence:
    """Moments c_0..c_N (even count, N odd) tagged with their domain."""

    values: tuple
    domain: Domain

    def __post_init__(self):
        values = tuple(self.values)
        object.__setattr__(self, "values", values)
        if len(values) < 2 or len(values) % 2 != 0:
            raise DomainError("moment sequences must have even length >= 2")
        c0 = float(values[0])
        if c0 < 0:
            raise DomainError("c_0 must be nonnegative")
        if c0 == 0 and any(float(v) != 0 for v in values):
            raise DomainError("c_0 = 0 forces the zero sequence")

    @property
    def top(self) -> int:
        return len(self.values) - 1

    @property
    def exact(self) -> bool:
        return all(is_exact(v) for v in self.values)

    def floats(self) -> tuple:
        return tuple(float(v) for v in self.values)


def _gl_panel(f, a: float, b: float):
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    xs = mid + half * _GL_NODES
    vals = f(xs)
    return half * (vals * _GL_WEIGHTS[:, None]).sum(axis=0)


def _adaptive_panels(f, a: float, b: float, rtol: float = _QUAD_RTOL):
    """Adaptive bisection with 15-point Gauss-Legendre panels.

    ``f`` maps a point array to an array of shape (npts, ncomp); all
    components are refined together.  Raises ConvergenceError past the
    maximum depth.
    """
    whole = _gl_panel(f, a, b)
    scale = np.maximum(np.abs(whole), 1e-30)

    def recurse(lo, hi, est, depth):
        mid = 0.5 * (lo + hi)
        left = _gl_panel(f, lo, mid)
        right = _gl_panel(f, mid, hi)
        refined = left + right
        err = np.abs(refined - est)
        if np.all(err <= rtol * np.maximum(np.abs(refined), 1e-3 * scale)):
            return refined
        if depth >= _QUAD_MAX_DEPTH:
            raise ConvergenceError(
                f"quadrature did not converge on [{lo:.6g}, {hi:.6g}]",
                achieved=refined,
            )
        return recurse(lo, mid, left, depth + 1) + recurse(mid, hi, right, depth + 1)

    return recurse(a, b, whole, 0)


def _density_callable(mu):
    if isinstance(mu, Uniform):
        inv = 1.0 / (float(mu.b) - float(mu.a))
        return lambda xs: np.full_like(xs, inv), (float(mu.a), float(mu.b))
    if isinstance(mu, TruncatedExponential):
        rate = float(mu.rate)
        dens = lambda xs: rate * np.exp(-rate * xs)
        hi = math.inf if mu.truncate is None else float(mu.truncate)
        return dens, (0.0, hi)
    raise TypeError(f"not a density measure: {type(mu).__name__}")


def _integrate_density(mu, components, rtol: float):
    """Integrate the vector integrand ``components(xs) * density(xs)``."""
    dens, (lo, hi) = _density_callable(mu)
    f = lambda xs: components(xs) * dens(xs)[:, None]
    if math.isfinite(hi):
        return _adaptive_panels(f, lo, hi, rtol)
    # unbounded exponential tail: extend panel by panel until contributions
    # stop mattering
    rate = float(mu.rate)
    total = None
    width = max(10.0 / rate, 1.0)
    left = lo
    for _ in range(200):
        piece = _adaptive_panels(f, left, left + width, rtol)
        total = piece if total is None else total + piece
        left += width
        norm = float(np.max(np.abs(total))) if total is not None else 0.0
        if float(np.max(np.abs(piece))) <= 1e-13 * max(norm, 1e-300):
            return total
    raise ConvergenceError("unbounded integral did not stabilise", achieved=total)


def exp_moments(
    freq: Frequencies,
    mu,
    domain: Domain = HALFLINE,
    exact: bool = False,
    rtol: float = _QUAD_RTOL,
) -> MomentSequence:
    """Basis moments c^_j = integral of b_j against mu, for j = 0..N.

    Atomic measures are summed directly (exactly in exact mode, which needs
    rational frequencies, positions and weights); densities go through the
    adaptive quadrature.  The measure support must lie inside ``domain``.
    """
    freq.require_even_count()
    _require_support(mu, domain)
    N = freq.top

    if isinstance(mu, AtomicMeasure):
        if exact:
            if not mu.exact:
                raise DomainError("exact moments require rational atom data")
            values = [Fraction(0)] * (N + 1)
            for pos, w in mu.atoms:
                b = eval_basis_exact(freq, pos)
                wq = as_fraction(w)
                for j in range(N + 1):
                    values[j] += wq * b[j]
            return MomentSequence(tuple(values), domain)
        values = [0.0] * (N + 1)
        for pos, w in mu.atoms:
            b = eval_basis(freq, pos).values
            for j in range(N + 1):
                values[j] += float(w) * b[j]
        return MomentSequence(tuple(values), domain)

    if isinstance(mu, Mixture):
        total = [Fraction(0) if exact else 0.0] * (N + 1)
        for coeff, part in mu.parts:
            inner = exp_moments(freq, part, domain=domain, exact=exact, rtol=rtol)
            for j in range(N + 1):
                total[j] = total[j] + coeff * inner.values[j]
        return MomentSequence(tuple(total), domain)

    if exact:
        raise DomainError("exact moments are only available for atomic measures")
    if isinstance(mu, TruncatedExponential) and mu.truncate is None:
        if float(mu.rate) <= max(freq.floats()):
            raise DomainError(
                "integral diverges: exponential rate must exceed the largest frequency"
            )
    vals = _integrate_density(mu, lambda xs: basis_matrix(freq, xs), rtol)
    return MomentSequence(tuple(float(v) for v in vals), domain)


def power_moments(
    mu,
    top: int,
    domain: Domain = HALFLINE,
    rtol: float = _QUAD_RTOL,
) -> MomentSequence:
    """Power moments c_j = integral of t^j, j = 0..top (top odd).

    Exact for atomic/uniform measures with rational data.
    """
    if top < 1 or top % 2 == 0:
        raise DomainError("top must be odd (even moment count)")

    if isinstance(mu, AtomicMeasure):
        exact = mu.exact
        zero = Fraction(0) if exact else 0.0
        values = []
        for j in range(top + 1):
            acc = zero
            for pos, w in mu.atoms:
                p = as_fraction(pos) if exact else float(pos)
                wv = as_fraction(w) if exact else float(w)
                acc = acc + wv * p**j
            values.append(acc)
        return MomentSequence(tuple(values), domain)

    if isinstance(mu, Uniform):
        if mu.exact:
            a, b = as_fraction(mu.a), as_fraction(mu.b)
            values = tuple(
                (b ** (j + 1) - a ** (j + 1)) / ((j + 1) * (b - a))
                for j in range(top + 1)
            )
        else:
            a, b = float(mu.a), float(mu.b)
            values = tuple(
                (b ** (j + 1) - a ** (j + 1)) / ((j + 1) * (b - a))
                for j in range(top + 1)
            )
        return MomentSequence(values, domain)

    if isinstance(mu, TruncatedExponential):
        powers = lambda xs: xs[:, None] ** np.arange(top + 1)
        vals = _integrate_density(mu, powers, rtol)
        return MomentSequence(tuple(float(v) for v in vals), domain)

    if isinstance(mu, Mixture):
        total = [0 * as_fraction(0)] * (top + 1)
        for coeff, part in mu.parts:
            inner = power_moments(part, top, domain=domain, rtol=rtol)
            for j in range(top + 1):
                total[j] = total[j] + coeff * inner.values[j]
        return MomentSequence(tuple(total), domain)

    raise TypeError(f"unknown measure type {type(mu).__name__}")
