"""Exponential-polynomial core.

For a vector of pairwise distinct frequencies ``lam = (l_0, ..., l_N)`` the
fundamental function of the span of ``exp(l_j x)`` is the divided difference
of ``t -> exp(t x)`` over the frequency nodes,

    phi(x) = sum_j w_j exp(l_j x),      w_j = 1 / prod_{i != j} (l_j - l_i),

the unique combination whose derivatives at 0 vanish through order N-1 while
the N-th derivative equals 1.  Its Taylor coefficients are

    a_s = h_{s-N}(lam) / s!   for s >= N,

with h_m the complete homogeneous symmetric polynomial, so a_N = 1/N! and all
coefficients are nonnegative whenever the frequencies are.  The derivative
basis scales the high-order derivatives by factorials:

    b_j(x) = j! * phi^(N-j)(x),   j = 0..N,

which takes the values (1, 0, ..., 0) at x = 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import ConvergenceError, DomainError
from .numerics import complete_homogeneous_all, factorial, is_exact

_EXP_ARG_LIMIT = 700.0  # exp() overflow guard for IEEE doubles
_GAP_REL = 1e-8  # nearly confluent frequencies rejected below this gap
_S_EXTRA_DEFAULT = 60  # default number of Taylor terms past the first
_S_EXTRA_CAP = 400  # hard cap for automatic series extension


@dataclass(frozen=True)
class Frequencies:
    """Pairwise distinct frequency vector.

    Entries may be floats or exact rationals (int/Fraction); exact entries
    unlock the exact Taylor paths.  Positivity and an even count are only
    required by the operations that need them.
    """

    values: tuple

    def __post_init__(self):
        values = tuple(self.values)
        object.__setattr__(self, "values", values)
        if len(values) < 2:
            raise DomainError("at least two frequencies are required")
        vals = [float(v) for v in values]
        scale = max(abs(v) for v in vals)
        for i in range(len(vals)):
            for j in range(i + 1, len(vals)):
                gap = abs(vals[i] - vals[j])
                if gap == 0.0:
                    raise DomainError("frequencies must be pairwise distinct")
                if gap < _GAP_REL * scale:
                    raise DomainError(
                        f"frequency gap {gap:.3e} is below {_GAP_REL * scale:.3e}; "
                        "nearly confluent frequencies are not supported"
                    )

    def __len__(self) -> int:
        return len(self.values)

    @property
    def top(self) -> int:
        """Largest basis index N (one less than the number of frequencies)."""
        return len(self.values) - 1

    @property
    def exact(self) -> bool:
        return all(is_exact(v) for v in self.values)

    def floats(self) -> tuple:
        return tuple(float(v) for v in self.values)

    def require_positive(self):
        if any(float(v) <= 0.0 for v in self.values):
            raise DomainError("all frequencies must be positive")

    def require_nonnegative(self):
        if any(float(v) < 0.0 for v in self.values):
            raise DomainError("all frequencies must be nonnegative")

    def require_even_count(self):
        if len(self.values) % 2 != 0:
            raise DomainError("an even number of frequencies is required")


@dataclass(frozen=True)
class PhiSeries:
    """Taylor coefficients a_start .. a_{s_max} of the fundamental function."""

    freq: Frequencies
    start: int
    coeffs: tuple

    @property
    def s_max(self) -> int:
        return self.start + len(self.coeffs) - 1

    def coeff(self, s: int):
        if s < 0:
            raise IndexError("negative power")
        if s < self.start:
            return 0
        return self.coeffs[s - self.start]

    def partial_sum(self, x):
        """sum of a_s x^s over the stored range (exact for exact inputs)."""
        total = 0 * x
        power = x**self.start
        for a in self.coeffs:
            total = total + a * power
            power = power * x
        return total


@dataclass(frozen=True)
class ExpBasisValues:
    """Basis values (b_0(x), ..., b_N(x)) at a single point."""

    freq: Frequencies
    x: float
    values: tuple


def _check_exp_range(lam_floats, x: float):
    worst = max((l * x for l in lam_floats), default=0.0)
    if worst > _EXP_ARG_LIMIT:
        raise OverflowError(
            f"exp argument {worst:.1f} exceeds the double-precision range"
        )


def barycentric_weights(freq: Frequencies) -> tuple:
    """Weights w_j = 1 / prod_{i != j} (l_j - l_i); exact for exact frequencies.

    They satisfy sum_j w_j l_j^m = 0 for m < N and = h_{m-N}(lam) for m >= N.
    """
    if freq.exact:
        lam = [Fraction(v) for v in freq.values]
        one = Fraction(1)
    else:
        lam = list(freq.floats())
        one = 1.0
    weights = []
    for j, lj in enumerate(lam):
        prod = one
        for i, li in enumerate(lam):
            if i != j:
                prod = prod * (lj - li)
        weights.append(one / prod)
    return tuple(weights)


def _float_weights(freq: Frequencies) -> tuple:
    lam = freq.floats()
    weights = []
    for j, lj in enumerate(lam):
        prod = 1.0
        for i, li in enumerate(lam):
            if i != j:
                prod *= lj - li
        weights.append(1.0 / prod)
    return tuple(weights)


def eval_phi_deriv(freq: Frequencies, order: int, x) -> float:
    """Derivative of the given order of the fundamental function, closed form."""
    if order < 0:
        raise DomainError("derivative order must be >= 0")
    xf = float(x)
    lam = freq.floats()
    _check_exp_range(lam, xf)
    w = _float_weights(freq)
    return math.fsum(
        w[j] * lam[j] ** order * math.exp(lam[j] * xf) for j in range(len(lam))
    )


def eval_phi(freq: Frequencies, x) -> float:
    """Value of the fundamental function at x."""
    return eval_phi_deriv(freq, 0, x)


def _taylor_float(freq: Frequencies, s_max: int):
    """Float coefficients a_N..a_{s_max} plus their cancellation magnitudes.

    Uses the stable per-frequency recurrence u_j(s+1) = u_j(s) l_j/(s+1) on
    u_j(s) = w_j l_j^s / s!, which never overflows for moderate frequencies.
    """
    N = freq.top
    lam = freq.floats()
    w = _float_weights(freq)
    u = [w[j] * lam[j] ** N / factorial(N) for j in range(len(lam))]
    coeffs = []
    mags = []
    for s in range(N, s_max + 1):
        if s > N:
            u = [u[j] * lam[j] / s for j in range(len(lam))]
        coeffs.append(math.fsum(u))
        mags.append(math.fsum(abs(t) for t in u))
    return coeffs, mags


def taylor_coeffs(freq: Frequencies, s_max: int | None = None) -> PhiSeries:
    """Taylor coefficients a_s = h_{s-N}(lam)/s! for N <= s <= s_max.

    Exact (Fraction) when every frequency is exact, floating otherwise.
    """
    N = freq.top
    if s_max is None:
        s_max = N + _S_EXTRA_DEFAULT
    if s_max < N:
        raise DomainError("s_max must be at least the first nonzero order")
    if freq.exact:
        lam = [Fraction(v) for v in freq.values]
        h = complete_homogeneous_all(lam, s_max - N)
        coeffs = tuple(
            Fraction(h[s - N]) / factorial(s) for s in range(N, s_max + 1)
        )
    else:
        coeffs, _ = _taylor_float(freq, s_max)
        coeffs = tuple(coeffs)
    return PhiSeries(freq, N, coeffs)


def phi_series_value(freq: Frequencies, x, rtol: float = 1e-16) -> float:
    """Series evaluation of the fundamental function, for cross-validation.

    Terms are accumulated until the next one falls below ``rtol`` of the
    partial sum (after the term magnitudes have started to decay); extension
    past N + 400 terms raises ConvergenceError.
    """
    N = freq.top
    lam = freq.floats()
    xf = float(x)
    _check_exp_range(lam, xf)
    w = _float_weights(freq)
    v = [w[j] * (lam[j] * xf) ** N / factorial(N) for j in range(len(lam))]
    total = math.fsum(v)
    peak = max((abs(l * xf) for l in lam), default=0.0)
    for s in range(N + 1, N + _S_EXTRA_CAP + 1):
        v = [v[j] * lam[j] * xf / s for j in range(len(lam))]
        term = math.fsum(v)
        total += term
        if s > peak and abs(term) <= rtol * max(abs(total), 1e-300):
            return total
    raise ConvergenceError(
        f"series did not meet the tail criterion within {_S_EXTRA_CAP} extra terms",
        achieved=total,
    )


def eval_basis(freq: Frequencies, x) -> ExpBasisValues:
    """Basis values b_j(x) = j! * phi^(N-j)(x) for j = 0..N."""
    N = freq.top
    lam = freq.floats()
    xf = float(x)
    _check_exp_range(lam, xf)
    w = _float_weights(freq)
    e = [w[j] * math.exp(lam[j] * xf) for j in range(len(lam))]
    values = tuple(
        factorial(j)
        * math.fsum(e[l] * lam[l] ** (N - j) for l in range(len(lam)))
        for j in range(N + 1)
    )
    return ExpBasisValues(freq, xf, values)


def basis_matrix(freq: Frequencies, xs) -> "np.ndarray":
    """Basis values over many points, shape (len(xs), N+1); float path."""
    import numpy as np

    N = freq.top
    lam = np.asarray(freq.floats())
    xs = np.asarray(xs, dtype=float)
    if xs.size:
        _check_exp_range(freq.floats(), float(xs.max()))
        _check_exp_range(freq.floats(), float(xs.min()))
    w = np.asarray(_float_weights(freq))
    ew = np.exp(np.outer(xs, lam)) * w  # (npts, N+1)
    powers = lam[None, :] ** (N - np.arange(N + 1))[:, None]  # (N+1, nfreq)
    facts = np.array([factorial(j) for j in range(N + 1)], dtype=float)
    return ew @ powers.T * facts


def eval_basis_exact(freq: Frequencies, x, s_max: int | None = None) -> tuple:
    """Truncated exact-series basis values at a rational point.

    b_j(x) = j! * sum_{S >= 0} h_S(lam) x^(S+j) / (S+j)!, truncated at
    s_max - N terms.  With nonnegative frequencies and x >= 0 every neglected
    term is nonnegative, so each returned value is a lower bound and any
    Hankel form built from them differs from the true one by a positive
    semidefinite tail.
    """
    if not freq.exact:
        raise DomainError("exact basis evaluation requires exact frequencies")
    if not is_exact(x):
        raise DomainError("exact basis evaluation requires a rational point")
    N = freq.top
    if s_max is None:
        s_max = N + _S_EXTRA_DEFAULT
    if s_max < N:
        raise DomainError("s_max must be at least the first nonzero order")
    xq = Fraction(x)
    lam = [Fraction(v) for v in freq.values]
    h = complete_homogeneous_all(lam, s_max - N)
    values = []
    for j in range(N + 1):
        total = Fraction(0)
        power = xq**j
        for S in range(s_max - N + 1):
            total += Fraction(h[S]) * power / factorial(S + j)
            power = power * xq
        values.append(factorial(j) * total)
    return tuple(values)


@dataclass(frozen=True)
class PhiPositivityReport:
    """Sampled nonnegativity evidence for the fundamental-function derivatives."""

    j_max: int
    grid: tuple
    min_value: float
    min_at: tuple  # (derivative order, x)
    coeff_min: object  # float or Fraction
    tolerance: float
    passed: bool


def check_phi_positivity(
    freq: Frequencies,
    j_max: int,
    grid,
    tolerance: float | None = None,
    s_max: int | None = None,
) -> PhiPositivityReport:
    """Evaluate phi^(j) over a grid and the Taylor coefficients, and report
    the minimum against a cancellation-aware tolerance.

    With an explicit ``tolerance`` the pass line is ``min >= -tolerance``;
    otherwise the tolerance is 1e-12 of the largest cancellation magnitude
    met during evaluation.  Exact frequencies get their coefficients checked
    exactly.
    """
    freq.require_nonnegative()
    if j_max < 0:
        raise DomainError("j_max must be >= 0")
    N = freq.top
    lam = freq.floats()
    w = _float_weights(freq)
    min_value = math.inf
    min_at = (0, 0.0)
    magnitude = 1.0
    grid = tuple(float(g) for g in grid)
    for xf in grid:
        _check_exp_range(lam, xf)
        e = [math.exp(l * xf) for l in lam]
        for j in range(j_max + 1):
            val = math.fsum(w[i] * lam[i] ** j * e[i] for i in range(len(lam)))
            mag = math.fsum(abs(w[i]) * lam[i] ** j * e[i] for i in range(len(lam)))
            magnitude = max(magnitude, mag)
            if val < min_value:
                min_value = val
                min_at = (j, xf)
    if s_max is None:
        s_max = N + _S_EXTRA_DEFAULT
    if freq.exact:
        series = taylor_coeffs(freq, s_max)
        coeff_min = min(series.coeffs)
        coeff_ok = coeff_min >= 0
    else:
        coeffs, mags = _taylor_float(freq, s_max)
        coeff_min = min(coeffs)
        coeff_ok = coeff_min >= -1e-12 * max(1.0, max(mags))
    tol = tolerance if tolerance is not None else 1e-12 * magnitude
    passed = (min_value >= -tol) and coeff_ok
    return PhiPositivityReport(
        j_max=j_max,
        grid=grid,
        min_value=min_value,
        min_at=min_at,
        coeff_min=coeff_min,
        tolerance=tol,
        passed=passed,
    )
