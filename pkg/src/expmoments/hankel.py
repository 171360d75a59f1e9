"""Hankel forms over basis-value sequences and their positivity certificates.

Three quadratic forms are attached to a value sequence (c_0, ..., c_m):

    Q1: entries c_{i+j}            (plain Hankel),
    Q2: entries c_{i+j+1}          (index-shifted Hankel),
    Q3: entries c_{i+j} - c_{i+j+1} (differenced Hankel).

Simultaneous positive semidefiniteness of Q1 and Q2 characterises
nonnegativity of the sequence with respect to the half-line, of Q2 and Q3
with respect to [0, 1] (the classical Stieltjes / Hausdorff determinant
criteria).  The module also provides the closed-form Hankel determinant of
Pochhammer ratios due to Chammam, and the monomial Hankel family that makes
the basis-sequence certificates reducible to it.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DomainError
from .expcore import (
    Frequencies,
    PhiPositivityReport,
    check_phi_positivity,
    eval_basis,
    eval_basis_exact,
)
from .numerics import (
    RationalMatrix,
    as_fraction,
    factorial,
    is_exact,
    leading_principal_minors,
    pochhammer,
    psd_pivots,
)

HALFLINE_REGION = "halfline"
UNIT_INTERVAL_REGION = "unit_interval"

_FLOAT_PSD_EPS = 1e-10  # relative eigenvalue tolerance, scaled by max(1, trace)


@dataclass(frozen=True)
class HankelSpec:
    """Recipe for a Hankel matrix drawn from a finite sequence.

    ``shift`` selects entries c_{i+j+shift}; ``differenced`` selects
    c_{i+j} - c_{i+j+1}.  The two options are mutually exclusive.
    """

    sequence: tuple
    k: int
    shift: int = 0
    differenced: bool = False

    def __post_init__(self):
        object.__setattr__(self, "sequence", tuple(self.sequence))
        if self.k < 0:
            raise DomainError("form size index k must be >= 0")
        if self.shift not in (0, 1):
            raise DomainError("shift must be 0 or 1")
        if self.differenced and self.shift == 1:
            raise DomainError("differenced and shift=1 are mutually exclusive")
        m = len(self.sequence) - 1
        need = 2 * self.k + (1 if (self.shift == 1 or self.differenced) else 0)
        if need > m:
            raise DomainError(
                f"sequence of length {m + 1} is too short for k={self.k}, "
                f"shift={self.shift}, differenced={self.differenced}"
            )

    @property
    def exact(self) -> bool:
        return all(is_exact(v) for v in self.sequence)


def build_hankel(spec: HankelSpec):
    """Materialise the (k+1) x (k+1) symmetric matrix of a HankelSpec.

    Exact sequences give a RationalMatrix, floating ones a numpy array.
    """
    c = spec.sequence
    k = spec.k

    def entry(i, j):
        m = i + j
        if spec.differenced:
            return c[m] - c[m + 1]
        return c[m + spec.shift]

    if spec.exact:
        return RationalMatrix.from_rows(
            [[as_fraction(entry(i, j)) for j in range(k + 1)] for i in range(k + 1)]
        )
    return np.array(
        [[float(entry(i, j)) for j in range(k + 1)] for i in range(k + 1)]
    )


def quadratic_form(matrix, p):
    """sum_{i,j} p_i p_j M_{ij}; exact when both operands are exact."""
    if isinstance(matrix, RationalMatrix):
        n = matrix.order
        p = list(p)
        if len(p) != n:
            raise ValueError("vector length does not match matrix order")
        return sum(p[i] * p[j] * matrix.entry(i, j) for i in range(n) for j in range(n))
    m = np.asarray(matrix, dtype=float)
    v = np.asarray(list(p), dtype=float)
    if v.shape[0] != m.shape[0]:
        raise ValueError("vector length does not match matrix order")
    return float(v @ m @ v)


@dataclass(frozen=True)
class PsdReport:
    """Certification result for a symmetric matrix.

    Exact mode carries the leading principal minors and decides
    semidefiniteness by pivoted LDL^T; floating mode carries the minimum
    eigenvalue tested against ``-tolerance``.
    """

    is_psd: bool
    is_pd: bool
    minors: tuple | None
    min_eig: float | None
    tolerance: float
    mode: str


def psd_check(matrix, mode: str = "auto", eps: float = _FLOAT_PSD_EPS) -> PsdReport:
    """Decide (semi)definiteness of a symmetric matrix.

    ``mode`` is "exact", "floating" or "auto" (exact for RationalMatrix
    input).  Floating tolerance is ``eps * max(1, trace)``.
    """
    if mode not in ("auto", "exact", "floating"):
        raise ValueError(f"unknown mode {mode!r}")
    if isinstance(matrix, RationalMatrix):
        if mode == "floating":
            matrix = np.array(matrix.to_floats())
        else:
            mode = "exact"
    else:
        if mode == "exact":
            raise ValueError("exact mode requires a RationalMatrix")
        mode = "floating"

    if mode == "exact":
        if not matrix.is_symmetric():
            raise ValueError("matrix must be symmetric")
        minors = leading_principal_minors(matrix)
        is_pd = all(m > 0 for m in minors)
        is_psd, _, _ = psd_pivots(matrix)
        return PsdReport(
            is_psd=is_psd or is_pd,
            is_pd=is_pd,
            minors=minors,
            min_eig=None,
            tolerance=0.0,
            mode="exact",
        )

    m = np.asarray(matrix, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("matrix must be square")
    if not np.array_equal(m, m.T):
        if np.max(np.abs(m - m.T)) > 1e-12 * max(1.0, np.max(np.abs(m))):
            raise ValueError("matrix must be symmetric")
        m = 0.5 * (m + m.T)
    eigs = np.linalg.eigvalsh(m)
    min_eig = float(eigs[0]) if eigs.size else 0.0
    tol = eps * max(1.0, float(np.trace(m)))
    return PsdReport(
        is_psd=min_eig >= -tol,
        is_pd=min_eig > tol,
        minors=None,
        min_eig=min_eig,
        tolerance=tol,
        mode="floating",
    )


def chammam_matrix(alpha, beta, m: int) -> RationalMatrix:
    """The (m+1) x (m+1) Hankel matrix with entries (a)_{i+j} / (1+a+b)_{i+j}."""
    a = as_fraction(alpha)
    b = as_fraction(beta)
    entries = []
    for s in range(2 * m + 1):
        den = pochhammer(1 + a + b, s)
        if den == 0:
            raise ZeroDivisionError(
                f"denominator Pochhammer (1+alpha+beta)_{s} vanishes"
            )
        entries.append(pochhammer(a, s) / den)
    return RationalMatrix.from_rows(
        [[entries[i + j] for j in range(m + 1)] for i in range(m + 1)]
    )


def chammam_det(alpha, beta, m: int) -> Fraction:
    """Chammam's closed form for det [(a)_{i+j} / (1+a+b)_{i+j}], 0 <= i,j <= m:

        prod_{k=0}^{m}  k! (a)_k (1+b)_k / ((a+b+k)_k (1+a+b)_{2k}).
    """
    if m < 0:
        raise DomainError("matrix order index m must be >= 0")
    a = as_fraction(alpha)
    b = as_fraction(beta)
    total = Fraction(1)
    for k in range(m + 1):
        den1 = pochhammer(a + b + k, k)
        den2 = pochhammer(1 + a + b, 2 * k)
        if den1 == 0 or den2 == 0:
            raise ZeroDivisionError(
                f"denominator Pochhammer vanishes at product index k={k}"
            )
        total *= Fraction(factorial(k)) * pochhammer(a, k) * pochhammer(1 + b, k) / (den1 * den2)
    return total


def monomial_hankel(N: int, k: int, s: int, x):
    """Hankel matrix of the degree-s monomial contribution to the basis forms:

        entry(i, j) = (i+j)! * s!/(s-N+i+j)! * x^(i+j).

    Its determinant factors through Chammam's identity as
    x^(k(k+1)) * (s!/S!)^(k+1) * chammam_det(1, S-1, k) with S = s - N.
    Exact x gives a RationalMatrix, floating x a numpy array.
    """
    if N < 1 or N % 2 == 0:
        raise DomainError("N must be an odd positive integer")
    if s < N:
        raise DomainError("monomial degree s must be >= N")
    if k < 0:
        raise DomainError("form size index k must be >= 0")
    S = s - N

    # s!/(S+m)! is an integer only while S+m <= s; keep the ratio exact
    def scalar(m):
        return factorial(m) * Fraction(factorial(s), factorial(S + m))

    if is_exact(x):
        xq = as_fraction(x)
        return RationalMatrix.from_rows(
            [
                [scalar(i + j) * xq ** (i + j) for j in range(k + 1)]
                for i in range(k + 1)
            ]
        )
    xf = float(x)
    return np.array(
        [
            [float(scalar(i + j)) * xf ** (i + j) for j in range(k + 1)]
            for i in range(k + 1)
        ]
    )


@dataclass(frozen=True)
class FormCheck:
    """One certified Hankel form: which form, at which size index."""

    form: str
    k: int
    report: PsdReport


@dataclass(frozen=True)
class PositivityCertificate:
    """Certification that the basis values at x pass every Hankel form
    required for the chosen region, plus the sampled derivative hypothesis."""

    region: str
    x: float
    hypothesis: PhiPositivityReport
    checks: tuple
    mode: str
    passed: bool


def _hypothesis_grid(x: float, points: int = 32) -> tuple:
    # the derivative hypothesis quantifies over all positive x; sample
    # log-spaced points up to the evaluation point
    if x <= 0.0:
        return (0.0,)
    if x <= 1e-3:
        return (x,)
    return tuple(np.logspace(-3, np.log10(x), points))


def certify_positivity(
    freq: Frequencies,
    x,
    region: str = HALFLINE_REGION,
    exact: bool = False,
    eps: float = _FLOAT_PSD_EPS,
    s_max: int | None = None,
) -> PositivityCertificate:
    """Certify the basis-value sequence at x against the region's Hankel forms.

    Half-line: Q1 for 2k <= N and Q2 for 2k+1 <= N must be PSD.
    Unit interval (x in [0,1]): Q2 and Q3 for 2k+1 <= N must be PSD.

    ``exact=True`` evaluates the basis by its truncated exact series
    (rational frequencies and x required) and certifies with exact
    arithmetic; the neglected series tail only adds a PSD contribution, so
    an exact PSD verdict on the truncation is a genuine certificate.
    """
    freq.require_positive()
    freq.require_even_count()
    N = freq.top
    xf = float(x)
    if region == HALFLINE_REGION:
        if xf < 0:
            raise DomainError("x must be >= 0 on the half-line")
    elif region == UNIT_INTERVAL_REGION:
        if not 0 <= xf <= 1:
            raise DomainError("x outside [0,1]")
    else:
        raise DomainError(f"unknown region {region!r}")

    hypothesis = check_phi_positivity(freq, N, _hypothesis_grid(xf), s_max=s_max)

    if exact:
        values = eval_basis_exact(freq, x, s_max=s_max)
        mode = "exact"
    else:
        values = eval_basis(freq, x).values
        mode = "floating"

    checks = []
    if region == HALFLINE_REGION:
        for k in range(N // 2 + 1):  # 2k <= N
            spec = HankelSpec(values, k, shift=0)
            checks.append(FormCheck("Q1", k, psd_check(build_hankel(spec), mode, eps)))
        for k in range((N - 1) // 2 + 1):  # 2k+1 <= N
            spec = HankelSpec(values, k, shift=1)
            checks.append(FormCheck("Q2", k, psd_check(build_hankel(spec), mode, eps)))
    else:
        for k in range((N - 1) // 2 + 1):
            spec = HankelSpec(values, k, shift=1)
            checks.append(FormCheck("Q2", k, psd_check(build_hankel(spec), mode, eps)))
        for k in range((N - 1) // 2 + 1):
            spec = HankelSpec(values, k, differenced=True)
            checks.append(FormCheck("Q3", k, psd_check(build_hankel(spec), mode, eps)))

    passed = hypothesis.passed and all(fc.report.is_psd for fc in checks)
    return PositivityCertificate(
        region=region,
        x=xf,
        hypothesis=hypothesis,
        checks=tuple(checks),
        mode=mode,
        passed=passed,
    )
