"""Truncated moment problem: solvability certificates and atomic recovery.

Solvability on the half-line requires the plain and index-shifted moment
Hankels to be PSD; on [0, 1] the shifted and differenced ones (general
[a, b] is pulled back to [0, 1] affinely).  Recovery factors the moment
Hankel (Cholesky with pivot-based rank detection), reads off the three-term
recurrence of the orthonormal polynomials, and takes the Gauss rule of the
resulting Jacobi matrix; the rule's nodes and weights form an atomic
representing measure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, UnsolvableError
from .expcore import Frequencies
from .hankel import FormCheck, HankelSpec, PsdReport, build_hankel, psd_check
from .measures import (
    AtomicMeasure,
    Domain,
    HALFLINE,
    MomentSequence,
    exp_moments,
)
from .numerics import as_fraction, is_exact, psd_pivots

_PIVOT_RTOL = 1e-12  # rank cut: pivot below this times the largest pivot
_PIVOT_NEG = 1e-9  # pivot below -this times the largest pivot: indefinite
_NODE_TOL = 1e-9  # nodes within this of a domain endpoint are clipped
_RESIDUAL_TOL = 1e-8


@dataclass(frozen=True)
class JacobiCoefficients:
    """Three-term recurrence data of the monic orthogonal polynomials:
    diagonal ``alphas`` (length rank), squared off-diagonals ``betas``
    (length rank-1), and the total mass c_0."""

    alphas: tuple
    betas: tuple
    mass: float
    rank: int

    def __post_init__(self):
        if len(self.alphas) != self.rank:
            raise ValueError("alphas length must equal rank")
        if len(self.betas) != max(self.rank - 1, 0):
            raise ValueError("betas length must equal rank - 1")
        if any(b <= 0 for b in self.betas):
            raise ValueError("betas must be strictly positive")


@dataclass(frozen=True)
class SolvabilityReport:
    """Per-form PSD reports plus the overall verdict.

    ``rank`` is the numerical rank of the plain moment Hankel when the
    sequence is solvable (None otherwise); ``boundary_flags`` marks forms
    that are semidefinite but singular, the signature of atoms sitting on
    the domain boundary or of fewer atoms than the maximal rank.
    """

    domain: Domain
    checks: tuple
    solvable: bool
    rank: int | None
    boundary_flags: dict


def _form_checks(values, n: int, forms, mode: str) -> list:
    checks = []
    for name, shift, differenced in forms:
        for k in range(n):
            spec = HankelSpec(values, k, shift=shift, differenced=differenced)
            checks.append(FormCheck(name, k, psd_check(build_hankel(spec), mode)))
    return checks


def _plain_rank(values, n: int, mode: str) -> int:
    spec = HankelSpec(tuple(values), n - 1, shift=0)
    matrix = build_hankel(spec)
    if mode == "exact":
        _, _, rank = psd_pivots(matrix)
        return rank
    m = np.asarray(matrix, dtype=float)
    eigs = np.linalg.eigvalsh(m)
    tol = 1e-10 * max(1.0, float(np.trace(m)))
    return int(np.sum(eigs > tol))


def _mode_for(c: MomentSequence, mode: str) -> str:
    if mode == "auto":
        return "exact" if c.exact else "floating"
    return mode


def first_violation(report: SolvabilityReport):
    """(form, k) of the first non-PSD check, or None."""
    for fc in report.checks:
        if not fc.report.is_psd:
            return fc.form, fc.k
    return None


def stieltjes_solvable(c: MomentSequence, mode: str = "auto") -> SolvabilityReport:
    """Half-line solvability: plain and shifted moment Hankels PSD."""
    if c.domain.kind != "halfline":
        raise DomainError("stieltjes criterion requires a half-line sequence")
    mode = _mode_for(c, mode)
    n = len(c.values) // 2
    checks = _form_checks(c.values, n, [("plain", 0, False), ("shifted", 1, False)], mode)
    solvable = all(fc.report.is_psd for fc in checks)
    flags = {}
    for name in ("plain", "shifted"):
        top = [fc for fc in checks if fc.form == name][-1]
        flags[f"{name}_singular"] = top.report.is_psd and not top.report.is_pd
    rank = _plain_rank(c.values, n, mode) if solvable else None
    return SolvabilityReport(c.domain, tuple(checks), solvable, rank, flags)


def _unit_moments(c: MomentSequence):
    """Pull interval [a, b] moments back to [0, 1] via t = a + (b-a) u."""
    a, b = c.domain.a, c.domain.b
    if float(a) == 0.0 and float(b) == 1.0:
        return c.values
    exact = c.exact and is_exact(a) and is_exact(b)
    if exact:
        aa, width = as_fraction(a), as_fraction(b) - as_fraction(a)
    else:
        aa, width = float(a), float(b) - float(a)
    out = []
    for j in range(len(c.values)):
        acc = 0 * aa
        for m in range(j + 1):
            term = math.comb(j, m) * (-aa) ** (j - m)
            cm = as_fraction(c.values[m]) if exact else float(c.values[m])
            acc = acc + term * cm
        out.append(acc / width**j)
    return tuple(out)


def hausdorff_solvable(c: MomentSequence, mode: str = "auto") -> SolvabilityReport:
    """Interval solvability: shifted and differenced Hankels PSD on [0, 1]
    after affine pull-back."""
    if c.domain.kind != "interval":
        raise DomainError("hausdorff criterion requires an interval sequence")
    mode = _mode_for(c, mode)
    values = _unit_moments(c)
    n = len(values) // 2
    checks = _form_checks(
        values, n, [("shifted", 1, False), ("differenced", 0, True)], mode
    )
    solvable = all(fc.report.is_psd for fc in checks)
    flags = {}
    for name in ("shifted", "differenced"):
        top = [fc for fc in checks if fc.form == name][-1]
        flags[f"{name}_singular"] = top.report.is_psd and not top.report.is_pd
    rank = _plain_rank(values, n, mode) if solvable else None
    return SolvabilityReport(c.domain, tuple(checks), solvable, rank, flags)


def solvability_report(c: MomentSequence, mode: str = "auto") -> SolvabilityReport:
    if c.domain.kind == "halfline":
        return stieltjes_solvable(c, mode)
    return hausdorff_solvable(c, mode)


def jacobi_from_moments(c: MomentSequence, pivot_rtol: float = _PIVOT_RTOL) -> JacobiCoefficients:
    """Recurrence coefficients of the orthogonal polynomials of c_0..c_{2n-1}.

    Cholesky-factors the n x (n+1) extended moment Hankel row by row; the
    pivot falling below ``pivot_rtol`` times the largest one cuts the rank,
    a clearly negative pivot rejects the sequence as indefinite.  For
    rank-deficient input this returns the recurrence of the unique solution
    with ``rank`` atoms.
    """
    values = [float(v) for v in c.values]
    n = len(values) // 2
    mass = values[0]
    if mass == 0.0:
        return JacobiCoefficients((), (), 0.0, 0)
    H = np.array([[values[i + j] for j in range(n + 1)] for i in range(n)])
    R = np.zeros((n, n + 1))
    scale = abs(mass)
    rank = n
    for i in range(n):
        s = H[i, i] - float(R[:i, i] @ R[:i, i])
        if s < -_PIVOT_NEG * scale:
            raise UnsolvableError(
                "jacobi", f"moment Hankel indefinite: pivot {i} = {s:.6e}"
            )
        if s <= pivot_rtol * scale:
            rank = i
            break
        scale = max(scale, s)
        R[i, i] = math.sqrt(s)
        for j in range(i + 1, n + 1):
            R[i, j] = (H[i, j] - float(R[:i, i] @ R[:i, j])) / R[i, i]
    alphas = []
    for j in range(rank):
        a = R[j, j + 1] / R[j, j]
        if j > 0:
            a -= R[j - 1, j] / R[j - 1, j - 1]
        alphas.append(float(a))
    betas = tuple(float((R[j, j] / R[j - 1, j - 1]) ** 2) for j in range(1, rank))
    return JacobiCoefficients(tuple(alphas), betas, mass, rank)


def gauss_from_jacobi(jc: JacobiCoefficients) -> AtomicMeasure:
    """Gauss rule of a Jacobi matrix: nodes are its eigenvalues, weights the
    mass times the squared first eigenvector components."""
    r = jc.rank
    if r == 0:
        return AtomicMeasure(())
    T = np.diag(np.asarray(jc.alphas, dtype=float))
    if r > 1:
        off = np.sqrt(np.asarray(jc.betas, dtype=float))
        T += np.diag(off, 1) + np.diag(off, -1)
    evals, vecs = np.linalg.eigh(T)
    weights = jc.mass * vecs[0, :] ** 2
    return AtomicMeasure(tuple((float(evals[i]), float(weights[i])) for i in range(r)))


def _clip_to_domain(nu: AtomicMeasure, domain: Domain, tol: float = _NODE_TOL) -> AtomicMeasure:
    lo, hi = domain.bounds
    scale = max([1.0] + [abs(float(p)) for p, _ in nu.atoms])
    cut = tol * scale
    atoms = []
    for pos, w in nu.atoms:
        p = float(pos)
        if p < lo - cut or (math.isfinite(hi) and p > hi + cut):
            raise UnsolvableError(
                "domain", f"recovered node {p:.12g} lies outside the domain"
            )
        p = max(p, lo)
        if math.isfinite(hi):
            p = min(p, hi)
        atoms.append((p, w))
    return AtomicMeasure(tuple(atoms))


def moment_residual(nu: AtomicMeasure, c: MomentSequence) -> float:
    """max_j |sum_i w_i x_i^j - c_j| / max(1, |c_j|)."""
    worst = 0.0
    for j, cj in enumerate(c.values):
        m = math.fsum(float(w) * float(p) ** j for p, w in nu.atoms)
        worst = max(worst, abs(m - float(cj)) / max(1.0, abs(float(cj))))
    return worst


def recover_measure(c: MomentSequence, mode: str = "auto") -> AtomicMeasure:
    """Atomic representing measure of a solvable moment sequence.

    Raises UnsolvableError tagged with the failing stage ("solvability",
    "jacobi", "domain" or "residual") otherwise.
    """
    report = solvability_report(c, mode)
    if not report.solvable:
        form, k = first_violation(report)
        raise UnsolvableError(
            "solvability", f"{form} Hankel form indefinite at k={k}"
        )
    jc = jacobi_from_moments(c)
    nu = gauss_from_jacobi(jc)
    nu = _clip_to_domain(nu, c.domain)
    resid = moment_residual(nu, c)
    if resid > _RESIDUAL_TOL:
        raise UnsolvableError(
            "residual", f"moment reproduction residual {resid:.3e} exceeds {_RESIDUAL_TOL:.0e}"
        )
    return nu


@dataclass(frozen=True)
class TransferReport:
    """End-to-end record: basis moments, solvability, recovered measure and
    the worst power-moment residual."""

    c_hat: MomentSequence
    solvability: SolvabilityReport
    nu: AtomicMeasure | None
    max_residual: float | None
    passed: bool
    failure_stage: str | None
    diagnostics: tuple


def verify_transfer(freq: Frequencies, mu, domain: Domain = HALFLINE) -> TransferReport:
    """Full pipeline: basis moments of mu, solvability on the domain,
    atomic recovery, and the power-moment reproduction residual.

    Passes when the sequence is solvable and the residual is at most 1e-8.
    """
    freq.require_positive()
    freq.require_even_count()
    c_hat = exp_moments(freq, mu, domain=domain)
    report = solvability_report(c_hat)
    if not report.solvable:
        form, k = first_violation(report)
        return TransferReport(
            c_hat=c_hat,
            solvability=report,
            nu=None,
            max_residual=None,
            passed=False,
            failure_stage="solvability",
            diagnostics=(f"{form} Hankel form indefinite at k={k}",),
        )
    try:
        nu = gauss_from_jacobi(jacobi_from_moments(c_hat))
        nu = _clip_to_domain(nu, domain)
    except UnsolvableError as exc:
        return TransferReport(
            c_hat=c_hat,
            solvability=report,
            nu=None,
            max_residual=None,
            passed=False,
            failure_stage=exc.stage,
            diagnostics=(str(exc),),
        )
    resid = moment_residual(nu, c_hat)
    passed = resid <= _RESIDUAL_TOL
    return TransferReport(
        c_hat=c_hat,
        solvability=report,
        nu=nu,
        max_residual=resid,
        passed=passed,
        failure_stage=None if passed else "residual",
        diagnostics=() if passed else (f"residual {resid:.3e} exceeds {_RESIDUAL_TOL:.0e}",),
    )
