"""Exponential-moment toolkit.

Fundamental functions of exponential spaces, Hankel positivity
certificates for their derivative bases, exponential moments of measures,
and constructive recovery of atomic representing measures from truncated
moment sequences.
"""

from .errors import ConvergenceError, DomainError, UnsolvableError
from .expcore import (
    ExpBasisValues,
    Frequencies,
    PhiPositivityReport,
    PhiSeries,
    barycentric_weights,
    basis_matrix,
    check_phi_positivity,
    eval_basis,
    eval_basis_exact,
    eval_phi,
    eval_phi_deriv,
    phi_series_value,
    taylor_coeffs,
)
from .hankel import (
    FormCheck,
    HankelSpec,
    PositivityCertificate,
    PsdReport,
    build_hankel,
    certify_positivity,
    chammam_det,
    chammam_matrix,
    monomial_hankel,
    psd_check,
    quadratic_form,
)
from .measures import (
    AtomicMeasure,
    Domain,
    HALFLINE,
    Mixture,
    MomentSequence,
    TruncatedExponential,
    UNIT_INTERVAL,
    Uniform,
    exp_moments,
    power_moments,
    support_interval,
)
from .numerics import (
    RationalMatrix,
    complete_homogeneous,
    complete_homogeneous_all,
    exact_det,
    factorial,
    format_rational,
    leading_principal_minors,
    pochhammer,
    psd_pivots,
)
from .recover import (
    JacobiCoefficients,
    SolvabilityReport,
    TransferReport,
    first_violation,
    gauss_from_jacobi,
    hausdorff_solvable,
    jacobi_from_moments,
    moment_residual,
    recover_measure,
    stieltjes_solvable,
    verify_transfer,
)

__version__ = "0.1.0"
