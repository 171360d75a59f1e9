"""Command-line front end.

JSON payloads go to stdout, human-readable diagnostics to stderr.  Exit
codes: 0 success, 1 mathematical failure, 2 usage or file-format error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import serialize
from .errors import ConvergenceError, DomainError, UnsolvableError
from .expcore import (
    Frequencies,
    eval_basis,
    eval_phi,
    eval_phi_deriv,
    taylor_coeffs,
)
from .hankel import (
    HankelSpec,
    build_hankel,
    certify_positivity,
    chammam_det,
    chammam_matrix,
    psd_check,
)
from .measures import Domain, HALFLINE, exp_moments
from .numerics import exact_det, format_rational
from .recover import recover_measure, verify_transfer


class _UsageError(Exception):
    """Malformed flags or files; maps to exit code 2."""


def _parse_value(token: str, exact: bool):
    try:
        if exact:
            return Fraction(token)
        return float(token)
    except (ValueError, ZeroDivisionError) as e:
        raise _UsageError(f"cannot parse number {token!r}: {e}") from None


def _parse_csv(text: str, exact: bool) -> tuple:
    items = [t.strip() for t in text.split(",") if t.strip()]
    if not items:
        raise _UsageError("empty value list")
    return tuple(_parse_value(t, exact) for t in items)


def _parse_frequencies(args) -> Frequencies:
    return Frequencies(_parse_csv(args.lam, args.exact))


def _parse_domain(args) -> Domain:
    name = getattr(args, "domain", "halfline")
    if name == "halfline":
        return HALFLINE
    if name == "interval":
        bounds = _parse_csv(getattr(args, "bounds", "0,1"), args.exact)
        if len(bounds) != 2:
            raise _UsageError("--bounds expects two comma-separated values")
        return Domain("interval", bounds[0], bounds[1])
    raise _UsageError(f"unknown domain {name!r}")


def _load_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as e:
        raise _UsageError(f"cannot read {path}: {e}") from None
    except json.JSONDecodeError as e:
        raise _UsageError(f"{path} is not valid JSON: {e}") from None


def _load_measure(path: str):
    try:
        return serialize.measure_from_json(_load_json(path))
    except (ValueError, KeyError, TypeError) as e:
        if isinstance(e, _UsageError):
            raise
        raise _UsageError(f"bad measure file {path}: {e}") from None


def _load_moments(path: str, domain):
    try:
        return serialize.moments_from_json(_load_json(path), domain)
    except DomainError:
        raise
    except (ValueError, KeyError, TypeError) as e:
        if isinstance(e, _UsageError):
            raise
        raise _UsageError(f"bad moments file {path}: {e}") from None


# -- subcommand handlers -------------------------------------------------

def _cmd_phi(args):
    freq = _parse_frequencies(args)
    x = _parse_value(args.x, args.exact)
    order = args.deriv if args.deriv is not None else 0
    value = eval_phi_deriv(freq, order, x) if order else eval_phi(freq, x)
    payload = {"value": value}
    if args.series:
        payload["series"] = serialize.series_to_json(taylor_coeffs(freq))
    return payload, 0


def _cmd_basis(args):
    freq = _parse_frequencies(args)
    x = _parse_value(args.x, args.exact)
    return serialize.basis_to_json(eval_basis(freq, x)), 0


def _cmd_moments(args):
    freq = _parse_frequencies(args)
    mu = _load_measure(args.measure)
    domain = _parse_domain(args)
    ms = exp_moments(freq, mu, domain=domain, exact=args.exact)
    return serialize.moments_to_json(ms), 0


def _cmd_check(args):
    freq = _parse_frequencies(args)
    x = _parse_value(args.x, args.exact)
    region = args.region.replace("-", "_")
    cert = certify_positivity(
        freq, x, region=region, exact=args.exact, eps=args.tolerance
    )
    return serialize.certificate_to_json(cert), 0 if cert.passed else 1


def _cmd_chammam(args):
    alpha = Fraction(args.alpha)
    beta = Fraction(args.beta)
    value = chammam_det(alpha, beta, args.m)
    payload = {"value": format_rational(value)}
    if args.verify:
        det = exact_det(chammam_matrix(alpha, beta, args.m))
        payload["det"] = format_rational(det)
        payload["equal"] = det == value
    return payload, 0


def _cmd_hankel(args):
    seq = _parse_csv(args.sequence, args.exact or "/" in args.sequence)
    spec = HankelSpec(seq, args.k, shift=args.shift, differenced=args.differenced)
    matrix = build_hankel(spec)
    if hasattr(matrix, "rows"):
        entries = [[serialize.encode_number(v) for v in row] for row in matrix.rows()]
        order = matrix.order
    else:
        entries = [[float(v) for v in row] for row in matrix]
        order = matrix.shape[0]
    payload = {"order": order, "entries": entries}
    code = 0
    if args.psd:
        report = psd_check(matrix, eps=args.tolerance)
        payload["psd"] = serialize._psd_fields(report)
        code = 0 if report.is_psd else 1
    return payload, code


def _cmd_recover(args):
    domain = _parse_domain(args) if args.domain is not None else None
    c = _load_moments(args.moments, domain)
    nu = recover_measure(c)
    return serialize.atoms_to_json(nu), 0


def _cmd_verify(args):
    freq = _parse_frequencies(args)
    mu = _load_measure(args.measure)
    domain = _parse_domain(args)
    report = verify_transfer(freq, mu, domain=domain)
    return serialize.transfer_to_json(report), 0 if report.passed else 1


# -- parser ---------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--exact", action="store_true", help="parse inputs as exact rationals and use exact arithmetic paths")
    common.add_argument("--tolerance", type=float, default=1e-10, help="relative eigenvalue tolerance for floating PSD checks")
    common.add_argument("--output", default=None, help="write the JSON payload to this path instead of stdout")

    parser = argparse.ArgumentParser(prog="expmoments", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("phi", parents=[common], help="evaluate the fundamental function or a derivative")
    p.add_argument("--lambda", dest="lam", required=True, help="comma-separated frequencies")
    p.add_argument("--x", required=True)
    p.add_argument("--deriv", type=int, default=None, help="derivative order (default 0)")
    p.add_argument("--series", action="store_true", help="include the Taylor coefficients")
    p.set_defaults(handler=_cmd_phi)

    p = sub.add_parser("basis", parents=[common], help="evaluate the derivative basis at a point")
    p.add_argument("--lambda", dest="lam", required=True)
    p.add_argument("--x", required=True)
    p.set_defaults(handler=_cmd_basis)

    p = sub.add_parser("moments", parents=[common], help="basis moments of a measure")
    p.add_argument("--lambda", dest="lam", required=True)
    p.add_argument("--measure", required=True, help="measure JSON file")
    p.add_argument("--domain", choices=["halfline", "interval"], default="halfline")
    p.add_argument("--bounds", default="0,1", help="interval endpoints a,b")
    p.set_defaults(handler=_cmd_moments)

    p = sub.add_parser("check", parents=[common], help="Hankel positivity certificate for the basis values")
    p.add_argument("--lambda", dest="lam", required=True)
    p.add_argument("--x", required=True)
    p.add_argument("--region", choices=["halfline", "unit-interval", "unit_interval"], default="halfline")
    p.set_defaults(handler=_cmd_check)

    p = sub.add_parser("chammam", parents=[common], help="closed-form Pochhammer-ratio Hankel determinant")
    p.add_argument("--alpha", required=True)
    p.add_argument("--beta", required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--verify", action="store_true", help="also compute the exact determinant and compare")
    p.set_defaults(handler=_cmd_chammam)

    p = sub.add_parser("hankel", parents=[common], help="build a Hankel matrix from a sequence")
    p.add_argument("--sequence", required=True, help="comma-separated values")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--shift", type=int, default=0, choices=[0, 1])
    p.add_argument("--differenced", action="store_true")
    p.add_argument("--psd", action="store_true", help="run a PSD check on the matrix")
    p.set_defaults(handler=_cmd_hankel)

    p = sub.add_parser("recover", parents=[common], help="recover an atomic measure from moments")
    p.add_argument("--moments", required=True, help="moment-sequence JSON file")
    p.add_argument("--domain", choices=["halfline", "interval"], default=None)
    p.add_argument("--bounds", default="0,1")
    p.set_defaults(handler=_cmd_recover)

    p = sub.add_parser("verify", parents=[common], help="full moment-transfer pipeline")
    p.add_argument("--lambda", dest="lam", required=True)
    p.add_argument("--measure", required=True)
    p.add_argument("--domain", choices=["halfline", "interval"], default="halfline")
    p.add_argument("--bounds", default="0,1")
    p.set_defaults(handler=_cmd_verify)

    return parser


def _emit(payload, args) -> None:
    text = serialize.dumps(payload)
    if getattr(args, "output", None):
        with open(args.output, "w") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        payload, code = args.handler(args)
    except _UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        _emit({"status": "failure", "diagnostics": [str(e)]}, args)
        return 2
    except UnsolvableError as e:
        print(f"error: {e}", file=sys.stderr)
        _emit(
            {"status": "failure", "stage": e.stage, "diagnostics": [e.reason]},
            args,
        )
        return 1
    except (DomainError, ConvergenceError, OverflowError, ZeroDivisionError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        _emit({"status": "failure", "diagnostics": [str(e)]}, args)
        return 1
    _emit(payload, args)
    return code


if __name__ == "__main__":
    sys.exit(main())
