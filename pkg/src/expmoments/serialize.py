"""JSON wire formats and a deterministic encoder.

Floats render with 17 significant digits, exact rationals as "p/q" strings
(denominator omitted when 1), so identical inputs always produce
byte-identical payloads.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction

from .expcore import ExpBasisValues, Frequencies, PhiSeries
from .hankel import PositivityCertificate
from .measures import (
    AtomicMeasure,
    Domain,
    HALFLINE,
    Mixture,
    MomentSequence,
    TruncatedExponential,
    Uniform,
)
from .numerics import format_rational, is_exact
from .recover import SolvabilityReport, TransferReport


def _format_float(x: float) -> str:
    if not math.isfinite(x):
        raise ValueError("payloads must contain finite numbers only")
    s = format(x, ".17g")
    if not any(ch in s for ch in ".eE"):
        s += ".0"
    return s


def _write(obj, out: list):
    if obj is None:
        out.append("null")
    elif obj is True:
        out.append("true")
    elif obj is False:
        out.append("false")
    elif isinstance(obj, Fraction):
        out.append(json.dumps(format_rational(obj)))
    elif isinstance(obj, int):
        out.append(str(obj))
    elif isinstance(obj, float):
        out.append(_format_float(obj))
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, dict):
        out.append("{")
        for i, (key, value) in enumerate(obj.items()):
            if i:
                out.append(", ")
            out.append(json.dumps(str(key)))
            out.append(": ")
            _write(value, out)
        out.append("}")
    elif isinstance(obj, (list, tuple)):
        out.append("[")
        for i, value in enumerate(obj):
            if i:
                out.append(", ")
            _write(value, out)
        out.append("]")
    else:
        raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps(payload) -> str:
    out: list = []
    _write(payload, out)
    return "".join(out)


def encode_number(v):
    """Fractions to "p/q" strings; ints and floats pass through as numbers."""
    if isinstance(v, Fraction):
        return format_rational(v)
    if is_exact(v):
        return int(v)
    return float(v)


def parse_number(v, exact: bool = False):
    """JSON value to number: strings are exact rationals, ints stay exact,
    floats stay floats (``exact=True`` converts them via Fraction(str))."""
    if isinstance(v, str):
        return Fraction(v)
    if isinstance(v, bool):
        raise ValueError("booleans are not numbers")
    if isinstance(v, int):
        return v
    if isinstance(v, float):
        return Fraction(str(v)) if exact else v
    raise ValueError(f"not a number: {v!r}")


# -- domain ------------------------------------------------------------

def domain_to_json(domain: Domain) -> dict:
    if domain.kind == "halfline":
        return {"kind": "halfline"}
    return {"kind": "interval", "a": encode_number(domain.a), "b": encode_number(domain.b)}


def domain_from_json(doc) -> Domain:
    if not isinstance(doc, dict) or "kind" not in doc:
        raise ValueError("domain must be an object with a 'kind' field")
    if doc["kind"] == "halfline":
        return HALFLINE
    if doc["kind"] == "interval":
        return Domain("interval", parse_number(doc.get("a", 0)), parse_number(doc["b"]))
    raise ValueError(f"unknown domain kind {doc['kind']!r}")


# -- measures ----------------------------------------------------------

def measure_to_json(mu) -> dict:
    if isinstance(mu, AtomicMeasure):
        return {
            "type": "atomic",
            "atoms": [
                {"x": encode_number(p), "w": encode_number(w)} for p, w in mu.atoms
            ],
        }
    if isinstance(mu, Uniform):
        return {"type": "uniform", "a": encode_number(mu.a), "b": encode_number(mu.b)}
    if isinstance(mu, TruncatedExponential):
        doc = {"type": "exponential", "rate": float(mu.rate)}
        if mu.truncate is not None:
            doc["truncate"] = float(mu.truncate)
        return doc
    if isinstance(mu, Mixture):
        return {
            "type": "mixture",
            "parts": [
                {"weight": encode_number(c), "measure": measure_to_json(m)}
                for c, m in mu.parts
            ],
        }
    raise TypeError(f"unknown measure type {type(mu).__name__}")


def measure_from_json(doc):
    if not isinstance(doc, dict) or "type" not in doc:
        raise ValueError("measure must be an object with a 'type' field")
    kind = doc["type"]
    if kind == "atomic":
        atoms = []
        for a in doc.get("atoms", []):
            atoms.append((parse_number(a["x"]), parse_number(a["w"])))
        return AtomicMeasure(tuple(atoms))
    if kind == "uniform":
        return Uniform(parse_number(doc["a"]), parse_number(doc["b"]))
    if kind == "exponential":
        truncate = doc.get("truncate")
        return TruncatedExponential(
            float(doc["rate"]), None if truncate is None else float(truncate)
        )
    if kind == "mixture":
        parts = []
        for p in doc.get("parts", []):
            parts.append((parse_number(p["weight"]), measure_from_json(p["measure"])))
        return Mixture(tuple(parts))
    raise ValueError(f"unknown measure type {kind!r}")


# -- moments -----------------------------------------------------------

def moments_to_json(ms: MomentSequence) -> dict:
    return {
        "domain": domain_to_json(ms.domain),
        "values": [encode_number(v) for v in ms.values],
    }


def moments_from_json(doc, domain: Domain | None = None) -> MomentSequence:
    if not isinstance(doc, dict) or "values" not in doc:
        raise ValueError("moment sequence must be an object with a 'values' field")
    if domain is None:
        if "domain" not in doc:
            raise ValueError("moment sequence needs a domain")
        domain = domain_from_json(doc["domain"])
    values = tuple(parse_number(v) for v in doc["values"])
    return MomentSequence(values, domain)


# -- frequency / series / basis ----------------------------------------

def frequencies_to_json(freq: Frequencies) -> dict:
    return {"lambda": [encode_number(v) for v in freq.values]}


def series_to_json(series: PhiSeries) -> dict:
    return {
        "lambda": [encode_number(v) for v in series.freq.values],
        "start": series.start,
        "coeffs": [encode_number(a) for a in series.coeffs],
    }


def basis_to_json(basis: ExpBasisValues) -> dict:
    return {
        "lambda": [encode_number(v) for v in basis.freq.values],
        "x": basis.x,
        "values": [encode_number(v) for v in basis.values],
    }


# -- reports -----------------------------------------------------------

def _psd_fields(report) -> dict:
    doc = {"is_psd": report.is_psd, "is_pd": report.is_pd}
    if report.mode == "exact":
        doc["minors"] = [encode_number(m) for m in report.minors]
    else:
        doc["min_eig"] = report.min_eig
        doc["tolerance"] = report.tolerance
    return doc


def certificate_to_json(cert: PositivityCertificate) -> dict:
    checks = []
    for fc in cert.checks:
        entry = {"k": fc.k, "form": fc.form}
        entry.update(_psd_fields(fc.report))
        checks.append(entry)
    return {
        "region": cert.region,
        "x": cert.x,
        "hypothesis": {
            "min_value": cert.hypothesis.min_value,
            "tolerance": cert.hypothesis.tolerance,
            "pass": cert.hypothesis.passed,
        },
        "checks": checks,
        "pass": cert.passed,
    }


def solvability_to_json(report: SolvabilityReport) -> dict:
    checks = []
    for fc in report.checks:
        entry = {"k": fc.k, "form": fc.form}
        entry.update(_psd_fields(fc.report))
        checks.append(entry)
    return {
        "domain": domain_to_json(report.domain),
        "checks": checks,
        "solvable": report.solvable,
        "rank": report.rank,
        "boundary_flags": report.boundary_flags,
    }


def atoms_to_json(nu: AtomicMeasure) -> dict:
    return {
        "atoms": [{"x": float(p), "w": float(w)} for p, w in nu.atoms]
    }


def transfer_to_json(report: TransferReport) -> dict:
    doc = {
        "c_hat": [encode_number(v) for v in report.c_hat.values],
        "domain": domain_to_json(report.c_hat.domain),
        "solvable": report.solvability.solvable,
        "nu": atoms_to_json(report.nu) if report.nu is not None else None,
        "max_residual": report.max_residual,
        "pass": report.passed,
    }
    if report.failure_stage is not None:
        doc["stage"] = report.failure_stage
        doc["diagnostics"] = list(report.diagnostics)
    return doc
