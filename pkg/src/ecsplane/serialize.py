"""JSON documents for specs, isometries and certificates (schema version "1").

Parsing is strict: unknown or missing fields raise :class:`SchemaError`.
Mathematical invalidity of well-formed data is reported separately, as
:class:`EcsError` subclasses from the constructors.
"""

import json

import numpy as np

from .errors import IntervalMismatch, SchemaError
from .isometry import Isometry, SigmaElement, sigma_kind
from .planewave import PlaneWaveSpec
from .quotient import LatticeData, QuotientCertificate
from .symplectic import SolutionVector, Subspace

VERSION = "1"

_PROFILE_PARAMS = {
    "inverse_square": ({"coeff"}, {"pole"}),
    "fourier": ({"period"}, {"a0", "cos", "sin"}),
    "log_periodic": ({"period"}, {"a0", "cos", "sin", "pole"}),
}


def _keys(d, required, optional=(), where="document"):
    if not isinstance(d, dict):
        raise SchemaError(f"{where} must be an object")
    missing = set(required) - set(d)
    extra = set(d) - set(required) - set(optional)
    if missing:
        raise SchemaError(f"{where} is missing {sorted(missing)}")
    if extra:
        raise SchemaError(f"{where} has unknown fields {sorted(extra)}")


def _matrix(x, shape, where):
    try:
        a = np.array(x, dtype=float)
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"{where} is not numeric") from exc
    if shape is not None and a.shape != shape:
        raise SchemaError(f"{where} has shape {a.shape}, expected {shape}")
    if not np.all(np.isfinite(a)):
        raise SchemaError(f"{where} has non-finite entries")
    return a


def _real(x, where):
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise SchemaError(f"{where} must be a number")
    return float(x)


# -- spec ---------------------------------------------------------------------------------


def spec_to_json(spec):
    return spec.to_json()


def check_spec_json(d):
    _keys(d, {"n", "gram", "A", "interval", "profile"}, where="spec")
    if not isinstance(d["n"], int) or d["n"] < 4:
        raise SchemaError("spec.n must be an integer >= 4")
    m = d["n"] - 2
    _matrix(d["gram"], (m, m), "spec.gram")
    _matrix(d["A"], (m, m), "spec.A")
    _keys(d["interval"], {"type", "bounds"}, where="spec.interval")
    b = d["interval"]["bounds"]
    if not isinstance(b, list) or len(b) != 2 or any(x is not None and not isinstance(x, (int, float)) for x in b):
        raise SchemaError("spec.interval.bounds must be [lo|null, hi|null]")
    prof = d["profile"]
    _keys(prof, {"kind", "params"}, where="spec.profile")
    if prof["kind"] not in _PROFILE_PARAMS:
        raise SchemaError(f"unknown profile kind {prof['kind']!r}")
    req, opt = _PROFILE_PARAMS[prof["kind"]]
    _keys(prof["params"], req, opt, where="spec.profile.params")


def spec_from_json(d, strict=True):
    """Parse a spec document; schema problems raise SchemaError, invalid data EcsError."""
    check_spec_json(d)
    spec = PlaneWaveSpec.from_json(d, strict=strict)
    declared = d["interval"]["type"]
    if declared != spec.interval.kind:
        raise IntervalMismatch(f"interval type {declared!r} does not match bounds ({spec.interval.kind})")
    return spec


# -- isometries -----------------------------------------------------------------------------


def isometry_to_json(phi):
    return phi.to_json()


def isometry_from_json(spec, d, where="gamma"):
    _keys(d, {"q", "p", "C", "r", "u_initial_data"}, where=where)
    m = spec.m
    q, p, r = _real(d["q"], f"{where}.q"), _real(d["p"], f"{where}.p"), _real(d["r"], f"{where}.r")
    C = _matrix(d["C"], (m, m), f"{where}.C")
    u = solution_from_json(d["u_initial_data"], m, f"{where}.u_initial_data")
    sig = SigmaElement(q, p, C, sigma_kind(spec, q, p))
    return Isometry(spec, sig, r, u)


def solution_from_json(d, m, where):
    _keys(d, {"base_t", "value", "velocity"}, where=where)
    return SolutionVector(
        _real(d["base_t"], f"{where}.base_t"),
        _matrix(d["value"], (m,), f"{where}.value"),
        _matrix(d["velocity"], (m,), f"{where}.velocity"),
    )


# -- certificates ------------------------------------------------------------------------------


def certificate_to_json(cert):
    return {
        "gamma": isometry_to_json(cert.gamma),
        "L": cert.L.to_json(),
        "lattice": cert.lattice.to_json(),
    }


def report_document(cert, checks=None, classification=None):
    checks = checks if checks is not None else cert.checks
    doc = {
        "version": VERSION,
        "spec": spec_to_json(cert.spec),
        "certificate": certificate_to_json(cert),
        "checks": [] if checks is None else checks.to_json(),
    }
    cls = classification or cert.classification
    if cls is not None:
        doc["classification"] = cls.to_json()
    return doc


def parse_document(doc):
    """Split a ReportDocument or bare certificate into (spec_json, certificate_json, classification_json)."""
    if not isinstance(doc, dict):
        raise SchemaError("top level must be an object")
    if "certificate" in doc:
        _keys(doc, {"version", "spec", "certificate"}, {"checks", "classification"}, where="document")
        cert = doc["certificate"]
    else:
        _keys(doc, {"version", "spec", "gamma", "L", "lattice"}, where="certificate document")
        cert = {k: doc[k] for k in ("gamma", "L", "lattice")}
    if doc["version"] != VERSION:
        raise SchemaError(f"unsupported version {doc['version']!r}")
    check_spec_json(doc["spec"])
    _keys(cert, {"gamma", "L", "lattice"}, where="certificate")
    m = doc["spec"]["n"] - 2
    _keys(cert["gamma"], {"q", "p", "C", "r", "u_initial_data"}, where="gamma")
    _keys(cert["L"], {"base_t", "basis"}, where="L")
    _matrix(cert["L"]["basis"], (2 * m, m), "L.basis")
    _keys(cert["lattice"], {"basis", "theta"}, where="lattice")
    _matrix(cert["lattice"]["basis"], (m + 1, m + 1), "lattice.basis")
    _real(cert["lattice"]["theta"], "lattice.theta")
    if "checks" in doc:
        if not isinstance(doc["checks"], list):
            raise SchemaError("checks must be a list")
        for c in doc["checks"]:
            _keys(c, {"name", "passed", "residual", "tolerance"}, {"detail"}, where="check")
    cls = doc.get("classification")
    if cls is not None:
        _keys(cls, {"type", "complete", "fiber"}, {"period", "ratio"}, where="classification")
    return doc["spec"], cert, cls


def certificate_from_parts(spec, cert_json):
    """Build the certificate; raises EcsError subclasses for invalid (but well-formed) data."""
    gamma = isometry_from_json(spec, cert_json["gamma"])
    L = Subspace(_real(cert_json["L"]["base_t"], "L.base_t"), _matrix(cert_json["L"]["basis"], None, "L.basis"))
    lat = LatticeData(
        _matrix(cert_json["lattice"]["basis"], None, "lattice.basis"), _real(cert_json["lattice"]["theta"], "lattice.theta")
    )
    if lat.theta < 0:
        raise SchemaError("lattice.theta must be >= 0")
    return QuotientCertificate(spec, gamma, L, lat)


def load_json(path):
    """Read a JSON file; unreadable, empty or malformed input raises SchemaError."""
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc}") from exc
    if not text.strip():
        raise SchemaError(f"{path} is empty")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path} is not valid JSON: {exc}") from exc


def dump_json(doc, path):
    text = json.dumps(doc, indent=2, sort_keys=False)
    if path == "-":
        print(text)
    else:
        with open(path, "w") as fh:
            fh.write(text + "\n")

