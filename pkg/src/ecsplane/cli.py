"""Command line front end.

Exit codes: 0 when every check passes, 1 when a check fails, 2 on bad input.
Reports go to ``--out`` as JSON (``-`` for stdout); a check table goes to stderr.
"""

import argparse
import sys

import numpy as np

from . import tolerances as tl
from .audit import curvature_audit, isometry_audit
from .construct import build_dilational, build_translational, search_integer_theta, theta_from_charpoly
from .errors import BadPolynomial, CertificateFailed, ConstantTrace, EcsError, FloquetGap, SchemaError
from .quotient import classify_quotient, verify_certificate
from .serialize import (
    VERSION,
    certificate_from_parts,
    dump_json,
    load_json,
    parse_document,
    report_document,
    spec_from_json,
)
from .symplectic import CheckReport

OK, FAILED, BAD_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _table(report, title):
    print(f"== {title}", file=sys.stderr)
    for c in report.checks:
        mark = "PASS" if c.passed else "FAIL"
        line = f"  {mark}  {c.name:<24} residual {c.residual:<12.4g} tolerance {c.tolerance:.3g}"
        if c.detail:
            line += f"  ({c.detail})"
        print(line, file=sys.stderr)


def _fail_report(report, name, exc):
    report.add(name, np.inf, 0.0, passed=False, detail=str(exc))
    return report


# -- commands --------------------------------------------------------------------------------


def cmd_build_dilational(args):
    if args.dim < 5 or args.dim % 2 == 0:
        raise InputError(f"--dim must be odd and at least 5 (the construction exists in all odd dimensions n >= 5), got {args.dim}")
    if args.trace < 3:
        raise InputError(f"--trace must be an integer >= 3, got {args.trace}")
    try:
        cert = build_dilational(args.dim, args.trace)
    except CertificateFailed as exc:
        if exc.report is not None:
            _table(exc.report, "dilational certificate")
        print(f"certificate failed: {exc}", file=sys.stderr)
        return FAILED
    _table(cert.checks, f"dilational certificate, n = {args.dim}, trace = {args.trace}")
    dump_json(report_document(cert), args.out)
    return OK


def _parse_charpoly(text):
    try:
        coeffs = tuple(int(x) for x in text.split(","))
    except ValueError as exc:
        raise InputError(f"--charpoly must be comma separated integers, got {text!r}") from exc
    try:
        return theta_from_charpoly(coeffs)
    except BadPolynomial as exc:
        raise InputError(f"bad polynomial {text}: {exc}") from exc


def cmd_build_translational(args):
    if args.dim < 5:
        raise InputError(f"--dim must be at least 5, got {args.dim}")
    if args.period <= 0 or args.theta <= 0:
        raise InputError("--period and --theta must be positive")
    theta_matrix = _parse_charpoly(args.charpoly) if args.charpoly else search_integer_theta(args.dim - 2)
    if theta_matrix.m != args.dim - 2:
        raise InputError(f"--charpoly has degree {theta_matrix.m}, expected {args.dim - 2}")
    last = None
    for attempt in range(3):
        amp = args.seed_amp * 0.5**attempt
        try:
            cert = build_translational(args.dim, theta_matrix, amp, args.period, args.theta)
            break
        except (FloquetGap, ConstantTrace) as exc:
            last = exc
        except CertificateFailed as exc:
            if exc.report is not None:
                _table(exc.report, "translational certificate")
            print(f"certificate failed: {exc}", file=sys.stderr)
            return FAILED
    else:
        print(f"construction failed after retries: {last}", file=sys.stderr)
        return FAILED
    _table(cert.checks, f"translational certificate, n = {args.dim}, charpoly {list(theta_matrix.coeffs)}")
    dump_json(report_document(cert), args.out)
    return OK


def cmd_verify(args):
    doc = load_json(args.file)
    spec_json, cert_json, cls_json = parse_document(doc)
    report = CheckReport()
    try:
        spec = spec_from_json(spec_json)
    except SchemaError:
        raise
    except ValueError as exc:
        _table(_fail_report(report, "spec_valid", exc), "verify")
        return FAILED
    try:
        cert = certificate_from_parts(spec, cert_json)
    except SchemaError:
        raise
    except ValueError as exc:
        _table(_fail_report(report, "certificate_valid", exc), "verify")
        return FAILED
    report.extend(verify_certificate(cert))
    if report.passed:
        try:
            cls = classify_quotient(cert)
            if cls_json is not None:
                same = cls.to_json() == cls_json
                report.add("classification", 0.0 if same else 1.0, 0.5, passed=same, detail=str(cls.to_json()))
        except EcsError as exc:
            _fail_report(report, "classification", exc)
    rng = np.random.default_rng(args.seed)
    report.extend(isometry_audit(spec, cert.gamma, rng=rng))
    if args.samples > 0:
        curv, _ = curvature_audit(spec, args.samples, rng=rng)
        report.extend(curv)
    _table(report, f"verify {args.file}")
    if args.out:
        out = report_document(cert, report)
        dump_json(out, args.out)
    return OK if report.passed else FAILED


def cmd_curvature(args):
    doc = load_json(args.spec)
    spec_json = doc["spec"] if isinstance(doc, dict) and "version" in doc and "spec" in doc else doc
    try:
        spec = spec_from_json(spec_json)
    except ValueError as exc:
        raise InputError(f"bad spec: {exc}") from exc
    if args.samples < 1 or not args.step > 0:
        raise InputError("--samples must be >= 1 and --step positive")
    rng = np.random.default_rng(args.seed)
    report, rank = curvature_audit(spec, args.samples, h=args.step, rng=rng)
    _table(report, f"curvature audit, {args.samples} points, h = {args.step:g}")
    print(f"Olszak rank: {rank}", file=sys.stderr)
    if args.out:
        dump_json({"version": VERSION, "spec": spec.to_json(), "checks": report.to_json(), "olszak_rank": rank}, args.out)
    return OK if report.passed else FAILED


# -- parser ------------------------------------------------------------------------------------


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="seed for sample points (default 0)")
    common.add_argument("--tol-scale", type=float, default=1.0, help="multiply every tolerance by this factor")

    parser = argparse.ArgumentParser(prog="ecsplane", description="Compact quotients of standard ECS plane waves.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build-dilational", parents=[common], help="dilational construction in odd dimension")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--trace", type=int, default=3, help="q + 1/q, an integer >= 3")
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_build_dilational)

    p = sub.add_parser("build-translational", parents=[common], help="translational construction")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--charpoly", default=None, help="ascending coefficients c0,c1,...,1 of det(x - Theta)")
    p.add_argument("--seed-amp", type=float, default=0.3)
    p.add_argument("--period", type=float, default=1.0)
    p.add_argument("--theta", type=float, default=1.0)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_build_translational)

    p = sub.add_parser("verify", parents=[common], help="re-check a certificate or report")
    p.add_argument("file")
    p.add_argument("--samples", type=int, default=3, help="curvature audit points (0 to skip)")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("curvature", parents=[common], help="finite-difference curvature audit of a spec")
    p.add_argument("--spec", required=True)
    p.add_argument("--samples", type=int, default=20)
    p.add_argument("--step", type=float, default=1e-4)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_curvature)
    return parser


def _join_negative_values(argv):
    """Allow ``--charpoly -1,5,-6,1``; argparse would read the value as an option."""
    out = []
    it = iter(argv)
    for a in it:
        if a == "--charpoly":
            nxt = next(it, None)
            out.append(a if nxt is None else f"{a}={nxt}")
        else:
            out.append(a)
    return out


def main(argv=None):
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    try:
        args = parser.parse_args(_join_negative_values(argv))
    except SystemExit as exc:
        return BAD_INPUT if exc.code else OK
    try:
        with tl.scaled(args.tol_scale):
            return args.func(args)
    except (InputError, SchemaError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
