"""The groups G(sigma), lattices in R x L, and certification of compact quotients.

A certificate bundles a generator gamma = (sigma, b, w), a first-order
subspace L, a lattice Sigma in R x L and a number theta >= 0. The group it
describes is generated by gamma and by Sigma acting through H; the checks in
:func:`verify_certificate` are the hypotheses under which that group acts
freely and properly discontinuously with compact quotient.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np
import sympy

from . import tolerances as tl
from .errors import EcsError, SigmaMismatch, UnclassifiableSigma
from .isometry import Isometry, heisenberg, validate_sigma
from .planewave import Point
from .symplectic import (
    CheckReport,
    SolutionVector,
    omega,
    omega_matrix,
    sigma_apply,
    sigma_matrix_on_E,
    subspace_checks,
)

# -- G(sigma) --------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class GSigmaElement:
    k: int
    r: float
    u: SolutionVector


def g_sigma_compose(spec, sigma, a, b):
    """(k, r, u)(k^, r^, u^) = (k + k^, r + q^-k r^ - Omega(u, sigma^k u^), u + sigma^k u^)."""
    if a.u.m != sigma.m or b.u.m != sigma.m:
        raise SigmaMismatch("element dimension does not match sigma")
    sk = sigma.power(a.k)
    su = sigma_apply(sk, b.u)
    r = a.r + b.r / sk.q - omega(spec, a.u, su)
    return GSigmaElement(a.k + b.k, float(r), a.u.add(spec, su))


def g_sigma_to_isometry(spec, sigma, a):
    return Isometry(spec, sigma.power(a.k), a.r, a.u)


def g_sigma_act(spec, sigma, a, p):
    """(k, r, u) . (t, s, v), written out without going through Isometry."""
    sk = sigma.power(a.k)
    t1 = sk.act_t(p.t)
    u, du = a.u.evaluate(spec, t1)
    Cv = sk.C @ p.v
    s1 = -du @ spec.gram @ (2 * Cv + u) + p.s / sk.q + a.r
    return Point(t1, float(s1), Cv + u)


# -- leaf chart ---------------------------------------------------------------------------


def leaf_chart(spec, t, r, u):
    """R x E -> leaf {t} x R x V, (r, u) -> (t, r - <u'(t), u(t)>, u(t))."""
    val, vel = u.evaluate(spec, t)
    return Point(float(t), float(r - vel @ spec.gram @ val), val)


def heisenberg_product(spec, a, b):
    """(r, u)(r^, u^) = (r + r^ - Omega(u, u^), u + u^) on pairs (r, SolutionVector)."""
    (r, u), (rh, uh) = a, b
    return r + rh - omega(spec, u, uh), u.add(spec, uh)


# -- lattices ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class LatticeData:
    """Columns of ``basis`` are lattice vectors (r, c) in R x L, c in L-basis coordinates."""

    basis: np.ndarray
    theta: float = 0.0

    @property
    def rank(self):
        return self.basis.shape[1]

    def to_json(self):
        return {"basis": np.asarray(self.basis).tolist(), "theta": self.theta}

    @classmethod
    def from_json(cls, d):
        return cls(np.array(d["basis"], dtype=float), float(d["theta"]))


def c_gamma_matrix(spec, gamma, L):
    """Matrix of C_gamma(r, u) = (r/q - 2 Omega(w, sigma u), sigma u) on R x L in (r, L-basis) coordinates."""
    sig, w = gamma.sigma, gamma.u
    M = sigma_matrix_on_E(spec, sig, L.base_t)
    image = M @ L.basis
    S, *_ = np.linalg.lstsq(L.basis, image, rcond=None)
    J = omega_matrix(spec)
    wd = w.at(spec, L.base_t).data
    m = L.dim
    K = np.zeros((m + 1, m + 1))
    K[0, 0] = 1.0 / sig.q
    K[0, 1:] = -2.0 * (wd @ J @ image)
    K[1:, 1:] = S
    return K


def integer_det(M):
    return int(sympy.Matrix(np.asarray(M, dtype=object).tolist()).det())


def _line_generator(basis, K_int, q):
    """Primitive integer z with basis @ z in R x {0}, or None.

    The intersection with R x {0} is a sublattice of rank at most one that the
    integral matrix K_int maps onto itself with eigenvalue 1/q. A unimodular
    integer matrix has no rational eigenvector for an eigenvalue other than
    +-1, so for |q| != 1 the answer is None without any numerics.
    """
    if abs(abs(q) - 1.0) > tl.tol(tl.EXACT):
        return None
    ev = 1 if q > 0 else -1
    n = K_int.shape[0]
    ker = (sympy.Matrix(K_int.tolist()) - ev * sympy.eye(n)).nullspace()
    candidates = []
    for v in ker:
        den = sympy.ilcm(*[sympy.fraction(x)[1] for x in v])
        z = [int(x * den) for x in v]
        g = int(np.gcd.reduce(np.abs(z)))
        candidates.append(np.array(z) // max(g, 1))
    # the fixed space of K_int may be larger than the line; pick its rational
    # points that lie on R x {0}
    if not candidates:
        return None
    Z = np.array(candidates).T
    L_part = basis[1:] @ Z
    if Z.shape[1] == 1:
        z = Z[:, 0]
        scale = np.abs(basis @ z).max()
        return z if np.abs(L_part[:, 0]).max() <= 1e-6 * max(scale, 1.0) else None
    # combine kernel vectors: solve L_part @ x = 0 and rationalize the solution
    _, s, vt = np.linalg.svd(L_part)
    if s.size and s[-1] > 1e-6 * s[0] and vt.shape[0] == s.size:
        return None
    x = vt[-1] / np.abs(vt[-1]).max()
    xr = [Fraction(float(c)).limit_denominator(10**6) for c in x]
    den = int(np.lcm.reduce([c.denominator for c in xr]))
    xi = np.array([int(c * den) for c in xr])
    z = Z @ xi
    g = int(np.gcd.reduce(np.abs(z)))
    z = z // max(g, 1)
    if np.abs(basis[1:] @ z).max() > 1e-6 * max(np.abs(basis @ z).max(), 1.0):
        return None
    return z


# -- certificates ------------------------------------------------------------------------------


@dataclass(eq=False)
class Classification:
    type: str
    complete: bool
    fiber: str
    base_parameter: float

    def to_json(self):
        key = "period" if self.type == "translational" else "ratio"
        return {"type": self.type, "complete": self.complete, "fiber": self.fiber, key: self.base_parameter}


@dataclass(eq=False)
class QuotientCertificate:
    spec: object
    gamma: Isometry
    L: object  # symplectic.Subspace
    lattice: LatticeData
    checks: Optional[CheckReport] = None
    classification: Optional[Classification] = None
    extras: dict = field(default_factory=dict)


CHECK_NAMES = (
    "0_sigma_valid",
    "1_first_order",
    "1_sigma_invariant",
    "2_full_rank_lattice",
    "3_lattice_invariant",
    "4_theta",
    "5_omega_integral",
)


def verify_certificate(cert):
    """Run every check; failures are report entries, never exceptions."""
    spec, gamma, L, lat = cert.spec, cert.gamma, cert.L, cert.lattice
    rep = CheckReport()
    sig = gamma.sigma

    try:
        validate_sigma(spec, sig.q, sig.p, sig.C)
        rep.add("0_sigma_valid", 0.0, tl.tol(tl.GROUP), passed=True)
    except EcsError as exc:
        rep.add("0_sigma_valid", np.inf, tl.tol(tl.GROUP), passed=False, detail=str(exc))

    try:
        sub = subspace_checks(spec, L, sig)
        fo, inv = sub["first_order"], sub["sigma_invariant"]
        rep.add("1_first_order", fo.residual, fo.tolerance, passed=fo.passed, detail=fo.detail)
        rep.add("1_sigma_invariant", inv.residual, inv.tolerance)
        lagrangian = sub["lagrangian"]
    except EcsError as exc:
        rep.add("1_first_order", np.inf, 0.0, passed=False, detail=str(exc))
        rep.add("1_sigma_invariant", np.inf, 0.0, passed=False, detail=str(exc))
        lagrangian = None

    basis = np.asarray(lat.basis, dtype=float)
    m = L.dim
    if basis.shape != (m + 1, m + 1):
        rep.add("2_full_rank_lattice", np.inf, 0.0, passed=False, detail=f"basis shape {basis.shape}")
        for name in CHECK_NAMES[4:]:
            rep.add(name, np.inf, 0.0, passed=False, detail="no lattice")
        cert.checks = rep
        return rep
    s = np.linalg.svd(basis, compute_uv=False)
    cond = s[-1] / s[0]
    rep.add("2_full_rank_lattice", -cond, -tl.tol(1e-8), passed=cond > tl.tol(1e-8), detail=f"relative smallest singular value {cond:.3e}")

    K = None
    try:
        Kf = np.linalg.solve(basis, c_gamma_matrix(spec, gamma, L) @ basis)
        K = np.rint(Kf)
        frac = float(np.abs(Kf - K).max())
        det = integer_det(K.astype(int))
        ok = frac < tl.tol(1e-6) and abs(det) == 1
        rep.add("3_lattice_invariant", frac, tl.tol(1e-6), passed=ok, detail=f"integral matrix {K.astype(int).tolist()}, det {det}")
        K = K.astype(int)
    except (EcsError, np.linalg.LinAlgError) as exc:
        rep.add("3_lattice_invariant", np.inf, tl.tol(1e-6), passed=False, detail=str(exc))
        K = None

    # check 4 runs on the rounded integral matrix
    if K is None or not rep["3_lattice_invariant"].passed:
        rep.add("4_theta", np.inf, 0.0, passed=False, detail="needs an integral C_gamma matrix")
        theta = None
    else:
        z = _line_generator(basis, K, sig.q)
        theta = 0.0 if z is None else float(abs(basis[0] @ z))
        dev = abs(theta - lat.theta)
        rep.add("4_theta", dev, tl.tol(1e-8) * max(1.0, lat.theta), detail=f"intersection generator theta = {theta:.12g}")

    if theta is None:
        rep.add("5_omega_integral", np.inf, 0.0, passed=False, detail="theta undetermined")
    else:
        J = omega_matrix(spec)
        vecs = L.basis @ basis[1:]
        G = vecs.T @ J @ vecs
        if theta == 0.0:
            norms = np.linalg.norm(vecs, axis=0)
            res = float(np.abs(G / np.outer(norms, norms)).max())
            rep.add("5_omega_integral", res, tl.tol(1e-8), detail="theta = 0: Omega must vanish")
        else:
            ratio = G / theta
            res = float(np.abs(ratio - np.rint(ratio)).max())
            rep.add("5_omega_integral", res, tl.tol(1e-6))
    cert.checks = rep
    cert.extras["lagrangian"] = None if lagrangian is None else bool(lagrangian.passed)
    cert.extras["theta_computed"] = theta
    cert.extras["integral_matrix"] = None if K is None else K.tolist()
    return rep


def classify_quotient(cert):
    spec, sig = cert.spec, cert.gamma.sigma
    kind = spec.interval.kind
    if kind == "real" and abs(sig.q - 1.0) <= tl.tol(tl.EXACT):
        if sig.p == 0.0:
            raise UnclassifiableSigma("translational sigma with p = 0 does not produce a circle base")
        typ, param = "translational", abs(sig.p)
    elif kind == "positive" and sig.p == 0.0 and sig.q > 0 and abs(sig.q - 1.0) > tl.tol(tl.EXACT):
        typ, param = "dilational", sig.q if sig.q > 1 else 1.0 / sig.q
    else:
        raise UnclassifiableSigma(f"sigma = (q={sig.q}, p={sig.p}) on a {kind} interval fits neither normal form")
    lag = cert.extras.get("lagrangian")
    if lag is None:
        from .symplectic import lagrangian_residual

        lag = lagrangian_residual(spec, cert.L) < tl.tol(1e-8)
    cls = Classification(typ, kind == "real", "torus" if lag else "nilmanifold", float(param))
    cert.classification = cls
    return cls


def heisenberg_lattice_element(spec, cert, z):
    """The element of H given by integer coordinates z in the lattice basis."""
    x = np.asarray(cert.lattice.basis, dtype=float) @ np.asarray(z, dtype=float)
    return heisenberg(spec, x[0], cert.L.vector(x[1:]))
