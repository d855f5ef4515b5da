"""Isometries of a standard plane wave: S ⋉ H acting on I x R x V, plus Killing fields.

An isometry is a triple (sigma, r, u) with sigma = (q, p, C) in S and (r, u) in
the Heisenberg group H = R x E. It acts by

    (t, s, v) -> (q t + p,  -<u'(t'), 2 C v + u(t')> + s / q + r,  C v + u(t')),   t' = q t + p.

The point action is the ground truth; composition and conjugation formulas
are checked against it in the tests.
"""

from dataclasses import dataclass

import numpy as np

from . import tolerances as tl
from .errors import InvalidKilling, InvalidSigma, SpecMismatch
from .planewave import Point
from .symplectic import SolutionVector, default_base, omega, sigma_apply


@dataclass(frozen=True, eq=False)
class SigmaElement:
    q: float
    p: float
    C: np.ndarray
    kind: str = "general"  # translational | dilational | general

    @property
    def m(self):
        return self.C.shape[0]

    def act_t(self, t):
        return self.q * t + self.p

    def act_t_inv(self, t):
        return (t - self.p) / self.q

    def compose(self, other):
        return SigmaElement(self.q * other.q, self.q * other.p + self.p, self.C @ other.C, _meet(self.kind, other.kind))

    def inverse(self):
        return SigmaElement(1.0 / self.q, -self.p / self.q, np.linalg.inv(self.C), self.kind)

    def power(self, k):
        k = int(k)
        out = identity_sigma(self.m)
        base = self if k >= 0 else self.inverse()
        for _ in range(abs(k)):
            out = base.compose(out)
        return SigmaElement(out.q, out.p, out.C, self.kind if k else "general")

    def to_json(self):
        return {"q": self.q, "p": self.p, "C": self.C.tolist()}


def _meet(a, b):
    return a if a == b else "general"


def identity_sigma(m):
    return SigmaElement(1.0, 0.0, np.eye(m))


def sigma_kind(spec, q, p):
    """Normal form: translational (1, p, C) on R, dilational (q, 0, C) on (0, inf)."""
    kind = spec.interval.kind
    if kind == "real" and abs(q - 1.0) <= tl.tol(tl.EXACT):
        return "translational"
    if kind == "positive" and p == 0.0 and q > 0 and abs(q - 1.0) > tl.tol(tl.EXACT):
        return "dilational"
    return "general"


def validate_sigma(spec, q, p, C, k=64):
    """Check that (q, p, C) lies in S for ``spec`` and return it as a SigmaElement."""
    q, p = float(q), float(p)
    C = np.array(C, dtype=float)
    m = spec.m
    if q == 0.0:
        raise InvalidSigma("nonzero_q", "q must be nonzero")
    if C.shape != (m, m):
        raise InvalidSigma("isometry", f"C has shape {C.shape}, expected {(m, m)}")
    g = spec.gram
    iso = float(np.abs(C.T @ g @ C - g).max())
    if iso > tl.tol(tl.GROUP) * max(1.0, np.abs(g).max()):
        raise InvalidSigma("isometry", f"C^T g C - g has size {iso:.2e}")
    A = spec.A.matrix
    conj = float(np.abs(C @ A @ np.linalg.inv(C) - q * q * A).max())
    if conj > tl.tol(tl.GROUP) * max(1.0, q * q) * max(1.0, np.abs(A).max()):
        raise InvalidSigma("conjugation", f"C A C^-1 - q^2 A has size {conj:.2e}")
    lo, hi = spec.interval.image(q, p)
    if not (np.isclose(lo, spec.interval.lo, rtol=0, atol=1e-12) and np.isclose(hi, spec.interval.hi, rtol=0, atol=1e-12)):
        raise InvalidSigma("interval", f"q I + p = ({lo}, {hi}) is not I")
    ts = spec.interval.sample(k)
    f0 = spec.f(ts)
    f1 = q * q * spec.f(q * ts + p)
    res = float(np.abs(f0 - f1).max() / max(1.0, np.abs(f0).max()))
    if res > tl.tol(tl.SAMPLE):
        raise InvalidSigma("profile", f"f(t) - q^2 f(q t + p) has relative size {res:.2e}")
    return SigmaElement(q, p, C, sigma_kind(spec, q, p))


# -- S ⋉ H --------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Isometry:
    spec: object
    sigma: SigmaElement
    r: float
    u: SolutionVector

    @property
    def q(self):
        return self.sigma.q

    def to_json(self):
        return dict(self.sigma.to_json(), r=self.r, u_initial_data=self.u.to_json())


def identity(spec):
    return Isometry(spec, identity_sigma(spec.m), 0.0, SolutionVector.zero(spec.m, default_base(spec)))


def heisenberg(spec, r, u):
    """(r, u) in H, identified with (Id, r, u)."""
    return Isometry(spec, identity_sigma(spec.m), float(r), u)


def _same_spec(a, b):
    if not a.spec.same_as(b.spec):
        raise SpecMismatch("isometries belong to different plane waves")


def apply_isometry(spec, phi, p):
    if not spec.same_as(phi.spec):
        raise SpecMismatch("isometry belongs to a different plane wave")
    sig = phi.sigma
    tt = sig.act_t(p.t)
    spec.interval.require(p.t)
    spec.interval.require(tt)
    u, du = phi.u.evaluate(spec, tt)
    Cv = sig.C @ p.v
    g = spec.gram
    s_new = -du @ g @ (2 * Cv + u) + p.s / sig.q + phi.r
    return Point(tt, float(s_new), Cv + u)


def jacobian(spec, phi, p):
    """Exact Jacobian of the point action in (t, s, v) coordinates."""
    sig = phi.sigma
    tt = sig.act_t(p.t)
    u, du = phi.u.evaluate(spec, tt)
    ddu = spec.potential(tt) @ u
    g = spec.gram
    C, q = sig.C, sig.q
    Cv = C @ p.v
    m = spec.m
    J = np.zeros((m + 2, m + 2))
    J[0, 0] = q
    J[1, 0] = -q * (ddu @ g @ (2 * Cv + u) + du @ g @ du)
    J[1, 1] = 1.0 / q
    J[1, 2:] = -2.0 * (du @ g @ C)
    J[2:, 0] = q * du
    J[2:, 2:] = C
    return J


def compose(a, b):
    """(s, r, u)(s^, r^, u^) = (s s^, r + r^/q - Omega(u, s u^), u + s u^)."""
    _same_spec(a, b)
    spec = a.spec
    su = sigma_apply(a.sigma, b.u)
    r = a.r + b.r / a.sigma.q - omega(spec, a.u, su)
    return Isometry(spec, a.sigma.compose(b.sigma), float(r), a.u.add(spec, su))


def invert(phi):
    sig_inv = phi.sigma.inverse()
    u_inv = sigma_apply(sig_inv, phi.u).scaled(-1.0)
    return Isometry(phi.spec, sig_inv, -phi.sigma.q * phi.r, u_inv)


def conjugate_on_H(phi, h):
    """C_phi(r, u) = (r/q - 2 Omega(w, sigma u), sigma u) for phi = (sigma, b, w)."""
    _same_spec(phi, h)
    if h.sigma.q != 1.0 or h.sigma.p != 0.0 or np.any(h.sigma.C != np.eye(h.sigma.m)):
        raise SpecMismatch("second argument must lie in H")
    spec = phi.spec
    su = sigma_apply(phi.sigma, h.u)
    r = h.r / phi.sigma.q - 2.0 * omega(spec, phi.u, su)
    return heisenberg(spec, r, su.at(spec, h.u.base_t))


def isometry_distance(spec, a, b):
    """Max deviation between two triples, u compared at a's base time."""
    sa, sb = a.sigma, b.sigma
    d = max(abs(sa.q - sb.q), abs(sa.p - sb.p), float(np.abs(sa.C - sb.C).max()), abs(a.r - b.r))
    ub = b.u.at(spec, a.u.base_t)
    return max(d, float(np.abs(a.u.data - ub.data).max()))


# -- Killing fields ----------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class KillingTriple:
    a: float
    b: float
    P: np.ndarray
    ell: float
    w: SolutionVector


def validate_killing(spec, X, k=64):
    g, A = spec.gram, spec.A.matrix
    gP = g @ X.P
    scale = max(1.0, np.abs(X.P).max())
    if np.abs(gP + gP.T).max() > tl.tol(tl.GROUP) * scale:
        raise InvalidKilling("P is not skew-adjoint")
    br = X.P @ A - A @ X.P - 2 * X.a * A
    if np.abs(br).max() > tl.tol(tl.GROUP) * scale * max(1.0, np.abs(A).max()):
        raise InvalidKilling("[P, A] != 2 a A")
    ts = spec.interval.sample(k)
    res = 2 * X.a * spec.f(ts) + (X.a * ts + X.b) * spec.df(ts)
    if np.abs(res).max() > tl.tol(tl.SAMPLE) * max(1.0, np.abs(spec.f(ts)).max()):
        raise InvalidKilling("2 a f + (a t + b) f' != 0")
    return X


def killing_value(spec, X, p):
    """Components of X at p in (d_t, d_s, d_x) order."""
    spec.interval.require(p.t)
    w, dw = X.w.evaluate(spec, p.t)
    g = spec.gram
    out = np.empty(spec.m + 2)
    out[0] = X.a * p.t + X.b
    out[1] = -2.0 * dw @ g @ p.v - X.a * p.s + X.ell
    out[2:] = X.P @ p.v + w
    return out


def killing_bracket(spec, X, Y):
    """Triple of [X, Y] (vector field commutator XY - YX)."""
    t0 = X.w.base_t
    w, dw = X.w.evaluate(spec, t0)
    wh, dwh = Y.w.evaluate(spec, t0)
    V = spec.potential(t0)
    ddw, ddwh = V @ w, V @ wh
    value = (X.a * t0 + X.b) * dwh - (Y.a * t0 + Y.b) * dw + Y.P @ w - X.P @ wh
    velocity = (
        X.a * dwh
        + (X.a * t0 + X.b) * ddwh
        - Y.a * dw
        - (Y.a * t0 + Y.b) * ddw
        + Y.P @ dw
        - X.P @ dwh
    )
    u = SolutionVector(t0, value, velocity)
    ell = 2.0 * omega(spec, X.w, Y.w) - Y.a * X.ell + X.a * Y.ell
    return KillingTriple(0.0, Y.a * X.b - X.a * Y.b, Y.P @ X.P - X.P @ Y.P, ell, u)


def lie_derivative_residual(spec, X, p, h=1e-4):
    """max |(L_X g)_{ab}| at p from central differences of the metric and of X."""
    from .planewave import metric_coords

    x = p.coords()
    n = x.size
    Xp = killing_value(spec, X, p)
    dg = np.empty((n, n, n))
    dX = np.empty((n, n))  # dX[e, c] = d_e X^c
    for e in range(n):
        dx = np.zeros(n)
        dx[e] = h
        dg[e] = (metric_coords(spec, x + dx) - metric_coords(spec, x - dx)) / (2 * h)
        dX[e] = (
            killing_value(spec, X, Point.from_coords(x + dx)) - killing_value(spec, X, Point.from_coords(x - dx))
        ) / (2 * h)
    g = metric_coords(spec, x)
    L = np.einsum("c,cab->ab", Xp, dg) + np.einsum("cb,ac->ab", g, dX) + np.einsum("ac,bc->ab", g, dX)
    return float(np.abs(L).max())


def numeric_commutator(spec, X, Y, p, h=1e-4):
    """[X, Y]^a = X^b d_b Y^a - Y^b d_b X^a by central differences."""
    x = p.coords()
    n = x.size
    dX = np.empty((n, n))
    dY = np.empty((n, n))
    for e in range(n):
        dx = np.zeros(n)
        dx[e] = h
        pp, pm = Point.from_coords(x + dx), Point.from_coords(x - dx)
        dX[e] = (killing_value(spec, X, pp) - killing_value(spec, X, pm)) / (2 * h)
        dY[e] = (killing_value(spec, Y, pp) - killing_value(spec, Y, pm)) / (2 * h)
    return killing_value(spec, X, p) @ dY - killing_value(spec, Y, p) @ dX
