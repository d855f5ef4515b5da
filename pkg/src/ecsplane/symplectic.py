"""The solution space (E, Omega) of u'' = f(t) u + A u.

A solution is stored as its initial data (value, velocity) at a base time;
every evaluation elsewhere goes through :func:`flow`, the fundamental matrix
of the first-order system on V x V.
"""

from collections import OrderedDict
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.integrate import quad, solve_ivp
from scipy.interpolate import CubicHermiteSpline

from . import tolerances as tl
from .errors import (
    DimensionMismatch,
    IntervalViolation,
    NotInvariant,
    ResidualTooLarge,
    SpecMismatch,
    StepFailure,
)
from .profiles import FourierSeries, InverseSquare, LogPeriodic

# -- flow ------------------------------------------------------------------------

_FLOW_CACHE = OrderedDict()
_FLOW_CACHE_SIZE = 4096


def _max_step(spec, t0, t1):
    prof = spec.profile
    if isinstance(prof, (InverseSquare, LogPeriodic)):
        # steps near the pole are bounded by a quarter of the distance to it
        return max(min(t0, t1) - prof.pole, 1e-12) / 4.0
    return np.inf


def flow(spec, t0, t1):
    """Matrix taking initial data (u, u') at t0 to (u, u') at t1."""
    t0, t1 = float(t0), float(t1)
    key = (spec.key, t0, t1)
    hit = _FLOW_CACHE.get(key)
    if hit is not None:
        _FLOW_CACHE.move_to_end(key)
        return hit.copy()
    m = spec.m
    if t0 == t1:
        return np.eye(2 * m)
    for t in (t0, t1):
        if t not in spec.interval:
            raise IntervalViolation(f"t = {t} outside ({spec.interval.lo}, {spec.interval.hi})")
    A = spec.A.matrix
    prof = spec.profile

    def rhs(t, y):
        Y = y.reshape(2 * m, 2 * m)
        out = np.empty_like(Y)
        out[:m] = Y[m:]
        out[m:] = prof.f(t) * Y[:m] + A @ Y[:m]
        return out.ravel()

    sol = solve_ivp(
        rhs,
        (t0, t1),
        np.eye(2 * m).ravel(),
        method="DOP853",
        rtol=tl.ODE_RTOL,
        atol=tl.ODE_ATOL,
        max_step=_max_step(spec, t0, t1),
    )
    if not sol.success:
        raise StepFailure(sol.message)
    F = sol.y[:, -1].reshape(2 * m, 2 * m)
    _FLOW_CACHE[key] = F
    if len(_FLOW_CACHE) > _FLOW_CACHE_SIZE:
        _FLOW_CACHE.popitem(last=False)
    return F.copy()


def omega_matrix(spec):
    """J with Omega(x, y) = x^T J y on initial data x = (u, u') at a common time."""
    m, g = spec.m, spec.gram
    J = np.zeros((2 * m, 2 * m))
    J[m:, :m] = g
    J[:m, m:] = -g
    return J


# -- solutions ---------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class SolutionVector:
    base_t: float
    value: np.ndarray
    velocity: np.ndarray

    @classmethod
    def from_data(cls, base_t, data):
        data = np.asarray(data, dtype=float)
        m = data.size // 2
        return cls(float(base_t), data[:m].copy(), data[m:].copy())

    @classmethod
    def zero(cls, m, base_t):
        return cls(float(base_t), np.zeros(m), np.zeros(m))

    @property
    def data(self):
        return np.concatenate([self.value, self.velocity])

    @property
    def m(self):
        return self.value.size

    def at(self, spec, t):
        """Initial data of the same solution at time t."""
        if t == self.base_t:
            return self
        return SolutionVector.from_data(t, flow(spec, self.base_t, t) @ self.data)

    def evaluate(self, spec, t):
        """(u(t), u'(t))."""
        s = self.at(spec, t)
        return s.value, s.velocity

    def accel(self, spec, t):
        u = self.at(spec, t)
        return spec.potential(t) @ u.value

    def add(self, spec, other, scale=1.0):
        o = other.at(spec, self.base_t)
        return SolutionVector(self.base_t, self.value + scale * o.value, self.velocity + scale * o.velocity)

    def scaled(self, c):
        return SolutionVector(self.base_t, c * self.value, c * self.velocity)

    def is_zero(self):
        return not np.any(self.value) and not np.any(self.velocity)

    def to_json(self):
        return {"base_t": self.base_t, "value": self.value.tolist(), "velocity": self.velocity.tolist()}

    @classmethod
    def from_json(cls, d):
        return cls(float(d["base_t"]), np.array(d["value"], dtype=float), np.array(d["velocity"], dtype=float))


def omega(spec, u, w):
    """Omega(u, w) = <u', w> - <u, w'>, evaluated at u's base time."""
    if u.m != spec.m or w.m != spec.m:
        raise SpecMismatch("solution dimension does not match dim V")
    w = w.at(spec, u.base_t)
    g = spec.gram
    return float(u.velocity @ g @ w.value - u.value @ g @ w.velocity)


# -- action of S on E ------------------------------------------------------------------


def default_base(spec):
    """t* = 1 on (0, inf), 0 when 0 is in I, otherwise the midpoint of a sample."""
    if spec.interval.kind == "positive":
        return 1.0
    if 0.0 in spec.interval:
        return 0.0
    return float(np.median(spec.interval.sample(9)))


def sigma_apply(sigma, u):
    """(sigma u)(t) = C u(sigma^{-1} t), stored at base time sigma(u.base_t); no integration needed."""
    C = sigma.C
    return SolutionVector(sigma.q * u.base_t + sigma.p, C @ u.value, C @ u.velocity / sigma.q)


def sigma_matrix_on_E(spec, sigma, base_t=None):
    """Matrix of u -> sigma u on initial data at ``base_t`` (default t*)."""
    t_star = default_base(spec) if base_t is None else base_t
    back = (t_star - sigma.p) / sigma.q
    if back not in spec.interval:
        raise IntervalViolation(f"sigma^-1 t* = {back} leaves the interval")
    m = spec.m
    D = np.zeros((2 * m, 2 * m))
    D[:m, :m] = sigma.C
    D[m:, m:] = sigma.C / sigma.q
    return D @ flow(spec, t_star, back)


# -- Riccati curves ---------------------------------------------------------------------


class RiccatiCurve:
    """A curve B: I -> End(V) meant to satisfy B' + B^2 = f + A."""

    kind = None

    def __call__(self, t):
        raise NotImplementedError

    def derivative(self, t):
        raise NotImplementedError

    def trace(self, t):
        return float(np.trace(self(t)))

    def residual(self, spec, ts):
        res = 0.0
        for t in ts:
            B = self(t)
            res = max(res, float(np.abs(self.derivative(t) + B @ B - spec.potential(t)).max()))
        return res

    def sample_times(self, spec, k=128):
        raise NotImplementedError


class ConstantDiagonal(RiccatiCurve):
    kind = "constant_diagonal"

    def __init__(self, entries):
        self.entries = np.asarray(entries, dtype=float)

    def __call__(self, t):
        return np.diag(self.entries)

    def derivative(self, t):
        return np.zeros((self.entries.size, self.entries.size))

    def sample_times(self, spec, k=128):
        return spec.interval.sample(k)

    def params(self):
        return {"entries": self.entries.tolist()}


class FourierDiagonal(RiccatiCurve):
    kind = "fourier_diagonal"

    def __init__(self, series):
        self.series = list(series)
        self.period = self.series[0].period

    def __call__(self, t):
        return np.diag([float(s(t)) for s in self.series])

    def derivative(self, t):
        return np.diag([float(s.derivative()(t)) for s in self.series])

    def integral_over_period(self):
        return np.array([s.integral_over_period() for s in self.series])

    def sample_times(self, spec, k=128):
        return np.linspace(0.0, self.period, k, endpoint=False)

    def params(self):
        return {"entries": [s.to_json() for s in self.series]}


class Sampled(RiccatiCurve):
    """Piecewise cubic Hermite interpolation of B on a grid (values and derivatives)."""

    kind = "sampled"

    def __init__(self, grid, values, derivatives):
        self.grid = np.asarray(grid, dtype=float)
        self.values = np.asarray(values, dtype=float)
        self.derivatives = np.asarray(derivatives, dtype=float)
        m = self.values.shape[1]
        self._spline = CubicHermiteSpline(
            self.grid, self.values.reshape(len(self.grid), m * m), self.derivatives.reshape(len(self.grid), m * m)
        )
        self._m = m

    def __call__(self, t):
        return self._spline(t).reshape(self._m, self._m)

    def derivative(self, t):
        return self._spline(t, 1).reshape(self._m, self._m)

    def sample_times(self, spec, k=128):
        return np.linspace(self.grid[0], self.grid[-1], k)

    def params(self):
        return {"grid": self.grid.tolist(), "values": self.values.tolist(), "derivatives": self.derivatives.tolist()}


def riccati_from_json(d):
    kind, p = d["kind"], d["params"]
    if kind == "constant_diagonal":
        return ConstantDiagonal(p["entries"])
    if kind == "fourier_diagonal":
        return FourierDiagonal([FourierSeries.from_json(e) for e in p["entries"]])
    if kind == "sampled":
        return Sampled(p["grid"], p["values"], p["derivatives"])
    raise ValueError(f"unknown Riccati representation {kind!r}")


def riccati_to_json(B):
    return {"kind": B.kind, "params": B.params()}


# -- subspaces ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Subspace:
    """Span of k solutions given by their initial data at a common base time (2m x k)."""

    base_t: float
    basis: np.ndarray

    def __post_init__(self):
        b = np.array(self.basis, dtype=float)
        if b.ndim != 2 or b.shape[0] % 2:
            raise DimensionMismatch("basis must be a 2m x k matrix")
        s = np.linalg.svd(b, compute_uv=False)
        if s.size == 0 or s[-1] <= 1e-8 * s[0]:
            raise DimensionMismatch("basis is not linearly independent")
        object.__setattr__(self, "basis", b)

    @property
    def dim(self):
        return self.basis.shape[1]

    @property
    def m(self):
        return self.basis.shape[0] // 2

    def vectors(self):
        return [SolutionVector.from_data(self.base_t, c) for c in self.basis.T]

    def vector(self, coeffs):
        return SolutionVector.from_data(self.base_t, self.basis @ np.asarray(coeffs, dtype=float))

    def coordinates(self, spec, u):
        """Least-squares coordinates of u in the basis and the relative residual."""
        x = u.at(spec, self.base_t).data
        c, *_ = np.linalg.lstsq(self.basis, x, rcond=None)
        res = np.linalg.norm(self.basis @ c - x) / max(np.linalg.norm(x), 1e-300)
        return c, float(res)

    def at(self, spec, t):
        return flow(spec, self.base_t, t) @ self.basis

    def to_json(self):
        return {"base_t": self.base_t, "basis": self.basis.tolist()}

    @classmethod
    def from_json(cls, d):
        return cls(float(d["base_t"]), np.array(d["basis"], dtype=float))


def riccati_basis(spec, B, base_t=None, check=True):
    """Basis (e_i, B(t*) e_i) of the first-order subspace determined by B."""
    t_star = default_base(spec) if base_t is None else base_t
    if check:
        ts = B.sample_times(spec, 128)
        res = B.residual(spec, ts)
        bound = tl.tol(1e-6) * (1.0 + np.abs(spec.A.matrix).max())
        if res >= bound:
            raise ResidualTooLarge(f"B' + B^2 - f - A has size {res:.3e} (bound {bound:.1e})")
    m = spec.m
    return Subspace(t_star, np.vstack([np.eye(m), B(t_star)]))


def recover_riccati(spec, L, t):
    """B(t) = U'(t) U(t)^{-1} from the transported basis of L."""
    X = L.at(spec, t)
    m = spec.m
    U, dU = X[:m], X[m:]
    s = np.linalg.svd(U, compute_uv=False)
    if s[-1] <= 1e-10 * s[0]:
        raise DimensionMismatch(f"evaluation at t = {t} is not injective on L")
    return dU @ np.linalg.pinv(U)


def fundamental_domain(spec, sigma, t_star=None):
    t_star = default_base(spec) if t_star is None else t_star
    a, b = t_star, sigma.q * t_star + sigma.p
    return (a, b) if a <= b else (b, a)


@dataclass
class Check:
    name: str
    passed: bool
    residual: float
    tolerance: float
    detail: Optional[str] = None

    def to_json(self):
        d = {"name": self.name, "passed": bool(self.passed), "residual": float(self.residual), "tolerance": float(self.tolerance)}
        if self.detail:
            d["detail"] = self.detail
        return d


@dataclass
class CheckReport:
    checks: list = field(default_factory=list)

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def add(self, name, residual, tolerance, passed=None, detail=None):
        ok = residual < tolerance if passed is None else passed
        self.checks.append(Check(name, bool(ok), float(residual), float(tolerance), detail))
        return ok

    def __getitem__(self, name):
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def failed(self):
        return [c.name for c in self.checks if not c.passed]

    def extend(self, other):
        self.checks.extend(other.checks)

    def to_json(self):
        return [c.to_json() for c in self.checks]


def invariance_residual(spec, L, sigma):
    M = sigma_matrix_on_E(spec, sigma, L.base_t)
    image = M @ L.basis
    Q, _ = np.linalg.qr(L.basis)
    return float(np.linalg.norm(image - Q @ (Q.T @ image)) / np.linalg.norm(image))


def first_order_margin(spec, L, times):
    worst = np.inf
    m = spec.m
    for t in times:
        U = L.at(spec, t)[:m]
        s = np.linalg.svd(U, compute_uv=False)
        worst = min(worst, s[-1] / s[0])
    return float(worst)


def lagrangian_residual(spec, L):
    J = omega_matrix(spec)
    G = L.basis.T @ J @ L.basis
    scale = max(np.linalg.norm(L.basis, axis=0).max() ** 2, 1e-300)
    return float(np.abs(G).max() / scale)


def subspace_checks(spec, L, sigma=None, B=None, k=64):
    """First-order, Lagrangian and sigma-invariance checks for a subspace of E.

    The first-order property is sampled on one fundamental domain of sigma
    when sigma is given (it then propagates to all of I by invariance) and on
    the interval's sample grid otherwise.
    """
    if L.m != spec.m or L.dim != spec.m:
        raise DimensionMismatch(f"expected an m-dimensional subspace, m = {spec.m}, got {L.dim}")
    rep = CheckReport()
    if sigma is not None:
        a, b = fundamental_domain(spec, sigma, L.base_t)
        times = np.linspace(a, b, k)
    else:
        times = spec.interval.sample(k)
    margin = first_order_margin(spec, L, times)
    rep.add("first_order", -margin, -tl.tol(1e-6), passed=margin > tl.tol(1e-6), detail=f"min relative singular value {margin:.3e}")
    lag = lagrangian_residual(spec, L)
    rep.add("lagrangian", lag, tl.tol(1e-8))
    if sigma is not None:
        rep.add("sigma_invariant", invariance_residual(spec, L, sigma), tl.tol(1e-8))
    if B is not None:
        ts = times[:: max(1, len(times) // 16)]
        sa = max(float(np.abs(spec.gram @ B(t) - (spec.gram @ B(t)).T).max()) for t in ts)
        rep.add("B_self_adjoint", sa, tl.tol(1e-8), passed=(sa < tl.tol(1e-8)) == rep["lagrangian"].passed)
        if sigma is not None:
            Ci = np.linalg.inv(sigma.C)
            ts_in = [t for t in ts if sigma.q * t + sigma.p in spec.interval]
            eq = max(
                float(np.abs(B(sigma.q * t + sigma.p) - sigma.C @ B(t) @ Ci / sigma.q).max()) for t in ts_in
            )
            rep.add(
                "B_equivariant",
                eq,
                tl.tol(1e-6),
                passed=(eq < tl.tol(1e-6)) == rep["sigma_invariant"].passed,
            )
    return rep


def det_restriction(spec, B, sigma, base_t=None):
    """(det from the trace formula, det of sigma|_L computed directly)."""
    t_star = default_base(spec) if base_t is None else base_t
    L = riccati_basis(spec, B, t_star)
    res = invariance_residual(spec, L, sigma)
    if res > tl.tol(1e-6):
        raise NotInvariant(f"L(B) is not sigma-invariant (residual {res:.2e})")
    end = sigma.q * t_star + sigma.p
    integral, _ = quad(B.trace, t_star, end, epsabs=1e-13, epsrel=1e-13, limit=200)
    det_formula = float(np.linalg.det(sigma.C) * np.exp(-integral))
    M = sigma_matrix_on_E(spec, sigma, t_star)
    X, *_ = np.linalg.lstsq(L.basis, M @ L.basis, rcond=None)
    return det_formula, float(np.linalg.det(X))
