"""The standard ECS plane wave on I x R x V.

Coordinates are ordered (t, s, x^1, ..., x^m) with m = n - 2, and the metric is

    kappa dt^2 + dt ds + <.,.>,   kappa(t, s, v) = f(t) <v, v> + <A v, v>,

so that g(d_t, d_s) = 1/2 and d_s is g-dual to dt / 2.
"""

import hashlib
import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional

import numpy as np

from .errors import DegenerateGram, OutOfInterval
from .profiles import Interval, Profile, profile_from_json, profile_to_json
from .pseudo import PseudoSpace, SymOperator, check_operator, numerical_rank


@dataclass(frozen=True, eq=False)
class PlaneWaveSpec:
    """Data (n, V, A, I, f) of a standard plane wave.

    ``strict=False`` skips the ECS requirements (A nonzero, f nonconstant) so
    flat and locally symmetric metrics can be fed to the curvature oracle.
    """

    space: PseudoSpace
    A: SymOperator
    interval: Interval
    profile: Profile
    strict: bool = True

    def __post_init__(self):
        if not isinstance(self.A, SymOperator):
            object.__setattr__(self, "A", check_operator(self.space, self.A, require_nonzero=self.strict))
        if self.A.dim != self.space.dim:
            raise DegenerateGram("A and gram have different sizes")
        if not self.profile.covers(self.interval):
            raise OutOfInterval("profile is not defined on the whole interval")
        if self.strict:
            self.profile.check_nonconstant(self.interval)

    @property
    def m(self):
        return self.space.dim

    @property
    def n(self):
        return self.space.dim + 2

    @property
    def gram(self):
        return self.space.gram

    def f(self, t):
        return self.profile.f(t)

    def df(self, t):
        return self.profile.df(t)

    def potential(self, t):
        """The matrix f(t) Id + A driving u'' = (f + A) u."""
        return self.profile.f(t) * np.eye(self.m) + self.A.matrix

    def to_json(self):
        lo, hi = self.interval.lo, self.interval.hi
        return {
            "n": self.n,
            "gram": self.gram.tolist(),
            "A": self.A.matrix.tolist(),
            "interval": {
                "type": self.interval.kind,
                "bounds": [None if not np.isfinite(lo) else lo, None if not np.isfinite(hi) else hi],
            },
            "profile": profile_to_json(self.profile),
        }

    @classmethod
    def from_json(cls, d, strict=True):
        lo, hi = d["interval"].get("bounds", [None, None])
        interval = Interval(-np.inf if lo is None else float(lo), np.inf if hi is None else float(hi))
        space = PseudoSpace(np.array(d["gram"], dtype=float))
        spec = cls(space, np.array(d["A"], dtype=float), interval, profile_from_json(d["profile"]), strict)
        if int(d["n"]) != spec.n:
            raise DegenerateGram(f"n = {d['n']} but gram has size {spec.m}")
        return spec

    @cached_property
    def key(self):
        """Content hash; two specs with the same data share a key."""
        blob = json.dumps(self.to_json(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()

    def same_as(self, other):
        return self is other or self.key == other.key


@dataclass(frozen=True)
class Point:
    t: float
    s: float
    v: np.ndarray

    @classmethod
    def from_coords(cls, x):
        x = np.asarray(x, dtype=float)
        return cls(float(x[0]), float(x[1]), x[2:].copy())

    def coords(self):
        return np.concatenate([[self.t, self.s], np.asarray(self.v, dtype=float)])


def kappa_at(spec, t, v):
    spec.interval.require(t)
    v = np.asarray(v, dtype=float)
    gv = spec.gram @ v
    return float(spec.f(t) * (v @ gv) + (spec.A.matrix @ v) @ gv)


def metric_at(spec, p):
    """Metric matrix in (t, s, x^1..x^m) components at the point ``p``."""
    m = spec.m
    g = np.zeros((m + 2, m + 2))
    g[0, 0] = kappa_at(spec, p.t, p.v)
    g[0, 1] = g[1, 0] = 0.5
    g[2:, 2:] = spec.gram
    return g


def metric_coords(spec, x):
    return metric_at(spec, Point.from_coords(x))


def random_point(spec, rng, t_range=None, spread=1.0):
    if t_range is None:
        t_range = (1.0, 2.0) if spec.interval.kind != "real" else (0.0, 1.0)
    t = rng.uniform(*t_range)
    spec.interval.require(t)
    return Point(t, rng.uniform(-spread, spread), rng.uniform(-spread, spread, size=spec.m))


# -- closed-form curvature ---------------------------------------------------

# Orientation of the Weyl operator on bivectors. With curvature
# R(X,Y) = [nabla_X, nabla_Y] - nabla_[X,Y] and W(X^Y)^{ab} = W^{ab}_{cd} X^c Y^d
# one gets W(d_t ^ d_j) = -2 d_s ^ A d_j; the closed form is stated for the
# opposite orientation, W(X^Y)^{ab} = W^{ab}_{cd} Y^c X^d, recorded here once.
WEYL_BIVECTOR_SIGN = -1


def bivector(X, Y):
    """X ^ Y = X (x) Y - Y (x) X as an antisymmetric matrix."""
    return np.outer(X, Y) - np.outer(Y, X)


def ricci_closed(spec, t):
    n = spec.n
    Ric = np.zeros((n, n))
    Ric[0, 0] = (2 - n) * spec.f(t)
    return Ric


def weyl_tensor_closed(spec):
    """All-lower Weyl tensor W_{abcd}: only W_{titj} = -(gram A)_{ij} and its symmetries."""
    n, m = spec.n, spec.m
    gA = spec.gram @ spec.A.matrix
    W = np.zeros((n, n, n, n))
    for i in range(m):
        for j in range(m):
            c = -gA[i, j]
            a, b = i + 2, j + 2
            W[0, a, 0, b] = c
            W[a, 0, b, 0] = c
            W[0, a, b, 0] = -c
            W[a, 0, 0, b] = -c
    return W


def weyl_bivector_images(spec):
    """Closed-form images W(d_t ^ d_j) = 2 d_s ^ A d_j, j = 1..m (as antisymmetric n x n matrices)."""
    n = spec.n
    ds = np.zeros(n)
    ds[1] = 1.0
    out = []
    for j in range(spec.m):
        Adj = np.zeros(n)
        Adj[2:] = spec.A.matrix[:, j]
        out.append(2.0 * bivector(ds, Adj))
    return out


def weyl_operator_image(W_lower, g_inv, X, Y):
    """Bivector image of X ^ Y under the Weyl operator built from W_{abcd}."""
    W_up = np.einsum("ae,bf,efcd->abcd", g_inv, g_inv, W_lower)
    if WEYL_BIVECTOR_SIGN > 0:
        return np.einsum("abcd,c,d->ab", W_up, X, Y)
    return np.einsum("abcd,c,d->ab", W_up, Y, X)


def olszak_brute_force(g, W_lower, rel=1e-8):
    """Basis of {v : g(v,.) ^ W(v',v'',.,.) = 0 for all v', v''} at one point.

    Every coordinate pair (v', v'') = (d_c, d_d) and every 3-form component is
    stacked into one linear system in v; the null space is returned as columns.
    """
    n = g.shape[0]
    rows = []
    triples = [(a, b, c) for a in range(n) for b in range(a + 1, n) for c in range(b + 1, n)]
    for c0 in range(n):
        for d0 in range(c0 + 1, n):
            omega = W_lower[c0, d0]
            if not np.any(omega):
                continue
            for a, b, c in triples:
                # (xi ^ omega)_{abc} with xi = g v
                row = g[a] * omega[b, c] + g[b] * omega[c, a] + g[c] * omega[a, b]
                rows.append(row)
    if not rows:
        return np.eye(n)
    M = np.array(rows)
    _, s, vt = np.linalg.svd(M)
    scale = s[0] if s.size and s[0] > 0 else 1.0
    rank = int(np.sum(s > rel * scale))
    return vt[rank:].T


@dataclass
class CurvatureReport:
    ricci: np.ndarray
    weyl_images: list
    olszak_basis: np.ndarray  # brute force, columns
    olszak_closed: np.ndarray  # closed form, columns
    olszak_rank: int
    manifold_rank: int
    olszak_agree: bool
    scalar: float = 0.0
    notes: Optional[dict] = field(default=None)


def olszak_closed(spec):
    n = spec.n
    ds = np.zeros((n, 1))
    ds[1, 0] = 1.0
    if spec.A.rank == 1:
        u, s, _ = np.linalg.svd(spec.A.matrix)
        im = np.zeros((n, 1))
        im[2:, 0] = u[:, 0]
        return np.hstack([ds, im])
    return ds


def same_span(U, V, rel=1e-8):
    if U.shape[1] != V.shape[1]:
        return False
    both = np.hstack([U, V])
    return numerical_rank(both, rel) == U.shape[1] == numerical_rank(U, rel)


def closed_form_curvature(spec, p):
    spec.interval.require(p.t)
    g = metric_at(spec, p)
    W = weyl_tensor_closed(spec)
    basis = olszak_brute_force(g, W)
    closed = olszak_closed(spec)
    rank = basis.shape[1]
    return CurvatureReport(
        ricci=ricci_closed(spec, p.t),
        weyl_images=weyl_bivector_images(spec),
        olszak_basis=basis,
        olszak_closed=closed,
        olszak_rank=rank,
        manifold_rank=closed.shape[1],
        olszak_agree=same_span(basis, closed),
        scalar=0.0,
    )
