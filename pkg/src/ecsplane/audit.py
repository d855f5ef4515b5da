"""Invariant audits run by the command line tools on top of certificate checks."""

import numpy as np

from . import tolerances as tl
from .curvature import numeric_curvature_oracle
from .isometry import apply_isometry, jacobian
from .planewave import closed_form_curvature, metric_at, random_point
from .symplectic import CheckReport

# acceptance thresholds for the finite-difference oracle
RICCI_TOL = 1e-5
WEYL_TOL = 1e-5
NABLA_W_TOL = 1e-4
SCALAR_TOL = 1e-6


def curvature_audit(spec, samples, h=1e-4, rng=None):
    """Oracle residuals at random points, maximized over the samples."""
    rng = rng if rng is not None else np.random.default_rng(0)
    worst = dict(ricci=0.0, weyl=0.0, nabla_weyl=0.0, scalar=0.0)
    ranks = set()
    agree = True
    for _ in range(samples):
        p = random_point(spec, rng)
        rep = numeric_curvature_oracle(spec, p, h=h)
        s = 1.0 + rep.weyl_norm
        worst["ricci"] = max(worst["ricci"], rep.ricci_residual / s)
        worst["weyl"] = max(worst["weyl"], rep.weyl_residual / s)
        worst["nabla_weyl"] = max(worst["nabla_weyl"], rep.nabla_weyl / s)
        worst["scalar"] = max(worst["scalar"], rep.scalar)
        closed = closed_form_curvature(spec, p)
        ranks.add(closed.olszak_rank)
        agree = agree and closed.olszak_agree and rep.olszak_rank == closed.olszak_rank
    out = CheckReport()
    out.add("curvature_ricci", worst["ricci"], tl.tol(RICCI_TOL))
    out.add("curvature_weyl", worst["weyl"], tl.tol(WEYL_TOL))
    out.add("curvature_nabla_weyl", worst["nabla_weyl"], tl.tol(NABLA_W_TOL))
    out.add("curvature_scalar", worst["scalar"], tl.tol(SCALAR_TOL))
    rank = ranks.pop() if len(ranks) == 1 else -1
    out.add("olszak_rank", 0.0 if agree else 1.0, 0.5, passed=agree and rank in (1, 2), detail=f"rank {rank}")
    return out, rank


def isometry_audit(spec, phi, samples=5, rng=None):
    """Metric pullback under phi and the inverse relation at random points."""
    rng = rng if rng is not None else np.random.default_rng(0)
    worst = 0.0
    for _ in range(samples):
        p = random_point(spec, rng)
        J = jacobian(spec, phi, p)
        g0, g1 = metric_at(spec, p), metric_at(spec, apply_isometry(spec, phi, p))
        worst = max(worst, float(np.abs(J.T @ g1 @ J - g0).max()) / (1.0 + np.abs(g0).max()))
    out = CheckReport()
    out.add("isometry_pullback", worst, tl.tol(1e-8))
    return out
