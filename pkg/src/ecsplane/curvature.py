"""Finite-difference curvature of an arbitrary metric given as a function of coordinates.

This module knows nothing about plane waves beyond :func:`metric_coords`; it
serves as an independent check on the closed forms in :mod:`planewave`.

Index conventions: R^a_{bcd} is defined by R(d_c, d_d) d_b = R^a_{bcd} d_a with
R(X,Y) = nabla_X nabla_Y - nabla_Y nabla_X - nabla_[X,Y]; R_{abcd} = g_{ae} R^e_{bcd};
Ric_{bd} = R^a_{bad}.
"""

from dataclasses import dataclass

import numpy as np

from .errors import NondegenerateCheckFailed, StepTooLarge
from .planewave import (
    closed_form_curvature,
    metric_coords,
    olszak_brute_force,
    weyl_operator_image,
)


def _stencil(fn, x, h, richardson=True):
    """Partial derivatives of an array-valued ``fn`` at ``x``; the new axis comes first."""
    x = np.asarray(x, dtype=float)
    out = []
    for e in range(x.size):
        dx = np.zeros_like(x)
        dx[e] = h
        if richardson:
            # Richardson extrapolation of the (h, 2h) central differences
            d = (-fn(x + 2 * dx) + 8 * fn(x + dx) - 8 * fn(x - dx) + fn(x - 2 * dx)) / (12 * h)
        else:
            d = (fn(x + dx) - fn(x - dx)) / (2 * h)
        out.append(d)
    return np.array(out)


def christoffel(metric, x, h, richardson=True):
    """Gamma^a_{bc} at x from differences of the metric."""
    g = metric(x)
    dg = _stencil(metric, x, h, richardson)  # dg[e, a, b] = d_e g_ab
    ginv = np.linalg.inv(g)
    # Gamma_{d b c} = (d_b g_dc + d_c g_db - d_d g_bc) / 2
    low = 0.5 * (np.einsum("bdc->dbc", dg) + np.einsum("cdb->dbc", dg) - dg)
    return np.einsum("ad,dbc->abc", ginv, low)


def riemann(metric, x, h, h_outer, richardson=True):
    """R^a_{bcd} at x."""
    G = christoffel(metric, x, h, richardson)
    dG = _stencil(lambda y: christoffel(metric, y, h, richardson), x, h_outer, richardson)
    # dG[c, a, d, b] = d_c Gamma^a_{db}
    R = (
        np.einsum("cadb->abcd", dG)
        - np.einsum("dacb->abcd", dG)
        + np.einsum("ace,edb->abcd", G, G)
        - np.einsum("ade,ecb->abcd", G, G)
    )
    return R


def lower_first(g, R):
    return np.einsum("ae,ebcd->abcd", g, R)


def ricci_from(R):
    return np.einsum("abad->bd", R)


def weyl_from(g, R_low):
    n = g.shape[0]
    ginv = np.linalg.inv(g)
    Ric = np.einsum("ac,abcd->bd", ginv, R_low)
    scal = float(np.einsum("bd,bd->", ginv, Ric))
    P = (
        np.einsum("ac,bd->abcd", g, Ric)
        - np.einsum("ad,bc->abcd", g, Ric)
        - np.einsum("bc,ad->abcd", g, Ric)
        + np.einsum("bd,ac->abcd", g, Ric)
    )
    GG = np.einsum("ac,bd->abcd", g, g) - np.einsum("ad,bc->abcd", g, g)
    return R_low - P / (n - 2) + scal * GG / ((n - 1) * (n - 2)), Ric, scal


def covariant_derivative_4(G, dT, T):
    """nabla_e T_{abcd} from the partial derivatives dT[e] and Christoffels G."""
    return (
        dT
        - np.einsum("fea,fbcd->eabcd", G, T)
        - np.einsum("feb,afcd->eabcd", G, T)
        - np.einsum("fec,abfd->eabcd", G, T)
        - np.einsum("fed,abcf->eabcd", G, T)
    )


@dataclass
class NumericCurvatureReport:
    ricci_residual: float
    weyl_residual: float
    nabla_weyl: float
    nabla_riemann: float
    scalar: float
    weyl_norm: float
    riemann_norm: float
    weyl_trace: float
    parallel_ds: float
    olszak_rank: int
    ricci: np.ndarray
    weyl: np.ndarray

    def max_relative(self):
        s = 1.0 + self.weyl_norm
        return max(self.ricci_residual, self.weyl_residual, self.nabla_weyl) / s


def _check_neighborhood(spec, p, reach):
    lo, hi = spec.interval.lo, spec.interval.hi
    if not (lo < p.t - reach and p.t + reach < hi):
        raise StepTooLarge(f"stencil of radius {reach:g} around t = {p.t} leaves the interval")


def numeric_curvature_oracle(spec, p, h=1e-4, h_outer=None, richardson=True):
    """Curvature of the plane wave at ``p`` by finite differences only.

    Christoffel symbols use step ``h``; the outer differentiations (Riemann from
    Christoffels, nabla W from W) use ``h_outer`` (default ``30 h``, capped at
    1e-2) so nested round-off stays below the target residuals.
    """
    if h_outer is None:
        h_outer = min(30.0 * h, 1e-2)
    reach = 2 * h + 4 * h_outer if richardson else h + 2 * h_outer
    _check_neighborhood(spec, p, max(reach, 4 * h))
    metric = lambda y: metric_coords(spec, y)  # noqa: E731
    x = p.coords()
    g = metric(x)
    if abs(np.linalg.det(g)) < 1e-12 * max(1.0, np.abs(g).max()) ** g.shape[0]:
        raise NondegenerateCheckFailed("metric is degenerate at the sample point")

    def weyl_at(y):
        gy = metric(y)
        Rl = lower_first(gy, riemann(metric, y, h, h_outer, richardson))
        return weyl_from(gy, Rl)[0], Rl

    R = riemann(metric, x, h, h_outer, richardson)
    R_low = lower_first(g, R)
    W, Ric, scal = weyl_from(g, R_low)
    G = christoffel(metric, x, h, richardson)

    stacked = _stencil(lambda y: np.stack(weyl_at(y)), x, h_outer, richardson)
    dW, dR = stacked[:, 0], stacked[:, 1]
    nabla_W = covariant_derivative_4(G, dW, W)
    nabla_R = covariant_derivative_4(G, dR, R_low)

    closed = closed_form_curvature(spec, p)
    ginv = np.linalg.inv(g)
    n = spec.n
    weyl_res = 0.0
    dt = np.zeros(n)
    dt[0] = 1.0
    for j in range(spec.m):
        dj = np.zeros(n)
        dj[2 + j] = 1.0
        img = weyl_operator_image(W, ginv, dt, dj)
        weyl_res = max(weyl_res, float(np.abs(img - closed.weyl_images[j]).max()))
        # remaining coordinate bivectors must map to zero
    for a in range(n):
        for b in range(a + 1, n):
            if a == 0 and b >= 2:
                continue
            ea, eb = np.eye(n)[a], np.eye(n)[b]
            weyl_res = max(weyl_res, float(np.abs(weyl_operator_image(W, ginv, ea, eb)).max()))

    trace = float(np.abs(np.einsum("ac,abcd->bd", ginv, W)).max())
    olszak = olszak_brute_force(g, W, rel=1e-5)
    return NumericCurvatureReport(
        ricci_residual=float(np.abs(Ric - closed.ricci).max()),
        weyl_residual=weyl_res,
        nabla_weyl=float(np.abs(nabla_W).max()),
        nabla_riemann=float(np.abs(nabla_R).max()),
        scalar=abs(scal),
        weyl_norm=float(np.abs(W).max()),
        riemann_norm=float(np.abs(R_low).max()),
        weyl_trace=trace,
        parallel_ds=float(np.abs(G[:, :, 1]).max()),
        olszak_rank=olszak.shape[1],
        ricci=Ric,
        weyl=W,
    )
