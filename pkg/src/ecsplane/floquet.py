"""Hill equations x'' = (phi(t) + delta) x with periodic phi, and their positive Floquet solutions.

For delta above the bottom of the periodic spectrum both Floquet multipliers
are real and positive and both Floquet solutions are positive; the logarithmic
derivative b = x'/x of such a solution is periodic, solves b' + b^2 = phi + delta,
and has period integral log(multiplier).
"""

from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from . import tolerances as tl
from .errors import ComplexMultipliers, FloquetGap, StepFailure
from .profiles import FourierSeries


def _hill_rhs(phi, delta):
    def rhs(t, y):
        return np.array([y[1], (phi(t) + delta) * y[0]])

    return rhs


def monodromy(phi, delta, period):
    """2 x 2 matrix advancing (x, x') over one period."""
    rhs = _hill_rhs(phi, delta)
    cols = []
    for y0 in ((1.0, 0.0), (0.0, 1.0)):
        sol = solve_ivp(rhs, (0.0, period), y0, method="DOP853", rtol=tl.ODE_RTOL, atol=tl.ODE_ATOL)
        if not sol.success:
            raise StepFailure(sol.message)
        cols.append(sol.y[:, -1])
    return np.array(cols).T


@dataclass
class FloquetData:
    monodromy: np.ndarray
    multipliers: np.ndarray  # complex pair, sorted by modulus
    log_integrals: np.ndarray  # log of each multiplier when both are real and positive

    @property
    def trace(self):
        return float(np.trace(self.monodromy))


def floquet_exponent(phi, delta, period):
    """Floquet multipliers of x'' = (phi + delta) x over one period.

    ``log_integrals`` holds log(mu) for each multiplier mu, which equals the
    period integral of b = x'/x for the matching Floquet solution.
    """
    M = monodromy(phi, delta, period)
    mu = np.linalg.eigvals(M)
    mu = mu[np.argsort(np.abs(mu))]
    tr = float(np.trace(M))
    if tr <= 2.0 or np.any(np.abs(mu.imag) > 0) or np.any(mu.real <= 0):
        raise ComplexMultipliers(f"trace of the monodromy is {tr:.6g}; multipliers are not real, positive and distinct")
    return FloquetData(M, mu, np.log(mu.real))


def _excess(phi, period, target):
    """delta -> tr(M)/2 - cosh(target); zero exactly when |log mu| = target."""
    c = np.cosh(target)
    return lambda d: 0.5 * float(np.trace(monodromy(phi, d, period))) - c


def solve_delta(phi, period, target, start=0.0, max_doublings=60):
    """delta with |log mu(delta)| = target > 0, on the branch above the periodic ground state.

    Starts from a delta with real multipliers and walks outward with doubling
    steps to bracket the crossing, then refines with Brent's method.
    """
    g = _excess(phi, period, target)
    g0 = g(start)
    if g0 == 0.0:
        return start
    direction = 1.0 if g0 < 0 else -1.0
    step = 0.1 * (1.0 + abs(target))
    a, ga = start, g0
    for _ in range(max_doublings):
        b = a + direction * step
        gb = g(b)
        if np.sign(gb) != np.sign(ga):
            lo, hi = sorted((a, b))
            return brentq(g, lo, hi, xtol=1e-14, rtol=1e-14, maxiter=200)
        if direction < 0 and gb > ga:
            # the excess must decrease towards the band edge; a rise means a
            # gap was entered, so retreat and refine the step
            step *= 0.25
            continue
        a, ga = b, gb
        step *= 2.0
    raise FloquetGap(f"could not bracket |log mu| = {target:.6g}")


def positive_floquet_solution(phi, delta, period, log_mu, samples=256, modes=None):
    """Periodic b = x'/x of the Floquet solution with multiplier exp(log_mu), as a Fourier series."""
    data = floquet_exponent(phi, delta, period)
    i = int(np.argmin(np.abs(data.log_integrals - log_mu)))
    if abs(data.log_integrals[i] - log_mu) > 1e-8 * (1.0 + abs(log_mu)):
        raise FloquetGap(f"no multiplier with log {log_mu:.6g}; have {data.log_integrals}")
    w, V = np.linalg.eig(data.monodromy)
    v = V[:, int(np.argmin(np.abs(w - data.multipliers[i])))].real
    if v[0] == 0.0:
        raise FloquetGap("Floquet solution vanishes at t = 0")
    v = v / v[0]
    ts = period * np.arange(samples) / samples
    sol = solve_ivp(
        _hill_rhs(phi, delta),
        (0.0, period),
        v,
        method="DOP853",
        t_eval=ts,
        rtol=tl.ODE_RTOL,
        atol=tl.ODE_ATOL,
    )
    if not sol.success:
        raise StepFailure(sol.message)
    x, dx = sol.y
    if np.any(x <= 0):
        raise FloquetGap("Floquet solution changes sign; delta lies below the periodic ground state")
    b = FourierSeries.fit_samples(period, dx / x, modes)
    return b.trim(1e-16)
