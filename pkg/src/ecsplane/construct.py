"""Pipelines that build compact quotients and emit verified certificates.

Dilational (I = (0, inf)): a Z-spectral system fixes A, C and the spectrum of
sigma on E; L is spanned by the eigenvectors picked by the selector and the
lattice in R x L is a block companion basis of C_gamma.

Translational (I = R): a diagonal periodic Riccati curve B is built entry by
entry from Hill equations so that exp(-int B) has the eigenvalues of an
integer unimodular matrix Theta; f and A are read off from B' + B^2.
"""

import itertools
import math
from dataclasses import dataclass

import numpy as np
import sympy

from . import tolerances as tl
from .errors import (
    BadPolynomial,
    CertificateFailed,
    ConstantProfile,
    ConstantTrace,
    CyclicVectorFailure,
    EigenOrderingAmbiguous,
    SearchExhausted,
    ZeroOperator,
)
from .floquet import positive_floquet_solution, solve_delta
from .isometry import Isometry, validate_sigma
from .planewave import PlaneWaveSpec
from .profiles import FourierProfile, FourierSeries, Interval, InverseSquare, LogPeriodic
from .pseudo import PseudoSpace
from .quotient import LatticeData, QuotientCertificate, classify_quotient, verify_certificate
from .symplectic import FourierDiagonal, SolutionVector, Subspace, riccati_basis, sigma_matrix_on_E
from .zspectral import check_zspectral, search_zspectral

# -- integer Theta ----------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class IntegerThetaMatrix:
    coeffs: tuple  # c_0, ..., c_{m-1}, 1 (ascending)
    T: np.ndarray
    eigenvalues: np.ndarray  # ascending

    @property
    def m(self):
        return self.T.shape[0]


def companion(coeffs):
    """Companion matrix of the monic polynomial with ascending coefficients c_0..c_{m-1}, 1."""
    c = [int(x) for x in coeffs]
    m = len(c) - 1
    T = np.zeros((m, m), dtype=int)
    T[1:, :-1] = np.eye(m - 1, dtype=int)
    T[:, -1] = [-x for x in c[:-1]]
    return T


def _poly(coeffs):
    x = sympy.Symbol("x")
    return sympy.Poly(list(reversed([int(c) for c in coeffs])), x)


def theta_from_charpoly(coeffs, refine=1e-10):
    """Validate a monic integer polynomial and return its companion matrix with refined roots.

    Real roots are isolated exactly (sympy's Sturm-based intervals) and then
    bisected to width ``refine``.
    """
    coeffs = tuple(int(c) for c in coeffs)
    if len(coeffs) < 2 or coeffs[-1] != 1:
        raise BadPolynomial("polynomial must be monic with ascending coefficients c_0, ..., 1")
    if abs(coeffs[0]) != 1:
        raise BadPolynomial(f"constant term {coeffs[0]} is not +-1, so det is not +-1")
    P = _poly(coeffs)
    m = P.degree()
    if sympy.gcd(P, P.diff()).degree() > 0:
        raise BadPolynomial("polynomial has a repeated root")
    if P.eval(1) == 0:
        raise BadPolynomial("1 is a root")
    intervals = P.intervals(eps=refine)
    roots = []
    for (lo, hi), mult in intervals:
        lo, hi = float(lo), float(hi)
        if hi <= 0:
            raise BadPolynomial("polynomial has a nonpositive root")
        roots.append(_bisect(P, lo, hi, refine))
    if len(roots) != m:
        raise BadPolynomial(f"only {len(roots)} of {m} roots are real")
    if min(roots) <= 0:
        raise BadPolynomial("polynomial has a nonpositive root")
    T = companion(coeffs)
    return IntegerThetaMatrix(coeffs, T, np.array(sorted(roots)))


def _bisect(P, lo, hi, width):
    f = lambda x: float(P.eval(sympy.Rational(x)))  # noqa: E731
    flo = f(lo)
    if flo == 0.0:
        return lo
    while hi - lo > width:
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0.0:
            return mid
        if (fm < 0) == (flo < 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def search_integer_theta(m, box=8):
    """First admissible monic integer polynomial of degree m.

    Candidates are ordered by the l1 norm of (c_0, ..., c_{m-1}) and then
    lexicographically on (c_{m-1}, ..., c_0).
    """
    if m < 3:
        raise SearchExhausted("need m >= 3 so that distinct eigenvalues cannot be {l} or {l, 1/l}")
    cands = []
    for tail in itertools.product(range(-box, box + 1), repeat=m - 1):
        for c0 in (-1, 1):
            coeffs = (c0,) + tail
            cands.append((sum(abs(c) for c in coeffs), tuple(reversed(coeffs)), coeffs))
    cands.sort()
    for _, _, coeffs in cands:
        # cheap floating prefilter before the exact checks
        r = np.roots(list(reversed(coeffs + (1,))))
        if np.any(np.abs(r.imag) > 1e-6 * (1 + np.abs(r))) or np.any(r.real <= 0):
            continue
        try:
            return theta_from_charpoly(coeffs + (1,))
        except BadPolynomial:
            continue
    raise SearchExhausted(f"no admissible polynomial with coefficients in [-{box}, {box}]")


def arithmetic_condition(eigenvalues, rel=1e-9):
    """True unless the eigenvalue set is {l} or {l, 1/l}."""
    ev = np.sort(np.asarray(eigenvalues, dtype=float))
    distinct = [ev[0]]
    for x in ev[1:]:
        if abs(x - distinct[-1]) > rel * abs(x):
            distinct.append(x)
    if len(distinct) == 1:
        return False
    if len(distinct) == 2 and abs(distinct[0] * distinct[1] - 1.0) <= rel:
        return False
    return True


# -- dilational ----------------------------------------------------------------------------


def dilational_q(trace):
    trace = int(trace)
    if trace < 3:
        raise ValueError("trace must be an integer >= 3 so that q > 1")
    return (trace + math.sqrt(trace * trace - 4)) / 2.0


def dilational_spec(n, q=None, system=None, profile=None):
    """Spec and C for the dilational construction in dimension n (odd >= 5)."""
    if n < 5 or n % 2 == 0:
        raise ValueError(f"the dilational construction needs odd n >= 5, got n = {n}")
    m = n - 2
    system = system or search_zspectral(m, n)
    a = [system.E[2 * i] + (1 - n) // 2 for i in range(m)]
    space = PseudoSpace.anti_diagonal(m, 1.0)
    A = np.zeros((m, m))
    A[0, m - 1] = 1.0
    profile = profile or InverseSquare((n * n - 1) / 4.0, 0.0)
    spec = PlaneWaveSpec(space, A, Interval.positive(), profile)
    C = None if q is None else np.diag([q ** ai for ai in a])
    return spec, C, a, system


def order_eigenbasis(M, targets):
    """Real eigenvectors of M ordered to match the target eigenvalues."""
    w, V = np.linalg.eig(M)
    if np.any(np.abs(w.imag) > 1e-8 * np.abs(w)):
        raise EigenOrderingAmbiguous("sigma has non-real eigenvalues")
    w = w.real
    logs = np.log(np.abs(w))
    order = []
    for t in targets:
        d = np.abs(logs - math.log(t))
        i = int(np.argmin(d))
        if i in order or d[i] > 1e-6:
            raise EigenOrderingAmbiguous(f"no unique eigenvalue near {t:.6g}")
        order.append(i)
    U = V[:, order].real
    U = U / np.linalg.norm(U, axis=0)
    return w[order], U


def block_companion_lattice(exponents, q, trace):
    """Lattice basis in eigencoordinates for a diagonal map diag(q^y), y in a symmetric set.

    Each pair {y, -y} contributes v = e_y + e_-y and its image, giving the
    integer block [[0, -1], [1, q^y + q^-y]]; y = 0 contributes e_0 with block [1].
    """
    exponents = list(exponents)
    n = len(exponents)
    basis = np.zeros((n, n))
    K = np.zeros((n, n), dtype=int)
    used = set()
    col = 0
    for i, y in enumerate(exponents):
        if i in used:
            continue
        if y == 0:
            basis[i, col] = 1.0
            K[col, col] = 1
            used.add(i)
            col += 1
            continue
        j = exponents.index(-y) if -y in exponents else None
        if j is None:
            raise CyclicVectorFailure(f"exponent {y} has no partner {-y}")
        lo, hi = (i, j) if y > 0 else (j, i)
        yy = abs(y)
        basis[lo, col] = basis[hi, col] = 1.0
        basis[lo, col + 1] = q**yy
        basis[hi, col + 1] = q ** (-yy)
        K[col : col + 2, col : col + 2] = [[0, -1], [1, chebyshev_trace(trace, yy)]]
        used.update((i, j))
        col += 2
    return basis, K


def chebyshev_trace(trace, y):
    """q^y + q^-y as an integer, from q + q^-1 = trace."""
    a, b = 2, int(trace)  # y = 0, 1
    if y == 0:
        return a
    for _ in range(y - 1):
        a, b = b, trace * b - a
    return b


def build_dilational(n, trace, verify=True):
    """Emit a verified certificate for the dilational construction."""
    q = dilational_q(trace)
    spec, C, a, system = dilational_spec(n, q)
    checks = check_zspectral(system)
    if not all(checks.values()):
        raise CertificateFailed(f"Z-spectral system failed {[k for k, v in checks.items() if not v]}")
    sigma = validate_sigma(spec, q, 0.0, C)
    M = sigma_matrix_on_E(spec, sigma)
    targets = [q ** e for e in system.E]
    _, U = order_eigenbasis(M, targets)
    sel = [i - 1 for i in system.selector]
    L = Subspace(1.0, U[:, sel])
    # eigencoordinates on R x L: index 0 is the r-axis with exponent -1
    exponents = [-1] + [system.E[i] for i in sel]
    basis, K = block_companion_lattice(exponents, q, trace)
    gamma = Isometry(spec, sigma, 0.0, SolutionVector.zero(spec.m, 1.0))
    cert = QuotientCertificate(spec, gamma, L, LatticeData(basis, 0.0))
    cert.extras.update(
        zspectral=system.to_json(),
        exponents_C=a,
        expected_integral_matrix=K.tolist(),
        trace=int(trace),
    )
    if verify:
        _finish(cert)
    return cert


def perturbed_dilational_profile(n, q, eps):
    """f(t) = F(log t) / t^2 with F of period log q and the same Floquet data as F = (n^2 - 1)/4.

    With x = t^alpha exp(eps sin(w log t)), w = 2 pi / log q, one has
    t^2 x''/x = F(log t); the factor exp(eps sin(...)) is log q periodic in
    log t, so the multipliers of t -> q t on the solutions are unchanged.
    """
    w = 2.0 * math.pi / math.log(q)
    alpha = (1.0 + n) / 2.0  # root of alpha (alpha - 1) = (n^2 - 1)/4
    # F(s) = (alpha + eps w cos)^2 - (alpha + eps w cos) - eps w^2 sin
    c0 = alpha * alpha - alpha + 0.5 * (eps * w) ** 2
    c1 = 2.0 * alpha * eps * w - eps * w
    c2 = 0.5 * (eps * w) ** 2
    s1 = -eps * w * w
    F = FourierSeries(math.log(q), c0, [c1, c2], [s1, 0.0])
    return LogPeriodic(F, 0.0)


# -- translational ---------------------------------------------------------------------------


def build_translational(n, theta_matrix=None, seed_amp=0.3, period=1.0, theta=1.0, verify=True):
    """Emit a verified certificate for the translational construction."""
    m = n - 2
    if n < 5:
        raise ValueError("the translational construction needs n >= 5")
    theta_matrix = theta_matrix or search_integer_theta(m)
    if theta_matrix.m != m:
        raise BadPolynomial(f"Theta has size {theta_matrix.m}, expected {m}")
    if not arithmetic_condition(theta_matrix.eigenvalues):
        raise BadPolynomial("eigenvalues of Theta are of the form {l} or {l, 1/l}")
    lam = theta_matrix.eigenvalues
    # the seed takes the eigenvalue closest to 1 so the other entries need delta >= 0
    order = np.argsort(np.abs(np.log(lam)))
    B_series = [None] * m
    deltas = np.zeros(m)
    i0 = int(order[0])
    beta = -math.log(lam[i0]) / period
    b1 = FourierSeries(period, beta, [seed_amp], [0.0])
    phi = (b1.derivative() + b1 * b1).trim(1e-16)
    B_series[i0] = b1
    for i in order[1:]:
        target = abs(math.log(lam[i]))
        deltas[i] = solve_delta(phi, period, target)
        B_series[i] = positive_floquet_solution(phi, deltas[i], period, -math.log(lam[i]))
    shift = float(deltas.mean())
    f_series = phi + shift
    A = np.diag(deltas - shift)
    if np.abs(A).max() <= tl.tol(tl.EXACT):
        raise ZeroOperator("all entries of B' + B^2 differ by the same constant; A would vanish")
    profile = FourierProfile(f_series)
    try:
        spec = PlaneWaveSpec(PseudoSpace.euclidean_space(m), A, Interval.real_line(), profile)
    except ConstantProfile as exc:
        raise ConstantTrace(str(exc)) from exc
    sigma = validate_sigma(spec, 1.0, period, np.eye(m))
    B = FourierDiagonal(B_series)
    L = riccati_basis(spec, B, 0.0)
    # eigenvectors of T: T P = P diag(lam), so diag(lam) P^-1 = P^-1 T
    P = np.column_stack([_null_vector(theta_matrix.T - l * np.eye(m)) for l in lam])
    Lam = np.linalg.inv(P)
    basis = np.zeros((m + 1, m + 1))
    basis[0, 0] = theta
    basis[1:, 1:] = Lam
    gamma = Isometry(spec, sigma, 0.0, SolutionVector.zero(m, 0.0))
    cert = QuotientCertificate(spec, gamma, L, LatticeData(basis, float(theta)))
    cert.extras.update(
        charpoly=list(theta_matrix.coeffs),
        theta_eigenvalues=lam.tolist(),
        deltas=deltas.tolist(),
        riccati=B,
    )
    if verify:
        _finish(cert)
    return cert


def _null_vector(M):
    _, _, vt = np.linalg.svd(M.astype(float))
    v = vt[-1]
    return v / v[np.argmax(np.abs(v))]


def want_b_residuals(spec, B, k=256):
    """(trace range, traceless deviation from constant, size of the traceless part) on one period."""
    ts = np.linspace(0.0, B.period, k, endpoint=False)
    R = np.array([B.derivative(t) + B(t) @ B(t) for t in ts])
    m = R.shape[1]
    tr = np.trace(R, axis1=1, axis2=2) / m
    traceless = R - tr[:, None, None] * np.eye(m)
    dev = float(np.abs(traceless - traceless.mean(axis=0)).max())
    return float(tr.max() - tr.min()), dev, float(np.abs(traceless.mean(axis=0)).max())


def _finish(cert):
    rep = verify_certificate(cert)
    if not rep.passed:
        raise CertificateFailed(f"certificate failed checks {rep.failed()}", rep)
    classify_quotient(cert)
    return cert
