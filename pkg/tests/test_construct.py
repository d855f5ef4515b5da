"""Z-spectral systems, integer Theta matrices, Floquet data and the two build pipelines."""

import math

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from ecsplane.construct import (
    arithmetic_condition,
    block_companion_lattice,
    build_dilational,
    chebyshev_trace,
    companion,
    dilational_q,
    dilational_spec,
    perturbed_dilational_profile,
    search_integer_theta,
    theta_from_charpoly,
    want_b_residuals,
)
from ecsplane.errors import BadPolynomial, ComplexMultipliers, NoSystemFound
from ecsplane.floquet import floquet_exponent, monodromy, positive_floquet_solution, solve_delta
from ecsplane.isometry import validate_sigma
from ecsplane.profiles import FourierSeries
from ecsplane.symplectic import sigma_matrix_on_E
from ecsplane.zspectral import ZSpectralSystem, check_zspectral, search_zspectral

from conftest import Q3

# -- Z-spectral systems -------------------------------------------------------------


def test_zspectral_m3():
    sys = search_zspectral(3, 5)
    assert sys.E == (3, -2, 2, -3, 1, -4)
    assert sys.J == (1, 0, 0, 1, 1, 0)
    assert sys.selector == (1, 4, 5)
    assert sys.Y == [-3, -1, 1, 3]
    assert all(check_zspectral(sys).values())


def test_zspectral_parity_obstruction():
    with pytest.raises(NoSystemFound):
        search_zspectral(3, 4)


@pytest.mark.parametrize("m", [3, 5, 7])
def test_zspectral_search_output_verifies(m):
    sys = search_zspectral(m, m + 2)
    assert all(check_zspectral(sys).values()), check_zspectral(sys)


def test_zspectral_verifier_catches_edits():
    good = search_zspectral(3, 5)
    bad_J = ZSpectralSystem(3, 5, good.E, (0, 1, 0, 1, 1, 0))
    assert not check_zspectral(bad_J)["ii"]
    bad_E = ZSpectralSystem(3, 5, (3, -2, 2, -3, 1, -1), good.J)
    assert not check_zspectral(bad_E)["E_avoids_minus_one"]


# -- integer Theta ------------------------------------------------------------------


def test_theta_search_m3():
    th = search_integer_theta(3)
    assert th.coeffs == (-1, 5, -6, 1)
    assert round(np.linalg.det(th.T)) == 1
    lo = [0.3, 0.5, 5.0]
    hi = [0.5, 1.0, 6.0]
    for r, a, b in zip(th.eigenvalues, lo, hi):
        assert a < r < b
    assert np.allclose(np.sort(np.linalg.eigvals(th.T).real), th.eigenvalues, rtol=1e-9)


@pytest.mark.parametrize(
    "coeffs, why",
    [((-1, 3, -3, 1), "repeated"), ((2, 1, -4, 1), "constant term"), ((1, 0, 0, 1), "real"), ((1, 1, 2), "monic")],
)
def test_theta_rejections(coeffs, why):
    with pytest.raises(BadPolynomial):
        theta_from_charpoly(coeffs)


def test_companion_determinant():
    for coeffs in [(-1, 5, -6, 1), (1, -4, 6, -4, 1), (-1, 2, 1)]:
        m = len(coeffs) - 1
        det = int(sympy.Matrix(companion(coeffs).tolist()).det())
        assert det == (-1) ** m * coeffs[0]


@settings(max_examples=40, deadline=None)
@given(roots=st.lists(st.integers(1, 6), min_size=2, max_size=2, unique=True))
def test_theta_roots_match_numpy(roots):
    # integer cubics with constant term -1; some have complex or negative roots
    a, b = roots
    coeffs = (-1, a + b, -(a + b + 2), 1)
    r = np.roots(list(reversed(coeffs)))
    if np.any(np.abs(r.imag) > 1e-9) or np.any(r.real <= 0):
        with pytest.raises(BadPolynomial):
            theta_from_charpoly(coeffs)
        return
    try:
        th = theta_from_charpoly(coeffs)
    except BadPolynomial:
        return
    assert np.allclose(th.eigenvalues, np.sort(r.real), rtol=1e-9)


def test_arithmetic_condition():
    assert not arithmetic_condition([2.0, 2.0, 2.0])
    assert not arithmetic_condition([2.0, 0.5, 0.5])
    assert arithmetic_condition([0.3, 0.6, 5.0])


# -- dilational pieces --------------------------------------------------------------


@pytest.mark.parametrize("trace", [3, 4, 7])
def test_chebyshev_trace(trace):
    q = dilational_q(trace)
    for y in range(6):
        assert chebyshev_trace(trace, y) == round(q**y + q**-y)


def test_block_companion_lattice():
    q = Q3
    basis, K = block_companion_lattice([-1, 3, 1, -3], q, 3)
    D = np.diag(q ** np.array([-1.0, 3, 1, -3]))
    assert np.abs(np.linalg.solve(basis, D @ basis) - K).max() < 1e-9
    x = sympy.Symbol("x")
    cp = sympy.Matrix(K.tolist()).charpoly(x).as_expr()
    assert sympy.expand(cp - (x**2 - 3 * x + 1) * (x**2 - 18 * x + 1)) == 0


def test_dilational_C_conjugation():
    spec, C, a, _ = dilational_spec(5, Q3)
    assert a == [1, 0, -1]
    A = spec.A.matrix
    assert np.abs(C @ A @ np.linalg.inv(C) - Q3**2 * A).max() < 1e-12
    # exponent level: C A C^-1 e_m = q^{a(1) - a(m)} e_1 and a(1) - a(m) = 2
    assert a[0] - a[-1] == 2


def test_scalar_modes_pullback():
    # t^3 and t^-2 solve y'' = 6 y / t^2; on the e2 line C acts by 1, so
    # (sigma y)(t) = y(t / q) = q^-alpha y(t) gives eigenvalues q^-3 and q^2
    for alpha in (3.0, -2.0):
        assert alpha * (alpha - 1) == 6.0
    spec, C, _, _ = dilational_spec(5, Q3)
    sig = validate_sigma(spec, Q3, 0.0, C)
    ev = np.linalg.eigvals(sigma_matrix_on_E(spec, sig))
    for mu in (Q3**2, Q3**-3):
        assert np.min(np.abs(ev - mu) / mu) < 1e-6


@pytest.mark.parametrize("n, trace", [(7, 4)])
def test_build_dilational_higher(n, trace):
    cert = build_dilational(n, trace)
    assert cert.checks.passed
    assert cert.classification.type == "dilational"
    assert cert.extras["theta_computed"] == 0.0


def test_build_dilational_rejects_even():
    with pytest.raises(ValueError):
        build_dilational(6, 3)


@pytest.mark.parametrize("eps", [0.05, 0.2])
def test_perturbed_profile_solves_and_keeps_spectrum(eps):
    n, q = 5, Q3
    prof = perturbed_dilational_profile(n, q, eps)
    w = 2 * math.pi / math.log(q)
    alpha = (n + 1) / 2
    x = lambda t: t**alpha * np.exp(eps * np.sin(w * np.log(t)))  # noqa: E731
    h = 1e-4
    for t in (0.7, 1.3, 2.9):
        ddx = (x(t + h) - 2 * x(t) + x(t - h)) / h**2
        assert ddx / x(t) == pytest.approx(float(prof.f(t)), rel=1e-6)
    spec, C, _, _ = dilational_spec(n, q, profile=prof)
    sig = validate_sigma(spec, q, 0.0, C)
    ev = np.sort(np.linalg.eigvals(sigma_matrix_on_E(spec, sig)).real)
    want = np.sort(q ** np.array([3.0, -2, 2, -3, 1, -4]))
    assert np.abs(ev / want - 1).max() < 1e-6


# -- Floquet ------------------------------------------------------------------------


def test_floquet_constant_potential():
    zero = FourierSeries(1.0, 0.0)
    c, p = 1.3, 1.0
    data = floquet_exponent(zero, c * c, p)
    assert np.allclose(np.sort(data.multipliers.real), [math.exp(-c * p), math.exp(c * p)], rtol=1e-9)
    assert np.allclose(data.log_integrals, [-c * p, c * p], rtol=1e-9)


def test_floquet_wronskian():
    phi = FourierSeries(1.0, 0.2, [0.7, -0.3], [0.1, 0.0])
    for delta in (0.5, 3.0, 10.0):
        M = monodromy(phi, delta, 1.0)
        assert abs(np.linalg.det(M) - 1.0) < 1e-8
        data = floquet_exponent(phi, delta, 1.0)
        assert abs(np.prod(data.multipliers.real) - 1.0) < 1e-8


def test_floquet_gap():
    zero = FourierSeries(1.0, 0.0)
    with pytest.raises(ComplexMultipliers):
        floquet_exponent(zero, -4.0, 1.0)


def test_solve_delta_and_solution():
    b1 = FourierSeries(1.0, 0.2, [0.3], [0.0])
    phi = b1.derivative() + b1 * b1
    target = 1.1
    d = solve_delta(phi, 1.0, target)
    data = floquet_exponent(phi, d, 1.0)
    assert np.abs(np.abs(data.log_integrals) - target).max() < 1e-9
    b = positive_floquet_solution(phi, d, 1.0, -target)
    assert b.integral_over_period() == pytest.approx(-target, abs=1e-9)
    ts = np.linspace(0, 1, 50)
    assert np.abs(b.derivative()(ts) + b(ts) ** 2 - phi(ts) - d).max() < 1e-8


# -- translational ------------------------------------------------------------------


def test_translational_want_b(tr_cert, theta3):
    B = tr_cert.extras["riccati"]
    trace_range, dev, size = want_b_residuals(tr_cert.spec, B)
    assert trace_range > 1e-2
    assert dev < 1e-6
    assert size > 1e-3
    mono = np.array([math.exp(-s.integral_over_period()) for s in B.series])
    assert np.allclose(np.sort(mono), theta3.eigenvalues, rtol=1e-6)


def test_translational_integral_matrix(tr_cert, theta3):
    K = np.array(tr_cert.extras["integral_matrix"])
    want = np.zeros((4, 4), dtype=int)
    want[0, 0] = 1
    want[1:, 1:] = theta3.T
    assert np.array_equal(K, want)
