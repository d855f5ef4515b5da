"""G(sigma), certificates and their classification."""

import copy

import numpy as np
import pytest

from ecsplane.errors import UnclassifiableSigma
from ecsplane.isometry import Isometry, apply_isometry, compose, conjugate_on_H, heisenberg, isometry_distance
from ecsplane.planewave import Point, random_point
from ecsplane.quotient import (
    CHECK_NAMES,
    GSigmaElement,
    LatticeData,
    QuotientCertificate,
    c_gamma_matrix,
    classify_quotient,
    g_sigma_act,
    g_sigma_compose,
    g_sigma_to_isometry,
    heisenberg_lattice_element,
    heisenberg_product,
    leaf_chart,
    verify_certificate,
)
from ecsplane.symplectic import SolutionVector, Subspace, omega

from conftest import Q3


def _element(rng, k=None, base=1.0):
    k = int(rng.integers(-2, 3)) if k is None else k
    return GSigmaElement(k, float(rng.normal()), SolutionVector.from_data(base, 0.5 * rng.normal(size=6)))


def test_g_sigma_trivial_product(dil_spec, dil_sigma):
    z = SolutionVector.zero(3, 1.0)
    out = g_sigma_compose(dil_spec, dil_sigma, GSigmaElement(0, 1.5, z), GSigmaElement(0, -0.25, z))
    assert out.k == 0 and out.r == 1.25 and out.u.is_zero()


def test_g_sigma_homomorphism(dil_spec, dil_sigma, rng):
    for _ in range(20):
        a, b = _element(rng), _element(rng)
        lhs = g_sigma_to_isometry(dil_spec, dil_sigma, g_sigma_compose(dil_spec, dil_sigma, a, b))
        rhs = compose(g_sigma_to_isometry(dil_spec, dil_sigma, a), g_sigma_to_isometry(dil_spec, dil_sigma, b))
        assert isometry_distance(dil_spec, lhs, rhs) < 1e-9 * max(1.0, abs(rhs.r))


def test_g_sigma_action_consistency(dil_spec, dil_sigma, rng):
    for _ in range(20):
        a = _element(rng, k=int(rng.integers(-1, 2)))
        p = random_point(dil_spec, rng, t_range=(0.8, 1.3))
        lhs = g_sigma_act(dil_spec, dil_sigma, a, p).coords()
        rhs = apply_isometry(dil_spec, g_sigma_to_isometry(dil_spec, dil_sigma, a), p).coords()
        assert np.abs(lhs - rhs).max() < 1e-8


def test_leaf_chart_is_orbit_map(dil_spec, rng):
    u = SolutionVector.from_data(1.0, rng.normal(size=6))
    for t in (0.6, 1.0, 2.2):
        chart = leaf_chart(dil_spec, t, 0.7, u).coords()
        orbit = apply_isometry(dil_spec, heisenberg(dil_spec, 0.7, u), Point(t, 0.0, np.zeros(3))).coords()
        assert np.abs(chart - orbit).max() < 1e-12


def test_heisenberg_product(dil_spec, rng):
    u, w = (SolutionVector.from_data(1.0, rng.normal(size=6)) for _ in range(2))
    r, uw = heisenberg_product(dil_spec, (1.0, u), (2.0, w))
    assert r == pytest.approx(3.0 - omega(dil_spec, u, w))
    assert np.allclose(uw.data, u.data + w.data)


def test_dilational_certificate(dil_cert):
    rep = verify_certificate(dil_cert)
    assert rep.passed, rep.failed()
    assert [c.name for c in rep.checks] == list(CHECK_NAMES)
    assert dil_cert.extras["theta_computed"] == 0.0
    assert dil_cert.extras["lagrangian"] is True
    cls = classify_quotient(dil_cert)
    assert cls.to_json() == {"type": "dilational", "complete": False, "fiber": "torus", "ratio": pytest.approx(Q3)}


def test_translational_certificate(tr_cert):
    rep = verify_certificate(tr_cert)
    assert rep.passed, rep.failed()
    assert tr_cert.extras["theta_computed"] == pytest.approx(1.0)
    cls = classify_quotient(tr_cert)
    assert cls.to_json() == {"type": "translational", "complete": True, "fiber": "torus", "period": 1.0}


def test_dilational_theta_forced_zero(dil_cert):
    # a lattice vector on the r-axis would be an eigenvector of the integral matrix with eigenvalue 1/q
    K = np.array(dil_cert.extras["integral_matrix"])
    x = np.linalg.eigvals(K)
    assert np.min(np.abs(x - 1 / Q3)) < 1e-9
    assert not np.any(np.isclose(np.abs(x), 1.0))


def test_c_gamma_spectrum(dil_cert):
    K = c_gamma_matrix(dil_cert.spec, dil_cert.gamma, dil_cert.L)
    ev = np.sort(np.linalg.eigvals(K).real)
    assert np.allclose(ev, np.sort(Q3 ** np.array([-3.0, -1, 1, 3])), rtol=1e-6)


def _with_lattice(cert, basis=None, theta=None):
    lat = LatticeData(
        np.array(cert.lattice.basis if basis is None else basis, dtype=float),
        cert.lattice.theta if theta is None else theta,
    )
    return QuotientCertificate(cert.spec, cert.gamma, cert.L, lat)


def test_corrupt_lattice_entry(dil_cert, tr_cert):
    for cert in (dil_cert, tr_cert):
        basis = np.array(cert.lattice.basis)
        basis[1, 1] += 1e-3
        rep = verify_certificate(_with_lattice(cert, basis))
        assert not rep["3_lattice_invariant"].passed
        assert rep["3_lattice_invariant"].residual > 1e-6


def test_corrupt_theta(tr_cert, dil_cert):
    assert "4_theta" in verify_certificate(_with_lattice(tr_cert, theta=1.001)).failed()
    assert "4_theta" in verify_certificate(_with_lattice(dil_cert, theta=1e-3)).failed()


def test_singular_lattice(dil_cert):
    basis = np.array(dil_cert.lattice.basis)
    basis[:, 1] = basis[:, 0]
    assert "2_full_rank_lattice" in verify_certificate(_with_lattice(dil_cert, basis)).failed()


def test_non_invariant_L(dil_cert):
    L = Subspace(1.0, dil_cert.L.basis + 1e-3 * np.eye(6, 3))
    rep = verify_certificate(QuotientCertificate(dil_cert.spec, dil_cert.gamma, L, dil_cert.lattice))
    assert not rep["1_sigma_invariant"].passed


def test_invalid_sigma_reported(dil_cert):
    sig = dil_cert.gamma.sigma
    bad = copy.copy(sig)
    object.__setattr__(bad, "q", sig.q * 1.001)
    gamma = Isometry(dil_cert.spec, bad, 0.0, dil_cert.gamma.u)
    rep = verify_certificate(QuotientCertificate(dil_cert.spec, gamma, dil_cert.L, dil_cert.lattice))
    assert not rep["0_sigma_valid"].passed


def test_nilmanifold_classification(tr_cert):
    # synthetic: a non-Lagrangian L with theta > 0 (no verification claimed)
    M = np.array([[0.0, 1.0, 0.0], [0.0, 0.0, 0.0], [0.0, 0.0, 0.0]])
    L = Subspace(0.0, np.vstack([np.eye(3), M]))
    cert = QuotientCertificate(tr_cert.spec, tr_cert.gamma, L, tr_cert.lattice)
    assert classify_quotient(cert).fiber == "nilmanifold"


def test_unclassifiable(tr_cert):
    sig = copy.copy(tr_cert.gamma.sigma)
    object.__setattr__(sig, "p", 0.0)
    cert = QuotientCertificate(tr_cert.spec, Isometry(tr_cert.spec, sig, 0.0, tr_cert.gamma.u), tr_cert.L, tr_cert.lattice)
    with pytest.raises(UnclassifiableSigma):
        classify_quotient(cert)


def test_type_matches_abs_q(dil_cert, tr_cert):
    for cert in (dil_cert, tr_cert):
        cls = classify_quotient(cert)
        assert (cls.type == "translational") == (abs(cert.gamma.sigma.q) == 1.0)


def test_gamma_conjugation_maps_lattice_to_itself(tr_cert):
    # C_gamma maps lattice element z to the lattice element K z
    spec = tr_cert.spec
    K = np.array(tr_cert.extras["integral_matrix"])
    for z in (np.array([1, 0, 0, 0]), np.array([0, 1, -1, 2])):
        h = heisenberg_lattice_element(spec, tr_cert, z)
        lhs = conjugate_on_H(tr_cert.gamma, h)
        rhs = heisenberg_lattice_element(spec, tr_cert, K @ z)
        assert isometry_distance(spec, lhs, rhs) < 1e-6
