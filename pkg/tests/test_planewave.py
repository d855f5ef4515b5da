"""Metric, closed-form curvature and the finite-difference oracle."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ecsplane.curvature import numeric_curvature_oracle
from ecsplane.errors import OutOfInterval, StepTooLarge
from ecsplane.planewave import (
    PlaneWaveSpec,
    Point,
    closed_form_curvature,
    kappa_at,
    metric_at,
    olszak_brute_force,
    olszak_closed,
    random_point,
    same_span,
    weyl_tensor_closed,
)
from ecsplane.profiles import FourierProfile, FourierSeries, Interval, InverseSquare
from ecsplane.pseudo import PseudoSpace


def _rank_one_A():
    A = np.zeros((3, 3))
    A[0, 2] = 1.0
    return A


@pytest.fixture(scope="module")
def spec6():
    return PlaneWaveSpec(PseudoSpace.anti_diagonal(3), _rank_one_A(), Interval.positive(), InverseSquare(6.0))


def test_kappa_examples(spec6):
    e = np.eye(3)
    assert kappa_at(spec6, 1.0, e[1]) == 6.0
    assert kappa_at(spec6, 1.0, np.zeros(3)) == 0.0
    assert kappa_at(spec6, 1.0, e[2]) == 1.0


def test_metric_layout(spec6, rng):
    g = metric_at(spec6, Point(1.0, 7.0, np.eye(3)[1]))
    assert g[0, 0] == 6.0
    for _ in range(10):
        p = random_point(spec6, rng)
        g = metric_at(spec6, p)
        # d_s is g-dual to dt / 2
        assert np.array_equal(g[1], np.array([0.5, 0, 0, 0, 0]))
        assert np.linalg.det(g) == pytest.approx(-0.25 * np.linalg.det(spec6.gram), rel=1e-12)
    assert metric_at(spec6, Point(1.3, 0.0, np.zeros(3)))[0, 0] == 0.0


def test_out_of_interval(spec6):
    with pytest.raises(OutOfInterval):
        metric_at(spec6, Point(-1.0, 0.0, np.zeros(3)))


def test_ricci_closed_value(spec6):
    rep = closed_form_curvature(spec6, Point(1.0, 0.0, np.eye(3)[1]))
    expected = np.zeros((5, 5))
    expected[0, 0] = -18.0
    assert np.array_equal(rep.ricci, expected)


def test_olszak_closed_forms(spec6):
    rep = closed_form_curvature(spec6, Point(1.0, 0.0, np.zeros(3)))
    assert rep.olszak_rank == 2 and rep.manifold_rank == 2 and rep.olszak_agree
    e1 = np.zeros((5, 1))
    e1[2] = 1.0
    ds = np.zeros((5, 1))
    ds[1] = 1.0
    assert same_span(rep.olszak_basis, np.hstack([ds, e1]))

    eu = PlaneWaveSpec(PseudoSpace.euclidean_space(3), np.diag([1.0, 0.0, -1.0]), Interval.positive(), InverseSquare(6.0))
    rep = closed_form_curvature(eu, Point(1.5, 0.2, np.ones(3)))
    assert rep.olszak_rank == 1 and rep.olszak_agree
    assert same_span(rep.olszak_basis, ds)


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**31), rank_one=st.booleans())
def test_olszak_brute_force_matches_closed(seed, rank_one):
    rng = np.random.default_rng(seed)
    if rank_one:
        space = PseudoSpace.anti_diagonal(3)
        A = _rank_one_A() * rng.uniform(0.5, 2.0)
    else:
        space = PseudoSpace.euclidean_space(3)
        d = rng.normal(size=3)
        A = np.diag(d - d.mean())
    spec = PlaneWaveSpec(space, A, Interval.positive(), InverseSquare(rng.uniform(1, 10)))
    p = random_point(spec, rng)
    basis = olszak_brute_force(metric_at(spec, p), weyl_tensor_closed(spec))
    assert same_span(basis, olszak_closed(spec))


def test_oracle_on_dilational_spec(dil_spec):
    rep = numeric_curvature_oracle(dil_spec, Point(1.0, 0.0, np.eye(3)[1]), h=1e-4)
    scale = 1.0 + rep.weyl_norm
    assert rep.ricci_residual / scale < 1e-5
    assert rep.weyl_residual / scale < 1e-5
    assert rep.nabla_weyl / scale < 1e-5
    assert rep.olszak_rank == 2


def test_oracle_flat_input(rng):
    space = PseudoSpace.anti_diagonal(3)
    flat = PlaneWaveSpec(space, np.zeros((3, 3)), Interval.real_line(), FourierProfile(FourierSeries(1.0, 0.0)), strict=False)
    rep = numeric_curvature_oracle(flat, random_point(flat, rng))
    assert rep.riemann_norm < 1e-8


def test_oracle_locally_symmetric_input(rng):
    space = PseudoSpace.euclidean_space(3)
    sym = PlaneWaveSpec(space, np.zeros((3, 3)), Interval.real_line(), FourierProfile(FourierSeries(1.0, 2.5)), strict=False)
    for _ in range(3):
        rep = numeric_curvature_oracle(sym, random_point(sym, rng))
        assert rep.nabla_riemann < 1e-5
        assert rep.riemann_norm > 1.0  # not flat


def test_ds_parallel_and_weyl_tracefree(dil_spec, tr_spec, rng):
    for spec in (dil_spec, tr_spec):
        for _ in range(5):
            rep = numeric_curvature_oracle(spec, random_point(spec, rng))
            assert rep.parallel_ds < 1e-6
            assert rep.weyl_trace < 1e-6


def test_step_too_large(dil_spec):
    with pytest.raises(StepTooLarge):
        numeric_curvature_oracle(dil_spec, Point(0.01, 0.0, np.zeros(3)), h=1e-3)
