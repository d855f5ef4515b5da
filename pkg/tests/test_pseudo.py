import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ecsplane.errors import DegenerateGram, NotSelfAdjoint, NotTraceless, ZeroOperator
from ecsplane.pseudo import (
    PseudoSpace,
    check_operator,
    is_generic,
    numerical_rank,
    random_isometry,
    random_operator,
    signature_of,
)


def test_signature_identity():
    sig = signature_of(PseudoSpace.euclidean_space(3))
    assert (sig.p_plus, sig.p_minus) == (3, 0)
    assert sig.euclidean


@pytest.mark.parametrize("m, expected", [(2, (1, 1)), (3, (2, 1)), (4, (2, 2)), (5, (3, 2))])
def test_signature_anti_diagonal(m, expected):
    # eigenvalues of the flipped identity are +1 (ceil(m/2) times) and -1
    sig = signature_of(PseudoSpace.anti_diagonal(m))
    assert (sig.p_plus, sig.p_minus) == expected
    assert sig.semi_neutral and not sig.euclidean


def test_signature_diagonal_split():
    sig = signature_of(PseudoSpace(np.diag([1.0, -1.0, 1.0, -1.0])))
    assert (sig.p_plus, sig.p_minus) == (2, 2)
    assert sig.semi_neutral


def test_degenerate_gram_rejected():
    with pytest.raises(DegenerateGram):
        PseudoSpace(np.diag([1.0, 0.0, 1.0]))
    with pytest.raises(DegenerateGram):
        PseudoSpace(np.array([[1.0, 2.0], [0.0, 1.0]]))


def test_check_operator_rank_one_nilpotent():
    space = PseudoSpace.anti_diagonal(3)
    A = np.zeros((3, 3))
    A[0, 2] = 1.0  # A e3 = e1
    op = check_operator(space, A)
    assert op.rank == 1
    assert np.allclose(op.matrix @ op.matrix, 0)


def test_check_operator_diagonal():
    op = check_operator(PseudoSpace.euclidean_space(2), np.diag([1.0, -1.0]))
    assert op.rank == 2


def test_check_operator_errors():
    eye2 = PseudoSpace.euclidean_space(2)
    with pytest.raises(NotSelfAdjoint):
        check_operator(eye2, np.array([[0.0, 1.0], [0.0, 0.0]]))
    with pytest.raises(NotTraceless):
        check_operator(eye2, np.diag([1.0, 0.0]))
    with pytest.raises(ZeroOperator):
        check_operator(eye2, np.zeros((2, 2)))


def test_generic_distinct_eigenvalues():
    rep = is_generic(PseudoSpace.euclidean_space(3), np.diag([1.0, 0.0, -1.0]))
    assert rep.generic and rep.centralizer_dim == 0


def test_nongeneric_paired_eigenvalues():
    rep = is_generic(PseudoSpace.euclidean_space(4), np.diag([1.0, 1.0, -1.0, -1.0]))
    # so(2) x so(2) rotates inside each eigenspace
    assert not rep.generic and rep.centralizer_dim == 2


@pytest.mark.parametrize("gram", [np.eye(2), np.fliplr(np.eye(2)), np.diag([1.0, -1.0])])
def test_dimension_two_always_generic(gram, rng):
    space = PseudoSpace(gram)
    for _ in range(20):
        A = random_operator(space, rng)
        assert is_generic(space, A).generic


def _space_from_code(code, m):
    if code == 0:
        return PseudoSpace.euclidean_space(m)
    if code == 1:
        return PseudoSpace.anti_diagonal(m)
    return PseudoSpace(np.diag([(-1.0) ** i for i in range(m)]))


@settings(max_examples=60, deadline=None)
@given(m=st.integers(2, 6), code=st.integers(0, 2), seed=st.integers(0, 2**31))
def test_random_operator_accepted_with_svd_rank(m, code, seed):
    space = _space_from_code(code, m)
    A = random_operator(space, np.random.default_rng(seed))
    op = check_operator(space, A)
    s = np.linalg.svd(A, compute_uv=False)
    assert op.rank == int(np.sum(s > 1e-10 * s[0]))


@settings(max_examples=40, deadline=None)
@given(m=st.integers(2, 5), code=st.integers(0, 2), seed=st.integers(0, 2**31), pair=st.booleans())
def test_genericity_invariant_under_isometric_conjugation(m, code, seed, pair):
    rng = np.random.default_rng(seed)
    space = _space_from_code(code, m)
    A = random_operator(space, rng)
    if pair and code == 0 and m >= 4:
        A = np.diag([1.0, 1.0] + [-2.0 / (m - 2)] * (m - 2))
    C = random_isometry(space, rng)
    assert space.is_isometry(C, atol=1e-9)
    B = C @ A @ np.linalg.inv(C)
    assert is_generic(space, A).centralizer_dim == is_generic(space, B).centralizer_dim


def test_euclidean_self_adjoint_nilpotent_is_zero(rng):
    # for symmetric A, ||A^m||_2 = ||A||_2^m, so A^m = 0 forces A = 0
    for _ in range(100):
        m = int(rng.integers(2, 7))
        A = random_operator(PseudoSpace.euclidean_space(m), rng) * rng.uniform(1e-3, 1.0)
        lhs = np.linalg.norm(np.linalg.matrix_power(A, m), 2)
        rhs = np.linalg.norm(A, 2) ** m
        assert lhs == pytest.approx(rhs, rel=1e-9)


def test_indefinite_admits_nilpotent():
    # contrast: the rank-one operator on the anti-diagonal space squares to zero
    A = np.zeros((3, 3))
    A[0, 2] = 1.0
    check_operator(PseudoSpace.anti_diagonal(3), A)
    assert numerical_rank(A @ A) == 0
