"""Linear algebra on a pseudo-Euclidean space (V, <.,.>).

The inner product is carried explicitly as a Gram matrix in a caller-chosen
basis; nothing is normalized to diag(+-1).
"""

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from . import tolerances as tl
from .errors import DegenerateGram, NotSelfAdjoint, NotTraceless, ZeroOperator


@dataclass(frozen=True)
class Signature:
    p_plus: int
    p_minus: int

    @property
    def semi_neutral(self):
        return abs(self.p_plus - self.p_minus) <= 1

    @property
    def euclidean(self):
        return self.p_minus == 0 or self.p_plus == 0


@dataclass(frozen=True, eq=False)
class PseudoSpace:
    gram: np.ndarray

    def __post_init__(self):
        g = np.array(self.gram, dtype=float)
        if g.ndim != 2 or g.shape[0] != g.shape[1] or g.shape[0] == 0:
            raise DegenerateGram(f"gram must be a nonempty square matrix, got shape {g.shape}")
        if not np.allclose(g, g.T, rtol=0, atol=tl.tol(tl.EXACT) * max(1.0, np.abs(g).max())):
            raise DegenerateGram("gram is not symmetric")
        g = 0.5 * (g + g.T)
        m = g.shape[0]
        norm = np.linalg.norm(g, 2)
        if abs(np.linalg.det(g)) <= tl.tol(tl.EXACT) * norm**m:
            raise DegenerateGram("gram is degenerate")
        g.setflags(write=False)
        object.__setattr__(self, "gram", g)
        object.__setattr__(self, "gram_inv", np.linalg.inv(g))

    @property
    def dim(self):
        return self.gram.shape[0]

    def inner(self, x, y):
        return float(np.asarray(x) @ self.gram @ np.asarray(y))

    def adjoint(self, M):
        """Adjoint of ``M`` with respect to the inner product."""
        return self.gram_inv @ np.asarray(M).T @ self.gram

    def is_isometry(self, C, atol=None):
        atol = tl.tol(tl.GROUP) if atol is None else atol
        C = np.asarray(C, dtype=float)
        return np.abs(C.T @ self.gram @ C - self.gram).max() <= atol * max(1.0, np.abs(self.gram).max())

    @classmethod
    def euclidean_space(cls, m):
        return cls(np.eye(m))

    @classmethod
    def anti_diagonal(cls, m, eps=1.0):
        """Basis with <e_i, e_{m+1-i}> = eps and all other products zero."""
        return cls(eps * np.fliplr(np.eye(m)))


def signature_of(space):
    eig = np.linalg.eigvalsh(space.gram)
    cut = tl.tol(tl.RANK) * np.abs(eig).max()
    if np.any(np.abs(eig) <= cut):
        raise DegenerateGram("gram has an eigenvalue below tolerance")
    return Signature(int(np.sum(eig > 0)), int(np.sum(eig < 0)))


def numerical_rank(M, rel=None):
    rel = tl.tol(tl.RANK) if rel is None else rel
    s = np.linalg.svd(np.asarray(M, dtype=float), compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.sum(s > rel * s[0]))


@dataclass(frozen=True, eq=False)
class SymOperator:
    """A nonzero traceless self-adjoint operator on a :class:`PseudoSpace`."""

    matrix: np.ndarray
    rank: int = field(default=0)

    @property
    def dim(self):
        return self.matrix.shape[0]


def check_operator(space, A, require_nonzero=True):
    """Validate ``A`` as a nonzero traceless self-adjoint operator.

    Raises the specific error for the first failed invariant. With
    ``require_nonzero=False`` the zero operator is let through (used by the
    curvature oracle on flat and locally symmetric control inputs).
    """
    A = np.array(A, dtype=float)
    m = space.dim
    if A.shape != (m, m):
        raise NotSelfAdjoint(f"operator has shape {A.shape}, expected {(m, m)}")
    norm = np.abs(A).max()
    if norm == 0.0:
        if require_nonzero:
            raise ZeroOperator("A = 0 does not define an ECS plane wave")
        A.setflags(write=False)
        return SymOperator(A, 0)
    gA = space.gram @ A
    if np.abs(gA - gA.T).max() > tl.tol(tl.EXACT) * max(1.0, np.abs(gA).max()) * m:
        raise NotSelfAdjoint("gram @ A is not symmetric")
    if abs(np.trace(A)) > tl.tol(tl.EXACT) * norm * m:
        raise NotTraceless(f"trace(A) = {np.trace(A):.3e}")
    A.setflags(write=False)
    return SymOperator(A, numerical_rank(A))


def skew_adjoint_basis(space):
    """Basis of so(V): matrices P with gram @ P antisymmetric."""
    m = space.dim
    basis = []
    for i in range(m):
        for j in range(i + 1, m):
            K = np.zeros((m, m))
            K[i, j], K[j, i] = 1.0, -1.0
            basis.append(space.gram_inv @ K)
    return basis


@dataclass(frozen=True)
class GenericityReport:
    generic: bool
    centralizer_dim: int


def is_generic(space, A):
    """Decide genericity of ``A`` at the Lie algebra level.

    The isometries commuting with A form a finite group exactly when no
    nonzero skew-adjoint P commutes with A.
    """
    A = A.matrix if isinstance(A, SymOperator) else np.asarray(A, dtype=float)
    basis = skew_adjoint_basis(space)
    if not basis:
        return GenericityReport(True, 0)
    cols = [(P @ A - A @ P).ravel() for P in basis]
    M = np.column_stack(cols)
    dim = len(basis) - numerical_rank(M)
    return GenericityReport(dim == 0, dim)


def random_isometry(space, rng, scale=0.5):
    """An isometry of the space obtained by exponentiating a random element of so(V)."""
    basis = skew_adjoint_basis(space)
    if not basis:
        return np.eye(space.dim)
    coeffs = rng.normal(scale=scale, size=len(basis))
    P = sum(c * B for c, B in zip(coeffs, basis))
    return scipy.linalg.expm(P)


def random_operator(space, rng):
    """A random traceless self-adjoint operator."""
    M = rng.normal(size=(space.dim, space.dim))
    A = 0.5 * (M + space.adjoint(M))
    return A - np.trace(A) / space.dim * np.eye(space.dim)
