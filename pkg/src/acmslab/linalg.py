"""Metric-aware linear algebra on a finite-dimensional real vector space.

Operators are plain component matrices relative to an arbitrary frame; a Gram
matrix carries the inner product, so nothing here assumes the frame is
orthonormal. Adjoints, skew parts, eigendecompositions and complements all
take the metric explicitly.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np
import scipy.linalg

from .config import DEFAULT_TOLERANCES
from .errors import DegenerateInputError, PreconditionError, ShapeError


def _as_matrix(a, name: str) -> np.ndarray:
    out = np.asarray(a, dtype=float)
    if out.ndim != 2 or out.shape[0] != out.shape[1]:
        raise ShapeError(f"{name} must be a square matrix, got shape {out.shape}")
    return out


def _frozen(a: np.ndarray) -> np.ndarray:
    out = np.array(a, dtype=float)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class Metric:
    """Positive definite inner product given by its Gram matrix in the frame."""

    gram: np.ndarray

    def __post_init__(self):
        g = _as_matrix(self.gram, "gram")
        asym = float(np.max(np.abs(g - g.T)))
        if asym > 1e-10 * (1.0 + float(np.max(np.abs(g)))):
            raise DegenerateInputError(f"gram matrix is not symmetric (residual {asym:.3e})")
        eigmin = float(np.min(np.linalg.eigvalsh(g)))
        if eigmin <= DEFAULT_TOLERANCES.metric_pd:
            raise DegenerateInputError(
                f"gram matrix is not positive definite (min eigenvalue {eigmin:.3e})"
            )
        object.__setattr__(self, "gram", _frozen(g))

    @property
    def dim(self) -> int:
        return self.gram.shape[0]

    @classmethod
    def euclidean(cls, dim: int) -> "Metric":
        return cls(np.eye(dim))

    @cached_property
    def inverse(self) -> np.ndarray:
        return _frozen(np.linalg.inv(self.gram))

    @cached_property
    def chol_upper(self) -> np.ndarray:
        # gram = R^T R; mapping v -> R v takes the frame to an orthonormal one
        return _frozen(np.linalg.cholesky(self.gram).T)

    def inner(self, x, y) -> float:
        return float(np.asarray(x) @ self.gram @ np.asarray(y))

    def norm(self, x) -> float:
        return float(np.sqrt(max(self.inner(x, x), 0.0)))

    def unit(self, x) -> np.ndarray:
        n = self.norm(x)
        if n == 0.0:
            raise DegenerateInputError("cannot normalize the zero vector")
        return np.asarray(x, dtype=float) / n

    def to_orthonormal(self, mat: np.ndarray) -> np.ndarray:
        """Conjugate an operator matrix into orthonormal coordinates."""
        r = self.chol_upper
        return r @ mat @ scipy.linalg.solve_triangular(r, np.eye(self.dim), lower=False)


@dataclass(frozen=True)
class LinearOp:
    """Endomorphism stored as its component matrix (columns are images)."""

    mat: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "mat", _frozen(_as_matrix(self.mat, "operator")))

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    @classmethod
    def identity(cls, dim: int) -> "LinearOp":
        return cls(np.eye(dim))

    @classmethod
    def zero(cls, dim: int) -> "LinearOp":
        return cls(np.zeros((dim, dim)))

    def apply(self, v) -> np.ndarray:
        return self.mat @ np.asarray(v, dtype=float)

    def compose(self, other: "LinearOp") -> "LinearOp":
        return LinearOp(self.mat @ other.mat)

    def __add__(self, other: "LinearOp") -> "LinearOp":
        return LinearOp(self.mat + other.mat)

    def __sub__(self, other: "LinearOp") -> "LinearOp":
        return LinearOp(self.mat - other.mat)

    def __neg__(self) -> "LinearOp":
        return LinearOp(-self.mat)

    def scaled(self, s: float) -> "LinearOp":
        return LinearOp(s * self.mat)

    @property
    def max_norm(self) -> float:
        return float(np.max(np.abs(self.mat)))


def _check_same_dim(g: Metric, *ops: LinearOp):
    for op in ops:
        if op.dim != g.dim:
            raise ShapeError(f"operator dim {op.dim} does not match metric dim {g.dim}")


def adjoint(op: LinearOp, g: Metric) -> LinearOp:
    """Metric adjoint: g(op x, y) = g(x, adjoint(op) y) for all x, y."""
    _check_same_dim(g, op)
    return LinearOp(np.linalg.solve(g.gram, op.mat.T @ g.gram))


def skew_part(op: LinearOp, g: Metric) -> LinearOp:
    """Skew component 0.5 * (op - adjoint(op)) with respect to g."""
    return LinearOp(0.5 * (op.mat - adjoint(op, g).mat))


def anticommutator(a: LinearOp, b: LinearOp) -> LinearOp:
    if a.dim != b.dim:
        raise ShapeError(f"operator dims differ: {a.dim} vs {b.dim}")
    return LinearOp(a.mat @ b.mat + b.mat @ a.mat)


def symmetric_eigen(op: LinearOp, g: Metric, *, tol: float | None = None):
    """Eigendecomposition of a g-self-adjoint operator.

    Returns a list of (eigenvalue, eigenvector) pairs, eigenvalues ascending
    with stable index tie-break, eigenvectors g-orthonormal.
    """
    _check_same_dim(g, op)
    if tol is None:
        tol = DEFAULT_TOLERANCES.self_adjoint
    gm = g.gram @ op.mat
    asym = float(np.max(np.abs(gm - gm.T)))
    if asym > tol * (1.0 + float(np.max(np.abs(gm)))):
        raise PreconditionError(
            f"operator is not g-self-adjoint (asymmetry residual {asym:.3e})"
        )
    vals, vecs = scipy.linalg.eigh(0.5 * (gm + gm.T), g.gram)
    order = np.argsort(vals, kind="stable")
    pairs = []
    eig_tol = DEFAULT_TOLERANCES.eigen_residual
    for idx in order:
        lam = float(vals[idx])
        v = vecs[:, idx]
        resid = float(np.max(np.abs(op.mat @ v - lam * v)))
        if resid > eig_tol * (1.0 + abs(lam)) * (1.0 + float(np.max(np.abs(op.mat)))):
            raise DegenerateInputError(
                f"eigenpair residual {resid:.3e} exceeds tolerance for eigenvalue {lam:.6g}"
            )
        pairs.append((lam, v))
    return pairs


def project_out(v, basis, g: Metric, *, passes: int = 2) -> np.ndarray:
    """Remove the g-projection of v onto a g-orthonormal family, twice by
    default to fight cancellation."""
    out = np.array(v, dtype=float)
    for _ in range(passes):
        for b in basis:
            out = out - g.inner(b, out) * np.asarray(b)
    return out


def gram_schmidt(vectors, g: Metric, *, rank_tol: float | None = None,
                 pivot: bool = True, require_all: bool = False):
    """Modified Gram-Schmidt with optional pivoting by largest remaining norm.

    Returns a list of g-orthonormal vectors spanning the input span. Vectors
    that project below ``rank_tol`` are dropped, or raise when ``require_all``.
    """
    if rank_tol is None:
        rank_tol = DEFAULT_TOLERANCES.rank
    pool = [np.array(v, dtype=float) for v in vectors]
    out: list[np.ndarray] = []
    while pool:
        residuals = [project_out(v, out, g) for v in pool]
        norms = [g.norm(r) for r in residuals]
        best = int(np.argmax(norms)) if pivot else 0
        if norms[best] < rank_tol:
            if require_all:
                raise DegenerateInputError(
                    f"input vectors are linearly dependent (residual norm {norms[best]:.3e})"
                )
            break
        out.append(residuals[best] / norms[best])
        pool.pop(best)
    return out


def orthonormal_complement(vectors, g: Metric, *, rank_tol: float | None = None):
    """g-orthonormal basis of the orthogonal complement of span(vectors)."""
    if rank_tol is None:
        rank_tol = DEFAULT_TOLERANCES.rank
    vectors = [np.asarray(v, dtype=float) for v in vectors]
    if not vectors:
        raise ShapeError("need at least one vector to complement")
    dim = g.dim
    for v in vectors:
        if v.shape != (dim,):
            raise ShapeError(f"vector shape {v.shape} does not match metric dim {dim}")
    base = gram_schmidt(vectors, g, rank_tol=rank_tol, require_all=True)
    frame = [np.eye(dim)[i] for i in range(dim)]
    extended = gram_schmidt(list(vectors) + frame, g, rank_tol=rank_tol)
    comp = extended[len(base):]
    if len(comp) != dim - len(base):
        raise DegenerateInputError(
            f"complement has unexpected dimension {len(comp)}, expected {dim - len(base)}"
        )
    return comp


def vector_coordinates(v, basis, g: Metric) -> np.ndarray:
    """Coordinates of v in a g-orthonormal basis."""
    return np.array([g.inner(b, v) for b in basis])


def operator_in_basis(op: LinearOp, basis, g: Metric) -> np.ndarray:
    """Component matrix of op restricted to the span of a g-orthonormal basis."""
    k = len(basis)
    out = np.empty((k, k))
    for j, b in enumerate(basis):
        image = op.apply(b)
        for i, a in enumerate(basis):
            out[i, j] = g.inner(a, image)
    return out


def g_singular_values(op: LinearOp, g: Metric) -> np.ndarray:
    """Singular values of the operator with respect to the g inner product."""
    _check_same_dim(g, op)
    return np.linalg.svd(g.to_orthonormal(op.mat), compute_uv=False)


def operator_g_norm(op: LinearOp, g: Metric) -> float:
    return float(g_singular_values(op, g)[0])
