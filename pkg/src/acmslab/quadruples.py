"""Constructive dimension constraints for operators anticommuting with a
complex structure.

Two facts are made computable here. First, for any nonzero A with
AJ + JA = 0 there is a vector Y whose triple {Y, JY, AY} is independent,
plus an orthogonal witness Z with <Z, JAY> nonzero. Second, when A is also
g-skew and nonsingular, the space splits into orthogonal quadruples
{X, JX, AX, JAX} built from eigenvectors of A*A, which forces the dimension
to be divisible by four. The companion campaign helpers drive randomized
checks of both facts, including the contrapositive (in dimensions not
divisible by four every skew anticommuting operator is singular).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .config import DEFAULT_TOLERANCES, Tolerances
from .errors import DegenerateInputError, PreconditionError, SearchError, ShapeError
from .linalg import (LinearOp, Metric, adjoint, g_singular_values, gram_schmidt,
                     project_out, symmetric_eigen)
from .report import Check, VerificationReport


@dataclass(frozen=True)
class ComplexStructuredSpace:
    """Even-dimensional space with a g-isometric complex structure J."""

    j: LinearOp
    g: Metric

    def __post_init__(self):
        dim = self.g.dim
        if dim % 2 != 0:
            raise ShapeError(f"complex structure needs even dimension, got {dim}")
        if self.j.dim != dim:
            raise ShapeError(f"J dim {self.j.dim} does not match metric dim {dim}")
        jm = self.j.mat
        square = float(np.max(np.abs(jm @ jm + np.eye(dim))))
        if square > DEFAULT_TOLERANCES.acms_exact:
            raise PreconditionError(f"J^2 + I residual {square:.3e} too large")
        iso = float(np.max(np.abs(jm.T @ self.g.gram @ jm - self.g.gram)))
        if iso > DEFAULT_TOLERANCES.acms_exact * (1.0 + float(np.max(np.abs(self.g.gram)))):
            raise PreconditionError(f"J is not a g-isometry (residual {iso:.3e})")

    @property
    def dim(self) -> int:
        return self.g.dim

    @classmethod
    def standard(cls, dim: int) -> "ComplexStructuredSpace":
        """Euclidean metric with the block complex structure e_i -> e_{m+i}."""
        if dim % 2 != 0:
            raise ShapeError(f"complex structure needs even dimension, got {dim}")
        m = dim // 2
        jm = np.zeros((dim, dim))
        jm[m:, :m] = np.eye(m)
        jm[:m, m:] = -np.eye(m)
        return cls(LinearOp(jm), Metric.euclidean(dim))


@dataclass(frozen=True)
class Quadruple:
    """One orthogonal block (X, JX, AX, JAX) tied to an eigenvalue of A^2."""

    vectors: tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]
    eigenvalue: float


def _check_anticommutes(space: ComplexStructuredSpace, a: LinearOp, tol: float):
    resid = float(np.max(np.abs(a.mat @ space.j.mat + space.j.mat @ a.mat)))
    if resid > tol * (1.0 + a.max_norm):
        raise PreconditionError(f"operator does not anticommute with J (residual {resid:.3e})")


def _check_skew(space: ComplexStructuredSpace, a: LinearOp, tol: float):
    resid = (a + adjoint(a, space.g)).max_norm
    if resid > tol * (1.0 + a.max_norm):
        raise PreconditionError(f"operator is not g-skew (residual {resid:.3e})")


def _normalized_triple_gram_det(space: ComplexStructuredSpace, a: LinearOp, y) -> float:
    g = space.g
    vecs = []
    for v in (np.asarray(y, float), space.j.apply(y), a.apply(y)):
        n = g.norm(v)
        if n < 1e-14:
            return 0.0
        vecs.append(v / n)
    gram = np.array([[g.inner(u, v) for v in vecs] for u in vecs])
    return float(np.linalg.det(gram))


def _candidate_vectors(space: ComplexStructuredSpace, seed: int, max_random: int):
    dim = space.dim
    eye = np.eye(dim)
    for i in range(dim):
        yield eye[i]
    for i in range(dim):
        for j in range(i + 1, dim):
            yield eye[i] + eye[j]
    for i in range(dim):
        for j in range(dim):
            if i != j:
                yield eye[i] + space.j.apply(eye[j])
    rng = np.random.default_rng(seed)
    for _ in range(max_random):
        yield rng.standard_normal(dim)


def find_generic_vector(space: ComplexStructuredSpace, a: LinearOp,
                        *, tol: float | None = None, seed: int = 0,
                        max_random: int = 200) -> np.ndarray:
    """First vector (in a deterministic scan order) whose triple
    {Y, JY, AY} has normalized Gram determinant above the rank tolerance.

    Scans the coordinate frame, then pairwise sums, then J-mixed sums, then
    seeded random draws. Returns the g-unit representative.
    """
    if tol is None:
        tol = DEFAULT_TOLERANCES.rank
    if a.dim != space.dim:
        raise ShapeError(f"operator dim {a.dim} does not match space dim {space.dim}")
    if a.max_norm == 0.0:
        raise PreconditionError("operator is identically zero")
    _check_anticommutes(space, a, DEFAULT_TOLERANCES.acms_exact)
    for candidate in _candidate_vectors(space, seed, max_random):
        if _normalized_triple_gram_det(space, a, candidate) > tol:
            return space.g.unit(candidate)
    raise SearchError("no generic vector found; operator may be numerically degenerate")


def find_orthogonal_witness(space: ComplexStructuredSpace, a: LinearOp, y,
                            *, tol: float | None = None) -> np.ndarray:
    """Unit Z orthogonal to span{Y, JY, AY} with <Z, JAY> above threshold.

    The component of JAY orthogonal to the triple can never vanish when the
    triple is independent, so the projection of JAY itself serves as witness.
    """
    if tol is None:
        tol = DEFAULT_TOLERANCES.witness
    g = space.g
    triple = [np.asarray(y, float), space.j.apply(y), a.apply(y)]
    if _normalized_triple_gram_det(space, a, y) <= DEFAULT_TOLERANCES.rank:
        raise DegenerateInputError("triple {Y, JY, AY} is numerically dependent")
    onb = gram_schmidt(triple, g, rank_tol=DEFAULT_TOLERANCES.rank, require_all=True)
    jay = space.j.apply(a.apply(y))
    residue = project_out(jay, onb, g)
    norm = g.norm(residue)
    if norm < tol:
        raise SearchError(
            f"witness overlap {norm:.3e} below threshold; JAY almost lies in the triple span"
        )
    z = residue / norm
    overlap = abs(g.inner(z, jay))
    if overlap < tol:
        raise SearchError(f"witness overlap {overlap:.3e} below threshold")
    return z


def quadruple_decomposition(space: ComplexStructuredSpace, a: LinearOp,
                            *, tol: Tolerances = DEFAULT_TOLERANCES) -> list[Quadruple]:
    """Split the space into g-orthogonal quadruples (X, JX, AX, JAX).

    Requires A g-skew, anticommuting with J and nonsingular; under these
    hypotheses each eigenspace of A^2 is J- and A-invariant, and picking
    eigenvectors with orthogonal deflation yields dim/4 blocks. A dimension
    not divisible by four therefore certifies that no such operator exists.
    """
    dim = space.dim
    if a.dim != dim:
        raise ShapeError(f"operator dim {a.dim} does not match space dim {dim}")
    _check_anticommutes(space, a, tol.acms_exact)
    _check_skew(space, a, tol.acms_exact)
    sigma_min = float(g_singular_values(a, space.g)[-1])
    if sigma_min <= tol.singular:
        raise PreconditionError(
            f"operator is numerically singular (sigma_min {sigma_min:.3e}); "
            "the decomposition needs a nonsingular operator"
        )
    if dim % 4 != 0:
        raise DegenerateInputError(
            f"dimension {dim} is not divisible by 4, so no nonsingular skew "
            "anticommuting operator exists; refusing to decompose"
        )
    g = space.g
    squared = a.compose(a)
    pairs = symmetric_eigen(squared, g)
    used: list[np.ndarray] = []
    quads: list[Quadruple] = []
    a_scale = 1.0 + a.max_norm ** 2
    while len(quads) < dim // 4:
        residues = [project_out(v, used, g) for _, v in pairs]
        norms = [g.norm(r) for r in residues]
        best = int(np.argmax(norms))
        if norms[best] < 1e-6:
            raise SearchError(
                f"deflation pivot collapsed at quadruple {len(quads) + 1}; "
                "eigenvectors no longer span the remaining space"
            )
        x = residues[best] / norms[best]
        lam = g.inner(squared.apply(x), x)
        block = (x, space.j.apply(x), a.apply(x), space.j.apply(a.apply(x)))
        normalized = []
        for v in block:
            norm = g.norm(v)
            if norm < tol.quad:
                raise DegenerateInputError("quadruple vector collapsed to zero")
            normalized.append(v / norm)
            eig_resid = g.norm(squared.apply(v) - lam * v) / norm
            if eig_resid > tol.quad * (1.0 + abs(lam)) * a_scale:
                raise DegenerateInputError(
                    f"quadruple member drifts off the A^2 eigenspace (residual {eig_resid:.3e})"
                )
        for p in range(4):
            for q in range(p + 1, 4):
                inner = abs(g.inner(normalized[p], normalized[q]))
                if inner > tol.quad:
                    raise DegenerateInputError(
                        f"quadruple members are not orthogonal (inner {inner:.3e})"
                    )
        used.extend(normalized)
        quads.append(Quadruple(tuple(block), float(lam)))
    gram = np.array([[g.inner(u, v) for v in used] for u in used])
    off = float(np.max(np.abs(gram - np.diag(np.diag(gram)))))
    if off > tol.quad:
        raise DegenerateInputError(f"global quadruple Gram off-diagonal {off:.3e}")
    return quads


def check_mod4(space: ComplexStructuredSpace, a: LinearOp,
               *, tol: Tolerances = DEFAULT_TOLERANCES) -> VerificationReport:
    """Reconcile one skew anticommuting operator with the mod-4 dimension law.

    In dimensions divisible by four a nonsingular operator must decompose
    into quadruples; in the other dimensions the operator must be singular.
    The report names which branch applied.
    """
    _check_anticommutes(space, a, tol.acms_exact)
    _check_skew(space, a, tol.acms_exact)
    checks = []
    sigma_min = float(g_singular_values(a, space.g)[-1])
    if a.max_norm == 0.0:
        checks.append(Check.flag("zero_operator_notice", True))
    if space.dim % 4 == 0:
        if sigma_min > tol.singular:
            quads = quadruple_decomposition(space, a, tol=tol)
            checks.append(Check.flag("branch_nonsingular_decomposed", True))
            checks.append(Check("quadruple_count", float(len(quads)),
                                float(space.dim // 4), len(quads) == space.dim // 4))
        else:
            checks.append(Check.flag("branch_singular_vacuous", True))
            checks.append(Check.below("sigma_min", sigma_min, tol.singular))
    else:
        checks.append(Check.flag("branch_forced_singular", True))
        checks.append(Check.below("sigma_min", sigma_min,
                                  tol.singular * tol.singular_slack))
    return VerificationReport.of(checks)


# ---------------------------------------------------------------------------
# constrained random generation

def constrained_operator_basis(space: ComplexStructuredSpace, *, skew: bool) -> np.ndarray:
    """Basis of {A : AJ + JA = 0} (optionally also g-skew) as an array of
    matrices, obtained from the null space of the stacked linear constraints."""
    d = space.dim
    jm = space.j.mat
    gram = space.g.gram
    rows = []
    for i in range(d):
        for j in range(d):
            row = np.zeros((d, d))
            row[i, :] += jm[:, j]
            row[:, j] += jm[i, :]
            rows.append(row.ravel())
    if skew:
        for i in range(d):
            for j in range(d):
                row = np.zeros((d, d))
                row[:, i] += gram[:, j]
                row[:, j] += gram[i, :]
                rows.append(row.ravel())
    system = np.vstack(rows)
    null = scipy.linalg.null_space(system)
    return null.T.reshape(-1, d, d)


def random_constrained_operator(space: ComplexStructuredSpace, rng,
                                *, skew: bool, basis: np.ndarray | None = None,
                                min_sigma: float = 0.0,
                                max_tries: int = 200) -> LinearOp:
    """Draw A = sum c_i B_i with coefficients uniform in [-1, 1].

    With ``min_sigma`` set, resamples until sigma_min exceeds it (used to
    condition the decomposition campaigns). Each draw is verified against
    the constraints before use.
    """
    if basis is None:
        basis = constrained_operator_basis(space, skew=skew)
    if basis.shape[0] == 0:
        raise DegenerateInputError(
            f"constraint space is trivial in dimension {space.dim}; only A = 0 qualifies"
        )
    for _ in range(max_tries):
        coeffs = rng.uniform(-1.0, 1.0, basis.shape[0])
        a = LinearOp(np.tensordot(coeffs, basis, axes=1))
        resid = float(np.max(np.abs(a.mat @ space.j.mat + space.j.mat @ a.mat)))
        if resid > 1e-12 * (1.0 + a.max_norm):
            raise DegenerateInputError(f"sampled operator violates anticommutation ({resid:.3e})")
        if skew:
            skew_resid = (a + adjoint(a, space.g)).max_norm
            if skew_resid > 1e-12 * (1.0 + a.max_norm):
                raise DegenerateInputError(f"sampled operator is not g-skew ({skew_resid:.3e})")
        if min_sigma <= 0.0:
            return a
        if float(g_singular_values(a, space.g)[-1]) > min_sigma:
            return a
    raise SearchError(f"no operator with sigma_min > {min_sigma} after {max_tries} draws")


# ---------------------------------------------------------------------------
# campaigns

def generic_vector_campaign(dim: int, trials: int, seed: int,
                            *, tol: Tolerances = DEFAULT_TOLERANCES) -> VerificationReport:
    """Randomized existence check for the generic vector and its witness."""
    space = ComplexStructuredSpace.standard(dim)
    basis = constrained_operator_basis(space, skew=False)
    rng = np.random.default_rng(seed)
    min_det = np.inf
    min_overlap = np.inf
    for _ in range(trials):
        a = random_constrained_operator(space, rng, skew=False, basis=basis,
                                        min_sigma=0.0)
        if a.max_norm < 1e-8:
            continue
        y = find_generic_vector(space, a, tol=tol.rank)
        z = find_orthogonal_witness(space, a, y, tol=tol.witness)
        min_det = min(min_det, _normalized_triple_gram_det(space, a, y))
        min_overlap = min(min_overlap, abs(space.g.inner(z, space.j.apply(a.apply(y)))))
    return VerificationReport.of([
        Check.above("min_triple_gram_det", float(min_det), tol.rank),
        Check.above("min_witness_overlap", float(min_overlap), tol.witness),
    ])


def decomposition_campaign(dim: int, trials: int, seed: int,
                           *, tol: Tolerances = DEFAULT_TOLERANCES) -> VerificationReport:
    """Randomized mod-4 campaign over skew anticommuting operators.

    Dimensions divisible by four get conditioned nonsingular draws and full
    decompositions; the others certify that every draw is singular.
    """
    space = ComplexStructuredSpace.standard(dim)
    basis = constrained_operator_basis(space, skew=True)
    rng = np.random.default_rng(seed)
    checks = []
    if basis.shape[0] == 0:
        checks.append(Check.flag("degenerate_dimension_notice", True))
        checks.append(Check.below("max_sigma_min", 0.0, tol.singular))
        return VerificationReport.of(checks)
    if dim % 4 == 0:
        worst_off = 0.0
        for _ in range(trials):
            a = random_constrained_operator(space, rng, skew=True, basis=basis,
                                            min_sigma=1e-3)
            quads = quadruple_decomposition(space, a, tol=tol)
            vectors = [v / space.g.norm(v) for q in quads for v in q.vectors]
            gram = np.array([[space.g.inner(u, v) for v in vectors] for u in vectors])
            off = float(np.max(np.abs(gram - np.diag(np.diag(gram)))))
            worst_off = max(worst_off, off)
            if len(quads) != dim // 4:
                checks.append(Check.flag("quadruple_count", False))
        checks.append(Check.below("worst_gram_off_diagonal", worst_off, tol.quad))
        checks.append(Check.flag("all_decompositions_complete", True))
    else:
        worst_sigma = 0.0
        for _ in range(trials):
            a = random_constrained_operator(space, rng, skew=True, basis=basis)
            worst_sigma = max(worst_sigma, float(g_singular_values(a, space.g)[-1]))
        checks.append(Check.below("max_sigma_min", worst_sigma,
                                  tol.singular * tol.singular_slack))
        checks.append(Check.flag("all_draws_singular", worst_sigma < tol.singular * tol.singular_slack))
    return VerificationReport.of(checks)
