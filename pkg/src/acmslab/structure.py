"""Pointwise almost contact metric structures and their derived operators.

A structure at a point is the tuple (phi, xi, eta, g) on an odd-dimensional
tangent space. This module validates the defining identities, builds the
horizontal (contact) distribution, extracts the skew part of the shape
operator on it, and runs the pointwise condition checks that the curvature
identities later depend on.

Residual conventions: operator residuals use the entrywise max-norm of the
frame matrix, vector residuals use the g-norm, scalar residuals the absolute
value.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .config import DEFAULT_TOLERANCES
from .errors import DegenerateInputError, ShapeError
from .linalg import (LinearOp, Metric, adjoint, gram_schmidt, operator_in_basis,
                     skew_part)
from .report import Check, VerificationReport


@dataclass(frozen=True)
class AcmsPoint:
    """Candidate almost contact metric structure on one tangent space.

    Construction checks shapes and odd dimension only; whether the defining
    identities hold is the job of validate_acms, so deliberately broken
    structures can be built and reported on.
    """

    phi: LinearOp
    xi: np.ndarray
    eta: np.ndarray
    g: Metric
    tol: float = DEFAULT_TOLERANCES.acms_exact

    def __post_init__(self):
        dim = self.g.dim
        if dim % 2 == 0:
            raise ShapeError(f"structure dimension must be odd, got {dim}")
        if self.phi.dim != dim:
            raise ShapeError(f"phi dim {self.phi.dim} does not match metric dim {dim}")
        xi = np.asarray(self.xi, dtype=float)
        eta = np.asarray(self.eta, dtype=float)
        if xi.shape != (dim,) or eta.shape != (dim,):
            raise ShapeError(f"xi/eta must have shape ({dim},)")
        for field, arr in (("xi", xi), ("eta", eta)):
            frozen = arr.copy()
            frozen.setflags(write=False)
            object.__setattr__(self, field, frozen)

    @property
    def dim(self) -> int:
        return self.g.dim

    @property
    def horizontal_dim(self) -> int:
        return self.dim - 1

    def eta_of(self, v) -> float:
        return float(self.eta @ np.asarray(v, dtype=float))

    def horizontal_project(self, v) -> np.ndarray:
        """Projection onto ker eta along xi."""
        v = np.asarray(v, dtype=float)
        return v - self.eta_of(v) * self.xi

    @cached_property
    def projector(self) -> LinearOp:
        return LinearOp(np.eye(self.dim) - np.outer(self.xi, self.eta))


@dataclass(frozen=True)
class HorizontalSubspace:
    """g-orthonormal basis of ker eta at a point."""

    point: AcmsPoint
    basis: tuple[np.ndarray, ...]

    def __len__(self) -> int:
        return len(self.basis)

    def coordinates(self, v) -> np.ndarray:
        return np.array([self.point.g.inner(b, v) for b in self.basis])

    def from_coordinates(self, coords) -> np.ndarray:
        out = np.zeros(self.point.dim)
        for c, b in zip(coords, self.basis):
            out = out + float(c) * b
        return out


def validate_acms(p: AcmsPoint) -> VerificationReport:
    """Check the defining identities of an almost contact metric structure.

    One report entry per identity; residuals use the entrywise max-norm for
    operator equations. rank_phi records how many g-singular values of phi
    sit below the tolerance (exactly one for a valid structure).
    """
    dim = p.dim
    g = p.g.gram
    phi = p.phi.mat
    eye = np.eye(dim)
    eta_xi_outer = np.outer(p.xi, p.eta)

    phi_sq = float(np.max(np.abs(phi @ phi + eye - eta_xi_outer)))
    eta_xi = abs(p.eta_of(p.xi) - 1.0)
    compat = float(np.max(np.abs(phi.T @ g @ phi - g + np.outer(p.eta, p.eta))))
    phi_xi = p.g.norm(p.phi.apply(p.xi))
    eta_phi = float(np.max(np.abs(p.eta @ phi)))
    eta_flat = float(np.max(np.abs(p.eta - g @ p.xi)))

    sing = np.linalg.svd(p.g.to_orthonormal(phi), compute_uv=False)
    null_count = int(np.sum(sing < p.tol))

    checks = [
        Check.below("phi_squared", phi_sq, p.tol),
        Check.below("eta_xi", eta_xi, p.tol),
        Check.below("metric_compatibility", compat, p.tol),
        Check.below("phi_xi", phi_xi, p.tol),
        Check.below("eta_phi", eta_phi, p.tol),
        Check("rank_phi", float(null_count), 1.0, null_count == 1),
        Check.below("eta_flat_xi", eta_flat, p.tol),
    ]
    return VerificationReport.of(checks)


def horizontal_basis(p: AcmsPoint, *, rank_tol: float | None = None) -> HorizontalSubspace:
    """g-orthonormal basis of ker eta, built by projecting the coordinate
    frame along xi and orthonormalizing with pivoting."""
    if rank_tol is None:
        rank_tol = DEFAULT_TOLERANCES.rank
    dim = p.dim
    candidates = [p.horizontal_project(np.eye(dim)[i]) for i in range(dim)]
    basis = gram_schmidt(candidates, p.g, rank_tol=rank_tol)
    if len(basis) != p.horizontal_dim:
        raise DegenerateInputError(
            f"horizontal space has numerical rank {len(basis)}, expected {p.horizontal_dim}"
        )
    worst_eta = max(abs(p.eta_of(b)) for b in basis)
    if worst_eta > 1e3 * max(p.tol, 1e-12):
        raise DegenerateInputError(
            f"horizontal basis leaks through eta (max |eta(b)| = {worst_eta:.3e})"
        )
    return HorizontalSubspace(p, tuple(b for b in basis))


def horizontal_skew_full(a: LinearOp, p: AcmsPoint) -> LinearOp:
    """Skew part of the compression of a to ker eta, as a full-frame operator
    that kills xi and maps into ker eta."""
    proj = p.projector.mat
    s = skew_part(a, p.g).mat
    return LinearOp(proj @ s @ proj)


def horizontal_skew_matrix(a: LinearOp, p: AcmsPoint,
                           h: HorizontalSubspace | None = None) -> np.ndarray:
    """Matrix of the horizontal skew part in a g-orthonormal horizontal basis.

    For contact metric geometry this operator represents d eta on the
    distribution; its nondegeneracy is the contact criterion.
    """
    if h is None:
        h = horizontal_basis(p)
    full = horizontal_skew_full(a, p)
    return operator_in_basis(full, h.basis, p.g)


def is_contact_at_point(b: np.ndarray, *, tol: float | None = None) -> tuple[bool, float]:
    """Decide nondegeneracy of the horizontal skew pairing from its matrix.

    Returns (flag, sigma_min).
    """
    if tol is None:
        tol = DEFAULT_TOLERANCES.contact
    b = np.asarray(b, dtype=float)
    if b.size == 0:
        return False, 0.0
    sigma_min = float(np.linalg.svd(b, compute_uv=False)[-1])
    return sigma_min > tol, sigma_min


def check_phi_anticommutation(a: LinearOp, p: AcmsPoint,
                              *, tol: float | None = None) -> VerificationReport:
    """Anticommutation of the shape operator with phi: residual is the
    max-norm of phi a + a phi."""
    if tol is None:
        tol = p.tol
    if a.dim != p.dim:
        raise ShapeError(f"operator dim {a.dim} does not match point dim {p.dim}")
    resid = (p.phi.compose(a) + a.compose(p.phi)).max_norm
    return VerificationReport.of([Check.below("phi_anticommutation", resid, tol)])


def check_eta_parallel(nabla_phi_table: np.ndarray, p: AcmsPoint,
                       h: HorizontalSubspace | None = None,
                       *, tol: float | None = None) -> VerificationReport:
    """Vanishing of g((nabla_X phi) Y, Z) over horizontal X, Y, Z.

    ``nabla_phi_table[i, j, k]`` holds the j-component of (nabla_{e_i} phi) e_k
    in the coordinate frame.
    """
    if tol is None:
        tol = p.tol
    table = np.asarray(nabla_phi_table, dtype=float)
    if table.shape != (p.dim,) * 3:
        raise ShapeError(f"nabla_phi table must have shape {(p.dim,) * 3}")
    if h is None:
        h = horizontal_basis(p)
    hb = np.stack(h.basis)  # (2n, dim)
    lowered = np.einsum("ijk,jl->ilk", table, p.g.gram)  # g((nabla_i phi) e_k, e_l)
    resid = np.einsum("ai,ilk,bl,ck->abc", hb, lowered, hb, hb)
    worst = float(np.max(np.abs(resid)))
    return VerificationReport.of([Check.below("eta_parallel", worst, tol)])


def restricted_operator(a: LinearOp, h: HorizontalSubspace) -> np.ndarray:
    """Compression of an operator to the horizontal basis (g-orthonormal)."""
    return operator_in_basis(a, h.basis, h.point.g)


def dimension_consistency_gate(dim: int, star_passes: bool, contact_passes: bool) -> Check:
    """Structures that anticommute with their shape operator and are contact
    can only live in dimensions congruent to 1 mod 4."""
    if star_passes and contact_passes:
        return Check.flag("dim_mod4_gate", dim % 4 == 1)
    return Check.flag("dim_mod4_gate", True)
