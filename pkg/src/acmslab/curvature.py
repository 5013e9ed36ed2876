"""Curvature assembly and the pointwise identity suites.

The Riemann tensor of a chart comes from differentiated Christoffel symbols,
either exactly (symbolic mode) or by nested central differences. On top of
the Levi-Civita data this module builds the modified connection adapted to
the Reeb direction, its curvature (computed two independent ways), and the
residual suites that confront curvature with the structure tensors: the
commutation defect of curvature against the endomorphism field, its
factorization through the horizontal skew operator, and the reconstruction
of curvature from first derivatives of the structure on nearly cosymplectic
charts.

Index layout throughout: ``comps[i, j, k, l]`` is the i-th component of
``R(e_k, e_l) e_j``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .charts import (SYMBOLIC, Chart, DerivativeMode, christoffel,
                     christoffel_derivative, contact_volume_coefficient, d_eta,
                     nabla_phi, nabla_xi)
from .config import (DEFAULT_TOLERANCES, FD_SECOND_STEP, PROBES_PER_RESIDUAL,
                     Tolerances)
from .errors import DegenerateInputError, ShapeError
from .linalg import LinearOp, Metric, skew_part
from .report import Check, VerificationReport
from .structure import check_eta_parallel


@dataclass(frozen=True)
class CurvatureTensor:
    """Type (1,3) curvature at a point, with the metric that lowers it."""

    comps: np.ndarray
    metric: Metric

    def __post_init__(self):
        comps = np.asarray(self.comps, float)
        d = self.metric.dim
        if comps.shape != (d, d, d, d):
            raise ShapeError(f"curvature components have shape {comps.shape}, expected {(d,) * 4}")
        comps = comps.copy()
        comps.flags.writeable = False
        object.__setattr__(self, "comps", comps)

    @property
    def dim(self) -> int:
        return self.metric.dim

    def apply(self, x, y, z) -> np.ndarray:
        """The vector R(x, y) z."""
        return np.einsum("ijkl,k,l,j->i", self.comps, x, y, z)

    def pair(self, w, x, y, z) -> float:
        """The scalar g(R(x, y) z, w)."""
        return float(np.asarray(w, float) @ self.metric.gram @ self.apply(x, y, z))

    def lowered(self) -> np.ndarray:
        return np.einsum("mi,ijkl->mjkl", self.metric.gram, self.comps)

    def antisymmetry_residual(self) -> float:
        return float(np.max(np.abs(self.comps + np.einsum("ijlk->ijkl", self.comps))))

    def first_bianchi_residual(self) -> float:
        cyc = (self.comps + np.einsum("iklj->ijkl", self.comps)
               + np.einsum("iljk->ijkl", self.comps))
        return float(np.max(np.abs(cyc)))

    def sectional(self, x, y, *, tol: Tolerances = DEFAULT_TOLERANCES) -> float:
        g = self.metric
        xx, yy, xy = g.inner(x, x), g.inner(y, y), g.inner(x, y)
        denom = xx * yy - xy * xy
        if denom <= tol.rank * max(xx * yy, 1e-30):
            raise DegenerateInputError("sectional curvature of a degenerate plane")
        return self.pair(x, x, y, y) / denom


def riemann(chart: Chart, y, *, tol: Tolerances = DEFAULT_TOLERANCES,
            check: bool = True) -> CurvatureTensor:
    """Levi-Civita curvature of the chart metric at a point.

    With ``check`` on, the antisymmetry and first Bianchi identities are
    verified at a mode-appropriate tolerance; these hold for a torsion-free
    metric connection and catch assembly mistakes early.
    """
    gam = christoffel(chart, y)
    dgam = christoffel_derivative(chart, y)
    comps = (np.einsum("kilj->ijkl", dgam) - np.einsum("likj->ijkl", dgam)
             + np.einsum("ikm,mlj->ijkl", gam, gam)
             - np.einsum("ilm,mkj->ijkl", gam, gam))
    out = CurvatureTensor(comps, chart.metric_at(y))
    if check:
        gate = tol.curvature_symbolic if chart.mode.kind == "symbolic" else tol.curvature_fd
        scale = 1.0 + float(np.max(np.abs(out.comps)))
        anti = out.antisymmetry_residual()
        bianchi = out.first_bianchi_residual()
        if anti > gate * scale or bianchi > gate * scale:
            raise DegenerateInputError(
                f"curvature invariants fail: antisymmetry {anti:.3e}, "
                f"first Bianchi {bianchi:.3e} (gate {gate * scale:.3e})"
            )
    return out


def sectional_curvature(r: CurvatureTensor, x, y, *,
                        tol: Tolerances = DEFAULT_TOLERANCES) -> float:
    return r.sectional(x, y, tol=tol)


# ---------------------------------------------------------------------------
# the modified connection


def _correction_table(gram, xi, eta, a_mat, skew_mat) -> np.ndarray:
    """Difference tensor h[k, i, j] between the modified connection and
    Levi-Civita, as a coordinate table: the k-th component of the correction
    applied to the frame pair (e_i, e_j)."""
    d = len(xi)
    proj = np.eye(d) - np.outer(xi, eta)
    btilde = proj @ skew_mat @ proj
    ap = a_mat @ proj
    pairing = ap.T @ gram @ proj
    return (np.einsum("ij,k->kij", pairing, xi)
            - np.einsum("j,ki->kij", eta, ap)
            + 0.5 * np.einsum("i,kj->kij", eta, btilde))


def connection_correction(chart: Chart, y) -> np.ndarray:
    gram = chart.g_at(y)
    g = Metric(gram)
    xi = chart.xi_at(y)
    eta = chart.eta_at(y)
    a = nabla_xi(chart, y)
    s = skew_part(a, g)
    return _correction_table(gram, xi, eta, a.mat, s.mat)


def modified_christoffel(chart: Chart, y) -> np.ndarray:
    return christoffel(chart, y) + connection_correction(chart, y)


def modified_riemann(chart: Chart, y, *, step: float = FD_SECOND_STEP) -> CurvatureTensor:
    """Curvature of the modified connection, assembled from numerically
    differentiated connection coefficients.

    One Richardson step on the central difference keeps the truncation error
    at fourth order. No Bianchi check here: the modified connection carries
    torsion, so the plain cyclic identity genuinely fails.
    """
    y = np.asarray(y, float)
    d = chart.dim
    dgam = np.empty((d, d, d, d))
    for m in range(d):
        bump = np.zeros(d)
        bump[m] = 1.0

        def central(h):
            return (modified_christoffel(chart, y + h * bump)
                    - modified_christoffel(chart, y - h * bump)) / (2.0 * h)

        coarse = central(step)
        fine = central(step / 2.0)
        dgam[m] = (4.0 * fine - coarse) / 3.0
    gam = modified_christoffel(chart, y)
    comps = (np.einsum("kilj->ijkl", dgam) - np.einsum("likj->ijkl", dgam)
             + np.einsum("ikm,mlj->ijkl", gam, gam)
             - np.einsum("ilm,mkj->ijkl", gam, gam))
    return CurvatureTensor(comps, chart.metric_at(y))


class PointGeometry:
    """Lazy bundle of every pointwise tensor the identity suites need.

    Construct once per (chart, point); each derived quantity is computed on
    first access and cached for the lifetime of the object.
    """

    def __init__(self, chart: Chart, y, *, tol: Tolerances = DEFAULT_TOLERANCES):
        self.chart = chart
        self.y = np.asarray(y, float)
        self.tol = tol

    @cached_property
    def metric(self) -> Metric:
        return self.chart.metric_at(self.y)

    @cached_property
    def phi(self) -> LinearOp:
        return self.chart.phi_at(self.y)

    @cached_property
    def xi(self) -> np.ndarray:
        return self.chart.xi_at(self.y)

    @cached_property
    def eta(self) -> np.ndarray:
        return self.chart.eta_at(self.y)

    @cached_property
    def point(self):
        return self.chart.acms_point_at(self.y, tol=self.tol.acms_exact)

    @cached_property
    def projector(self) -> np.ndarray:
        return np.eye(self.chart.dim) - np.outer(self.xi, self.eta)

    @cached_property
    def reeb_gradient(self) -> LinearOp:
        return nabla_xi(self.chart, self.y)

    @cached_property
    def dxi_skew(self) -> LinearOp:
        return skew_part(self.reeb_gradient, self.metric)

    @cached_property
    def skew_projected(self) -> np.ndarray:
        return self.projector @ self.dxi_skew.mat @ self.projector

    @cached_property
    def nphi(self) -> np.ndarray:
        return nabla_phi(self.chart, self.y)

    @cached_property
    def deta(self) -> np.ndarray:
        return d_eta(self.chart, self.y)

    @cached_property
    def correction(self) -> np.ndarray:
        return _correction_table(self.metric.gram, self.xi, self.eta,
                                 self.reeb_gradient.mat, self.dxi_skew.mat)

    @cached_property
    def riem(self) -> CurvatureTensor:
        return riemann(self.chart, self.y, tol=self.tol)

    @cached_property
    def modified_riem(self) -> CurvatureTensor:
        return modified_riemann(self.chart, self.y)

    @cached_property
    def modified_nphi(self) -> np.ndarray:
        """Coordinate table of the modified covariant derivative of phi."""
        h = self.correction
        phi = self.phi.mat
        return (self.nphi + np.einsum("jil,lk->ijk", h, phi)
                - np.einsum("jl,lik->ijk", phi, h))

    @cached_property
    def modified_nphi_reeb(self) -> np.ndarray:
        """Matrix of the modified derivative of phi along the Reeb field."""
        return np.einsum("i,ijk->jk", self.xi, self.modified_nphi)

    def inner(self, u, v) -> float:
        return self.metric.inner(u, v)

    def gnorm(self, v) -> float:
        return self.metric.norm(v)

    def nphi_vec(self, x, z) -> np.ndarray:
        """The vector (nabla_x phi) z from the coordinate table."""
        return np.einsum("ijk,i,k->j", self.nphi, x, z)

    def modified_curvature_horizontal(self, x, y, z) -> np.ndarray:
        """Horizontal part of the modified curvature on horizontal arguments,
        by the closed algebraic formula (no differentiation).

        This is the second, independent route to the modified curvature; the
        differentiated route must agree with it on horizontal triples.
        """
        a = self.reeb_gradient.mat
        ax, ay = a @ x, a @ y
        sx = self.dxi_skew.mat @ x
        return (self.projector @ self.riem.apply(x, y, z)
                + self.inner(ay, z) * ax - self.inner(ax, z) * ay
                + self.inner(sx, y) * (self.skew_projected @ z))


# ---------------------------------------------------------------------------
# probe generation


def unit_probes(metric: Metric, rng, count: int, *, projector=None) -> list[np.ndarray]:
    out: list[np.ndarray] = []
    while len(out) < count:
        v = rng.standard_normal(metric.dim)
        if projector is not None:
            v = projector @ v
        n = metric.norm(v)
        if n > 1e-6:
            out.append(v / n)
    return out


def horizontal_unit_probes(pg: PointGeometry, rng, count: int) -> list[np.ndarray]:
    return unit_probes(pg.metric, rng, count, projector=pg.projector)


# ---------------------------------------------------------------------------
# pointwise residuals


def killing_residual(pg: PointGeometry) -> float:
    ga = pg.metric.gram @ pg.reeb_gradient.mat
    return float(np.max(np.abs(ga + ga.T)))


def reeb_deta_kernel_residual(pg: PointGeometry) -> float:
    return float(np.max(np.abs(pg.deta @ pg.xi)))


def nearly_cosymplectic_residuals(pg: PointGeometry, rng,
                                  probes: int = PROBES_PER_RESIDUAL) -> dict[str, float]:
    """Residuals of the defining symmetry (nabla_v phi) v = 0.

    Probed three ways: on horizontal g-unit vectors, on arbitrary g-unit
    vectors, and through the symmetrized pairing on horizontal pairs.
    """
    hor = horizontal_unit_probes(pg, rng, probes)
    full = unit_probes(pg.metric, rng, probes)
    out = {
        "horizontal": max(pg.gnorm(pg.nphi_vec(v, v)) for v in hor),
        "full": max(pg.gnorm(pg.nphi_vec(v, v)) for v in full),
    }
    pairs = horizontal_unit_probes(pg, rng, 2 * (probes // 2))
    sym = 0.0
    for x, y in zip(pairs[0::2], pairs[1::2]):
        sym = max(sym, pg.gnorm(pg.nphi_vec(x, y) + pg.nphi_vec(y, x)))
    out["symmetrized"] = sym
    return out


def skew_phi_anticommutation_residual(pg: PointGeometry) -> float:
    """Anticommutator of the projected skew operator with phi, on the
    horizontal subspace."""
    b = pg.skew_projected
    phi = pg.phi.mat
    m = pg.projector @ (b @ phi + phi @ b) @ pg.projector
    return float(np.max(np.abs(m)))


def eta_parallel_residual(pg: PointGeometry) -> float:
    report = check_eta_parallel(pg.nphi, pg.point, tol=1.0)
    return report["eta_parallel"].residual


def bridge_residual(pg: PointGeometry, rng, pairs: int = PROBES_PER_RESIDUAL) -> float:
    """Worst gap between the exterior derivative of the contact form and the
    skew pairing of the Reeb gradient, on horizontal pairs."""
    smat = pg.dxi_skew.mat
    gram = pg.metric.gram
    probes = horizontal_unit_probes(pg, rng, 2 * pairs)
    worst = 0.0
    for x, y in zip(probes[0::2], probes[1::2]):
        lhs = float(x @ pg.deta @ y)
        rhs = float((smat @ x) @ gram @ y)
        worst = max(worst, abs(lhs - rhs))
    return worst


def factorization_lhs(pg: PointGeometry, x, y, z) -> np.ndarray:
    v = (pg.projector @ (pg.modified_nphi_reeb @ z)
         - pg.skew_projected @ (pg.phi.mat @ z))
    return 2.0 * pg.inner(pg.dxi_skew.mat @ x, y) * v


def factorization_rhs(pg: PointGeometry, x, y, z, r_apply=None) -> np.ndarray:
    """Curvature side of the factorization identity on a horizontal triple.

    ``r_apply`` defaults to the Levi-Civita curvature; injecting a substitute
    (for instance the zero map) isolates the purely algebraic terms.
    """
    if r_apply is None:
        r_apply = pg.riem.apply
    phi = pg.phi.mat
    a = pg.reeb_gradient.mat
    phz = phi @ z
    ax, ay = a @ x, a @ y
    out = pg.projector @ np.asarray(r_apply(x, y, phz), float)
    out = out - phi @ np.asarray(r_apply(x, y, z), float)
    out = out + pg.inner(ay, phz) * ax - pg.inner(ax, phz) * ay
    out = out - pg.inner(ay, z) * (phi @ ax) + pg.inner(ax, z) * (phi @ ay)
    return out


# ---------------------------------------------------------------------------
# identity suites


def _points_iter(chart: Chart, points):
    for y in np.atleast_2d(np.asarray(points, float)):
        yield y


def modified_connection_suite(chart: Chart, points, seed: int = 0, *,
                              tol: Tolerances = DEFAULT_TOLERANCES,
                              probes: int = PROBES_PER_RESIDUAL) -> VerificationReport:
    """Structural checks of the modified connection plus the two-route
    agreement of its curvature."""
    rng = np.random.default_rng(seed)
    worst_reeb = 0.0
    worst_fix = 0.0
    worst_phi = 0.0
    worst_agree = 0.0
    for y in _points_iter(chart, points):
        pg = PointGeometry(chart, y, tol=tol)
        h = pg.correction
        a = pg.reeb_gradient.mat
        worst_fix = max(worst_fix, float(np.max(np.abs(
            np.einsum("kij,i,j->k", h, pg.xi, pg.xi)))))
        hor = horizontal_unit_probes(pg, rng, probes)
        for x in hor:
            v = a @ x + np.einsum("kij,i,j->k", h, x, pg.xi)
            worst_reeb = max(worst_reeb, pg.gnorm(v))
        pairs = horizontal_unit_probes(pg, rng, 2 * probes)
        for x, z in zip(pairs[0::2], pairs[1::2]):
            v = np.einsum("ijk,i,k->j", pg.modified_nphi, x, z)
            worst_phi = max(worst_phi, pg.gnorm(v))
        triples = horizontal_unit_probes(pg, rng, 3 * probes)
        for x, w, z in zip(triples[0::3], triples[1::3], triples[2::3]):
            one = pg.projector @ pg.modified_riem.apply(x, w, z)
            two = pg.modified_curvature_horizontal(x, w, z)
            worst_agree = max(worst_agree, pg.gnorm(one - two))
    return VerificationReport.of([
        Check.below("correction_kills_reeb_pair", worst_fix, tol.acms_exact),
        Check.below("modified_reeb_parallel", worst_reeb, tol.condition_gate),
        Check.below("modified_phi_horizontal", worst_phi, tol.condition_gate),
        Check.below("modified_curvature_mode_agreement", worst_agree, tol.identity),
    ])


def defect_collapse_suite(chart: Chart, points, seed: int = 0, *,
                          tol: Tolerances = DEFAULT_TOLERANCES,
                          probes: int = PROBES_PER_RESIDUAL) -> VerificationReport:
    """Commutation defect of the modified curvature against phi, collapsed
    onto the Reeb-direction derivative of phi.

    Gated on the horizontal derivative of phi vanishing (the identity only
    holds on charts where it does)."""
    rng = np.random.default_rng(seed)
    gate_resid = 0.0
    geoms = []
    for y in _points_iter(chart, points):
        pg = PointGeometry(chart, y, tol=tol)
        geoms.append(pg)
        gate_resid = max(gate_resid, eta_parallel_residual(pg))
    gate_ok = bool(gate_resid < tol.condition_gate)
    checks = [Check("eta_parallel_gate", float(gate_resid), tol.condition_gate, gate_ok)]
    if not gate_ok:
        return VerificationReport.of(checks)
    worst = 0.0
    for pg in geoms:
        phi = pg.phi.mat
        triples = horizontal_unit_probes(pg, rng, 3 * probes)
        for x, y_, z in zip(triples[0::3], triples[1::3], triples[2::3]):
            lhs = (pg.modified_riem.apply(x, y_, phi @ z)
                   - phi @ pg.modified_riem.apply(x, y_, z))
            factor = 2.0 * pg.inner(pg.dxi_skew.mat @ x, y_)
            rhs = factor * (pg.modified_nphi_reeb @ z)
            worst = max(worst, pg.gnorm(pg.projector @ (lhs - rhs)))
    checks.append(Check.below("defect_collapse", worst, tol.identity))
    return VerificationReport.of(checks)


def defect_factorization_suite(chart: Chart, points, seed: int = 0, *,
                               tol: Tolerances = DEFAULT_TOLERANCES,
                               probes: int = PROBES_PER_RESIDUAL) -> VerificationReport:
    """Fully expanded form of the commutation defect, phrased against the
    Levi-Civita curvature.

    Needs both gates: the horizontal derivative of phi must vanish and the
    projected skew operator must anticommute with phi."""
    rng = np.random.default_rng(seed)
    gate4 = 0.0
    gate3 = 0.0
    geoms = []
    for y in _points_iter(chart, points):
        pg = PointGeometry(chart, y, tol=tol)
        geoms.append(pg)
        gate4 = max(gate4, eta_parallel_residual(pg))
        gate3 = max(gate3, skew_phi_anticommutation_residual(pg))
    ok4 = bool(gate4 < tol.condition_gate)
    ok3 = bool(gate3 < tol.condition_gate)
    checks = [Check("eta_parallel_gate", float(gate4), tol.condition_gate, ok4),
              Check("skew_anticommutation_gate", float(gate3), tol.condition_gate, ok3)]
    if not (ok4 and ok3):
        return VerificationReport.of(checks)
    worst = 0.0
    for pg in geoms:
        triples = horizontal_unit_probes(pg, rng, 3 * probes)
        for x, y_, z in zip(triples[0::3], triples[1::3], triples[2::3]):
            resid = factorization_lhs(pg, x, y_, z) - factorization_rhs(pg, x, y_, z)
            worst = max(worst, pg.gnorm(resid))
    checks.append(Check.below("defect_factorization", worst, tol.identity))
    return VerificationReport.of(checks)


def _phi_plane_curvature(pg: PointGeometry, rng, samples: int = 8) -> float:
    vals = []
    for x in horizontal_unit_probes(pg, rng, samples):
        px = pg.phi.apply(x)
        if pg.gnorm(px) < 1e-6:
            continue
        vals.append(pg.riem.sectional(x, px, tol=pg.tol))
    if not vals:
        raise DegenerateInputError("no nondegenerate phi-plane found")
    return float(np.mean(vals))


def curvature_reconstruction_suite(chart: Chart, points, seed: int = 0, *,
                                   tol: Tolerances = DEFAULT_TOLERANCES,
                                   tuples: int = PROBES_PER_RESIDUAL,
                                   c: float | None = None) -> VerificationReport:
    """Reconstruction of the full curvature from first derivatives of the
    structure tensors, valid on nearly cosymplectic charts whose phi-plane
    curvature is the constant ``c``.

    Includes the horizontal specialization and the pairing identity for the
    derivative of phi. Gated on the nearly cosymplectic residual."""
    rng = np.random.default_rng(seed)
    gate = 0.0
    geoms = []
    for y in _points_iter(chart, points):
        pg = PointGeometry(chart, y, tol=tol)
        geoms.append(pg)
        res = nearly_cosymplectic_residuals(pg, rng, probes=max(8, tuples // 4))
        gate = max(gate, *res.values())
    gate_ok = bool(gate < tol.nearly_gate)
    checks = [Check("nearly_cosymplectic_gate", float(gate), tol.nearly_gate, gate_ok)]
    if not gate_ok:
        return VerificationReport.of(checks)
    if c is None:
        c = float(np.mean([_phi_plane_curvature(pg, rng) for pg in geoms]))
    worst_full = 0.0
    worst_hor = 0.0
    worst_pair = 0.0
    for pg in geoms:
        g = pg.metric
        phi = pg.phi.mat
        a = pg.reeb_gradient.mat
        a2 = a @ a
        eta = pg.eta

        def ip(u, v):
            return g.inner(u, v)

        quads = unit_probes(g, rng, 4 * tuples)
        for w, x, y_, z in zip(quads[0::4], quads[1::4], quads[2::4], quads[3::4]):
            lhs = 4.0 * pg.riem.pair(z, w, x, y_)
            aw, ax, ay, az = a @ w, a @ x, a @ y_, a @ z
            ew, ex, ey, ez = (float(eta @ w), float(eta @ x),
                              float(eta @ y_), float(eta @ z))
            rhs = (ip(pg.nphi_vec(w, z), pg.nphi_vec(x, y_))
                   - ip(pg.nphi_vec(w, y_), pg.nphi_vec(x, z))
                   - 2.0 * ip(pg.nphi_vec(w, x), pg.nphi_vec(y_, z))
                   + ip(aw, z) * ip(ax, y_) - ip(aw, y_) * ip(ax, z)
                   - 2.0 * ip(aw, x) * ip(ay, z)
                   - ew * ey * ip(ax, az) + ew * ez * ip(ax, ay)
                   + ex * ey * ip(aw, az) - ex * ez * ip(aw, ay))
            rhs += c * (ip(x, y_) * ip(z, w) - ip(z, x) * ip(y_, w)
                        + ez * ex * ip(y_, w) - ey * ex * ip(z, w)
                        + ey * ew * ip(z, x) - ez * ew * ip(y_, x)
                        + ip(phi @ y_, x) * ip(phi @ z, w)
                        - ip(phi @ z, x) * ip(phi @ y_, w)
                        - 2.0 * ip(phi @ z, y_) * ip(phi @ x, w))
            worst_full = max(worst_full, abs(lhs - rhs))
        triples = horizontal_unit_probes(pg, rng, 3 * tuples)
        for x, y_, w in zip(triples[0::3], triples[1::3], triples[2::3]):
            lhs_v = 3.0 * c * (ip(y_, x) * w - ip(y_, w) * x)
            py, px, pw = phi @ y_, phi @ x, phi @ w
            ax, aw, ay = a @ x, a @ w, a @ y_
            rhs_v = (-ip(py, ax) * (phi @ aw) + ip(py, aw) * (phi @ ax)
                     + 2.0 * ip(px, aw) * (phi @ ay)
                     + ip(ax, y_) * aw - ip(aw, y_) * ax - 2.0 * ip(aw, x) * ay)
            rhs_v = rhs_v + c * (-ip(x, py) * pw + ip(py, w) * px + 2.0 * ip(px, w) * py)
            worst_hor = max(worst_hor, pg.gnorm(lhs_v - rhs_v))
        full_triples = unit_probes(g, rng, 3 * tuples)
        for x, y_, z in zip(full_triples[0::3], full_triples[1::3], full_triples[2::3]):
            ex = float(eta @ x)
            ey = float(eta @ y_)
            lhs_s = ip(pg.nphi_vec(x, y_), a @ z)
            rhs_s = ey * ip(a2 @ x, phi @ z) - ex * ip(a2 @ y_, phi @ z)
            worst_pair = max(worst_pair, abs(lhs_s - rhs_s))
    checks.append(Check.below("curvature_reconstruction_full", worst_full, tol.identity))
    checks.append(Check.below("curvature_reconstruction_horizontal", worst_hor, tol.identity))
    checks.append(Check.below("nabla_phi_pairing", worst_pair, tol.identity))
    return VerificationReport.of(checks)


def dual_mode_suite(chart: Chart, points, *,
                    tol: Tolerances = DEFAULT_TOLERANCES) -> VerificationReport:
    """Relative agreement of symbolic and finite-difference derivatives for
    the Christoffel symbols, the Reeb gradient, the derivative of phi and
    the curvature, over the given points."""
    sym = chart.with_mode(SYMBOLIC)
    fd = chart.with_mode(DerivativeMode("fd"))
    names = ("dual_mode_christoffel", "dual_mode_reeb_gradient",
             "dual_mode_nabla_phi", "dual_mode_riemann")
    worst = dict.fromkeys(names, 0.0)
    for y in _points_iter(chart, points):
        got = {
            "dual_mode_christoffel": (christoffel(sym, y), christoffel(fd, y)),
            "dual_mode_reeb_gradient": (nabla_xi(sym, y).mat, nabla_xi(fd, y).mat),
            "dual_mode_nabla_phi": (nabla_phi(sym, y), nabla_phi(fd, y)),
            "dual_mode_riemann": (riemann(sym, y, tol=tol).comps,
                                  riemann(fd, y, tol=tol).comps),
        }
        for name, (a, b) in got.items():
            rel = float(np.max(np.abs(a - b))) / (1.0 + float(np.max(np.abs(a))))
            worst[name] = max(worst[name], rel)
    return VerificationReport.of([
        Check.below(name, worst[name], tol.dual_mode) for name in names
    ])


def horizontal_sectional_values(chart: Chart, points, seed: int = 0, *,
                                tol: Tolerances = DEFAULT_TOLERANCES,
                                planes: int = PROBES_PER_RESIDUAL) -> list[float]:
    """Sectional curvatures of random horizontal planes across the points."""
    rng = np.random.default_rng(seed)
    values: list[float] = []
    for y in _points_iter(chart, points):
        pg = PointGeometry(chart, y, tol=tol)
        got = 0
        while got < planes:
            x, w = horizontal_unit_probes(pg, rng, 2)
            if abs(pg.inner(x, w)) > 0.99:
                continue
            values.append(pg.riem.sectional(x, w, tol=tol))
            got += 1
    return values


def contact_residuals(pg: PointGeometry) -> tuple[float, float]:
    """Pair (sigma_min of the horizontal skew operator, absolute top-form
    coefficient of the contact volume)."""
    from .structure import horizontal_basis, horizontal_skew_matrix

    h = horizontal_basis(pg.point, rank_tol=pg.tol.rank)
    b = horizontal_skew_matrix(pg.reeb_gradient, pg.point, h)
    if b.size == 0:
        sigma = 0.0
    else:
        sigma = float(np.linalg.svd(b, compute_uv=False)[-1])
    volume = abs(contact_volume_coefficient(pg.eta, pg.deta))
    return sigma, volume
