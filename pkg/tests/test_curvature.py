"""Unit tests for curvature assembly, the modified connection and the
identity suites."""
import numpy as np
import pytest

from acmslab.charts import DerivativeMode, chart_from_text, sample_points
from acmslab.curvature import (
    CurvatureTensor,
    PointGeometry,
    bridge_residual,
    connection_correction,
    curvature_reconstruction_suite,
    defect_collapse_suite,
    defect_factorization_suite,
    dual_mode_suite,
    eta_parallel_residual,
    factorization_lhs,
    factorization_rhs,
    horizontal_sectional_values,
    killing_residual,
    modified_connection_suite,
    modified_riemann,
    nearly_cosymplectic_residuals,
    reeb_deta_kernel_residual,
    riemann,
    sectional_curvature,
    skew_phi_anticommutation_residual,
    unit_probes,
)
from acmslab.errors import DegenerateInputError, ShapeError
from acmslab.gallery import gallery_chart
from acmslab.linalg import Metric

SPHERE_TEXT = """\
dim = 2
g[1][1] = 1
g[2][2] = sin(x1)^2
domain[1] = 0.4 2.7
domain[2] = -3.0 3.0
"""

FLAT_POLAR_TEXT = """\
dim = 2
g[1][1] = 1
g[2][2] = x1^2
domain[1] = 0.5 3.0
"""


@pytest.fixture(scope="module")
def sphere():
    return chart_from_text(SPHERE_TEXT, name="sphere")


@pytest.fixture(scope="module")
def s5():
    return gallery_chart("s5")


@pytest.fixture(scope="module")
def s5_points(s5):
    return sample_points(s5, 2, seed=5)


class TestCurvatureTensor:
    def test_shape_checked(self):
        with pytest.raises(ShapeError):
            CurvatureTensor(np.zeros((2, 2, 2)), Metric.euclidean(2))

    def test_apply_pair_consistent(self, sphere):
        r = riemann(sphere, [1.1, 0.4])
        rng = np.random.default_rng(1)
        w, x, y, z = (rng.normal(size=2) for _ in range(4))
        direct = r.pair(w, x, y, z)
        via_apply = float(w @ r.metric.gram @ r.apply(x, y, z))
        assert direct == pytest.approx(via_apply)

    def test_degenerate_plane_rejected(self, sphere):
        r = riemann(sphere, [1.1, 0.4])
        v = np.array([1.0, 2.0])
        with pytest.raises(DegenerateInputError):
            r.sectional(v, 2.0 * v)


class TestRiemann:
    def test_unit_sphere_curvature(self, sphere):
        for y in sample_points(sphere, 6, seed=11):
            r = riemann(sphere, y)
            assert r.sectional(np.eye(2)[0], np.eye(2)[1]) == pytest.approx(1.0)

    def test_flat_polar_plane(self):
        chart = chart_from_text(FLAT_POLAR_TEXT)
        for y in sample_points(chart, 4, seed=12):
            r = riemann(chart, y)
            assert np.max(np.abs(r.comps)) < 1e-12

    def test_invariants_tiny_in_symbolic_mode(self, sphere):
        r = riemann(sphere, [0.9, -0.2])
        assert r.antisymmetry_residual() < 1e-14
        assert r.first_bianchi_residual() < 1e-12

    def test_fd_mode_agrees(self, sphere):
        fd = sphere.with_mode(DerivativeMode("fd"))
        y = [1.3, 0.5]
        np.testing.assert_allclose(riemann(fd, y).comps,
                                   riemann(sphere, y).comps, atol=1e-6)

    def test_sectional_curvature_helper(self, sphere):
        r = riemann(sphere, [1.0, 0.0])
        got = sectional_curvature(r, np.array([1.0, 0.3]), np.array([0.2, 2.0]))
        assert got == pytest.approx(1.0)

    def test_round_sphere_five(self, s5, s5_points):
        values = horizontal_sectional_values(s5, s5_points, planes=5)
        np.testing.assert_allclose(values, 1.0, atol=1e-10)

    def test_full_planes_on_s5(self, s5):
        # the round metric has constant curvature on every plane, not just
        # horizontal ones
        r = riemann(s5, np.array([0.1, -0.05, 0.2, 0.0, 0.1]))
        rng = np.random.default_rng(7)
        for x, w in zip(unit_probes(r.metric, rng, 6), unit_probes(r.metric, rng, 6)):
            if abs(r.metric.inner(x, w)) > 0.95:
                continue
            assert r.sectional(x, w) == pytest.approx(1.0, abs=1e-9)


class TestConnectionCorrection:
    def test_behavior_at_s5_origin(self, s5):
        # contract the correction table against frame pairs; the four
        # defining behaviors pin it completely
        origin = np.zeros(5)
        h = connection_correction(s5, origin)
        pg = PointGeometry(s5, origin)
        a = pg.reeb_gradient.mat
        e = np.eye(5)
        xi = pg.xi

        def pair(x, y):
            return np.einsum("kij,i,j->k", h, x, y)

        np.testing.assert_allclose(pair(xi, xi), np.zeros(5), atol=1e-14)
        # horizontal direction, Reeb argument: cancels the Reeb gradient
        np.testing.assert_allclose(pair(e[1], xi), -(a @ e[1]), atol=1e-12)
        # Reeb direction, horizontal argument: half the projected skew part
        np.testing.assert_allclose(pair(xi, e[1]), 0.5 * (a @ e[1]), atol=1e-12)
        # horizontal pair: vertical component weighted by the shape pairing
        np.testing.assert_allclose(pair(e[1], e[4]),
                                   pg.inner(a @ e[1], e[4]) * xi, atol=1e-12)
        np.testing.assert_allclose(pair(e[1], e[2]), np.zeros(5), atol=1e-12)

    def test_vanishes_on_cosymplectic(self):
        chart = gallery_chart("cosymplectic_r5")
        h = connection_correction(chart, np.zeros(5))
        assert np.max(np.abs(h)) == 0.0


class TestModifiedRiemann:
    def test_antisymmetry_survives(self, s5):
        r = modified_riemann(s5, np.zeros(5))
        assert r.antisymmetry_residual() < 1e-12

    def test_first_bianchi_fails_with_torsion(self, s5):
        # the cyclic identity needs a torsion-free connection; at the origin
        # of the sphere chart the violation is exactly 3
        r = modified_riemann(s5, np.zeros(5))
        assert r.first_bianchi_residual() == pytest.approx(3.0, abs=1e-6)


class TestPointResiduals:
    def test_s5_killing_and_kernel(self, s5, s5_points):
        for y in s5_points:
            pg = PointGeometry(s5, y)
            assert killing_residual(pg) < 1e-10
            assert reeb_deta_kernel_residual(pg) < 1e-12

    def test_s5_condition_residuals(self, s5, s5_points):
        for y in s5_points:
            pg = PointGeometry(s5, y)
            assert skew_phi_anticommutation_residual(pg) < 1e-10
            assert eta_parallel_residual(pg) < 1e-10

    def test_sasakian_skew_anticommutation_fails_exactly(self):
        chart = gallery_chart("sasakian_r5")
        pg = PointGeometry(chart, np.array([0.2, -0.3, 0.1, 0.4, 0.25]))
        assert skew_phi_anticommutation_residual(pg) == pytest.approx(2.0)

    def test_sasakian_eta_parallel_holds(self):
        # horizontal triples never see the vertical terms of the Sasakian
        # derivative of phi
        chart = gallery_chart("sasakian_r5")
        pg = PointGeometry(chart, np.array([0.2, -0.3, 0.1, 0.4, 0.25]))
        assert eta_parallel_residual(pg) < 1e-12

    def test_sasakian_nearly_residual_frozen(self):
        chart = gallery_chart("sasakian_r5")
        pg = PointGeometry(chart, np.array([0.1, 0.2, -0.1, 0.3, 0.0]))
        rng = np.random.default_rng(3)
        res = nearly_cosymplectic_residuals(pg, rng, probes=16)
        assert res["horizontal"] == pytest.approx(1.0, abs=1e-12)
        assert res["full"] <= 1.0 + 1e-12

    def test_bridge_residual(self, s5, s5_points):
        rng = np.random.default_rng(9)
        for y in s5_points:
            assert bridge_residual(PointGeometry(s5, y), rng, pairs=10) < 1e-10
        chart = gallery_chart("sasakian_r5")
        pg = PointGeometry(chart, np.array([0.2, -0.3, 0.1, 0.4, 0.25]))
        assert bridge_residual(pg, rng, pairs=10) < 1e-12


class TestModifiedConnectionSuite:
    def test_s5(self, s5, s5_points):
        report = modified_connection_suite(s5, s5_points, probes=6)
        assert report.verdict
        assert report["modified_curvature_mode_agreement"].residual < 1e-9

    def test_cosymplectic_trivial(self):
        chart = gallery_chart("cosymplectic_r5")
        report = modified_connection_suite(chart, np.zeros((1, 5)), probes=4)
        assert report.verdict


class TestDefectCollapseSuite:
    def test_s5(self, s5, s5_points):
        report = defect_collapse_suite(s5, s5_points, probes=6)
        assert report.verdict
        assert report["defect_collapse"].residual < 1e-9

    def test_sasakian_gate_open_and_identity_holds(self):
        # the Reeb-direction derivative of phi vanishes for this chart, so
        # both sides of the collapsed identity are zero
        chart = gallery_chart("sasakian_r5")
        report = defect_collapse_suite(chart, sample_points(chart, 2, seed=5),
                                       probes=6)
        assert report.verdict


class TestDefectFactorizationSuite:
    def test_s5(self, s5, s5_points):
        report = defect_factorization_suite(s5, s5_points, probes=6)
        assert report.verdict
        assert report["defect_factorization"].residual < 1e-12

    def test_sasakian_gated_out(self):
        chart = gallery_chart("sasakian_r5")
        report = defect_factorization_suite(chart, sample_points(chart, 2, seed=5),
                                            probes=6)
        assert not report.verdict
        assert report["eta_parallel_gate"].passed
        assert not report["skew_anticommutation_gate"].passed
        names = {c.name for c in report.checks}
        assert "defect_factorization" not in names

    def test_lhs_vanishes_with_commuting_structure(self):
        # on the Sasakian chart the modified derivative of phi along the Reeb
        # field cancels against the projected skew operator acting through phi
        chart = gallery_chart("sasakian_r5")
        pg = PointGeometry(chart, np.array([0.1, -0.2, 0.3, 0.0, 0.2]))
        e = np.eye(5)
        assert np.max(np.abs(factorization_lhs(pg, e[0], e[1], e[2]))) < 1e-10

    def test_rhs_with_injected_zero_curvature(self, s5):
        # dropping the curvature terms must leave exactly the four algebraic
        # shape-operator terms; frozen at the origin on frame vectors
        pg = PointGeometry(s5, np.zeros(5))
        e = np.eye(5)
        out = factorization_rhs(pg, e[1], e[2], e[3],
                                r_apply=lambda x, y, z: np.zeros(5))
        np.testing.assert_allclose(out, -e[2], atol=1e-14)
        phi = pg.phi.mat
        a = pg.reeb_gradient.mat
        x, y, z = e[1], e[2], e[3]
        manual = (pg.inner(a @ y, phi @ z) * (a @ x)
                  - pg.inner(a @ x, phi @ z) * (a @ y)
                  - pg.inner(a @ y, z) * (phi @ (a @ x))
                  + pg.inner(a @ x, z) * (phi @ (a @ y)))
        np.testing.assert_allclose(out, manual, atol=1e-14)


class TestCurvatureReconstructionSuite:
    def test_s5_with_given_constant(self, s5, s5_points):
        report = curvature_reconstruction_suite(s5, s5_points, tuples=8, c=1.0)
        assert report.verdict
        assert report["curvature_reconstruction_full"].residual < 1e-12
        assert report["curvature_reconstruction_horizontal"].residual < 1e-12
        assert report["nabla_phi_pairing"].residual < 1e-12

    def test_s5_estimates_constant(self, s5, s5_points):
        report = curvature_reconstruction_suite(s5, s5_points, tuples=8)
        assert report.verdict

    def test_cosymplectic_trivially_flat(self):
        chart = gallery_chart("cosymplectic_r5")
        report = curvature_reconstruction_suite(chart, np.zeros((1, 5)), tuples=8)
        assert report.verdict

    def test_sasakian_gated_out(self):
        chart = gallery_chart("sasakian_r5")
        report = curvature_reconstruction_suite(
            chart, sample_points(chart, 2, seed=5), tuples=8)
        assert not report.verdict
        assert [c.name for c in report.checks] == ["nearly_cosymplectic_gate"]


class TestDualModeSuite:
    def test_s5(self, s5, s5_points):
        report = dual_mode_suite(s5, s5_points)
        assert report.verdict
        names = [c.name for c in report.checks]
        assert names == ["dual_mode_christoffel", "dual_mode_reeb_gradient",
                         "dual_mode_nabla_phi", "dual_mode_riemann"]

    def test_sasakian(self):
        chart = gallery_chart("sasakian_r5")
        report = dual_mode_suite(chart, sample_points(chart, 2, seed=8))
        assert report.verdict
