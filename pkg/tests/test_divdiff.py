"""Divided differences, the triangular transform and clustered limits."""

import numpy as np
import pytest

from negsquares import (
    BlaschkeProduct,
    HermitianMatrix,
    PointConfig,
    UnitDiskPoint,
    ValidationError,
    cluster_limit_check,
    divided_diffs,
    inertia,
    intertwining_residual,
    jordan_companion,
    phi_congruence,
    phi_matrix,
    pick_entries,
    taylor_from_circle,
)
from conftest import example_sharp


def cfg(*values) -> PointConfig:
    return PointConfig.from_complex(values)


class TestDividedDiffs:
    def test_constant_function(self):
        table = divided_diffs(cfg(0.1, 0.2, 0.3), lambda z: 3.0)
        top = table.top_row()
        assert top[0] == 3.0
        assert np.max(np.abs(top[1:])) == 0.0

    def test_square_leading_coefficient(self):
        table = divided_diffs(cfg(0.1, -0.2, 0.3j), lambda z: z * z)
        assert abs(table.top_row()[2] - 1.0) < 1e-14

    def test_square_two_nodes(self):
        table = divided_diffs(cfg(0.0, 0.5), lambda z: z * z)
        assert np.allclose(table.top_row(), [0.0, 0.5])

    def test_first_column_is_values(self):
        table = divided_diffs(cfg(0.1, 0.2), lambda z: 1 / (1 - z))
        assert np.allclose(table.table[:, 0], table.values)

    def test_evaluation_failure_carries_index(self):
        def v(z):
            if z == 0.2:
                raise RuntimeError("boom")
            return z

        with pytest.raises(Exception, match="node 1"):
            divided_diffs(cfg(0.1, 0.2), v)


class TestPhiMatrix:
    def test_single_node(self):
        assert np.allclose(phi_matrix(cfg(0.3)).matrix, [[1.0]])

    def test_two_nodes_explicit(self):
        m = phi_matrix(cfg(0.0, 0.5)).matrix
        assert np.allclose(m, [[1.0, 0.0], [-2.0, 2.0]])

    def test_transform_equals_divided_differences(self, rng):
        for _ in range(10):
            k = int(rng.integers(2, 7))
            pts = rng.uniform(-0.7, 0.7, k) + 1j * rng.uniform(-0.7, 0.7, k)
            if np.min(np.abs(pts[:, None] - pts[None, :])[np.triu_indices(k, 1)]) < 1e-4:
                continue
            nodes = PointConfig.from_complex(pts)

            def v(z):
                return 1.0 / (1.3 - z) + z * z

            got = phi_matrix(nodes).matrix @ np.array([v(z) for z in pts])
            want = divided_diffs(nodes, v).top_row()
            scale = np.maximum(np.abs(want), 1.0)
            assert np.max(np.abs(got - want) / scale) < 1e-12

    def test_transform_on_square_three_nodes(self):
        nodes = cfg(0.0, 0.5, 0.25)
        got = phi_matrix(nodes).matrix @ (nodes.values() ** 2)
        want = divided_diffs(nodes, lambda z: z * z).top_row()
        assert np.allclose(got, want, atol=1e-14)

    def test_conditioning_flag(self):
        assert phi_matrix(cfg(0.0, 0.5)).well_conditioned
        assert not phi_matrix(cfg(0.0, 1e-8)).well_conditioned


class TestIntertwining:
    def test_single_node_exact(self):
        assert intertwining_residual(cfg(0.4)) == 0.0

    def test_two_nodes(self):
        assert intertwining_residual(cfg(0.0, 0.5)) <= 1e-15

    def test_random_nodes(self, rng):
        for _ in range(5):
            pts = rng.uniform(-0.6, 0.6, 6) + 1j * rng.uniform(-0.6, 0.6, 6)
            if np.min(np.abs(pts[:, None] - pts[None, :])[np.triu_indices(6, 1)]) < 1e-3:
                continue
            nodes = PointConfig.from_complex(pts)
            phi = phi_matrix(nodes).matrix
            scale = float(np.max(np.abs(phi))) * float(np.max(np.abs(pts)))
            assert intertwining_residual(nodes) <= 1e-12 * scale

    def test_companion_shape(self):
        j = jordan_companion(cfg(0.1, 0.2, 0.3))
        assert np.allclose(np.diag(j), [0.1, 0.2, 0.3])
        assert np.allclose(np.diag(j, -1), [1.0, 1.0])


class TestClusterLimit:
    def test_linear_function(self):
        report = cluster_limit_check(0.0, lambda z: z, 2, taylor=[0.0, 1.0])
        assert report.final_error <= 1e-9
        assert report.decreasing

    def test_geometric_series(self):
        report = cluster_limit_check(0.0, lambda z: 1.0 / (1.0 - z), 3, taylor=[1.0, 1.0, 1.0])
        assert report.final_error <= 1e-6
        assert report.per_radius_error[-1] <= 1e-4

    def test_blaschke_zero_order_vanishing(self):
        b = BlaschkeProduct(((UnitDiskPoint(0.3), 2),), 1.0)
        report = cluster_limit_check(0.3, lambda z: complex(b.eval(z)), 2, taylor=[0.0, 0.0])
        assert report.final_error <= 1e-8

    def test_estimated_taylor(self):
        report = cluster_limit_check(0.0, lambda z: 1.0 / (1.0 - 0.5 * z), 3)
        want = np.array([1.0, 0.5, 0.25])
        assert np.max(np.abs(report.limit_estimate - want)) <= 1e-7

    def test_taylor_from_circle(self):
        coeffs = taylor_from_circle(lambda z: (1 + z) ** 3, 0.0, 4, 0.1)
        assert np.max(np.abs(coeffs - np.array([1.0, 3.0, 3.0, 1.0]))) < 1e-10

    def test_loss_flag(self):
        report = cluster_limit_check(
            0.0, lambda z: z, 4, radii=(1e-4, 1e-6), taylor=[0, 1, 0, 0]
        )
        assert report.loss_of_significance

    def test_monotone_schedule_required(self):
        with pytest.raises(ValidationError):
            cluster_limit_check(0.0, lambda z: z, 2, radii=(1e-3, 1e-2), taylor=[0, 1])


class TestPhiCongruence:
    def test_inertia_invariance_and_conditioning(self):
        # clustered nodes for the degree-3 sharp example: the transform keeps
        # the inertia and improves the condition estimate
        f = example_sharp(3)
        pts = 0.05 * np.exp(2j * np.pi * np.arange(3) / 3)
        nodes = PointConfig.from_complex(pts)
        vals = np.array([f.eval(z) for z in pts])
        p = HermitianMatrix(pick_entries(vals, pts))
        q = phi_congruence(nodes, p)
        assert inertia(q).as_tuple() == inertia(p).as_tuple()

        def cond(m):
            w = np.abs(np.linalg.eigvalsh(m.entries))
            return np.max(w) / np.min(w)

        assert cond(q) < cond(p)

    def test_identity_limit(self):
        # after the transform the clustered Pick matrix approaches the identity
        f = example_sharp(2)
        pts = 1e-3 * np.exp(2j * np.pi * (np.arange(2) + 0.3) / 2)
        nodes = PointConfig.from_complex(pts)
        vals = np.array([f.eval(z) for z in pts])
        q = phi_congruence(nodes, HermitianMatrix(pick_entries(vals, pts)))
        assert np.max(np.abs(q.entries - np.eye(2))) < 1e-2
