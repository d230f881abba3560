import numpy as np
import pytest

from src.exceptions import InvalidArgument
from src.modules.timedisc.basis import slab_basis
from src.modules.timedisc.quadrature import gauss_lobatto
from src.modules.timedisc.time_mesh import build_time_mesh
from src.modules.timedisc.trajectory import ContinuousTrajectory, SlabwiseTrajectory


@pytest.mark.parametrize("k", range(1, 8))
def test_gauss_lobatto_exact_up_to_degree_2k_minus_1(k):
    rule = gauss_lobatto(k)
    for power in range(2 * k):
        exact = 2.0 / (power + 1) if power % 2 == 0 else 0.0
        assert rule.weights @ rule.nodes**power == pytest.approx(exact, abs=1e-13)


@pytest.mark.parametrize("k", range(1, 8))
def test_gauss_lobatto_is_not_exact_for_degree_2k(k):
    rule = gauss_lobatto(k)
    assert abs(rule.weights @ rule.nodes ** (2 * k) - 2.0 / (2 * k + 1)) > 1e-6


@pytest.mark.parametrize("k", range(1, 8))
def test_gauss_lobatto_structure(k):
    rule = gauss_lobatto(k)
    assert rule.nodes[0] == -1.0 and rule.nodes[-1] == 1.0
    assert np.all(np.diff(rule.nodes) > 0)
    np.testing.assert_allclose(rule.nodes, -rule.nodes[::-1], atol=1e-15)
    assert rule.weights.sum() == pytest.approx(2.0)


def test_gauss_lobatto_known_values():
    np.testing.assert_allclose(gauss_lobatto(1).weights, [1.0, 1.0])
    np.testing.assert_allclose(gauss_lobatto(2).nodes, [-1.0, 0.0, 1.0], atol=1e-15)
    np.testing.assert_allclose(gauss_lobatto(2).weights, [1 / 3, 4 / 3, 1 / 3])
    np.testing.assert_allclose(gauss_lobatto(3).nodes, [-1.0, -np.sqrt(0.2), np.sqrt(0.2), 1.0])


def test_gauss_lobatto_rejects_zero():
    with pytest.raises(InvalidArgument):
        gauss_lobatto(0)


def test_map_nodes_and_integrate():
    rule = gauss_lobatto(2)
    times = rule.map_nodes(1.0, 0.5)
    np.testing.assert_allclose(times, [1.0, 1.25, 1.5])
    assert rule.integrate(times**2, 0.5) == pytest.approx((1.5**3 - 1.0) / 3)


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_slab_basis_is_lagrange_at_nodes(k):
    basis = slab_basis(k)
    np.testing.assert_allclose(basis.trial_values(basis.nodes), np.eye(k + 1), atol=1e-13)
    assert basis.test_values(0.3).shape == (1, k)


def test_slab_basis_tables():
    basis = slab_basis(2)
    # derivative of the quadratic interpolant of s^2 is 2s
    np.testing.assert_allclose(basis.derivative_table @ basis.nodes**2, 2 * basis.nodes, atol=1e-13)
    np.testing.assert_allclose(basis.integral_table @ basis.nodes**2, (basis.nodes**3 + 1) / 3, atol=1e-13)


def test_time_mesh_levels():
    mesh = build_time_mesh(2.0, 0.1, level=2)
    assert mesh.n_slabs == 80
    assert mesh.tau == pytest.approx(0.025)
    assert mesh.points[-1] == 2.0
    assert len(set(mesh.tau_n.tolist())) == 1


@pytest.mark.parametrize("T, tau0", [(1.0, 0.3), (0.0, 0.1), (1.0, -0.1)])
def test_time_mesh_rejects_bad_division(T, tau0):
    with pytest.raises(InvalidArgument):
        build_time_mesh(T, tau0)


def test_locate():
    mesh = build_time_mesh(1.0, 0.25)
    assert mesh.locate(0.0) == 0
    assert mesh.locate(0.25) == 0
    assert mesh.locate(0.26) == 1
    assert mesh.locate(1.0) == 3


def test_continuous_trajectory_shares_interfaces():
    mesh = build_time_mesh(1.0, 0.5)
    trajectory = ContinuousTrajectory.zeros(mesh, 2, 3)
    trajectory.nodes[:] = np.arange(5)[:, None]
    np.testing.assert_array_equal(trajectory.slab_values(0)[-1], trajectory.slab_values(1)[0])


def test_trajectory_reproduces_polynomials():
    mesh = build_time_mesh(1.0, 0.25)
    k = 3
    basis = slab_basis(k)
    values = np.stack([(mesh.points[n] + 0.125 * (basis.nodes + 1)) ** 3 for n in range(mesh.n_slabs)])
    trajectory = SlabwiseTrajectory(mesh, k, values[:, :, None])
    assert trajectory.evaluate(0.6)[0] == pytest.approx(0.6**3)
    assert trajectory.evaluate_derivative(0.6)[0] == pytest.approx(3 * 0.6**2)


def test_trajectory_shape_checked():
    mesh = build_time_mesh(1.0, 0.5)
    with pytest.raises(InvalidArgument):
        ContinuousTrajectory(mesh, 2, np.zeros((4, 1)))
    with pytest.raises(InvalidArgument):
        SlabwiseTrajectory(mesh, 2, np.zeros((2, 2, 1)))
