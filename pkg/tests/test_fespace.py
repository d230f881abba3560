import numpy as np
import pytest

from src.exceptions import InvalidArgument
from src.modules.fespace.quadrature import gauss_quadrature_2d
from src.modules.fespace.space import (
    build_space,
    eval_basis,
    evaluate_at_quadrature,
    evaluate_gradient_at_quadrature,
    integrate_cells,
    interpolate,
    reference_basis,
)
from src.modules.mesh.builder import build_mesh


@pytest.mark.parametrize("n, r", [(1, 1), (2, 2), (4, 2), (3, 3)])
def test_dof_counts(n, r):
    mesh = build_mesh(n)
    scalar = build_space(mesh, r)
    vector = build_space(mesh, r, components=2)
    assert scalar.n_dofs == (r * n + 1) ** 2
    assert vector.n_dofs == 2 * scalar.n_dofs
    assert scalar.cell_dof_map.shape == (n * n, (r + 1) ** 2)
    assert len(scalar.dirichlet_dofs) == 4 * r * n
    assert len(vector.dirichlet_dofs) == 8 * r * n


def test_dirichlet_dofs_lie_on_boundary():
    space = build_space(build_mesh(3), 2)
    coords = space.dof_coords[space.dirichlet_dofs]
    on_boundary = np.isclose(coords, 0.0).any(axis=1) | np.isclose(coords, 1.0).any(axis=1)
    assert on_boundary.all()
    assert space.free_dofs.size == space.n_dofs - space.dirichlet_dofs.size


def test_neighbouring_cells_share_edge_dofs():
    space = build_space(build_mesh(2), 2)
    # right edge of cell 0 (a = r) is the left edge of cell 1 (a = 0)
    local = np.arange(9).reshape(3, 3)
    np.testing.assert_array_equal(
        space.scalar_cell_dof_map[0][local[:, 2]], space.scalar_cell_dof_map[1][local[:, 0]]
    )


@pytest.mark.parametrize("r", [1, 2, 3])
def test_partition_of_unity(r):
    points = np.array([[0.1, 0.2], [0.5, 0.9], [0.33, 0.77]])
    values, gradients = reference_basis(r, points)
    np.testing.assert_allclose(values.sum(axis=1), 1.0)
    np.testing.assert_allclose(gradients.sum(axis=1), 0.0, atol=1e-12)


def test_eval_basis_kronecker_at_nodes():
    space = build_space(build_mesh(2), 2)
    nodes = space.local_nodes
    values, _ = eval_basis(space, 3, np.array([nodes[1], nodes[2]]))
    expected = np.zeros(9)
    expected[2 * 3 + 1] = 1.0
    np.testing.assert_allclose(values, expected, atol=1e-14)


def test_eval_basis_rejects_bad_cell():
    space = build_space(build_mesh(2), 1)
    with pytest.raises(InvalidArgument):
        eval_basis(space, 4, np.array([0.5, 0.5]))


@pytest.mark.parametrize("order, components", [(0, 1), (2, 3)])
def test_build_space_rejects(order, components):
    with pytest.raises(InvalidArgument):
        build_space(build_mesh(2), order, components)


def test_interpolation_reproduces_q_r():
    space = build_space(build_mesh(3), 2)
    quad = gauss_quadrature_2d(4)

    def f(x):
        return x[..., 0] ** 2 * x[..., 1] ** 2 - x[..., 0] * x[..., 1]

    def grad_f(x):
        return np.stack([2 * x[..., 0] * x[..., 1] ** 2 - x[..., 1], 2 * x[..., 1] * x[..., 0] ** 2 - x[..., 0]], -1)

    coefficients = interpolate(space, f)
    points = space.mesh.map_to_physical(quad.points)
    np.testing.assert_allclose(evaluate_at_quadrature(space, coefficients, quad), f(points), atol=1e-13)
    np.testing.assert_allclose(
        evaluate_gradient_at_quadrature(space, coefficients, quad), grad_f(points), atol=1e-12
    )


def test_vector_interpolation_blocks():
    space = build_space(build_mesh(2), 1, components=2)
    coefficients = interpolate(space, lambda x: np.stack([x[..., 0], 2 * x[..., 1]], axis=-1))
    np.testing.assert_allclose(coefficients[space.component_slice(0)], space.dof_coords[:, 0])
    np.testing.assert_allclose(coefficients[space.component_slice(1)], 2 * space.dof_coords[:, 1])
    quad = gauss_quadrature_2d(2)
    gradients = evaluate_gradient_at_quadrature(space, coefficients, quad)
    np.testing.assert_allclose(gradients[..., 0, 0], 1.0)
    np.testing.assert_allclose(gradients[..., 1, 1], 2.0)
    np.testing.assert_allclose(gradients[..., 0, 1], 0.0, atol=1e-13)


def test_integrate_cells():
    mesh = build_mesh(4)
    quad = gauss_quadrature_2d(3)
    points = mesh.map_to_physical(quad.points)
    assert integrate_cells(mesh, quad, points[..., 0] ** 2 * points[..., 1]) == pytest.approx(1 / 6)


def test_quadrature_rule():
    quad = gauss_quadrature_2d(3)
    assert quad.n_points == 9
    assert quad.exact_degree == 5
    assert quad.weights.sum() == pytest.approx(1.0)
    assert quad.weights @ quad.points[:, 0] ** 5 == pytest.approx(1 / 6)


@pytest.mark.parametrize("r", [2, 3])
def test_interpolation_error_rate(r):
    """Nodal interpolation of sin(pi x) sin(pi y) loses about 2^(r + 1) per halving of h in L2."""

    def f(x):
        return np.sin(np.pi * x[..., 0]) * np.sin(np.pi * x[..., 1])

    quad = gauss_quadrature_2d(r + 3)
    errors = []
    for n in (4, 8, 16):
        space = build_space(build_mesh(n), r)
        difference = evaluate_at_quadrature(space, interpolate(space, f), quad) - f(
            space.mesh.map_to_physical(quad.points)
        )
        errors.append(np.sqrt(integrate_cells(space.mesh, quad, difference**2)))
    rates = np.log2(np.array(errors[:-1]) / np.array(errors[1:]))
    np.testing.assert_allclose(rates, r + 1, atol=0.15)
