__all__ = [
    "build_space",
    "eval_basis",
    "interpolate",
    "reference_basis",
    "evaluate_at_quadrature",
    "evaluate_gradient_at_quadrature",
    "integrate_cells",
]

import functools
from typing import Callable

import numpy as np
from numpy.polynomial import Polynomial

from src.exceptions import InvalidArgument
from src.modules.fespace.schemas import FESpace, SpatialQuadrature
from src.modules.mesh.schemas import Mesh
from src.modules.timedisc.basis import lagrange_polynomials
from src.modules.timedisc.quadrature import gauss_lobatto


@functools.cache
def _local_polynomials(order: int) -> tuple[np.ndarray, tuple[Polynomial, ...], tuple[Polynomial, ...]]:
    """Gauss-Lobatto nodes on [0, 1], 1D Lagrange polynomials and their derivatives."""
    nodes = 0.5 * (gauss_lobatto(order).nodes + 1.0)
    nodes[0], nodes[-1] = 0.0, 1.0
    polynomials = lagrange_polynomials(nodes)
    return nodes, polynomials, tuple(p.deriv() for p in polynomials)


def reference_basis(order: int, ref_points: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """
    Scalar Q_r shape functions on [0, 1]^2.

    Returns values (n_points, (r + 1)^2) and reference gradients (n_points, (r + 1)^2, 2).
    """
    ref_points = np.atleast_2d(np.asarray(ref_points, dtype=float))
    _, polynomials, derivatives = _local_polynomials(order)
    x, y = ref_points[:, 0], ref_points[:, 1]
    lx = np.column_stack([p(x) for p in polynomials])
    ly = np.column_stack([p(y) for p in polynomials])
    dlx = np.column_stack([p(x) for p in derivatives])
    dly = np.column_stack([p(y) for p in derivatives])
    n_points = ref_points.shape[0]
    values = (ly[:, :, None] * lx[:, None, :]).reshape(n_points, -1)
    grad_x = (ly[:, :, None] * dlx[:, None, :]).reshape(n_points, -1)
    grad_y = (dly[:, :, None] * lx[:, None, :]).reshape(n_points, -1)
    return values, np.stack([grad_x, grad_y], axis=-1)


@functools.cache
def _quadrature_tables(order: int, quad: SpatialQuadrature) -> tuple[np.ndarray, np.ndarray]:
    return reference_basis(order, quad.points)


def build_space(mesh: Mesh, order: int, components: int = 1) -> FESpace:
    if order < 1:
        raise InvalidArgument(f"Polynomial order must be at least 1, got {order}")
    if components not in (1, 2):
        raise InvalidArgument(f"Only scalar and 2-vector spaces are supported, got {components} components")
    n, r = mesh.cells_per_side, order
    per_axis = r * n + 1
    local_nodes, _, _ = _local_polynomials(r)

    axis = np.empty(per_axis)
    for i in range(n):
        axis[i * r : i * r + r + 1] = (i + local_nodes) / n
    xs, ys = np.meshgrid(axis, axis)
    dof_coords = np.column_stack([xs.ravel(), ys.ravel()])

    cell_i, cell_j = mesh.cells[:, 0] % (n + 1), mesh.cells[:, 0] // (n + 1)
    a, b = np.meshgrid(np.arange(r + 1), np.arange(r + 1))
    a, b = a.ravel(), b.ravel()
    scalar_map = (cell_j[:, None] * r + b[None, :]) * per_axis + (cell_i[:, None] * r + a[None, :])

    grid_x, grid_y = np.meshgrid(np.arange(per_axis), np.arange(per_axis))
    on_boundary = ((grid_x == 0) | (grid_x == per_axis - 1) | (grid_y == 0) | (grid_y == per_axis - 1)).ravel()
    boundary_nodes = np.flatnonzero(on_boundary)
    n_nodes = per_axis**2

    cell_dof_map = np.hstack([scalar_map + c * n_nodes for c in range(components)])
    dirichlet_dofs = np.concatenate([boundary_nodes + c * n_nodes for c in range(components)])

    for array in (dof_coords, scalar_map, cell_dof_map, dirichlet_dofs):
        array.setflags(write=False)
    return FESpace(
        mesh=mesh,
        order=r,
        components=components,
        local_nodes=local_nodes,
        dof_coords=dof_coords,
        scalar_cell_dof_map=scalar_map,
        cell_dof_map=cell_dof_map,
        dirichlet_dofs=dirichlet_dofs,
    )


def eval_basis(space: FESpace, cell: int, ref_point: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """
    Local scalar shape functions of `cell` at a point of the reference cell [0, 1]^2.

    Vector spaces use the same scalar functions for each component. Gradients are with respect to the
    reference coordinates; physical gradients are these times `mesh.cells_per_side`.
    """
    if not 0 <= cell < space.mesh.n_cells:
        raise InvalidArgument(f"Cell index {cell} out of range [0, {space.mesh.n_cells})")
    values, gradients = reference_basis(space.order, np.asarray(ref_point, dtype=float).reshape(1, 2))
    return values[0], gradients[0]


def interpolate(space: FESpace, f: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
    values = np.asarray(f(space.dof_coords), dtype=float)
    if space.components == 1:
        return np.broadcast_to(values, (space.n_nodes,)).copy()
    values = np.broadcast_to(values, (space.n_nodes, 2))
    return np.concatenate([values[:, 0], values[:, 1]])


def _cell_coefficients(space: FESpace, coefficients: np.ndarray) -> np.ndarray:
    """(..., components, n_cells, n_local) local coefficients."""
    coefficients = np.asarray(coefficients)
    blocks = [coefficients[..., space.scalar_cell_dof_map + c * space.n_nodes] for c in range(space.components)]
    return np.stack(blocks, axis=-3)


def evaluate_at_quadrature(space: FESpace, coefficients: np.ndarray, quad: SpatialQuadrature) -> np.ndarray:
    """
    Values of finite element functions at the quadrature points of every cell.

    `coefficients` may carry leading batch axes. Returns (..., n_cells, n_points) for scalar spaces and
    (..., n_cells, n_points, 2) for vector spaces.
    """
    values, _ = _quadrature_tables(space.order, quad)
    local = _cell_coefficients(space, coefficients) @ values.T
    if space.components == 1:
        return local[..., 0, :, :]
    return np.moveaxis(local, -3, -1)


def evaluate_gradient_at_quadrature(space: FESpace, coefficients: np.ndarray, quad: SpatialQuadrature) -> np.ndarray:
    """
    Physical gradients at the quadrature points: (..., n_cells, n_points, 2) for scalar spaces and
    (..., n_cells, n_points, 2, 2) with [a, b] = d u_a / d x_b for vector spaces.
    """
    _, gradients = _quadrature_tables(space.order, quad)
    local = _cell_coefficients(space, coefficients)
    grads = np.einsum("...cel,qld->...ceqd", local, gradients) * space.mesh.cells_per_side
    if space.components == 1:
        return grads[..., 0, :, :, :]
    return np.moveaxis(grads, -4, -2)


def integrate_cells(mesh: Mesh, quad: SpatialQuadrature, values: np.ndarray) -> np.ndarray:
    """Integral over the domain of values sampled as (..., n_cells, n_points)."""
    return mesh.cell_area * np.einsum("...cq,q->...", values, quad.weights)
