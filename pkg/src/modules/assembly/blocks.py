__all__ = [
    "assemble_blocks",
    "assemble_mass",
    "assemble_elasticity",
    "assemble_diffusion",
    "assemble_divergence",
    "apply_dirichlet",
    "is_symmetric",
]

import numpy as np
import scipy.sparse as sp

from src.exceptions import InvalidArgument
from src.logging_ import log_duration, logger
from src.modules.assembly.schemas import OperatorBlocks, SparseMatrix
from src.modules.fespace.quadrature import gauss_quadrature_2d
from src.modules.fespace.schemas import FESpace, SpatialQuadrature
from src.modules.fespace.space import reference_basis
from src.modules.model.schemas import MaterialParams

# All cells are congruent squares, so one local matrix serves every cell; it is scattered through the
# cell-to-DOF maps and duplicates are summed by the COO -> CSR conversion.


def _scatter(rows: np.ndarray, cols: np.ndarray, local: np.ndarray, shape: tuple[int, int]) -> SparseMatrix:
    n_cells = rows.shape[0]
    row_index = np.broadcast_to(rows[:, :, None], (n_cells, rows.shape[1], cols.shape[1]))
    col_index = np.broadcast_to(cols[:, None, :], (n_cells, rows.shape[1], cols.shape[1]))
    data = np.broadcast_to(local, (n_cells, *local.shape))
    return sp.coo_matrix((data.ravel(), (row_index.ravel(), col_index.ravel())), shape=shape).tocsr()


def _check_same_mesh(space_a: FESpace, space_b: FESpace) -> None:
    if space_a.mesh is not space_b.mesh and space_a.mesh.cells_per_side != space_b.mesh.cells_per_side:
        raise InvalidArgument("Spaces are defined on different meshes")


def _default_quadrature(*spaces: FESpace) -> SpatialQuadrature:
    return gauss_quadrature_2d(max(space.order for space in spaces) + 1)


def assemble_mass(space: FESpace, quad: SpatialQuadrature | None = None) -> SparseMatrix:
    """<u, w>; component blocks of vector spaces are uncoupled."""
    quad = quad or _default_quadrature(space)
    values, _ = reference_basis(space.order, quad.points)
    local = space.mesh.cell_area * np.einsum("q,qi,qj->ij", quad.weights, values, values)
    local = np.kron(np.eye(space.components), local)
    return _scatter(space.cell_dof_map, space.cell_dof_map, local, (space.n_dofs, space.n_dofs))


def assemble_diffusion(space: FESpace, K: np.ndarray, quad: SpatialQuadrature | None = None) -> SparseMatrix:
    """<K grad p, grad psi> on a scalar space."""
    quad = quad or _default_quadrature(space)
    _, gradients = reference_basis(space.order, quad.points)
    # grad = N * reference gradient, cell area = 1 / N^2: the scale factors cancel in 2D
    local = np.einsum("q,qid,de,qje->ij", quad.weights, gradients, np.asarray(K, dtype=float), gradients)
    return _scatter(space.scalar_cell_dof_map, space.scalar_cell_dof_map, local, (space.n_dofs, space.n_dofs))


def assemble_elasticity(space: FESpace, params: MaterialParams, quad: SpatialQuadrature | None = None) -> SparseMatrix:
    """
    <C eps(u), eps(chi)> on a vector space.

    For chi = phi_i e_a and u = phi_j e_b the integrand is
    mu (delta_ab grad phi_i . grad phi_j + d_b phi_i d_a phi_j) + lambda d_a phi_i d_b phi_j.
    """
    if space.components != 2:
        raise InvalidArgument("Elasticity needs a vector space")
    quad = quad or _default_quadrature(space)
    _, g = reference_basis(space.order, quad.points)
    w = quad.weights
    dot = np.einsum("q,qid,qjd->ij", w, g, g)
    blocks = [[None, None], [None, None]]
    for a in range(2):
        for b in range(2):
            cross = np.einsum("q,qi,qj->ij", w, g[:, :, b], g[:, :, a])
            divergence = np.einsum("q,qi,qj->ij", w, g[:, :, a], g[:, :, b])
            blocks[a][b] = params.mu * ((a == b) * dot + cross) + params.lam * divergence
    local = np.block(blocks)
    return _scatter(space.cell_dof_map, space.cell_dof_map, local, (space.n_dofs, space.n_dofs))


def assemble_divergence(
    space_u: FESpace, space_p: FESpace, quad: SpatialQuadrature | None = None
) -> SparseMatrix:
    """<div chi, q> with chi in the vector space (rows) and q in the scalar space (columns)."""
    _check_same_mesh(space_u, space_p)
    quad = quad or _default_quadrature(space_u, space_p)
    _, g_u = reference_basis(space_u.order, quad.points)
    values_p, _ = reference_basis(space_p.order, quad.points)
    # d/dx = N d/dxhat, cell area 1 / N^2
    scale = space_u.mesh.cells_per_side * space_u.mesh.cell_area
    local = scale * np.vstack([np.einsum("q,qi,qj->ij", quad.weights, g_u[:, :, a], values_p) for a in range(2)])
    return _scatter(space_u.cell_dof_map, space_p.scalar_cell_dof_map, local, (space_u.n_dofs, space_p.n_dofs))


def apply_dirichlet(
    matrix: SparseMatrix, row_mask: np.ndarray, col_mask: np.ndarray | None = None, unit_diagonal: bool = True
) -> SparseMatrix:
    """
    Symmetric elimination of constrained rows and columns. Square matrices get a unit diagonal on the
    constrained entries; rectangular blocks are only zeroed.
    """
    if col_mask is None:
        col_mask = row_mask
    keep_rows = sp.diags((~row_mask).astype(float))
    keep_cols = sp.diags((~col_mask).astype(float))
    result = keep_rows @ matrix @ keep_cols
    if unit_diagonal and matrix.shape[0] == matrix.shape[1] and col_mask is row_mask:
        result = result + sp.diags(row_mask.astype(float))
    result = sp.csr_matrix(result)
    result.eliminate_zeros()
    return result


def is_symmetric(matrix: SparseMatrix, tol: float = 1e-12) -> bool:
    difference = matrix - matrix.T
    return difference.nnz == 0 or float(np.abs(difference.data).max()) < tol


def assemble_blocks(
    space_u: FESpace, space_p: FESpace, params: MaterialParams, quad: SpatialQuadrature | None = None
) -> OperatorBlocks:
    if space_u.components != 2 or space_p.components != 1:
        raise InvalidArgument("Expected a vector displacement space and a scalar pressure space")
    _check_same_mesh(space_u, space_p)
    if space_u.order not in (space_p.order, space_p.order + 1):
        raise InvalidArgument(
            f"Unsupported pairing: vector order {space_u.order}, scalar order {space_p.order} "
            "(equal order or Taylor-Hood expected)"
        )
    quad = quad or _default_quadrature(space_u, space_p)
    mask_u, mask_p = space_u.dirichlet_mask, space_p.dirichlet_mask

    with log_duration(f"Assembly of operator blocks ({space_u.n_dofs} + {space_p.n_dofs} DOFs)"):
        blocks = OperatorBlocks(
            space_u=space_u,
            space_p=space_p,
            mass_u=apply_dirichlet(assemble_mass(space_u, quad), mask_u),
            stiffness_u=apply_dirichlet(assemble_elasticity(space_u, params, quad), mask_u),
            coupling=apply_dirichlet(assemble_divergence(space_u, space_p, quad), mask_u, mask_p),
            mass_p=apply_dirichlet(assemble_mass(space_p, quad), mask_p),
            stiffness_p=apply_dirichlet(assemble_diffusion(space_p, params.K_matrix, quad), mask_p),
            rho=params.rho,
            alpha=params.alpha,
            c0=params.c0,
        )
    logger.debug(
        f"Blocks: mass_u nnz={blocks.mass_u.nnz}, stiffness_u nnz={blocks.stiffness_u.nnz}, "
        f"coupling nnz={blocks.coupling.nnz}, stiffness_p nnz={blocks.stiffness_p.nnz}"
    )
    return blocks
