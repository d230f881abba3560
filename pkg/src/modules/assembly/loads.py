__all__ = ["Load", "assemble_load", "assemble_flux_load", "assemble_field_load", "ForcingLoad", "zero_load"]

from typing import Callable

import numpy as np

from src.modules.assembly.schemas import OperatorBlocks
from src.modules.fespace.quadrature import gauss_quadrature_2d
from src.modules.fespace.schemas import FESpace, SpatialQuadrature
from src.modules.fespace.space import reference_basis
from src.modules.model.forcing import forcing_f, forcing_g
from src.modules.model.schemas import ManufacturedSolution, MaterialParams

Load = Callable[[float], np.ndarray]
"Right-hand side of M y' + A y = L(t) for one temporal node, constrained entries zero"


def assemble_load(space: FESpace, values: np.ndarray, quad: SpatialQuadrature) -> np.ndarray:
    """
    <w, phi_i> for w sampled at the quadrature points of every cell: (n_cells, n_points) for scalar spaces,
    (n_cells, n_points, 2) for vector spaces.
    """
    shape_values, _ = reference_basis(space.order, quad.points)
    # (components, n_points, n_cells)
    sampled = np.asarray(values, dtype=float).reshape(space.mesh.n_cells, quad.n_points, -1).T
    weighted = space.mesh.cell_area * quad.weights[:, None] * sampled
    local = np.einsum("cqe,ql->cel", weighted, shape_values)
    result = np.zeros(space.n_dofs)
    for c in range(space.components):
        indices = space.scalar_cell_dof_map + c * space.n_nodes
        result += np.bincount(indices.ravel(), weights=local[c].ravel(), minlength=space.n_dofs)
    return result


def assemble_flux_load(space: FESpace, flux: np.ndarray, quad: SpatialQuadrature) -> np.ndarray:
    """
    <sigma, grad phi_i> for sigma sampled as (n_cells, n_points, 2) on scalar spaces or
    (n_cells, n_points, 2, 2) on vector spaces (row a pairs with component a of the test function).
    """
    _, gradients = reference_basis(space.order, quad.points)
    flux = np.asarray(flux, dtype=float).reshape(space.mesh.n_cells, quad.n_points, space.components, 2)
    scale = space.mesh.cell_area * space.mesh.cells_per_side
    local = scale * np.einsum("q,eqcd,qld->cel", quad.weights, flux, gradients)
    result = np.zeros(space.n_dofs)
    for c in range(space.components):
        indices = space.scalar_cell_dof_map + c * space.n_nodes
        result += np.bincount(indices.ravel(), weights=local[c].ravel(), minlength=space.n_dofs)
    return result


def assemble_field_load(
    space: FESpace, field: Callable[[np.ndarray], np.ndarray], quad: SpatialQuadrature | None = None
) -> np.ndarray:
    quad = quad or gauss_quadrature_2d(space.order + 2)
    return assemble_load(space, field(space.mesh.map_to_physical(quad.points)), quad)


class ForcingLoad:
    """Load of the coupled system for the manufactured solution: [0, rho <f, chi>, <g, psi>]."""

    def __init__(
        self,
        blocks: OperatorBlocks,
        params: MaterialParams,
        msol: ManufacturedSolution,
        quad: SpatialQuadrature | None = None,
    ) -> None:
        self.blocks = blocks
        self.params = params
        self.msol = msol
        self.quad = quad or gauss_quadrature_2d(blocks.space_u.order + 2)
        self.layout = blocks.layout
        self._points = blocks.space_u.mesh.map_to_physical(self.quad.points)

    def __call__(self, t: float) -> np.ndarray:
        layout = self.layout
        result = np.zeros(layout.size)
        f = forcing_f(self.params, self.msol, self._points, t)
        g = forcing_g(self.params, self.msol, self._points, t)
        result[layout.v] = self.params.rho * assemble_load(self.blocks.space_u, f, self.quad)
        result[layout.p] = assemble_load(self.blocks.space_p, g, self.quad)
        result[layout.dirichlet_mask] = 0.0
        return result


def zero_load(size: int) -> Load:
    def load(t: float) -> np.ndarray:
        return np.zeros(size)

    return load
