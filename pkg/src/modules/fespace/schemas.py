__all__ = ["SpatialQuadrature", "FESpace", "AnalyticField"]

from dataclasses import dataclass
from typing import Callable

import numpy as np

from src.modules.mesh.schemas import Mesh


@dataclass(frozen=True, eq=False)
class SpatialQuadrature:
    """Tensor-product rule on the reference cell [0, 1]^2 (measure 1)."""

    points: np.ndarray
    "(n_points, 2)"
    weights: np.ndarray
    "(n_points,)"
    exact_degree: int
    "Degree per axis integrated exactly"

    @property
    def n_points(self) -> int:
        return self.points.shape[0]


@dataclass(frozen=True, eq=False)
class FESpace:
    """
    Continuous Q_r Lagrange space on a uniform square mesh, scalar or 2-vector.

    Scalar nodes form the (rN + 1) x (rN + 1) grid of tensor-product Gauss-Lobatto points, numbered
    lexicographically by (y, x). Vector spaces use block numbering: all x-component DOFs first, then all
    y-component DOFs, each block ordered like the scalar space.
    """

    mesh: Mesh
    order: int
    components: int
    local_nodes: np.ndarray
    "(r + 1,) Gauss-Lobatto points on [0, 1] per axis"
    dof_coords: np.ndarray
    "(n_nodes, 2) coordinates of the scalar nodes"
    scalar_cell_dof_map: np.ndarray
    "(n_cells, (r + 1)^2) scalar node indices; local index b * (r + 1) + a for node (a, b)"
    cell_dof_map: np.ndarray
    "(n_cells, components * (r + 1)^2) global DOF indices, component blocks side by side"
    dirichlet_dofs: np.ndarray
    "Sorted DOF indices whose node lies on the boundary (every component)"

    @property
    def n_nodes(self) -> int:
        return self.dof_coords.shape[0]

    @property
    def n_dofs(self) -> int:
        return self.components * self.n_nodes

    @property
    def n_local(self) -> int:
        """Scalar shape functions per cell"""
        return (self.order + 1) ** 2

    @property
    def dirichlet_mask(self) -> np.ndarray:
        mask = np.zeros(self.n_dofs, dtype=bool)
        mask[self.dirichlet_dofs] = True
        return mask

    @property
    def free_dofs(self) -> np.ndarray:
        return np.flatnonzero(~self.dirichlet_mask)

    def component_slice(self, component: int) -> slice:
        return slice(component * self.n_nodes, (component + 1) * self.n_nodes)


@dataclass(frozen=True)
class AnalyticField:
    """
    Continuous field given pointwise. `value` maps points (..., 2) to (...) for scalars or (..., 2) for
    vectors; `gradient` maps to (..., 2) or (..., 2, 2) with [a, b] = d w_a / d x_b.
    """

    value: Callable[[np.ndarray], np.ndarray]
    gradient: Callable[[np.ndarray], np.ndarray] | None = None
