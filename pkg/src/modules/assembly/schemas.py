__all__ = ["SparseMatrix", "OperatorBlocks", "SlabSystem", "SystemLayout"]

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from src.modules.fespace.schemas import FESpace

SparseMatrix = sp.csr_matrix


@dataclass(frozen=True, eq=False)
class SystemLayout:
    """Layout of one temporal node of the coupled unknown: [u (n_u), v (n_u), p (n_p)]."""

    n_u: int
    n_p: int
    dirichlet_mask: np.ndarray
    "(size,) constrained entries of one temporal node"

    @property
    def size(self) -> int:
        return 2 * self.n_u + self.n_p

    @property
    def u(self) -> slice:
        return slice(0, self.n_u)

    @property
    def v(self) -> slice:
        return slice(self.n_u, 2 * self.n_u)

    @property
    def p(self) -> slice:
        return slice(2 * self.n_u, self.size)


@dataclass(frozen=True, eq=False)
class OperatorBlocks:
    """
    Spatial operators with homogeneous Dirichlet rows and columns eliminated (unit diagonal).

    `coupling` discretizes <div chi, q> for vector test chi and scalar q; alpha, rho and c0 are applied when
    the coupled system is built.
    """

    space_u: FESpace
    space_p: FESpace
    mass_u: SparseMatrix
    "<u, chi>, unweighted vector mass"
    stiffness_u: SparseMatrix
    "<C eps(u), eps(chi)>"
    coupling: SparseMatrix
    "(n_u, n_p) <div chi, q>"
    mass_p: SparseMatrix
    "<p, psi>"
    stiffness_p: SparseMatrix
    "<K grad p, grad psi>"
    rho: float
    alpha: float
    c0: float

    @property
    def layout(self) -> SystemLayout:
        mask = np.concatenate([self.space_u.dirichlet_mask, self.space_u.dirichlet_mask, self.space_p.dirichlet_mask])
        return SystemLayout(n_u=self.space_u.n_dofs, n_p=self.space_p.n_dofs, dirichlet_mask=mask)


@dataclass(frozen=True, eq=False)
class SlabSystem:
    """
    Linear system of one slab for the unknown temporal nodes 1..k.

    Unknowns are ordered node-major: row j * size + i holds entry i of node j + 1. Test index m of the
    Legendre basis labels the row blocks in the same way.
    """

    matrix: SparseMatrix
    mass: SparseMatrix
    "Block mass operator of one temporal node"
    stiffness: SparseMatrix
    "Block stiffness operator of one temporal node"
    derivative_moments: np.ndarray
    "(k, k + 1): sum_mu w_mu L_j'(s_mu) psi_m(s_mu)"
    value_moments: np.ndarray
    "(k, k + 1): w_j psi_m(s_j)"
    tau: float
    dirichlet_mask: np.ndarray
    "(size,) constrained entries of one temporal node"

    @property
    def k(self) -> int:
        return self.value_moments.shape[0]

    @property
    def size(self) -> int:
        return self.mass.shape[0]

    def index(self, node: int, entry: int | np.ndarray) -> int | np.ndarray:
        """Row of entry `entry` at temporal node `node` (1..k)."""
        return (node - 1) * self.size + entry
