__all__ = [
    "RitzProjection",
    "EllipticProjector",
    "elliptic_projection_vector",
    "elliptic_projection_scalar",
    "projection_residual",
]

from typing import Callable

import numpy as np

from src.exceptions import InvalidArgument
from src.modules.assembly.blocks import apply_dirichlet, assemble_diffusion, assemble_elasticity
from src.modules.assembly.loads import assemble_flux_load
from src.modules.assembly.schemas import OperatorBlocks, SparseMatrix
from src.modules.fespace.quadrature import gauss_quadrature_2d
from src.modules.fespace.schemas import AnalyticField, FESpace, SpatialQuadrature
from src.modules.model.schemas import ExactSolution, MaterialParams
from src.modules.solver.linear import LinearSolver

Flux = Callable[[np.ndarray], np.ndarray]
"Maps gradients at quadrature points to the flux paired with the test gradient"

Target = AnalyticField | np.ndarray


def stress_flux(params: MaterialParams) -> Flux:
    def flux(gradient: np.ndarray) -> np.ndarray:
        return params.stress(0.5 * (gradient + np.swapaxes(gradient, -1, -2)))

    return flux


def diffusion_flux(K: np.ndarray) -> Flux:
    K = np.asarray(K, dtype=float)

    def flux(gradient: np.ndarray) -> np.ndarray:
        return np.einsum("ab,...b->...a", K, gradient)

    return flux


class RitzProjection:
    """
    Projection w -> R_h w defined by a(R_h w, phi_h) = a(w, phi_h) for all phi_h of the space.

    Analytic targets are sampled at the quadrature points of every cell (no intermediate interpolation);
    discrete targets are coefficient vectors of the same space.
    """

    def __init__(
        self, space: FESpace, stiffness: SparseMatrix, flux: Flux, quad: SpatialQuadrature | None = None
    ) -> None:
        self.space = space
        self.stiffness = stiffness
        self.flux = flux
        self.quad = quad or gauss_quadrature_2d(space.order + 3)
        self._points = space.mesh.map_to_physical(self.quad.points)
        self._solver: LinearSolver | None = None

    @property
    def solver(self) -> LinearSolver:
        if self._solver is None:
            self._solver = LinearSolver(self.stiffness)
        return self._solver

    def rhs(self, w: Target) -> np.ndarray:
        if isinstance(w, AnalyticField):
            if w.gradient is None:
                raise InvalidArgument("Elliptic projection of an analytic field needs its gradient")
            result = assemble_flux_load(self.space, self.flux(w.gradient(self._points)), self.quad)
        else:
            w = np.asarray(w, dtype=float)
            if w.shape != (self.space.n_dofs,):
                raise InvalidArgument(f"Coefficient vector of shape {w.shape}, expected ({self.space.n_dofs},)")
            result = self.stiffness @ w
        result[self.space.dirichlet_mask] = 0.0
        return result

    def __call__(self, w: Target) -> np.ndarray:
        return self.solver.solve(self.rhs(w))

    def many(self, targets: list[Target]) -> np.ndarray:
        """(len(targets), n_dofs) projections with one factorization and one batched solve."""
        if not targets:
            return np.zeros((0, self.space.n_dofs))
        rhs = np.column_stack([self.rhs(w) for w in targets])
        return self.solver.solve(rhs).T

    def galerkin_residual(self, coefficients: np.ndarray, w: Target) -> float:
        """max_i |a(w - R_h w, phi_i)| over the unconstrained basis functions."""
        residual = self.stiffness @ coefficients - self.rhs(w)
        return float(np.abs(residual[~self.space.dirichlet_mask]).max(initial=0.0))


class EllipticProjector:
    """Vector (elasticity) and scalar (diffusion) projections sharing the matrices of the coupled system."""

    def __init__(self, blocks: OperatorBlocks, params: MaterialParams) -> None:
        self.vector = RitzProjection(blocks.space_u, blocks.stiffness_u, stress_flux(params))
        self.scalar = RitzProjection(blocks.space_p, blocks.stiffness_p, diffusion_flux(params.K_matrix))


def elliptic_projection_vector(space: FESpace, w: Target, params: MaterialParams) -> np.ndarray:
    stiffness = apply_dirichlet(assemble_elasticity(space, params), space.dirichlet_mask)
    return RitzProjection(space, stiffness, stress_flux(params))(w)


def elliptic_projection_scalar(space: FESpace, w: Target, K: np.ndarray) -> np.ndarray:
    stiffness = apply_dirichlet(assemble_diffusion(space, K), space.dirichlet_mask)
    return RitzProjection(space, stiffness, diffusion_flux(K))(w)


def projection_residual(projector: EllipticProjector, msol: ExactSolution, t: float) -> float:
    """Largest Galerkin residual of R_h u(t) and R_h p(t), each scaled by max(1, max |a(w, phi_i)|)."""
    residual = 0.0
    targets = ((projector.vector, msol.displacement_field(t)), (projector.scalar, msol.pressure_field(t)))
    for projection, field in targets:
        scale = max(1.0, float(np.abs(projection.rhs(field)).max()))
        residual = max(residual, projection.galerkin_residual(projection(field), field) / scale)
    return residual
