__all__ = ["forcing_f", "forcing_g", "exact_fields"]

import numpy as np

from src.modules.model.schemas import ManufacturedSolution, MaterialParams

DIRECTION = np.ones(2)
"u = phi * DIRECTION"


def forcing_f(params: MaterialParams, msol: ManufacturedSolution, x: np.ndarray, t: float) -> np.ndarray:
    """
    f = d2/dt2 u - (1 / rho) div(C eps(u)) + (alpha / rho) grad p, shape (..., 2).

    For u = phi d: div(C eps(u)) = mu tr(H) d + (mu + lambda) H d with H the Hessian of phi.
    """
    x = np.asarray(x, dtype=float)
    hessian = msol.hessian_phi(x, t)
    laplacian = hessian[..., 0, 0] + hessian[..., 1, 1]
    div_stress = params.mu * laplacian[..., None] * DIRECTION + (params.mu + params.lam) * hessian @ DIRECTION
    return (
        msol.phi_tt(x, t)[..., None] * DIRECTION
        - div_stress / params.rho
        + (params.alpha / params.rho) * msol.grad_phi(x, t)
    )


def forcing_g(params: MaterialParams, msol: ManufacturedSolution, x: np.ndarray, t: float) -> np.ndarray:
    """g = c0 dp/dt + alpha div(du/dt) - div(K grad p)."""
    x = np.asarray(x, dtype=float)
    hessian = msol.hessian_phi(x, t)
    diffusion = np.einsum("ab,...ab->...", params.K_matrix, hessian)
    return params.c0 * msol.phi_t(x, t) + params.alpha * (msol.grad_phi_t(x, t) @ DIRECTION) - diffusion


def exact_fields(msol: ManufacturedSolution, x: np.ndarray, t: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    return msol.fields(x, t)
