__all__ = ["FD_STEP", "first_derivative", "second_derivative", "fd_forcing"]

from typing import Callable

import numpy as np

from src.modules.model.schemas import ManufacturedSolution, MaterialParams

FD_STEP = 1e-3

# fourth-order central stencils
_FIRST = ((-2, 1.0 / 12), (-1, -8.0 / 12), (1, 8.0 / 12), (2, -1.0 / 12))
_SECOND = ((-2, -1.0 / 12), (-1, 16.0 / 12), (0, -30.0 / 12), (1, 16.0 / 12), (2, -1.0 / 12))


def _apply(stencil, f: Callable[[float], np.ndarray], step: float, order: int) -> np.ndarray:
    return sum(weight * f(offset * step) for offset, weight in stencil) / step**order


def first_derivative(f: Callable[[float], np.ndarray], step: float = FD_STEP) -> np.ndarray:
    return _apply(_FIRST, f, step, 1)


def second_derivative(f: Callable[[float], np.ndarray], step: float = FD_STEP) -> np.ndarray:
    return _apply(_SECOND, f, step, 2)


def _mixed_derivative(f: Callable[[float, float], np.ndarray], step: float) -> np.ndarray:
    return first_derivative(lambda a: first_derivative(lambda b: f(a, b), step), step)


def fd_forcing(
    params: MaterialParams, msol: ManufacturedSolution, x: np.ndarray, t: float, step: float = FD_STEP
) -> tuple[np.ndarray, float]:
    """
    Right-hand sides (f, g) at one point, with every derivative of the exact fields taken by finite
    differences; independent of the closed-form derivatives used by the solver.
    """
    x = np.asarray(x, dtype=float)
    e = np.eye(2)

    def u(y: np.ndarray, time: float) -> np.ndarray:
        return msol.fields(y, time)[0]

    def p(y: np.ndarray, time: float) -> float:
        return float(msol.fields(y, time)[2])

    hessians = np.empty((2, 2, 2))  # [component, a, b]
    for a in range(2):
        hessians[:, a, a] = second_derivative(lambda d, a=a: u(x + d * e[a], t), step)
    hessians[:, 0, 1] = hessians[:, 1, 0] = _mixed_derivative(lambda d0, d1: u(x + d0 * e[0] + d1 * e[1], t), step)
    laplacian = hessians[:, 0, 0] + hessians[:, 1, 1]
    grad_div = hessians[0, :, 0] + hessians[1, :, 1]
    div_stress = params.mu * laplacian + (params.mu + params.lam) * grad_div

    u_tt = second_derivative(lambda d: u(x, t + d), step)
    grad_p = np.array([first_derivative(lambda d, a=a: p(x + d * e[a], t), step) for a in range(2)])
    f = u_tt - div_stress / params.rho + (params.alpha / params.rho) * grad_p

    p_t = first_derivative(lambda d: p(x, t + d), step)
    div_v = sum(
        _mixed_derivative(lambda d, s, a=a: u(x + d * e[a], t + s)[a], step) for a in range(2)
    )
    p_hessian = np.empty((2, 2))
    for a in range(2):
        p_hessian[a, a] = second_derivative(lambda d, a=a: p(x + d * e[a], t), step)
    p_hessian[0, 1] = p_hessian[1, 0] = _mixed_derivative(lambda d0, d1: p(x + d0 * e[0] + d1 * e[1], t), step)
    g = params.c0 * p_t + params.alpha * div_v - float(np.sum(params.K_matrix * p_hessian))
    return f, g
