__all__ = ["gauss_lobatto", "gauss_legendre"]

import functools

import numpy as np
from numpy.polynomial import legendre

from src.exceptions import InvalidArgument
from src.modules.timedisc.schemas import GaussLobattoRule

NEWTON_TOLERANCE = 1e-15
NEWTON_MAX_ITERATIONS = 100
EXACTNESS_TOLERANCE = 1e-13


@functools.cache
def gauss_lobatto(k: int) -> GaussLobattoRule:
    if k < 1:
        raise InvalidArgument(f"Gauss-Lobatto degree must be at least 1, got {k}")
    # Newton iteration for the roots of (1 - x^2) P_k'(x), started from the Chebyshev-Gauss-Lobatto points
    x = np.cos(np.pi * np.arange(k + 1) / k)
    vandermonde = np.zeros((k + 1, k + 1))
    for _ in range(NEWTON_MAX_ITERATIONS):
        x_old = x
        vandermonde[:, 0] = 1.0
        vandermonde[:, 1] = x
        for j in range(2, k + 1):
            vandermonde[:, j] = ((2 * j - 1) * x * vandermonde[:, j - 1] - (j - 1) * vandermonde[:, j - 2]) / j
        x = x_old - (x * vandermonde[:, k] - vandermonde[:, k - 1]) / ((k + 1) * vandermonde[:, k])
        if np.max(np.abs(x - x_old)) <= NEWTON_TOLERANCE:
            break
    nodes = x[::-1].copy()
    nodes[0], nodes[-1] = -1.0, 1.0
    weights = 2.0 / (k * (k + 1) * legendre.legval(nodes, [0] * k + [1]) ** 2)

    _check_exactness(nodes, weights, 2 * k - 1)
    for array in (nodes, weights):
        array.setflags(write=False)
    return GaussLobattoRule(k=k, nodes=nodes, weights=weights)


@functools.cache
def gauss_legendre(n_points: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights on [-1, 1]."""
    if n_points < 1:
        raise InvalidArgument(f"Gauss rule needs at least one point, got {n_points}")
    nodes, weights = legendre.leggauss(n_points)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def _check_exactness(nodes: np.ndarray, weights: np.ndarray, degree: int) -> None:
    for power in range(degree + 1):
        exact = 2.0 / (power + 1) if power % 2 == 0 else 0.0
        if abs(weights @ nodes**power - exact) > EXACTNESS_TOLERANCE:
            raise ArithmeticError(f"Gauss-Lobatto rule is not exact for t^{power}")
