__all__ = ["gauss_quadrature_2d"]

import functools

import numpy as np

from src.exceptions import InvalidArgument
from src.modules.fespace.schemas import SpatialQuadrature
from src.modules.timedisc.quadrature import gauss_legendre


@functools.cache
def gauss_quadrature_2d(points_per_axis: int) -> SpatialQuadrature:
    if points_per_axis < 1:
        raise InvalidArgument(f"points_per_axis must be at least 1, got {points_per_axis}")
    nodes, weights = gauss_legendre(points_per_axis)
    nodes = 0.5 * (nodes + 1.0)
    weights = 0.5 * weights
    xs, ys = np.meshgrid(nodes, nodes)
    points = np.column_stack([xs.ravel(), ys.ravel()])
    weights_2d = np.outer(weights, weights).ravel()
    points.setflags(write=False)
    weights_2d.setflags(write=False)
    return SpatialQuadrature(points=points, weights=weights_2d, exact_degree=2 * points_per_axis - 1)
