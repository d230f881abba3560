__all__ = ["initial_values", "stack_initial"]

import numpy as np

from src.config_schema import InitialValueStrategy
from src.modules.assembly.schemas import SystemLayout
from src.modules.fespace.space import interpolate
from src.modules.model.schemas import ExactSolution
from src.modules.projection.elliptic import EllipticProjector


def initial_values(
    projector: EllipticProjector,
    msol: ExactSolution,
    strategy: InitialValueStrategy = InitialValueStrategy.ELLIPTIC_PROJECTION,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(u_0h, v_0h, p_0h) from the exact solution at t = 0."""
    space_u, space_p = projector.vector.space, projector.scalar.space
    u0, v0, p0 = msol.displacement_field(0.0), msol.velocity_field(0.0), msol.pressure_field(0.0)
    match InitialValueStrategy(strategy):
        case InitialValueStrategy.ELLIPTIC_PROJECTION:
            values = projector.vector(u0), interpolate(space_u, v0.value), interpolate(space_p, p0.value)
        case InitialValueStrategy.NODAL_INTERPOLATION:
            values = interpolate(space_u, u0.value), interpolate(space_u, v0.value), interpolate(space_p, p0.value)
        case InitialValueStrategy.FULL_ELLIPTIC_PROJECTION:
            values = projector.vector(u0), projector.vector(v0), projector.scalar(p0)
    u, v, p = values
    # nodal interpolation does not see the homogeneous boundary data of the discrete spaces
    u[space_u.dirichlet_mask] = 0.0
    v[space_u.dirichlet_mask] = 0.0
    p[space_p.dirichlet_mask] = 0.0
    return u, v, p


def stack_initial(layout: SystemLayout, u: np.ndarray, v: np.ndarray, p: np.ndarray) -> np.ndarray:
    y = np.zeros(layout.size)
    y[layout.u], y[layout.v], y[layout.p] = u, v, p
    return y
