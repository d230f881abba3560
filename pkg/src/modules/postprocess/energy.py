__all__ = ["energy", "energy_density", "nodal_energy"]

import numpy as np

from src.exceptions import InvalidArgument
from src.modules.assembly.schemas import OperatorBlocks
from src.modules.fespace.quadrature import gauss_quadrature_2d
from src.modules.fespace.schemas import SpatialQuadrature
from src.modules.fespace.space import evaluate_at_quadrature, evaluate_gradient_at_quadrature, integrate_cells
from src.modules.mesh.builder import build_mesh
from src.modules.mesh.schemas import Mesh
from src.modules.model.schemas import ExactSolution, MaterialParams
from src.modules.postprocess.norms import default_quadrature
from src.modules.solver.schemas import Field, SpaceTimeSolution
from src.modules.timedisc.quadrature import gauss_legendre

EXACT_ENERGY_CELLS = 16
EXACT_ENERGY_INTERVALS = 40


def energy_density(
    params: MaterialParams,
    mesh: Mesh,
    quad: SpatialQuadrature,
    displacement_gradient: np.ndarray,
    velocity: np.ndarray,
    pressure: np.ndarray,
) -> np.ndarray:
    """
    rho / 2 |du/dt|^2 + C eps(u) : eps(u) + c0 / 2 p^2 integrated over the domain.

    Inputs are sampled as (n_times, n_cells, n_q, ...); returns (n_times,).
    """
    strain = 0.5 * (displacement_gradient + np.swapaxes(displacement_gradient, -1, -2))
    elastic = np.einsum("...ab,...ab->...", params.stress(strain), strain)
    kinetic = 0.5 * params.rho * np.sum(velocity**2, axis=-1)
    storage = 0.5 * params.c0 * pressure**2
    return integrate_cells(mesh, quad, kinetic + elastic + storage)


def _intervals(points: np.ndarray, t: float):
    for n in range(points.shape[0] - 1):
        a, b = float(points[n]), min(float(points[n + 1]), t)
        if b <= a:
            break
        yield n, a, b


def _discrete_energy(
    solution: SpaceTimeSolution, params: MaterialParams, t: float, n_time_points: int, quad: SpatialQuadrature
) -> float:
    space_u, space_p = solution.space_u, solution.space_p
    layout = solution.layout
    trajectory = solution.trajectory
    time_mesh = solution.time_mesh
    nodes, weights = gauss_legendre(n_time_points)
    total = 0.0
    for n, a, b in _intervals(time_mesh.points, t):
        s = time_mesh.to_reference(n, a + 0.5 * (b - a) * (nodes + 1.0))
        u = solution.slab_evaluate(n, Field.DISPLACEMENT, s)
        # du/dt of the discrete displacement, not the discrete velocity
        du_dt = trajectory.slab_evaluate_derivative(n, s)[:, layout.u]
        p = solution.slab_evaluate(n, Field.PRESSURE, s)
        density = energy_density(
            params,
            space_u.mesh,
            quad,
            evaluate_gradient_at_quadrature(space_u, u, quad),
            evaluate_at_quadrature(space_u, du_dt, quad),
            evaluate_at_quadrature(space_p, p, quad),
        )
        total += 0.5 * (b - a) * float(weights @ density)
    return total


def _exact_energy(
    msol: ExactSolution, params: MaterialParams, t: float, n_time_points: int, mesh: Mesh, quad: SpatialQuadrature
) -> float:
    points = mesh.map_to_physical(quad.points)
    nodes, weights = gauss_legendre(n_time_points)
    total = 0.0
    for _, a, b in _intervals(np.linspace(0.0, t, EXACT_ENERGY_INTERVALS + 1), t):
        times = a + 0.5 * (b - a) * (nodes + 1.0)
        samples = [msol.fields(points, float(time)) for time in times]
        density = energy_density(
            params,
            mesh,
            quad,
            np.stack([msol.displacement_gradient(points, float(time)) for time in times]),
            np.stack([v for _, v, _ in samples]),
            np.stack([p for _, _, p in samples]),
        )
        total += 0.5 * (b - a) * float(weights @ density)
    return total


def energy(
    source: SpaceTimeSolution | ExactSolution,
    params: MaterialParams,
    t: float,
    n_time_points: int | None = None,
    mesh: Mesh | None = None,
) -> float:
    """
    Energy integral over (0, t] of a discrete solution or of the exact solution.

    The exact solution is integrated on `mesh` (default 16 x 16 cells, 8 x 8 Gauss points per cell) with
    a composite Gauss rule in time.
    """
    if t < 0:
        raise InvalidArgument(f"Time must be non-negative, got {t}")
    if isinstance(source, SpaceTimeSolution):
        if t > source.time_mesh.T * (1 + 1e-12):
            raise InvalidArgument(f"Time {t} is beyond the end of the solution {source.time_mesh.T}")
        quad = default_quadrature(source.space_u, source.space_p)
        return _discrete_energy(source, params, t, n_time_points or source.k + 3, quad)
    return _exact_energy(
        source, params, t, n_time_points or 8, mesh or build_mesh(EXACT_ENERGY_CELLS), gauss_quadrature_2d(8)
    )


def nodal_energy(blocks: OperatorBlocks, solution: SpaceTimeSolution) -> np.ndarray:
    """1/2 (u^T A_e u + rho v^T M v + c0 p^T M_p p) at every temporal node."""
    u = solution.nodes(Field.DISPLACEMENT)
    v = solution.nodes(Field.VELOCITY)
    p = solution.nodes(Field.PRESSURE)
    elastic = np.einsum("ti,ti->t", u, (blocks.stiffness_u @ u.T).T)
    kinetic = blocks.rho * np.einsum("ti,ti->t", v, (blocks.mass_u @ v.T).T)
    storage = blocks.c0 * np.einsum("ti,ti->t", p, (blocks.mass_p @ p.T).T)
    return 0.5 * (elastic + kinetic + storage)
