__all__ = [
    "SlabCoefficients",
    "ExactSamples",
    "exact_samples",
    "spatial_l2_squared",
    "bochner_l2",
    "bochner_linf",
    "l2l2_error",
    "linf_l2_error",
    "error_norms",
]

from typing import Callable

import numpy as np

from src.modules.fespace.quadrature import gauss_quadrature_2d
from src.modules.fespace.schemas import FESpace, SpatialQuadrature
from src.modules.fespace.space import evaluate_at_quadrature, integrate_cells
from src.modules.model.schemas import ExactSolution
from src.modules.solver.schemas import Field, SpaceTimeSolution
from src.modules.timedisc.quadrature import gauss_legendre
from src.modules.timedisc.schemas import TimeMesh

LINF_SAMPLES_PER_SLAB = 100
"Gauss points per slab at which the L-infinity(L2) norm is sampled"

SlabCoefficients = Callable[[int, np.ndarray], np.ndarray]
"(slab n, reference times s) -> (n_points, n_dofs) finite element coefficients"
ExactSamples = Callable[[np.ndarray], np.ndarray]
"times (n_points,) -> field values at the quadrature points, (n_points, n_cells, n_q[, 2])"

_FIELD_INDEX = {Field.DISPLACEMENT: 0, Field.VELOCITY: 1, Field.PRESSURE: 2}


def default_quadrature(*spaces: FESpace) -> SpatialQuadrature:
    return gauss_quadrature_2d(max(space.order for space in spaces) + 3)


def exact_samples(msol: ExactSolution, field: Field, points: np.ndarray) -> ExactSamples:
    index = _FIELD_INDEX[Field(field)]

    def sample(times: np.ndarray) -> np.ndarray:
        return np.stack([msol.fields(points, float(t))[index] for t in times])

    return sample


def spatial_l2_squared(space: FESpace, quad: SpatialQuadrature, difference: np.ndarray) -> np.ndarray:
    """Squared L2 norms of fields sampled as (..., n_cells, n_q) or (..., n_cells, n_q, 2)."""
    if space.components == 2:
        difference = np.sum(difference**2, axis=-1)
    else:
        difference = difference**2
    return integrate_cells(space.mesh, quad, difference)


def _slab_squares(
    space: FESpace,
    quad: SpatialQuadrature,
    time_mesh: TimeMesh,
    n: int,
    s: np.ndarray,
    discrete: SlabCoefficients | None,
    exact: ExactSamples | None,
) -> np.ndarray:
    t_start, t_end = time_mesh.slab(n)
    samples = 0.0
    if exact is not None:
        samples = exact(t_start + 0.5 * (t_end - t_start) * (s + 1.0))
    if discrete is not None:
        samples = samples - evaluate_at_quadrature(space, discrete(n, s), quad)
    if np.isscalar(samples):
        return np.zeros(s.shape)
    return spatial_l2_squared(space, quad, samples)


def bochner_l2(
    time_mesh: TimeMesh,
    space: FESpace,
    discrete: SlabCoefficients | None,
    exact: ExactSamples | None,
    n_time_points: int,
    quad: SpatialQuadrature | None = None,
) -> float:
    """L2(0, T; L2) norm of exact - discrete, Gauss quadrature with n_time_points per slab."""
    quad = quad or default_quadrature(space)
    s, weights = gauss_legendre(n_time_points)
    total = 0.0
    for n in range(time_mesh.n_slabs):
        squares = _slab_squares(space, quad, time_mesh, n, s, discrete, exact)
        total += 0.5 * time_mesh.tau_n[n] * float(weights @ squares)
    return float(np.sqrt(total))


def bochner_linf(
    time_mesh: TimeMesh,
    space: FESpace,
    discrete: SlabCoefficients | None,
    exact: ExactSamples | None,
    n_time_points: int = LINF_SAMPLES_PER_SLAB,
    quad: SpatialQuadrature | None = None,
) -> float:
    """max over slabs and Gauss sample points of the spatial L2 norm of exact - discrete."""
    quad = quad or default_quadrature(space)
    s, _ = gauss_legendre(n_time_points)
    largest = 0.0
    for n in range(time_mesh.n_slabs):
        squares = _slab_squares(space, quad, time_mesh, n, s, discrete, exact)
        largest = max(largest, float(squares.max()))
    return float(np.sqrt(largest))


def _discrete(solution: SpaceTimeSolution, field: Field) -> SlabCoefficients:
    def coefficients(n: int, s: np.ndarray) -> np.ndarray:
        return solution.slab_evaluate(n, field, s)

    return coefficients


def l2l2_error(
    solution: SpaceTimeSolution,
    msol: ExactSolution,
    field: Field,
    n_time_points: int | None = None,
    quad: SpatialQuadrature | None = None,
) -> float:
    """||w - w_tau,h||_L2(L2) with k + 3 Gauss points per slab unless given."""
    quad = quad or default_quadrature(solution.space_u, solution.space_p)
    space = solution.space(field)
    points = space.mesh.map_to_physical(quad.points)
    return bochner_l2(
        solution.time_mesh,
        space,
        _discrete(solution, field),
        exact_samples(msol, field, points),
        n_time_points or solution.k + 3,
        quad,
    )


def linf_l2_error(
    solution: SpaceTimeSolution,
    msol: ExactSolution,
    field: Field,
    n_time_points: int = LINF_SAMPLES_PER_SLAB,
    quad: SpatialQuadrature | None = None,
) -> float:
    quad = quad or default_quadrature(solution.space_u, solution.space_p)
    space = solution.space(field)
    points = space.mesh.map_to_physical(quad.points)
    return bochner_linf(
        solution.time_mesh,
        space,
        _discrete(solution, field),
        exact_samples(msol, field, points),
        n_time_points,
        quad,
    )


def error_norms(
    solution: SpaceTimeSolution, msol: ExactSolution, n_time_points: int | None = None
) -> dict[Field, tuple[float, float]]:
    """(L2(L2), L-infinity(L2)) error per field."""
    return {
        field: (l2l2_error(solution, msol, field, n_time_points), linf_l2_error(solution, msol, field))
        for field in Field
    }
