__all__ = ["special_approximation_of", "special_approximation", "pressure_interpolant", "error_split"]

from typing import Callable

import numpy as np

from src.modules.fespace.space import evaluate_at_quadrature
from src.modules.model.schemas import ExactSolution
from src.modules.postprocess.norms import (
    SlabCoefficients,
    bochner_l2,
    default_quadrature,
    exact_samples,
    spatial_l2_squared,
)
from src.modules.projection.elliptic import EllipticProjector, RitzProjection, Target
from src.modules.projection.schemas import ErrorSplitReport, SpecialApproximation
from src.modules.projection.temporal import node_times
from src.modules.solver.schemas import Field, SpaceTimeSolution
from src.modules.timedisc.quadrature import gauss_legendre
from src.modules.timedisc.schemas import GaussLobattoRule, TimeMesh
from src.modules.timedisc.trajectory import ContinuousTrajectory, SlabwiseTrajectory, Trajectory


def special_approximation_of(
    projection: RitzProjection,
    rule: GaussLobattoRule,
    time_mesh: TimeMesh,
    displacement: Callable[[float], Target],
    velocity: Callable[[float], Target],
) -> SpecialApproximation:
    """
    w2 = I_tau(R_h du/dt) and, on every slab,
    w1 = I_tau(R_h u(t_(n-1)) + integral from t_(n-1) to t of w2).

    The antiderivative of the nodal P_k trajectory w2 is integrated exactly through the trial basis, so
    no quadrature error enters w1.
    """
    k = rule.k
    w2 = ContinuousTrajectory(
        time_mesh, k, projection.many([velocity(float(t)) for t in node_times(rule, time_mesh)])
    )
    starts = projection.many([displacement(float(t)) for t in time_mesh.points[:-1]])
    integral_table = w2.basis.integral_table
    values = np.stack(
        [
            starts[n][None, :] + 0.5 * time_mesh.tau_n[n] * integral_table @ w2.slab_values(n)
            for n in range(time_mesh.n_slabs)
        ]
    )
    return SpecialApproximation(w1=SlabwiseTrajectory(time_mesh, k, values), w2=w2)


def special_approximation(
    msol: ExactSolution, projector: EllipticProjector, rule: GaussLobattoRule, time_mesh: TimeMesh
) -> SpecialApproximation:
    # R_h u(t_(n-1)) uses the exact solution at the slab start, w1(0) = R_h u(0)
    return special_approximation_of(
        projector.vector, rule, time_mesh, msol.displacement_field, msol.velocity_field
    )


def pressure_interpolant(
    msol: ExactSolution, projector: EllipticProjector, rule: GaussLobattoRule, time_mesh: TimeMesh
) -> ContinuousTrajectory:
    """I_tau R_h p"""
    nodes = projector.scalar.many([msol.pressure_field(float(t)) for t in node_times(rule, time_mesh)])
    return ContinuousTrajectory(time_mesh, rule.k, nodes)


def _trajectory(trajectory: Trajectory) -> SlabCoefficients:
    def coefficients(n: int, s: np.ndarray) -> np.ndarray:
        return trajectory.slab_evaluate(n, s)

    return coefficients


def _difference(a: SlabCoefficients, b: SlabCoefficients) -> SlabCoefficients:
    def coefficients(n: int, s: np.ndarray) -> np.ndarray:
        return a(n, s) - b(n, s)

    return coefficients


def _solution(solution: SpaceTimeSolution, field: Field) -> SlabCoefficients:
    def coefficients(n: int, s: np.ndarray) -> np.ndarray:
        return solution.slab_evaluate(n, field, s)

    return coefficients


def error_split(
    solution: SpaceTimeSolution,
    msol: ExactSolution,
    projector: EllipticProjector,
    rule: GaussLobattoRule,
    n_time_points: int | None = None,
) -> ErrorSplitReport:
    time_mesh = solution.time_mesh
    n_time_points = n_time_points or solution.k + 3
    quad = default_quadrature(solution.space_u, solution.space_p)
    approximation = special_approximation(msol, projector, rule, time_mesh)
    w3 = pressure_interpolant(msol, projector, rule, time_mesh)

    parts = {
        Field.DISPLACEMENT: (_trajectory(approximation.w1), solution.space_u),
        Field.VELOCITY: (_trajectory(approximation.w2), solution.space_u),
        Field.PRESSURE: (_trajectory(w3), solution.space_p),
    }
    interpolation_errors, discrete_errors = {}, {}
    defect_squared = 0.0
    s, weights = gauss_legendre(n_time_points)
    for field, (approximant, space) in parts.items():
        exact = exact_samples(msol, field, space.mesh.map_to_physical(quad.points))
        discrete = _solution(solution, field)
        interpolation_errors[field] = bochner_l2(time_mesh, space, approximant, exact, n_time_points, quad)
        # w - w_tau,h is represented as -(w_tau,h - w)
        discrete_errors[field] = bochner_l2(
            time_mesh, space, _difference(discrete, approximant), None, n_time_points, quad
        )
        for n in range(time_mesh.n_slabs):
            t_start, t_end = time_mesh.slab(n)
            exact_values = exact(t_start + 0.5 * (t_end - t_start) * (s + 1.0))
            approximant_values = evaluate_at_quadrature(space, approximant(n, s), quad)
            discrete_values = evaluate_at_quadrature(space, discrete(n, s), quad)
            split = (exact_values - approximant_values) + (approximant_values - discrete_values)
            squares = spatial_l2_squared(space, quad, split - (exact_values - discrete_values))
            defect_squared += 0.5 * time_mesh.tau_n[n] * float(weights @ squares)

    return ErrorSplitReport(
        eta1=interpolation_errors[Field.DISPLACEMENT],
        eta2=interpolation_errors[Field.VELOCITY],
        E1=discrete_errors[Field.DISPLACEMENT],
        E2=discrete_errors[Field.VELOCITY],
        omega=interpolation_errors[Field.PRESSURE],
        e=discrete_errors[Field.PRESSURE],
        reconstruction_defect=float(np.sqrt(defect_squared)),
    )
