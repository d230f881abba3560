__all__ = ["TimeFunction", "node_times", "interpolate_time", "project_time", "moment_defect"]

from typing import Callable

import numpy as np

from src.exceptions import InvalidArgument
from src.modules.timedisc.basis import legendre_test_basis
from src.modules.timedisc.quadrature import gauss_legendre
from src.modules.timedisc.schemas import GaussLobattoRule, TimeMesh
from src.modules.timedisc.trajectory import ContinuousTrajectory, LegendreTrajectory

TimeFunction = Callable[[float], np.ndarray]
"t -> (m,) values"

OVERSAMPLING = 8
"Extra Gauss points per slab beyond what P_degree x P_degree needs"


def _sample(w: TimeFunction, times: np.ndarray) -> np.ndarray:
    return np.stack([np.atleast_1d(np.asarray(w(float(t)), dtype=float)) for t in times])


def node_times(rule: GaussLobattoRule, time_mesh: TimeMesh) -> np.ndarray:
    """(n_slabs * k + 1,) Gauss-Lobatto nodes of all slabs, shared end points listed once."""
    k = rule.k
    times = np.concatenate(
        [[time_mesh.points[0]]]
        + [rule.map_nodes(time_mesh.points[n], time_mesh.tau_n[n])[1:] for n in range(time_mesh.n_slabs)]
    )
    # slab end points come from the mesh so shared nodes sit exactly on t_n
    times[k::k] = time_mesh.points[1:]
    return times


def interpolate_time(rule: GaussLobattoRule, time_mesh: TimeMesh, w: TimeFunction) -> ContinuousTrajectory:
    """I_tau w: collocation at the Gauss-Lobatto nodes of every slab, continuous across slabs."""
    return ContinuousTrajectory(time_mesh, rule.k, _sample(w, node_times(rule, time_mesh)))


def project_time(degree: int, time_mesh: TimeMesh, w: TimeFunction, n_points: int | None = None) -> LegendreTrajectory:
    """
    Slabwise L2 projection onto P_degree:
    integral over I_n of (Pi w - w) q = 0 for all q in P_degree.
    """
    if degree < 0:
        raise InvalidArgument(f"Projection degree must be non-negative, got {degree}")
    nodes, weights = gauss_legendre(n_points or degree + 1 + OVERSAMPLING)
    test_values = np.column_stack([p(nodes) for p in legendre_test_basis(degree)])  # (n_points, degree + 1)
    normalization = (2.0 * np.arange(degree + 1) + 1.0) / 2.0

    coefficients = []
    for n in range(time_mesh.n_slabs):
        t_start, t_end = time_mesh.slab(n)
        values = _sample(w, t_start + 0.5 * (t_end - t_start) * (nodes + 1.0))
        coefficients.append(normalization[:, None] * (test_values.T * weights) @ values)
    return LegendreTrajectory(time_mesh, degree, np.stack(coefficients))


def moment_defect(projection: LegendreTrajectory, w: TimeFunction, n_points: int | None = None) -> float:
    """max over slabs and test functions of |integral over I_n of (Pi w - w) q| with q Legendre."""
    degree = projection.degree
    nodes, weights = gauss_legendre(n_points or degree + 1 + OVERSAMPLING)
    test_values = np.column_stack([p(nodes) for p in projection.basis])
    defect = 0.0
    time_mesh = projection.time_mesh
    for n in range(time_mesh.n_slabs):
        t_start, t_end = time_mesh.slab(n)
        difference = projection.slab_evaluate(n, nodes) - _sample(w, t_start + 0.5 * (t_end - t_start) * (nodes + 1.0))
        moments = 0.5 * (t_end - t_start) * (test_values.T * weights) @ difference
        defect = max(defect, float(np.abs(moments).max(initial=0.0)))
    return defect
