__all__ = ["Trajectory", "ContinuousTrajectory", "SlabwiseTrajectory", "LegendreTrajectory"]

from abc import ABC, abstractmethod

import numpy as np

from src.exceptions import InvalidArgument
from src.modules.timedisc.basis import legendre_test_basis, slab_basis
from src.modules.timedisc.schemas import SlabBasis, TimeMesh


class Trajectory(ABC):
    """Piecewise polynomial function of time with values in R^m, given by nodal values per slab."""

    time_mesh: TimeMesh
    basis: SlabBasis

    @abstractmethod
    def slab_values(self, n: int) -> np.ndarray:
        """(k + 1, m) values at the Gauss-Lobatto nodes of slab n."""

    @property
    def k(self) -> int:
        return self.basis.k

    def node_times(self, n: int) -> np.ndarray:
        t_start, t_end = self.time_mesh.slab(n)
        return t_start + 0.5 * (t_end - t_start) * (self.basis.nodes + 1.0)

    def slab_evaluate(self, n: int, s: np.ndarray | float) -> np.ndarray:
        """(n_points, m) values at reference points s of slab n."""
        return self.basis.trial_values(s) @ self.slab_values(n)

    def slab_evaluate_derivative(self, n: int, s: np.ndarray | float) -> np.ndarray:
        tau = self.time_mesh.tau_n[n]
        return (2.0 / tau) * (self.basis.trial_derivatives(s) @ self.slab_values(n))

    def evaluate(self, t: float) -> np.ndarray:
        n = self.time_mesh.locate(t)
        return self.slab_evaluate(n, self.time_mesh.to_reference(n, t))[0]

    def evaluate_derivative(self, t: float) -> np.ndarray:
        n = self.time_mesh.locate(t)
        return self.slab_evaluate_derivative(n, self.time_mesh.to_reference(n, t))[0]


class ContinuousTrajectory(Trajectory):
    """
    Globally continuous trajectory: each temporal node is stored once, so the last node of slab n and the
    first node of slab n + 1 are the same row.
    """

    def __init__(self, time_mesh: TimeMesh, k: int, nodes: np.ndarray) -> None:
        self.time_mesh = time_mesh
        self.basis = slab_basis(k)
        expected = time_mesh.n_slabs * k + 1
        if nodes.shape[0] != expected:
            raise InvalidArgument(f"Expected {expected} temporal nodes, got {nodes.shape[0]}")
        self.nodes = nodes

    @classmethod
    def zeros(cls, time_mesh: TimeMesh, k: int, size: int) -> "ContinuousTrajectory":
        return cls(time_mesh, k, np.zeros((time_mesh.n_slabs * k + 1, size)))

    def slab_values(self, n: int) -> np.ndarray:
        return self.nodes[n * self.k : (n + 1) * self.k + 1]

    @property
    def size(self) -> int:
        return self.nodes.shape[1]


class SlabwiseTrajectory(Trajectory):
    """Trajectory whose slab pieces are stored independently (may jump at slab interfaces)."""

    def __init__(self, time_mesh: TimeMesh, k: int, values: np.ndarray) -> None:
        self.time_mesh = time_mesh
        self.basis = slab_basis(k)
        if values.shape[:2] != (time_mesh.n_slabs, k + 1):
            raise InvalidArgument(f"Expected values of shape ({time_mesh.n_slabs}, {k + 1}, m), got {values.shape}")
        self.values = values

    def slab_values(self, n: int) -> np.ndarray:
        return self.values[n]


class LegendreTrajectory:
    """Slabwise P_degree trajectory in the Legendre basis; discontinuous at slab interfaces."""

    def __init__(self, time_mesh: TimeMesh, degree: int, coefficients: np.ndarray) -> None:
        self.time_mesh = time_mesh
        self.degree = degree
        self.basis = legendre_test_basis(degree)
        self.coefficients = coefficients
        "(n_slabs, degree + 1, m)"

    def slab_evaluate(self, n: int, s: np.ndarray | float) -> np.ndarray:
        s = np.atleast_1d(np.asarray(s, dtype=float))
        values = np.column_stack([p(s) for p in self.basis])
        return values @ self.coefficients[n]

    def evaluate(self, t: float) -> np.ndarray:
        n = self.time_mesh.locate(t)
        return self.slab_evaluate(n, self.time_mesh.to_reference(n, t))[0]
