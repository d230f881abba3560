__all__ = ["GaussLobattoRule", "TimeMesh", "SlabBasis"]

from dataclasses import dataclass

import numpy as np
from numpy.polynomial import Polynomial


@dataclass(frozen=True, eq=False)
class GaussLobattoRule:
    """(k + 1)-point Gauss-Lobatto rule on [-1, 1], exact on P_(2k-1)."""

    k: int
    nodes: np.ndarray
    weights: np.ndarray

    def map_nodes(self, t_start: float, tau: float) -> np.ndarray:
        """Quadrature points of the slab (t_start, t_start + tau]."""
        return t_start + 0.5 * tau * (self.nodes + 1.0)

    def integrate(self, values: np.ndarray, tau: float) -> np.ndarray:
        """Q_n applied to values sampled at the mapped nodes (first axis)."""
        return 0.5 * tau * np.tensordot(self.weights, values, axes=(0, 0))


@dataclass(frozen=True, eq=False)
class TimeMesh:
    """Partition of (0, T] into slabs I_n = (t_(n-1), t_n]."""

    T: float
    points: np.ndarray
    "t_0 = 0 < t_1 < ... < t_N = T"
    tau_n: np.ndarray
    "(n_slabs,) slab lengths"

    @property
    def n_slabs(self) -> int:
        return self.tau_n.shape[0]

    @property
    def tau(self) -> float:
        return float(self.tau_n.max())

    def slab(self, n: int) -> tuple[float, float]:
        return float(self.points[n]), float(self.points[n + 1])

    def locate(self, t: float) -> int:
        """Index of the slab (t_(n-1), t_n] containing t; t = 0 belongs to the first slab."""
        n = int(np.searchsorted(self.points, t, side="left")) - 1
        return min(max(n, 0), self.n_slabs - 1)

    def to_reference(self, n: int, t: np.ndarray | float) -> np.ndarray:
        t_start, t_end = self.slab(n)
        return (2.0 * np.asarray(t, dtype=float) - t_start - t_end) / (t_end - t_start)


@dataclass(frozen=True, eq=False)
class SlabBasis:
    """
    Temporal bases of one slab on the reference interval [-1, 1].

    The trial basis is the Lagrange basis of P_k at the Gauss-Lobatto nodes, the test basis of P_(k-1)
    consists of the Legendre polynomials P_0, ..., P_(k-1).
    """

    k: int
    nodes: np.ndarray
    trial: tuple[Polynomial, ...]
    test: tuple[Polynomial, ...]
    derivative_table: np.ndarray
    "(k + 1, k + 1): [mu, j] = d/ds trial_j at node mu"
    integral_table: np.ndarray
    "(k + 1, k + 1): [mu, j] = integral of trial_j from -1 to node mu"

    def trial_values(self, s: np.ndarray | float) -> np.ndarray:
        """(n_points, k + 1) values of the trial basis."""
        s = np.atleast_1d(np.asarray(s, dtype=float))
        return np.column_stack([p(s) for p in self.trial])

    def trial_derivatives(self, s: np.ndarray | float) -> np.ndarray:
        s = np.atleast_1d(np.asarray(s, dtype=float))
        return np.column_stack([p.deriv()(s) for p in self.trial])

    def test_values(self, s: np.ndarray | float) -> np.ndarray:
        """(n_points, k) values of the test basis."""
        s = np.atleast_1d(np.asarray(s, dtype=float))
        return np.column_stack([p(s) for p in self.test])
