__all__ = ["Field", "SpaceTimeSolution"]

from dataclasses import dataclass
from enum import StrEnum

import numpy as np

from src.modules.assembly.schemas import SystemLayout
from src.modules.fespace.schemas import FESpace
from src.modules.timedisc.schemas import TimeMesh
from src.modules.timedisc.trajectory import ContinuousTrajectory


class Field(StrEnum):
    DISPLACEMENT = "u"
    VELOCITY = "v"
    PRESSURE = "p"


@dataclass(frozen=True, eq=False)
class SpaceTimeSolution:
    """Discrete (u, v, p): one coefficient vector per temporal node, shared between neighbouring slabs."""

    trajectory: ContinuousTrajectory
    space_u: FESpace
    space_p: FESpace
    layout: SystemLayout
    max_residual: float = 0.0
    "Largest relative slab residual observed while marching"

    @property
    def time_mesh(self) -> TimeMesh:
        return self.trajectory.time_mesh

    @property
    def k(self) -> int:
        return self.trajectory.k

    def space(self, field: Field) -> FESpace:
        return self.space_p if field == Field.PRESSURE else self.space_u

    def field_slice(self, field: Field) -> slice:
        return {Field.DISPLACEMENT: self.layout.u, Field.VELOCITY: self.layout.v, Field.PRESSURE: self.layout.p}[
            Field(field)
        ]

    def nodes(self, field: Field) -> np.ndarray:
        """(n_slabs * k + 1, n_dofs) nodal coefficients of one field."""
        return self.trajectory.nodes[:, self.field_slice(field)]

    def slab_values(self, n: int, field: Field) -> np.ndarray:
        return self.trajectory.slab_values(n)[:, self.field_slice(field)]

    def slab_evaluate(self, n: int, field: Field, s: np.ndarray | float) -> np.ndarray:
        """(n_points, n_dofs) coefficients at reference times s of slab n."""
        return self.trajectory.basis.trial_values(s) @ self.slab_values(n, field)

    def at(self, t: float, field: Field) -> np.ndarray:
        return self.trajectory.evaluate(t)[self.field_slice(field)]
