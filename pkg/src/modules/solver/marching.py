__all__ = ["march"]

import numpy as np

from src.exceptions import InvalidArgument, SingularMatrixError, SolverFailure
from src.logging_ import log_duration, logger
from src.modules.assembly.loads import Load
from src.modules.assembly.schemas import OperatorBlocks, SlabSystem
from src.modules.assembly.slab import assemble_slab_rhs, build_slab_system
from src.modules.solver.linear import SlabSolver
from src.modules.solver.schemas import SpaceTimeSolution
from src.modules.timedisc.schemas import GaussLobattoRule, SlabBasis, TimeMesh
from src.modules.timedisc.trajectory import ContinuousTrajectory


def march(
    blocks: OperatorBlocks,
    time_mesh: TimeMesh,
    basis: SlabBasis,
    rule: GaussLobattoRule,
    load: Load,
    initial: np.ndarray,
    level: int | None = None,
) -> SpaceTimeSolution:
    """
    Solve the slab problems for n = 1, 2, ... in order. The value at the end of slab n is the start value
    of slab n + 1.
    """
    layout = blocks.layout
    initial = np.asarray(initial, dtype=float)
    if initial.shape != (layout.size,):
        raise InvalidArgument(f"Initial value of shape {initial.shape}, expected ({layout.size},)")
    k, size = basis.k, layout.size
    trajectory = ContinuousTrajectory.zeros(time_mesh, k, size)
    trajectory.nodes[0] = initial

    systems: dict[float, SlabSystem] = {}

    def system_for(tau: float) -> SlabSystem:
        if tau not in systems:
            systems[tau] = build_slab_system(blocks, basis, rule, tau)
        return systems[tau]

    max_residual = 0.0
    with log_duration(f"March over {time_mesh.n_slabs} slabs ({k * size} unknowns per slab)"):
        try:
            solver = SlabSolver(system_for(float(time_mesh.tau_n[0])))
        except SingularMatrixError as e:
            raise SolverFailure(e.detail, level=level, slab=1) from e
        for n in range(time_mesh.n_slabs):
            try:
                solver.update(system_for(float(time_mesh.tau_n[n])))
                previous = trajectory.nodes[n * k]
                rhs = assemble_slab_rhs(solver.system, load, rule, time_mesh, n, previous)
                x = solver.solve(rhs)
            except SingularMatrixError as e:
                raise SolverFailure(e.detail, level=level, slab=n + 1) from e
            trajectory.nodes[n * k + 1 : (n + 1) * k + 1] = x.reshape(k, size)
            max_residual = max(max_residual, solver.last_residual)
            logger.debug(f"Slab {n + 1}/{time_mesh.n_slabs}: relative residual {solver.last_residual:.2e}")

    return SpaceTimeSolution(
        trajectory=trajectory,
        space_u=blocks.space_u,
        space_p=blocks.space_p,
        layout=layout,
        max_residual=max_residual,
    )
