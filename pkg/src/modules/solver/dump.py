__all__ = ["dump_trajectory", "load_trajectory"]

from pathlib import Path

import numpy as np

from src.logging_ import logger
from src.modules.solver.schemas import Field, SpaceTimeSolution


def dump_trajectory(solution: SpaceTimeSolution, path: Path) -> Path:
    """Nodal trajectories of u, v and p with the temporal node times, as a compressed `.npz` archive."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    time_mesh = solution.time_mesh
    times = np.concatenate(
        [[0.0]] + [solution.trajectory.node_times(n)[1:] for n in range(time_mesh.n_slabs)]
    )
    np.savez_compressed(
        path,
        times=times,
        k=solution.k,
        u=solution.nodes(Field.DISPLACEMENT),
        v=solution.nodes(Field.VELOCITY),
        p=solution.nodes(Field.PRESSURE),
        dof_coords_u=solution.space_u.dof_coords,
        dof_coords_p=solution.space_p.dof_coords,
    )
    logger.info(f"Trajectory written to {path}")
    return path


def load_trajectory(path: Path) -> dict[str, np.ndarray]:
    with np.load(path) as archive:
        return {key: archive[key] for key in archive.files}
