__all__ = ["build_mesh", "refine", "dump_mesh"]

import math
from pathlib import Path

import numpy as np

from src.exceptions import InvalidArgument
from src.modules.mesh.schemas import Mesh


def build_mesh(cells_per_side: int) -> Mesh:
    if cells_per_side < 1:
        raise InvalidArgument(f"cells_per_side must be at least 1, got {cells_per_side}")
    n = cells_per_side
    ticks = np.arange(n + 1) / n
    xs, ys = np.meshgrid(ticks, ticks)  # rows follow y, so ravel() is lexicographic by (y, x)
    vertices = np.column_stack([xs.ravel(), ys.ravel()])

    i, j = np.meshgrid(np.arange(n), np.arange(n))
    lower_left = (j * (n + 1) + i).ravel()
    cells = np.column_stack([lower_left, lower_left + 1, lower_left + n + 2, lower_left + n + 1])

    grid_i = np.rint(vertices * n).astype(int)
    boundary = np.any((grid_i == 0) | (grid_i == n), axis=1)

    for array in (vertices, cells, boundary):
        array.setflags(write=False)
    return Mesh(
        cells_per_side=n,
        vertices=vertices,
        cells=cells,
        h=math.sqrt(2.0) / n,
        boundary_vertex_flags=boundary,
    )


def refine(mesh: Mesh) -> Mesh:
    return build_mesh(2 * mesh.cells_per_side)


def dump_mesh(mesh: Mesh, path: Path) -> None:
    """Plain-text dump for debugging: a vertex block followed by a cell block."""
    with open(path, "w", encoding="utf-8") as f:
        f.write(f"# cells_per_side {mesh.cells_per_side} h {mesh.h!r}\n")
        f.write(f"vertices {mesh.n_vertices}\n")
        for (x, y), on_boundary in zip(mesh.vertices, mesh.boundary_vertex_flags):
            f.write(f"{x!r} {y!r} {int(on_boundary)}\n")
        f.write(f"cells {mesh.n_cells}\n")
        for cell in mesh.cells:
            f.write(" ".join(str(v) for v in cell) + "\n")
