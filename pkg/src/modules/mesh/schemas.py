__all__ = ["Mesh"]

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True, eq=False)
class Mesh:
    """
    Uniform N x N decomposition of the unit square into axis-aligned square cells.

    Vertices are numbered lexicographically by (y, x): vertex (i, j) has index j * (N + 1) + i and
    coordinates (i / N, j / N). Cell (i, j) has index j * N + i and its vertices are listed counterclockwise
    starting from the lower-left corner.
    """

    cells_per_side: int
    vertices: np.ndarray
    "(n_vertices, 2) coordinates"
    cells: np.ndarray
    "(n_cells, 4) vertex indices, counterclockwise"
    h: float
    "Cell diameter sqrt(2) / N"
    boundary_vertex_flags: np.ndarray
    "(n_vertices,) True for vertices on the boundary of the unit square"

    @property
    def n_cells(self) -> int:
        return self.cells.shape[0]

    @property
    def n_vertices(self) -> int:
        return self.vertices.shape[0]

    @property
    def cell_size(self) -> float:
        return 1.0 / self.cells_per_side

    @property
    def cell_area(self) -> float:
        return self.cell_size**2

    @property
    def cell_origins(self) -> np.ndarray:
        """(n_cells, 2) lower-left corners"""
        return self.vertices[self.cells[:, 0]]

    def map_to_physical(self, ref_points: np.ndarray) -> np.ndarray:
        """Map reference points in [0, 1]^2 to every cell: returns (n_cells, n_points, 2)."""
        return self.cell_origins[:, None, :] + self.cell_size * np.asarray(ref_points)[None, :, :]
