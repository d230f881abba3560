__all__ = ["lu_solve", "relative_residual", "LinearSolver", "SlabSolver"]

import warnings

import numpy as np
import scipy.linalg
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from src.exceptions import InvalidArgument, SingularMatrixError
from src.logging_ import logger
from src.modules.assembly.schemas import SlabSystem, SparseMatrix

RESIDUAL_TOLERANCE = 1e-10
DENSE_PIVOT_SEARCH_LIMIT = 2000
"Largest matrix for which a singular pivot is located with a dense LU"


def relative_residual(matrix: SparseMatrix, x: np.ndarray, b: np.ndarray) -> float:
    """||Ax - b||_inf / (||A||_inf ||x||_inf + ||b||_inf)"""
    residual = np.abs(matrix @ x - b).max(initial=0.0)
    scale = spla.norm(matrix, np.inf) * np.abs(x).max(initial=0.0) + np.abs(b).max(initial=0.0)
    return float(residual / scale) if scale > 0 else float(residual)


def _locate_zero_pivot(matrix: SparseMatrix) -> int | None:
    if matrix.shape[0] > DENSE_PIVOT_SEARCH_LIMIT:
        return None
    _, _, upper = scipy.linalg.lu(matrix.toarray())
    diagonal = np.abs(np.diag(upper))
    threshold = np.finfo(float).eps * max(diagonal.max(initial=0.0), 1.0) * matrix.shape[0]
    zero = np.flatnonzero(diagonal <= threshold)
    return int(zero[0]) if zero.size else None


def _factorize(matrix: SparseMatrix) -> spla.SuperLU:
    if matrix.shape[0] != matrix.shape[1]:
        raise InvalidArgument(f"Matrix must be square, got {matrix.shape}")
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("error", spla.MatrixRankWarning)
            return spla.splu(sp.csc_matrix(matrix), permc_spec="COLAMD")
    except (RuntimeError, spla.MatrixRankWarning) as e:
        raise SingularMatrixError(f"Matrix is singular: {e}", pivot=_locate_zero_pivot(matrix)) from e


def _checked_solve(factor: spla.SuperLU, matrix: SparseMatrix, rhs: np.ndarray) -> tuple[np.ndarray, float]:
    x = factor.solve(np.asarray(rhs, dtype=float))
    if not np.all(np.isfinite(x)):
        raise SingularMatrixError("Solution is not finite", pivot=_locate_zero_pivot(matrix))
    residual = relative_residual(matrix, x, rhs)
    if residual >= RESIDUAL_TOLERANCE:
        raise SingularMatrixError(f"Relative residual {residual:.3e} exceeds {RESIDUAL_TOLERANCE:.0e}")
    return x, residual


def lu_solve(matrix: SparseMatrix, rhs: np.ndarray) -> np.ndarray:
    """Sparse LU with COLAMD column ordering; the relative residual is checked after the solve."""
    x, _ = _checked_solve(_factorize(matrix), matrix, rhs)
    return x


class LinearSolver:
    """Sparse LU factorization reused for many right-hand sides (vectors or columns of a 2D array)."""

    def __init__(self, matrix: SparseMatrix) -> None:
        self.matrix = matrix
        self.factor = _factorize(matrix)
        self.last_residual = 0.0

    def solve(self, rhs: np.ndarray) -> np.ndarray:
        x, self.last_residual = _checked_solve(self.factor, self.matrix, rhs)
        return x


class SlabSolver(LinearSolver):
    """
    Factorization of a slab matrix, reused for every slab of equal length.
    """

    def __init__(self, system: SlabSystem) -> None:
        super().__init__(system.matrix)
        self.system = system
        self.factorizations = 1

    def update(self, system: SlabSystem) -> None:
        if system is self.system:
            return
        logger.warning(f"Slab length changed from {self.system.tau} to {system.tau}: refactorizing")
        self.system = system
        self.matrix = system.matrix
        self.factor = _factorize(system.matrix)
        self.factorizations += 1
