__all__ = ["coupled_operators", "slab_operator", "build_slab_system", "load_moments", "assemble_slab_rhs"]

import numpy as np
import scipy.sparse as sp

from src.exceptions import InvalidArgument
from src.modules.assembly.blocks import apply_dirichlet
from src.modules.assembly.loads import Load
from src.modules.assembly.schemas import OperatorBlocks, SlabSystem, SparseMatrix
from src.modules.timedisc.schemas import GaussLobattoRule, SlabBasis, TimeMesh


def coupled_operators(blocks: OperatorBlocks) -> tuple[SparseMatrix, SparseMatrix]:
    """
    First-order form M y' + A y = L of the Biot system for y = [u, v, p]:

        <u', chi> - <v, chi>                                   = 0
        rho <v', chi> + <C eps(u), eps(chi)> - alpha <div chi, p> = rho <f, chi>
        c0 <p', psi> + alpha <div v, psi> + <K grad p, grad psi>  = <g, psi>
    """
    mass = sp.block_diag([blocks.mass_u, blocks.rho * blocks.mass_u, blocks.c0 * blocks.mass_p], format="csr")
    stiffness = sp.bmat(
        [
            [None, -blocks.mass_u, None],
            [blocks.stiffness_u, None, -blocks.alpha * blocks.coupling],
            [None, blocks.alpha * blocks.coupling.T, blocks.stiffness_p],
        ],
        format="csr",
    )
    mask = blocks.layout.dirichlet_mask
    return apply_dirichlet(mass, mask), apply_dirichlet(stiffness, mask, unit_diagonal=False)


def _moment_tables(basis: SlabBasis, rule: GaussLobattoRule) -> tuple[np.ndarray, np.ndarray]:
    test_at_nodes = basis.test_values(rule.nodes)  # (k + 1, k)
    derivative_moments = np.einsum("u,uj,um->mj", rule.weights, basis.derivative_table, test_at_nodes)
    value_moments = (rule.weights[:, None] * test_at_nodes).T
    return derivative_moments, value_moments


def slab_operator(
    mass: SparseMatrix,
    stiffness: SparseMatrix,
    basis: SlabBasis,
    rule: GaussLobattoRule,
    tau: float,
    dirichlet_mask: np.ndarray | None = None,
) -> SlabSystem:
    """
    cG(k) slab matrix of M y' + A y = L under Gauss-Lobatto quadrature.

    Row block m (Legendre test function m) and column block j (trial node j = 1..k):
    D[m, j] M + tau / 2 W[m, j] A.
    """
    if rule.k != basis.k:
        raise InvalidArgument(f"Quadrature rule of degree {rule.k} does not match the slab basis of degree {basis.k}")
    if mass.shape != stiffness.shape or mass.shape[0] != mass.shape[1]:
        raise InvalidArgument(f"Mass {mass.shape} and stiffness {stiffness.shape} must be equal square shapes")
    if tau <= 0:
        raise InvalidArgument(f"Slab length must be positive, got {tau}")
    size = mass.shape[0]
    if dirichlet_mask is None:
        dirichlet_mask = np.zeros(size, dtype=bool)
    elif dirichlet_mask.shape != (size,):
        raise InvalidArgument(f"Dirichlet mask of shape {dirichlet_mask.shape} does not match size {size}")

    derivative_moments, value_moments = _moment_tables(basis, rule)
    matrix = sp.kron(derivative_moments[:, 1:], mass) + 0.5 * tau * sp.kron(value_moments[:, 1:], stiffness)
    matrix = apply_dirichlet(sp.csr_matrix(matrix), np.tile(dirichlet_mask, basis.k))
    return SlabSystem(
        matrix=matrix,
        mass=sp.csr_matrix(mass),
        stiffness=sp.csr_matrix(stiffness),
        derivative_moments=derivative_moments,
        value_moments=value_moments,
        tau=float(tau),
        dirichlet_mask=dirichlet_mask,
    )


def build_slab_system(blocks: OperatorBlocks, basis: SlabBasis, rule: GaussLobattoRule, tau: float) -> SlabSystem:
    mass, stiffness = coupled_operators(blocks)
    return slab_operator(mass, stiffness, basis, rule, tau, blocks.layout.dirichlet_mask)


def load_moments(system: SlabSystem, load: Load, t_nodes: np.ndarray) -> np.ndarray:
    """Q_n(<L, psi_m>) for every test function: (k, size)."""
    values = np.stack([load(float(t)) for t in t_nodes])
    if values.shape != (system.k + 1, system.size):
        raise InvalidArgument(f"Load returned shape {values.shape[1:]}, expected ({system.size},)")
    return 0.5 * system.tau * system.value_moments @ values


def assemble_slab_rhs(
    system: SlabSystem, load: Load, rule: GaussLobattoRule, time_mesh: TimeMesh, n: int, previous: np.ndarray
) -> np.ndarray:
    """Right-hand side of slab n; `previous` is the known value at t_(n-1)."""
    t_start, _ = time_mesh.slab(n)
    if not np.isclose(time_mesh.tau_n[n], system.tau, rtol=1e-12, atol=0.0):
        raise InvalidArgument(f"Slab {n} has length {time_mesh.tau_n[n]}, system was built for {system.tau}")
    t_nodes = rule.map_nodes(t_start, system.tau)
    rhs = load_moments(system, load, t_nodes)
    rhs -= np.outer(system.derivative_moments[:, 0], system.mass @ previous)
    rhs -= 0.5 * system.tau * np.outer(system.value_moments[:, 0], system.stiffness @ previous)
    rhs[:, system.dirichlet_mask] = 0.0
    return rhs.ravel()
