import dataclasses

import numpy as np
import pytest
import scipy.sparse as sp

from src.config_schema import InitialValueStrategy
from src.exceptions import InvalidArgument, SingularMatrixError, SolverFailure
from src.modules.assembly.blocks import assemble_blocks
from src.modules.assembly.loads import ForcingLoad, zero_load
from src.modules.assembly.slab import assemble_slab_rhs, build_slab_system, slab_operator
from src.modules.fespace.quadrature import gauss_quadrature_2d
from src.modules.fespace.schemas import AnalyticField
from src.modules.fespace.space import build_space, evaluate_at_quadrature, integrate_cells
from src.modules.mesh.builder import build_mesh
from src.modules.postprocess.energy import nodal_energy
from src.modules.solver.dump import dump_trajectory, load_trajectory
from src.modules.solver.initial import initial_values, stack_initial
from src.modules.solver.linear import LinearSolver, SlabSolver, lu_solve, relative_residual
from src.modules.projection.elliptic import EllipticProjector
from src.modules.solver.marching import march
from src.modules.solver.schemas import Field
from src.modules.study.self_test import discrete_reproduction, flip_coupling_sign
from src.modules.timedisc.basis import slab_basis
from src.modules.timedisc.quadrature import gauss_lobatto
from src.modules.timedisc.time_mesh import build_time_mesh


def _random_state(blocks, rng) -> np.ndarray:
    layout = blocks.layout
    return np.where(layout.dirichlet_mask, 0.0, rng.uniform(-1.0, 1.0, layout.size))


def test_lu_solve(rng):
    matrix = sp.csr_matrix(np.diag([2.0, 3.0, 4.0]) + np.diag([1.0, 1.0], 1))
    b = rng.uniform(size=3)
    x = lu_solve(matrix, b)
    np.testing.assert_allclose(matrix @ x, b)
    assert relative_residual(matrix, x, b) < 1e-14


def test_singular_matrix_reports_pivot():
    matrix = sp.csr_matrix(np.array([[1.0, 0.0, 0.0], [0.0, 0.0, 0.0], [0.0, 0.0, 1.0]]))
    with pytest.raises(SingularMatrixError) as info:
        lu_solve(matrix, np.ones(3))
    assert info.value.pivot == 1
    assert info.value.exit_code == 2


def test_non_square_rejected():
    with pytest.raises(InvalidArgument):
        LinearSolver(sp.csr_matrix(np.ones((2, 3))))


def test_linear_solver_many_right_hand_sides(rng):
    matrix = sp.csr_matrix(np.array([[4.0, 1.0], [1.0, 3.0]]))
    rhs = rng.uniform(size=(2, 5))
    solver = LinearSolver(matrix)
    np.testing.assert_allclose(matrix @ solver.solve(rhs), rhs)


def test_slab_solver_refactorizes_on_new_length(blocks):
    basis, rule = slab_basis(1), gauss_lobatto(1)
    solver = SlabSolver(build_slab_system(blocks, basis, rule, 0.1))
    solver.update(solver.system)
    assert solver.factorizations == 1
    solver.update(build_slab_system(blocks, basis, rule, 0.05))
    assert solver.factorizations == 2
    assert solver.system.tau == 0.05


@pytest.mark.parametrize("k", [1, 2, 3])
def test_discrete_solution_is_reproduced(k):
    result = discrete_reproduction(k=k)
    assert result.passed, result


def test_flipped_coupling_sign_is_detected():
    result = discrete_reproduction(k=2, perturb=flip_coupling_sign)
    assert not result.passed


def test_march_shapes_and_continuity(blocks, params, msol):
    time_mesh = build_time_mesh(0.3, 0.1)
    k = 2
    load = ForcingLoad(blocks, params, msol)
    solution = march(blocks, time_mesh, slab_basis(k), gauss_lobatto(k), load, np.zeros(blocks.layout.size))
    assert solution.trajectory.nodes.shape == (time_mesh.n_slabs * k + 1, blocks.layout.size)
    assert solution.max_residual < 1e-10
    for n in range(time_mesh.n_slabs - 1):
        end, start = solution.slab_values(n, Field.PRESSURE)[-1], solution.slab_values(n + 1, Field.PRESSURE)[0]
        np.testing.assert_array_equal(end, start)
    assert np.all(solution.nodes(Field.DISPLACEMENT)[:, blocks.space_u.dirichlet_mask] == 0)
    np.testing.assert_allclose(solution.at(0.3, Field.VELOCITY), solution.nodes(Field.VELOCITY)[-1], atol=1e-14)


def test_march_rejects_wrong_initial_size(blocks):
    with pytest.raises(InvalidArgument):
        march(blocks, build_time_mesh(0.1, 0.1), slab_basis(1), gauss_lobatto(1), zero_load(3), np.zeros(3))


def test_singular_slab_matrix_becomes_solver_failure(blocks):
    # a zero displacement mass leaves the free displacement rows empty
    singular = dataclasses.replace(blocks, mass_u=0 * blocks.mass_u)
    size = blocks.layout.size
    with pytest.raises(SolverFailure) as info:
        march(singular, build_time_mesh(0.1, 0.1), slab_basis(1), gauss_lobatto(1), zero_load(size), np.zeros(size), 3)
    assert info.value.level == 3
    assert info.value.exit_code == 2


def test_decoupled_pressure_evolves_alone(blocks, rng):
    """Without coupling, the pressure rows reduce to c0 M_p p' + A_p p = 0 and u, v stay at rest."""
    decoupled = dataclasses.replace(blocks, alpha=0.0)
    layout = blocks.layout
    initial = np.zeros(layout.size)
    initial[layout.p] = _random_state(blocks, rng)[layout.p]
    k = 2
    time_mesh = build_time_mesh(0.4, 0.1)
    solution = march(decoupled, time_mesh, slab_basis(k), gauss_lobatto(k), zero_load(layout.size), initial)
    assert np.abs(solution.nodes(Field.DISPLACEMENT)).max() < 1e-14
    assert np.abs(solution.nodes(Field.VELOCITY)).max() < 1e-14

    mask_p = blocks.space_p.dirichlet_mask
    rule = gauss_lobatto(k)
    system = slab_operator(blocks.c0 * blocks.mass_p, blocks.stiffness_p, slab_basis(k), rule, 0.1, mask_p)
    p = initial[layout.p]
    for n in range(time_mesh.n_slabs):
        rhs = assemble_slab_rhs(system, zero_load(len(p)), rule, time_mesh, n, p)
        p = lu_solve(system.matrix, rhs).reshape(k, -1)[-1]
    np.testing.assert_allclose(solution.nodes(Field.PRESSURE)[-1], p, rtol=1e-10, atol=1e-12)


def test_energy_does_not_grow_without_load(blocks, rng):
    k = 2
    time_mesh = build_time_mesh(1.0, 0.1)
    solution = march(
        blocks, time_mesh, slab_basis(k), gauss_lobatto(k), zero_load(blocks.layout.size), _random_state(blocks, rng)
    )
    energies = nodal_energy(blocks, solution)[::k]
    assert energies[0] > 0
    assert np.all(np.diff(energies) <= 1e-12 * energies[0])
    assert energies[-1] < energies[0]


@pytest.mark.parametrize("strategy", list(InitialValueStrategy))
def test_initial_values(projector, msol, strategy):
    u, v, p = initial_values(projector, msol, strategy)
    # the prescribed solution is at rest at t = 0
    for values in (u, v, p):
        np.testing.assert_allclose(values, 0.0, atol=1e-14)


def test_initial_values_zero_boundary(projector, blocks):
    class Shifted:
        def displacement_field(self, t):
            return AnalyticField(value=lambda x: np.ones(x.shape), gradient=lambda x: np.zeros((*x.shape, 2)))

        velocity_field = displacement_field

        def pressure_field(self, t):
            return AnalyticField(value=lambda x: np.ones(x.shape[:-1]), gradient=lambda x: np.zeros(x.shape))

    u, v, p = initial_values(projector, Shifted(), InitialValueStrategy.NODAL_INTERPOLATION)
    assert np.all(u[blocks.space_u.dirichlet_mask] == 0)
    assert np.all(p[blocks.space_p.dirichlet_mask] == 0)
    assert np.all(p[~blocks.space_p.dirichlet_mask] == 1)
    y = stack_initial(blocks.layout, u, v, p)
    np.testing.assert_array_equal(y[blocks.layout.p], p)


def test_projected_initial_displacement_rate(params, msol):
    """With the solution shifted away from rest, R_h u(0) converges like h^3 in L2."""

    class Shifted:
        def displacement_field(self, t):
            return msol.displacement_field(t + 0.8)

        def velocity_field(self, t):
            return msol.velocity_field(t + 0.8)

        def pressure_field(self, t):
            return msol.pressure_field(t + 0.8)

    quad = gauss_quadrature_2d(5)
    errors = []
    for n in (4, 8, 16):
        mesh = build_mesh(n)
        blocks = assemble_blocks(build_space(mesh, 2, components=2), build_space(mesh, 2), params)
        u, _, _ = initial_values(EllipticProjector(blocks, params), Shifted())
        exact = msol.displacement_field(0.8).value(mesh.map_to_physical(quad.points))
        difference = evaluate_at_quadrature(blocks.space_u, u, quad) - exact
        errors.append(np.sqrt(integrate_cells(mesh, quad, np.sum(difference**2, axis=-1))))
    assert np.log2(errors[-2] / errors[-1]) == pytest.approx(3.0, abs=0.15)


def test_dump_trajectory(tmp_path, blocks, params, msol):
    k = 1
    time_mesh = build_time_mesh(0.2, 0.1)
    load = ForcingLoad(blocks, params, msol)
    solution = march(blocks, time_mesh, slab_basis(k), gauss_lobatto(k), load, np.zeros(blocks.layout.size))
    archive = load_trajectory(dump_trajectory(solution, tmp_path / "dump" / "trajectory.npz"))
    np.testing.assert_allclose(archive["times"], [0.0, 0.1, 0.2])
    np.testing.assert_array_equal(archive["p"], solution.nodes(Field.PRESSURE))
    assert archive["u"].shape == (3, blocks.space_u.n_dofs)
    assert int(archive["k"]) == 1
