import math

import numpy as np
import pytest

from src.exceptions import InvalidArgument
from src.modules.assembly.blocks import apply_dirichlet, assemble_elasticity
from src.modules.assembly.loads import ForcingLoad
from src.modules.fespace.quadrature import gauss_quadrature_2d
from src.modules.fespace.schemas import AnalyticField
from src.modules.fespace.space import build_space, evaluate_at_quadrature, integrate_cells, interpolate
from src.modules.mesh.builder import build_mesh
from src.modules.projection.elliptic import (
    RitzProjection,
    elliptic_projection_scalar,
    elliptic_projection_vector,
    stress_flux,
)
from src.modules.projection.special import error_split, pressure_interpolant, special_approximation_of
from src.modules.projection.temporal import interpolate_time, moment_defect, node_times, project_time
from src.modules.solver.marching import march
from src.modules.timedisc.basis import slab_basis
from src.modules.timedisc.quadrature import gauss_legendre, gauss_lobatto
from src.modules.timedisc.time_mesh import build_time_mesh


def _bubble() -> AnalyticField:
    """x(1 - x) y(1 - y): Q_2 and zero on the boundary."""

    def value(x):
        return x[..., 0] * (1 - x[..., 0]) * x[..., 1] * (1 - x[..., 1])

    def gradient(x):
        a, b = x[..., 0], x[..., 1]
        return np.stack([(1 - 2 * a) * b * (1 - b), a * (1 - a) * (1 - 2 * b)], axis=-1)

    return AnalyticField(value=value, gradient=gradient)


def test_galerkin_orthogonality(projector, msol):
    for projection, field in (
        (projector.vector, msol.displacement_field(0.7)),
        (projector.scalar, msol.pressure_field(0.7)),
    ):
        coefficients = projection(field)
        scale = max(1.0, float(np.abs(projection.rhs(field)).max()))
        assert projection.galerkin_residual(coefficients, field) / scale < 1e-9


def test_scalar_projection_reproduces_discrete_functions(projector):
    space = projector.scalar.space
    bubble = _bubble()
    expected = interpolate(space, bubble.value)
    np.testing.assert_allclose(projector.scalar(bubble), expected, atol=1e-13)
    np.testing.assert_allclose(projector.scalar(expected), expected, atol=1e-13)


def test_vector_projection_reproduces_discrete_functions(projector):
    bubble = _bubble()
    field = AnalyticField(
        value=lambda x: np.stack([bubble.value(x), -2 * bubble.value(x)], axis=-1),
        gradient=lambda x: np.stack([bubble.gradient(x), -2 * bubble.gradient(x)], axis=-2),
    )
    expected = interpolate(projector.vector.space, field.value)
    np.testing.assert_allclose(projector.vector(field), expected, atol=1e-13)


def test_many_matches_single_solves(projector, msol):
    targets = [msol.pressure_field(t) for t in (0.3, 0.9, 1.4)]
    batched = projector.scalar.many(targets)
    for row, target in zip(batched, targets):
        np.testing.assert_allclose(row, projector.scalar(target), atol=1e-14)
    assert projector.scalar.many([]).shape == (0, projector.scalar.space.n_dofs)


def test_projection_needs_gradient(projector):
    with pytest.raises(InvalidArgument):
        projector.scalar(AnalyticField(value=lambda x: x[..., 0]))
    with pytest.raises(InvalidArgument):
        projector.scalar(np.zeros(3))


def test_standalone_projections_match_projector(projector, params, msol):
    space_u, space_p = projector.vector.space, projector.scalar.space
    field_u, field_p = msol.displacement_field(1.1), msol.pressure_field(1.1)
    np.testing.assert_allclose(elliptic_projection_vector(space_u, field_u, params), projector.vector(field_u))
    np.testing.assert_allclose(elliptic_projection_scalar(space_p, field_p, params.K_matrix), projector.scalar(field_p))


def test_node_times():
    time_mesh = build_time_mesh(1.0, 0.5)
    np.testing.assert_allclose(node_times(gauss_lobatto(2), time_mesh), [0.0, 0.25, 0.5, 0.75, 1.0])


@pytest.mark.parametrize("k", [1, 2, 3])
def test_interpolation_in_time_reproduces_polynomials(k):
    time_mesh = build_time_mesh(1.0, 0.25)
    trajectory = interpolate_time(gauss_lobatto(k), time_mesh, lambda t: np.array([t**k, 1.0]))
    for t in (0.1, 0.37, 0.99):
        np.testing.assert_allclose(trajectory.evaluate(t), [t**k, 1.0], atol=1e-13)


@pytest.mark.parametrize("degree", [0, 1, 2])
def test_time_projection_moments(degree):
    time_mesh = build_time_mesh(2.0, 0.25)

    def w(t):
        return np.array([math.sin(math.pi * t * t), t**5 - t, math.exp(-t)])

    projection = project_time(degree, time_mesh, w)
    assert moment_defect(projection, w) < 1e-10


def test_time_projection_is_exact_on_its_space():
    time_mesh = build_time_mesh(1.0, 0.5)
    projection = project_time(2, time_mesh, lambda t: np.array([3 * t * t - t]))
    assert projection.evaluate(0.8)[0] == pytest.approx(3 * 0.64 - 0.8)


def test_time_projection_rejects_negative_degree():
    with pytest.raises(InvalidArgument):
        project_time(-1, build_time_mesh(1.0, 0.5), lambda t: np.zeros(1))


def test_special_approximation_of_polynomial_motion(projector):
    """For u = t^2 w the approximation is exactly t^2 R_h w, and w2 = 2 t R_h w."""
    bubble = _bubble()
    space = projector.scalar.space
    rule = gauss_lobatto(2)
    time_mesh = build_time_mesh(0.6, 0.2)
    discrete = interpolate(space, bubble.value)

    approximation = special_approximation_of(
        projector.scalar, rule, time_mesh, lambda t: t * t * discrete, lambda t: 2 * t * discrete
    )
    for t in (0.05, 0.3, 0.6):
        np.testing.assert_allclose(approximation.w1.evaluate(t), t * t * discrete, atol=1e-13)
        np.testing.assert_allclose(approximation.w2.evaluate(t), 2 * t * discrete, atol=1e-13)


def test_special_approximation_starts_from_projection(projector, msol):
    rule = gauss_lobatto(2)
    time_mesh = build_time_mesh(0.4, 0.1)
    approximation = special_approximation_of(
        projector.vector, rule, time_mesh, msol.displacement_field, msol.velocity_field
    )
    for n in range(time_mesh.n_slabs):
        start = projector.vector(msol.displacement_field(float(time_mesh.points[n])))
        np.testing.assert_allclose(approximation.w1.slab_values(n)[0], start, atol=1e-12)


def test_pressure_interpolant_matches_nodes(projector, msol):
    rule = gauss_lobatto(2)
    time_mesh = build_time_mesh(0.4, 0.2)
    interpolant = pressure_interpolant(msol, projector, rule, time_mesh)
    t = float(node_times(rule, time_mesh)[3])
    np.testing.assert_allclose(interpolant.nodes[3], projector.scalar(msol.pressure_field(t)), atol=1e-13)


def test_error_split_reconstructs_total_error(blocks, params, msol, projector):
    k = 2
    rule = gauss_lobatto(k)
    time_mesh = build_time_mesh(0.4, 0.1)
    initial = np.zeros(blocks.layout.size)
    solution = march(blocks, time_mesh, slab_basis(k), rule, ForcingLoad(blocks, params, msol), initial)
    report = error_split(solution, msol, projector, rule)
    assert report.reconstruction_defect < 1e-12
    for value in (report.eta1, report.eta2, report.E1, report.E2, report.omega, report.e):
        assert np.isfinite(value) and value >= 0


def _l2_error(space, coefficients, exact, quad) -> float:
    difference = evaluate_at_quadrature(space, coefficients, quad) - exact(space.mesh.map_to_physical(quad.points))
    if space.components == 2:
        difference = np.sum(difference**2, axis=-1)
    else:
        difference = difference**2
    return float(np.sqrt(integrate_cells(space.mesh, quad, difference)))


def _rates(errors: list[float]) -> np.ndarray:
    return np.log2(np.array(errors[:-1]) / np.array(errors[1:]))


def test_elliptic_projection_rates(params, msol):
    """Q_2 Ritz projections converge like h^3 in L2."""
    quad = gauss_quadrature_2d(5)
    field_u, field_p = msol.displacement_field(1.1), msol.pressure_field(1.1)
    errors_u, errors_p = [], []
    for n in (4, 8, 16):
        mesh = build_mesh(n)
        space_u, space_p = build_space(mesh, 2, components=2), build_space(mesh, 2)
        u_h = elliptic_projection_vector(space_u, field_u, params)
        p_h = elliptic_projection_scalar(space_p, field_p, params.K_matrix)
        errors_u.append(_l2_error(space_u, u_h, field_u.value, quad))
        errors_p.append(_l2_error(space_p, p_h, field_p.value, quad))
    assert _rates(errors_u)[-1] == pytest.approx(3.0, abs=0.15)
    assert _rates(errors_p)[-1] == pytest.approx(3.0, abs=0.15)


@pytest.mark.parametrize("k", [1, 2])
def test_interpolation_in_time_rate(k):
    def w(t):
        return np.array([math.sin(math.pi * t * t)])

    s = np.linspace(-1.0, 1.0, 41)
    errors = []
    for level in range(4):
        time_mesh = build_time_mesh(2.0, 0.1, level)
        trajectory = interpolate_time(gauss_lobatto(k), time_mesh, w)
        error = 0.0
        for n in range(time_mesh.n_slabs):
            t_start, t_end = time_mesh.slab(n)
            times = t_start + 0.5 * (t_end - t_start) * (s + 1.0)
            exact = np.sin(np.pi * times**2)
            error = max(error, float(np.abs(trajectory.slab_evaluate(n, s)[:, 0] - exact).max()))
        errors.append(error)
    assert _rates(errors)[-1] == pytest.approx(k + 1, abs=0.1)


def test_time_projection_hand_examples():
    time_mesh = build_time_mesh(1.0, 1.0)
    constant = project_time(0, time_mesh, lambda t: np.array([t]))
    linear = project_time(1, time_mesh, lambda t: np.array([t * t]))
    for t in (0.0, 0.25, 0.8, 1.0):
        assert constant.evaluate(t)[0] == pytest.approx(0.5)
        assert linear.evaluate(t)[0] == pytest.approx(t - 1 / 6)


def _random_smooth(rng):
    amplitudes = rng.normal(size=5)
    phases = rng.uniform(0.0, 2 * np.pi, size=5)
    frequencies = np.arange(1, 6)

    def w(t):
        return np.array([np.sum(amplitudes * np.sin(frequencies * t + phases))])

    return w


def _slab_samples(trajectory, time_mesh, w, s):
    """Values of the trajectory and of w at reference points s of every slab."""
    discrete, exact = [], []
    for n in range(time_mesh.n_slabs):
        t_start, t_end = time_mesh.slab(n)
        discrete.append(trajectory.slab_evaluate(n, s)[:, 0])
        exact.append(np.concatenate([w(t) for t in t_start + 0.5 * (t_end - t_start) * (s + 1.0)]))
    return np.stack(discrete), np.stack(exact)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_time_projection_contracts_and_interpolation_is_stable(k, rng):
    time_mesh = build_time_mesh(2.0, 0.25)
    nodes, weights = gauss_legendre(12)
    for _ in range(5):
        w = _random_smooth(rng)
        projected, exact = _slab_samples(project_time(k - 1, time_mesh, w), time_mesh, w, nodes)
        tau = time_mesh.tau_n[:, None]
        assert np.sum(0.5 * tau * weights * projected**2) <= np.sum(0.5 * tau * weights * exact**2) * (1 + 1e-12)

        s = np.linspace(-1.0, 1.0, 51)
        interpolated, sampled = _slab_samples(interpolate_time(gauss_lobatto(k), time_mesh, w), time_mesh, w, s)
        assert np.abs(interpolated).max() <= 1.5 * np.abs(sampled).max()


def test_special_approximation_rate(params, msol):
    """u - w1 decays like h^3 + tau^3 under simultaneous refinement."""
    rule = gauss_lobatto(2)
    quad = gauss_quadrature_2d(5)
    errors = []
    for level, n in enumerate((4, 8, 16)):
        space = build_space(build_mesh(n), 2, components=2)
        stiffness = apply_dirichlet(assemble_elasticity(space, params), space.dirichlet_mask)
        projection = RitzProjection(space, stiffness, stress_flux(params))
        time_mesh = build_time_mesh(0.4, 0.1, level)
        w1 = special_approximation_of(projection, rule, time_mesh, msol.displacement_field, msol.velocity_field).w1
        errors.append(
            max(
                _l2_error(space, w1.evaluate(t), msol.displacement_field(t).value, quad)
                for t in np.linspace(0.05, 0.4, 8)
            )
        )
    assert _rates(errors)[-1] >= 2.8
