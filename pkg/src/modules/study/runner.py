__all__ = ["LevelRun", "solve_level", "level_diagnostics", "dump_level", "run_level", "run_study"]

import time
from dataclasses import asdict, dataclass
from pathlib import Path

from src.config_schema import Settings
from src.logging_ import log_duration, logger
from src.modules.assembly.blocks import assemble_blocks
from src.modules.assembly.loads import ForcingLoad
from src.modules.assembly.schemas import OperatorBlocks
from src.modules.fespace.space import build_space
from src.modules.mesh.builder import build_mesh, dump_mesh
from src.modules.model.schemas import ManufacturedSolution, MaterialParams
from src.modules.postprocess.energy import energy
from src.modules.postprocess.norms import error_norms
from src.modules.postprocess.schemas import ErrorReport, LevelRecord, Norm, column_name
from src.modules.postprocess.tables import write_report
from src.modules.projection.elliptic import EllipticProjector, projection_residual
from src.modules.projection.special import error_split
from src.modules.solver.dump import dump_trajectory
from src.modules.solver.initial import initial_values, stack_initial
from src.modules.solver.marching import march
from src.modules.solver.schemas import SpaceTimeSolution
from src.modules.timedisc.basis import slab_basis
from src.modules.timedisc.quadrature import gauss_lobatto
from src.modules.timedisc.time_mesh import build_time_mesh

LONG_RUNNING_LEVEL = 4
PROJECTION_RESIDUAL_TOLERANCE = 1e-9


@dataclass(frozen=True, eq=False)
class LevelRun:
    level: int
    params: MaterialParams
    msol: ManufacturedSolution
    blocks: OperatorBlocks
    projector: EllipticProjector
    solution: SpaceTimeSolution


def solve_level(settings: Settings, level: int) -> LevelRun:
    """Discretize refinement level `level` (h and tau halved `level` times) and march to T."""
    if level >= LONG_RUNNING_LEVEL:
        logger.warning(f"Level {level} is long-running")
    params = settings.material_params()
    msol = settings.manufactured_solution()
    mesh = build_mesh(settings.cells0 * 2**level)
    time_mesh = build_time_mesh(settings.T, settings.tau0, level)
    space_u = build_space(mesh, settings.vector_order, components=2)
    space_p = build_space(mesh, settings.r)
    logger.info(
        f"Level {level}: tau={time_mesh.tau:g}, h={mesh.h:.6g}, {time_mesh.n_slabs} slabs, "
        f"{space_u.n_dofs} displacement and {space_p.n_dofs} pressure DOFs"
    )

    blocks = assemble_blocks(space_u, space_p, params)
    projector = EllipticProjector(blocks, params)
    u0, v0, p0 = initial_values(projector, msol, settings.initial_values)
    solution = march(
        blocks,
        time_mesh,
        slab_basis(settings.k),
        gauss_lobatto(settings.k),
        ForcingLoad(blocks, params, msol),
        stack_initial(blocks.layout, u0, v0, p0),
        level=level,
    )
    return LevelRun(level=level, params=params, msol=msol, blocks=blocks, projector=projector, solution=solution)


def level_diagnostics(run: LevelRun, k: int) -> dict[str, float]:
    """
    Checks of one solved level that do not enter the report tables: the Galerkin residual of the elliptic
    projections at t = 0 and t = T, the L2(L2) error splitting and the energy at T.
    """
    T = run.solution.time_mesh.T
    diagnostics = {
        "projection_residual": max(projection_residual(run.projector, run.msol, t) for t in (0.0, T)),
    }
    if diagnostics["projection_residual"] > PROJECTION_RESIDUAL_TOLERANCE:
        logger.warning(
            f"Level {run.level}: Galerkin residual of the elliptic projections "
            f"{diagnostics['projection_residual']:.3e} exceeds {PROJECTION_RESIDUAL_TOLERANCE:g}"
        )
    with log_duration(f"Error splitting of level {run.level}"):
        split = error_split(run.solution, run.msol, run.projector, gauss_lobatto(k))
    diagnostics.update(asdict(split))
    diagnostics["energy"] = energy(run.solution, run.params, T)
    diagnostics["exact_energy"] = energy(run.msol, run.params, T)
    logger.info(
        f"Level {run.level} diagnostics: " + ", ".join(f"{name}={value:.4e}" for name, value in diagnostics.items())
    )
    return diagnostics


def dump_level(run: LevelRun, dump_dir: Path) -> list[Path]:
    dump_dir.mkdir(parents=True, exist_ok=True)
    mesh_path = dump_dir / f"mesh_level{run.level}.txt"
    dump_mesh(run.blocks.space_u.mesh, mesh_path)
    return [mesh_path, dump_trajectory(run.solution, dump_dir / f"trajectory_level{run.level}.npz")]


def run_level(settings: Settings, level: int) -> LevelRecord:
    start = time.perf_counter()
    with log_duration(f"Level {level}"):
        run = solve_level(settings, level)
        with log_duration(f"Error norms of level {level}"):
            norms = error_norms(run.solution, run.msol)
    walltime = time.perf_counter() - start
    errors = {}
    for field, (l2l2, linf) in norms.items():
        errors[column_name(field, Norm.L2L2)] = l2l2
        errors[column_name(field, Norm.LINF_L2)] = linf
    logger.info(f"Level {level} errors: " + ", ".join(f"{name}={value:.4e}" for name, value in errors.items()))
    diagnostics = level_diagnostics(run, settings.k) if settings.diagnostics else {}
    if settings.dump_dir is not None:
        dump_level(run, settings.dump_dir)
    return LevelRecord(
        level=level,
        tau=run.solution.time_mesh.tau,
        h=run.blocks.space_u.mesh.h,
        n_dofs_u=run.blocks.space_u.n_dofs,
        n_dofs_p=run.blocks.space_p.n_dofs,
        walltime=walltime,
        errors=errors,
        max_residual=run.solution.max_residual,
        diagnostics=diagnostics,
    )


def run_study(settings: Settings) -> tuple[ErrorReport, list[Path]]:
    """Run every configured level in order and write the report files."""
    report = ErrorReport(scheme=settings.scheme, k=settings.k, r=settings.r)
    logger.info(
        f"Study {settings.report_stem}: levels {settings.levels}, vector order {settings.vector_order}, "
        f"initial values by {settings.initial_values}"
    )
    for level in settings.levels:
        report.records.append(run_level(settings, level))
    paths = write_report(report, settings.output_dir, settings.report_stem, settings.emit_markdown)
    return report, paths
