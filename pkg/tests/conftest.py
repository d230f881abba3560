import numpy as np
import pytest

from src.config_schema import Settings
from src.modules.assembly.blocks import assemble_blocks
from src.modules.assembly.schemas import OperatorBlocks
from src.modules.fespace.schemas import FESpace
from src.modules.fespace.space import build_space
from src.modules.mesh.builder import build_mesh
from src.modules.mesh.schemas import Mesh
from src.modules.model.schemas import ManufacturedSolution, MaterialParams
from src.modules.projection.elliptic import EllipticProjector


@pytest.fixture(scope="session")
def settings() -> Settings:
    return Settings()


@pytest.fixture(scope="session")
def params(settings: Settings) -> MaterialParams:
    return settings.material_params()


@pytest.fixture(scope="session")
def msol(settings: Settings) -> ManufacturedSolution:
    return settings.manufactured_solution()


@pytest.fixture(scope="session")
def mesh() -> Mesh:
    return build_mesh(2)


@pytest.fixture(scope="session")
def space_u(mesh: Mesh) -> FESpace:
    return build_space(mesh, 2, components=2)


@pytest.fixture(scope="session")
def space_p(mesh: Mesh) -> FESpace:
    return build_space(mesh, 2)


@pytest.fixture(scope="session")
def blocks(space_u: FESpace, space_p: FESpace, params: MaterialParams) -> OperatorBlocks:
    return assemble_blocks(space_u, space_p, params)


@pytest.fixture(scope="session")
def projector(blocks: OperatorBlocks, params: MaterialParams) -> EllipticProjector:
    return EllipticProjector(blocks, params)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(2024)
