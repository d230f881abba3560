import math
import re
from enum import StrEnum
from pathlib import Path

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from src.exceptions import ConfigurationError
from src.modules.model.schemas import ManufacturedSolution, MaterialParams


class Scheme(StrEnum):
    EQUAL_ORDER = "equal-order"
    TAYLOR_HOOD = "taylor-hood"


class InitialValueStrategy(StrEnum):
    ELLIPTIC_PROJECTION = "elliptic-projection"
    "R_h u0 for the displacement, nodal interpolation for velocity and pressure"
    NODAL_INTERPOLATION = "nodal-interpolation"
    "Nodal interpolation for all three fields"
    FULL_ELLIPTIC_PROJECTION = "full-elliptic-projection"
    "Elliptic projections for all three fields"


class SettingsEntityModel(BaseModel):
    model_config = ConfigDict(use_attribute_docstrings=True, extra="forbid")


_LEVEL_RANGE = re.compile(r"^\s*(\d+)\s*\.\.\s*(\d+)\s*$")


def parse_levels(value: str | int | list[int]) -> list[int]:
    """'a..b' is the inclusive range a..b; a single number L means levels 0..L."""
    if isinstance(value, str) and value.strip().isdigit():
        value = int(value)
    if isinstance(value, int):
        return list(range(value + 1))
    if isinstance(value, str):
        match = _LEVEL_RANGE.match(value)
        if match is None:
            raise ValueError(f"levels must look like 'a..b', got {value!r}")
        first, last = int(match.group(1)), int(match.group(2))
        return list(range(first, last + 1))
    return list(value)


class Settings(SettingsEntityModel):
    """
    Settings for a convergence study. Get settings from `settings.yaml` file.
    """

    scheme: Scheme = Scheme.EQUAL_ORDER
    "Spatial pairing: equal order {V_h^r, Q_h^r} or Taylor-Hood {V_h^(r+1), Q_h^r}"
    k: int = Field(2, ge=1)
    "Polynomial degree in time (trial space P_k, test space P_(k-1))"
    r: int = Field(2, ge=1)
    "Polynomial degree in space (pressure degree for Taylor-Hood)"
    levels: list[int] = [0, 1, 2, 3]
    "Refinement levels to run; a list or a range string like '0..3'. Levels 4 and above are long-running"
    T: float = Field(2.0, gt=0)
    "Final time of the interval (0, T]"
    tau0: float = Field(0.1, gt=0)
    "Time step of the coarsest level; halved per level"
    cells0: int = Field(4, ge=1)
    "Cells per side of the coarsest mesh; doubled per level"
    rho: float = Field(1.0, gt=0)
    "Density"
    alpha: float = Field(0.9, gt=0)
    "Biot coupling coefficient"
    c0: float = Field(1e-3, gt=0)
    "Storage coefficient"
    K_diag: tuple[float, float] = (1e-2, 1e-2)
    "Diagonal of the permeability tensor K"
    E: float = Field(100.0, gt=0)
    "Young's modulus"
    nu: float = Field(0.35, gt=0, lt=0.5)
    "Poisson's ratio"
    omega1: float = math.pi
    "Temporal frequency of the prescribed solution"
    omega2: float = math.pi
    "Spatial frequency of the prescribed solution"
    initial_values: InitialValueStrategy = InitialValueStrategy.ELLIPTIC_PROJECTION
    "How discrete initial values are computed"
    output_dir: Path = Path("output")
    "Directory for CSV and table reports"
    emit_markdown: bool = False
    "Also write a markdown table"
    diagnostics: bool = True
    "Log the Galerkin residual of the elliptic projections, the error splitting and the energy of every level"
    dump_dir: Path | None = None
    "Write the mesh and the nodal trajectory of every level to this directory"

    @field_validator("levels", mode="before")
    @classmethod
    def _parse_levels(cls, value):
        return parse_levels(value)

    @field_validator("levels")
    @classmethod
    def _check_levels(cls, levels: list[int]) -> list[int]:
        if not levels:
            raise ValueError("at least one level is required")
        if any(level < 0 for level in levels):
            raise ValueError("levels must be non-negative")
        if any(b <= a for a, b in zip(levels, levels[1:])):
            raise ValueError("levels must be unique and increasing")
        return levels

    @field_validator("K_diag")
    @classmethod
    def _check_permeability(cls, value: tuple[float, float]) -> tuple[float, float]:
        if min(value) <= 0:
            raise ValueError("K_diag entries must be positive")
        return value

    @model_validator(mode="after")
    def _check_time_division(self) -> "Settings":
        n_slabs = self.T / self.tau0
        if abs(n_slabs - round(n_slabs)) > 1e-9 * max(n_slabs, 1.0) or round(n_slabs) < 1:
            raise ValueError(f"T / tau0 = {n_slabs} is not an integer")
        return self

    @property
    def vector_order(self) -> int:
        return self.r + 1 if self.scheme == Scheme.TAYLOR_HOOD else self.r

    @property
    def report_stem(self) -> str:
        return f"errors_{self.scheme}_k{self.k}_r{self.r}"

    def material_params(self) -> MaterialParams:
        return MaterialParams(
            rho=self.rho,
            alpha=self.alpha,
            c0=self.c0,
            K=((self.K_diag[0], 0.0), (0.0, self.K_diag[1])),
            E=self.E,
            nu=self.nu,
        )

    def manufactured_solution(self) -> ManufacturedSolution:
        return ManufacturedSolution(omega1=self.omega1, omega2=self.omega2)

    @classmethod
    def from_yaml(cls, path: Path) -> "Settings":
        try:
            with open(path, encoding="utf-8") as f:
                text = f.read()
        except OSError as e:
            raise ConfigurationError(f"Cannot read settings file {path}: {e}")
        try:
            yaml_config: dict = yaml.safe_load(text) or {}
        except yaml.YAMLError as e:
            mark = getattr(e, "problem_mark", None)
            where = f"{path}:{mark.line + 1}" if mark is not None else str(path)
            raise ConfigurationError(f"{where}: invalid YAML: {getattr(e, 'problem', e)}")
        if not isinstance(yaml_config, dict):
            raise ConfigurationError(f"{path}: settings must be a mapping of keys to values")
        yaml_config.pop("$schema", None)
        return cls.from_mapping(yaml_config, source=path, key_lines=_key_lines(text))

    @classmethod
    def from_mapping(
        cls, mapping: dict, source: Path | str = "<settings>", key_lines: dict[str, int] | None = None
    ) -> "Settings":
        try:
            return cls.model_validate(mapping)
        except ValidationError as e:
            key_lines = key_lines or {}
            messages = []
            for error in e.errors():
                key = str(error["loc"][0]) if error["loc"] else None
                line = key_lines.get(key) if key else None
                where = f"{source}:{line}" if line else str(source)
                what = f"key '{key}'" if key else "settings"
                messages.append(f"{where}: {what}: {error['msg']}")
            raise ConfigurationError("\n".join(messages))

    @classmethod
    def save_schema(cls, path: Path) -> None:
        with open(path, "w", encoding="utf-8") as f:
            schema = {"$schema": "https://json-schema.org/draft-07/schema", **cls.model_json_schema()}
            schema["properties"]["$schema"] = {
                "description": "Path to the schema file",
                "title": "Schema",
                "type": "string",
            }
            yaml.dump(schema, f, sort_keys=False)


def _key_lines(text: str) -> dict[str, int]:
    try:
        node = yaml.compose(text)
    except yaml.YAMLError:
        return {}
    if not isinstance(node, yaml.MappingNode):
        return {}
    return {key.value: key.start_mark.line + 1 for key, _ in node.value}
