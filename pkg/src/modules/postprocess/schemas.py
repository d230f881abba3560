__all__ = ["Norm", "LevelRecord", "ErrorReport", "COLUMNS", "column_name"]

from enum import StrEnum

from pydantic import BaseModel, ConfigDict

from src.config_schema import Scheme
from src.modules.postprocess.eoc import eoc
from src.modules.solver.schemas import Field


class Norm(StrEnum):
    L2L2 = "l2l2"
    LINF_L2 = "linfl2"


COLUMNS: list[tuple[Field, Norm]] = [(field, norm) for norm in Norm for field in Field]
"Error columns in report order: all L2(L2) columns, then all L-infinity(L2) columns"


class LevelRecord(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    level: int
    tau: float
    h: float
    n_dofs_u: int
    n_dofs_p: int
    walltime: float
    "Seconds spent on assembly, marching and error evaluation"
    errors: dict[str, float]
    "Keyed by column name, e.g. 'u_l2l2'"
    max_residual: float = 0.0
    diagnostics: dict[str, float] = {}
    "Projection residual, error splitting and energies; not part of the report tables"

    def error(self, field: Field, norm: Norm) -> float:
        return self.errors[column_name(field, norm)]


def column_name(field: Field, norm: Norm) -> str:
    return f"{field}_{norm}"


class ErrorReport(BaseModel):
    """Errors of one study, one record per refinement level."""

    model_config = ConfigDict(extra="forbid")

    scheme: Scheme
    k: int
    r: int
    records: list[LevelRecord] = []

    def column(self, field: Field, norm: Norm) -> list[float]:
        return [record.error(field, norm) for record in self.records]

    def eoc_column(self, field: Field, norm: Norm) -> list[float | None]:
        return eoc(self.column(field, norm), [record.level for record in self.records])
