__all__ = [
    "REFERENCE_ERRORS",
    "reference_record",
    "format_error",
    "format_eoc",
    "csv_rows",
    "format_table",
    "format_markdown",
    "write_report",
]

import csv
from pathlib import Path

from src.config_schema import Scheme
from src.logging_ import logger
from src.modules.postprocess.schemas import COLUMNS, ErrorReport, Norm, column_name
from src.modules.solver.schemas import Field

_L2 = Norm.L2L2


def _levels(*rows: tuple[float, ...]) -> list[dict[str, float]]:
    columns = [column_name(field, norm) for field, norm in COLUMNS]
    return [dict(zip(columns, row)) for row in rows]


REFERENCE_ERRORS: dict[Scheme, list[dict[str, float]]] = {
    # k = r = 2, {V_h^2, Q_h^2}; columns u, v, p in L2(L2) then u, v, p in L-infinity(L2)
    Scheme.EQUAL_ORDER: _levels(
        (3.6741729210e-03, 4.1282666037e-02, 6.7442978958e-02, 7.7356665842e-03, 1.1023905122e-01, 1.4136586176e-01),
        (4.6822546563e-04, 4.9051780039e-03, 3.8674819986e-03, 1.2393232164e-03, 1.4136203260e-02, 8.3752373581e-03),
        (5.8778097800e-05, 6.2028252749e-04, 2.4809531869e-04, 1.6642245699e-04, 1.8234611143e-03, 4.9215141823e-04),
        (7.3543857134e-06, 7.7854545813e-05, 1.6114838644e-05, 2.1296270280e-05, 2.2979190855e-04, 2.8859565155e-05),
        (9.1951071480e-07, 9.7424834053e-06, 1.1541868101e-06, 2.6851742263e-06, 2.8663447685e-05, 2.4527886661e-06),
        (1.1494533804e-07, 1.2181487408e-06, 1.0079612177e-07, 3.3684383499e-07, 3.5800946159e-06, 2.5725548188e-07),
    ),
    # k = 2, r = 2, {V_h^3, Q_h^2}
    Scheme.TAYLOR_HOOD: _levels(
        (3.2223164159e-03, 3.9470120875e-02, 5.3817187010e-02, 7.9770740804e-03, 1.1179102428e-01, 1.6306452013e-01),
        (3.8762468516e-04, 4.4805250509e-03, 3.5640199518e-03, 1.2538478867e-03, 1.4112728641e-02, 1.2187980808e-02),
        (4.8084739364e-05, 5.6306412015e-04, 3.0169432186e-04, 1.6721629610e-04, 1.8029843969e-03, 7.2946116772e-04),
        (6.0009965689e-06, 7.0594365429e-05, 3.1449270169e-05, 2.1341460866e-05, 2.2791756297e-04, 3.8469033488e-05),
        (7.4984738840e-07, 8.8318214147e-06, 3.7139677858e-06, 2.6878519380e-06, 2.8496047406e-05, 4.0634844335e-06),
    ),
}
"Published errors of the reference study (default settings), one mapping per refinement level"


def reference_record(report: ErrorReport, level: int) -> dict[str, float] | None:
    """Reference errors for a level when the report runs the reference configuration (k = r = 2)."""
    if report.k != 2 or report.r != 2:
        return None
    rows = REFERENCE_ERRORS[report.scheme]
    return rows[level] if 0 <= level < len(rows) else None


def format_error(value: float) -> str:
    """Scientific notation with 10 significant digits."""
    return f"{value:.9e}"


def format_eoc(value: float | None) -> str:
    return "--" if value is None else f"{value:.2f}"


def _header() -> list[str]:
    header = ["level", "tau", "h", "n_dofs_u", "n_dofs_p"]
    for field, norm in COLUMNS:
        name = column_name(field, norm)
        header += [name, f"{name}_eoc"]
    return header


def csv_rows(report: ErrorReport) -> list[list[str]]:
    """Header and one row per level; wall times are left out so identical runs give identical files."""
    eocs = {(field, norm): report.eoc_column(field, norm) for field, norm in COLUMNS}
    rows = [_header()]
    for i, record in enumerate(report.records):
        row = [str(record.level), format_error(record.tau), format_error(record.h)]
        row += [str(record.n_dofs_u), str(record.n_dofs_p)]
        for field, norm in COLUMNS:
            eoc_value = eocs[(field, norm)][i]
            row += [format_error(record.error(field, norm)), "" if eoc_value is None else f"{eoc_value:.4f}"]
        rows.append(row)
    return rows


def _norm_label(field: Field, norm: Norm) -> str:
    return f"{field} {'L2(L2)' if norm == _L2 else 'Linf(L2)'}"


def format_table(report: ErrorReport) -> str:
    """Aligned plain-text table: one block per norm, mirroring the published layout, plus run data."""
    lines = [f"scheme={report.scheme} k={report.k} r={report.r}"]
    for norm in Norm:
        header = ["tau", "h"]
        for field in Field:
            header += [_norm_label(field, norm), "EOC"]
        header += ["max dev"]
        body = []
        eocs = {field: report.eoc_column(field, norm) for field in Field}
        for i, record in enumerate(report.records):
            row = [f"{record.tau:.6g}", f"{record.h:.6g}"]
            for field in Field:
                row += [format_error(record.error(field, norm)), format_eoc(eocs[field][i])]
            reference = reference_record(report, record.level)
            if reference is None:
                row.append("")
            else:
                deviation = max(
                    abs(record.error(field, norm) / reference[column_name(field, norm)] - 1.0) for field in Field
                )
                row.append(f"{100 * deviation:.1f}%")
            body.append(row)
        widths = [max(len(cell) for cell in column) for column in zip(header, *body)]
        lines.append("")
        lines.append("  ".join(cell.rjust(width) for cell, width in zip(header, widths)))
        lines.append("  ".join("-" * width for width in widths))
        lines += ["  ".join(cell.rjust(width) for cell, width in zip(row, widths)) for row in body]
    lines.append("")
    for record in report.records:
        lines.append(
            f"level {record.level}: {record.n_dofs_u} + {record.n_dofs_p} DOFs per temporal node, "
            f"{record.walltime:.1f} s, max slab residual {record.max_residual:.1e}"
        )
    return "\n".join(lines) + "\n"


def format_markdown(report: ErrorReport) -> str:
    lines = [f"**{report.scheme}**, k = {report.k}, r = {report.r}", ""]
    for norm in Norm:
        header = ["τ", "h"]
        for field in Field:
            header += [f"‖{field} − {field}_τh‖ {'L2(L2)' if norm == _L2 else 'L∞(L2)'}", "EOC"]
        lines.append("| " + " | ".join(header) + " |")
        lines.append("|" + "|".join(["---"] * len(header)) + "|")
        eocs = {field: report.eoc_column(field, norm) for field in Field}
        for i, record in enumerate(report.records):
            row = [f"τ0/2^{record.level}", f"h0/2^{record.level}"]
            for field in Field:
                row += [format_error(record.error(field, norm)), format_eoc(eocs[field][i])]
            lines.append("| " + " | ".join(row) + " |")
        lines.append("")
    return "\n".join(lines)


def write_report(report: ErrorReport, output_dir: Path, stem: str, emit_markdown: bool = False) -> list[Path]:
    output_dir = Path(output_dir)
    output_dir.mkdir(parents=True, exist_ok=True)
    csv_path = output_dir / f"{stem}.csv"
    with open(csv_path, "w", encoding="utf-8", newline="") as f:
        csv.writer(f, lineterminator="\n").writerows(csv_rows(report))
    table_path = output_dir / f"{stem}.txt"
    table_path.write_text(format_table(report), encoding="utf-8")
    paths = [csv_path, table_path]
    if emit_markdown:
        markdown_path = output_dir / f"{stem}.md"
        markdown_path.write_text(format_markdown(report), encoding="utf-8")
        paths.append(markdown_path)
    logger.info(f"Report written: {', '.join(str(path) for path in paths)}")
    return paths
