__all__ = ["build_parser", "main"]

import argparse
from pathlib import Path

from src.config import load_settings, settings_path
from src.config_schema import Scheme, Settings
from src.exceptions import ConfigurationError, SolverException
from src.logging_ import logger
from src.modules.study.runner import run_study
from src.modules.study.self_test import self_test


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="python -m src.cli",
        description="Space-time convergence study for dynamic poroelasticity",
    )
    parser.add_argument("--settings", type=Path, default=None, help=f"Settings file (default: {settings_path})")
    parser.add_argument("--scheme", choices=[scheme.value for scheme in Scheme], help="Override the scheme")
    parser.add_argument("--k", type=int, help="Override the temporal degree")
    parser.add_argument("--r", type=int, help="Override the spatial degree")
    parser.add_argument("--levels", help="Override the levels, e.g. 0..3")
    parser.add_argument("--self-test", action="store_true", help="Run the property suite instead of a study")
    parser.add_argument("--emit-markdown", action="store_true", help="Also write a markdown table")
    parser.add_argument("--dump-dir", type=Path, help="Write the mesh and nodal trajectory of every level here")
    return parser


def _apply_overrides(settings: Settings, args: argparse.Namespace) -> Settings:
    overrides = {
        key: value
        for key, value in {
            "scheme": args.scheme,
            "k": args.k,
            "r": args.r,
            "levels": args.levels,
            "dump_dir": args.dump_dir,
        }.items()
        if value is not None
    }
    if args.emit_markdown:
        overrides["emit_markdown"] = True
    if not overrides:
        return settings
    return Settings.from_mapping({**settings.model_dump(), **overrides}, source="command line")


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.self_test:
            self_test()
            return 0

        settings = _apply_overrides(load_settings(args.settings), args)
        _, paths = run_study(settings)
    except ConfigurationError as e:
        logger.error(f"Configuration error:\n{e.detail}")
        return e.exit_code
    except SolverException as e:
        logger.error(e.detail)
        return e.exit_code
    for path in paths:
        print(path)
    return 0
