import csv
from pathlib import Path

import pytest
import yaml

from src.cli.app import build_parser, main


@pytest.fixture
def settings_file(tmp_path: Path) -> Path:
    path = tmp_path / "settings.yaml"
    config = {"k": 1, "r": 1, "levels": "0..1", "T": 0.4, "output_dir": str(tmp_path / "output")}
    path.write_text(yaml.safe_dump(config))
    return path


def test_parser_defaults():
    args = build_parser().parse_args([])
    assert args.settings is None
    assert not args.self_test
    assert args.levels is None


def test_study_writes_reports(settings_file, tmp_path, capsys):
    assert main(["--settings", str(settings_file), "--emit-markdown"]) == 0
    printed = capsys.readouterr().out
    output = tmp_path / "output"
    stem = "errors_equal-order_k1_r1"
    for suffix in (".csv", ".txt", ".md"):
        assert (output / f"{stem}{suffix}").is_file()
        assert str(output / f"{stem}{suffix}") in printed
    with open(output / f"{stem}.csv", encoding="utf-8", newline="") as f:
        rows = list(csv.reader(f))
    assert [row[0] for row in rows[1:]] == ["0", "1"]


def test_levels_override(settings_file, tmp_path):
    assert main(["--settings", str(settings_file), "--levels", "1", "--scheme", "taylor-hood"]) == 0
    with open(tmp_path / "output" / "errors_taylor-hood_k1_r1.csv", encoding="utf-8", newline="") as f:
        rows = list(csv.reader(f))
    # an integer level count runs every level up to it
    assert [row[0] for row in rows[1:]] == ["0", "1"]


@pytest.mark.parametrize("argv", [["--levels", "3..1"], ["--k", "0"]])
def test_invalid_override_is_configuration_error(settings_file, argv):
    assert main(["--settings", str(settings_file), *argv]) == 1


def test_missing_settings_file(tmp_path):
    assert main(["--settings", str(tmp_path / "missing.yaml")]) == 1


def test_self_test_flag():
    assert main(["--self-test"]) == 0


def test_dump_dir_override(settings_file, tmp_path):
    assert main(["--settings", str(settings_file), "--levels", "0", "--dump-dir", str(tmp_path / "dump")]) == 0
    assert sorted(path.name for path in (tmp_path / "dump").iterdir()) == ["mesh_level0.txt", "trajectory_level0.npz"]
