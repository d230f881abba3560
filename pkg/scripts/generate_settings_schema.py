import argparse
import sys
from pathlib import Path

ROOT = Path(__file__).parents[1]
# the script runs from anywhere, src is imported from the repository root
sys.path.append(str(ROOT))
from src.config_schema import Settings  # noqa: E402

parser = argparse.ArgumentParser(description="Write the JSON schema of the study settings as YAML")
parser.add_argument("output", nargs="?", type=Path, default=ROOT / "settings.schema.yaml")
args = parser.parse_args()

Settings.save_schema(args.output)
print(f"Settings schema written to {args.output}")
