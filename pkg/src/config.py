__all__ = ["Settings", "Scheme", "InitialValueStrategy", "settings_path", "load_settings"]

import os
from pathlib import Path

from src.config_schema import InitialValueStrategy, Scheme, Settings

settings_path = os.getenv("SETTINGS_PATH", "settings.yaml")


def load_settings(path: Path | str | None = None) -> Settings:
    path = Path(path) if path is not None else Path(settings_path)
    if not path.exists() and path == Path(settings_path):
        # Defaults reproduce the reference study, so the settings file is optional
        return Settings()
    return Settings.from_yaml(path)
