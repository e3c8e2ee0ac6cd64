from __future__ import annotations

import os
from pathlib import Path

from platformdirs import user_data_dir

APP_NAME = "bisched"
APP_AUTHOR = "bisched"
PORTABLE_ENV = "BISCHED_PORTABLE"


def is_portable_mode() -> bool:
    """Portable mode keeps config and logs in ./data next to the working directory."""
    return os.environ.get(PORTABLE_ENV, "").lower() in ("1", "true", "yes")


def get_data_dir() -> Path:
    if is_portable_mode():
        return Path.cwd() / "data"
    return Path(user_data_dir(APP_NAME, APP_AUTHOR))


def get_config_path() -> Path:
    return get_data_dir() / "config.json"


def get_log_file_path() -> Path:
    return get_data_dir() / "logs" / "bisched.log"
