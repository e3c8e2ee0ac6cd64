from __future__ import annotations

import os

from bisched.config.schema import AppConfig
from bisched.core.errors import ConfigError

STATE_CAP_ENV = "BISCHED_STATE_CAP"


def read_state_cap_override() -> int | None:
    raw = os.getenv(STATE_CAP_ENV, "").strip()
    if not raw:
        return None
    try:
        cap = int(raw)
    except ValueError as exc:
        raise ConfigError(f"{STATE_CAP_ENV} должен быть целым числом.") from exc
    if cap <= 0:
        raise ConfigError(f"{STATE_CAP_ENV} должен быть положительным числом.")
    return cap


def apply_env_overrides(config: AppConfig) -> AppConfig:
    cap = read_state_cap_override()
    if cap is not None:
        config.limits.dpm_state_cap = cap
    return config
