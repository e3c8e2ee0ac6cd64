from __future__ import annotations

import json
import logging
from dataclasses import asdict
from fractions import Fraction
from json import JSONDecodeError
from pathlib import Path

from bisched.config.paths import get_config_path
from bisched.config.schema import AppConfig, BenchDefaults, PtasDefaults, SolverLimits
from bisched.core.errors import ConfigError

logger = logging.getLogger(__name__)


class ConfigStore:
    def __init__(self, path: Path | None = None) -> None:
        self._path = path if path is not None else get_config_path()

    @property
    def path(self) -> Path:
        return self._path

    def load(self) -> AppConfig:
        if not self._path.exists():
            return AppConfig()
        try:
            payload = json.loads(self._path.read_text(encoding="utf-8"))
            limits = SolverLimits(**payload.get("limits", {}))
            ptas = PtasDefaults(**payload.get("ptas", {}))
            bench = BenchDefaults(**payload.get("bench", {}))
            if ptas.epsilon_value() <= 0:
                raise ValueError("epsilon must be positive")
            for raw in bench.epsilons:
                if Fraction(raw) <= 0:
                    raise ValueError("epsilon must be positive")
            return AppConfig(
                schema_version=payload.get("schema_version", 1),
                limits=limits,
                ptas=ptas,
                bench=bench,
            )
        except (OSError, JSONDecodeError, TypeError, ValueError, ZeroDivisionError) as exc:
            logger.exception("Ошибка чтения конфига: %s", self._path)
            raise ConfigError(
                "Не удалось прочитать конфиг. Проверьте корректность файла и попробуйте снова."
            ) from exc

    def save(self, config: AppConfig) -> None:
        try:
            self._path.parent.mkdir(parents=True, exist_ok=True)
            self._path.write_text(
                json.dumps(asdict(config), ensure_ascii=False, indent=2),
                encoding="utf-8",
            )
        except OSError as exc:
            logger.exception("Ошибка сохранения конфига: %s", self._path)
            raise ConfigError("Не удалось сохранить конфиг на диск.") from exc
