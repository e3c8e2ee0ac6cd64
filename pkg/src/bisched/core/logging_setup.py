from __future__ import annotations

import logging
from logging.handlers import RotatingFileHandler

from bisched.config.paths import get_log_file_path


class _ConsoleNoTracebackFormatter(logging.Formatter):
    """Форматтер консоли без вывода stack trace."""

    def formatException(self, ei: object) -> str:
        return ""


def configure_logging(level: int = logging.INFO) -> str:
    log_path = get_log_file_path()
    log_path.parent.mkdir(parents=True, exist_ok=True)

    root = logging.getLogger()
    root.setLevel(level)
    if any(isinstance(h, RotatingFileHandler) for h in root.handlers):
        return str(log_path)

    fmt = "%(asctime)s | %(levelname)s | %(name)s | %(message)s"
    console_handler = logging.StreamHandler()
    # консоль только для предупреждений: stdout занят JSON-выводом команд
    console_handler.setLevel(logging.WARNING)
    console_handler.setFormatter(_ConsoleNoTracebackFormatter(fmt=fmt, datefmt="%Y-%m-%d %H:%M:%S"))

    file_handler = RotatingFileHandler(
        filename=log_path,
        maxBytes=1_000_000,
        backupCount=3,
        encoding="utf-8",
    )
    file_handler.setLevel(level)
    file_handler.setFormatter(logging.Formatter(fmt=fmt, datefmt="%Y-%m-%d %H:%M:%S"))

    root.addHandler(console_handler)
    root.addHandler(file_handler)
    return str(log_path)
