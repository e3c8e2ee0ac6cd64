from __future__ import annotations

import importlib.util
import logging
from pathlib import Path
from types import ModuleType
from typing import Any

from bisched.solvers.registry import SolverRegistry

logger = logging.getLogger(__name__)


def _load_module_from_path(path: Path) -> ModuleType:
    spec = importlib.util.spec_from_file_location(f"bisched_external_{path.stem}", path)
    if spec is None or spec.loader is None:
        raise RuntimeError(f"Не удалось загрузить модуль: {path}")
    module = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(module)
    return module


def load_external_solvers(registry: SolverRegistry, solvers_dir: Path) -> list[str]:
    """Register solvers from `*.py` files exporting `get_solver()`; broken files are skipped."""
    loaded: list[str] = []
    if not solvers_dir.exists():
        return loaded

    for file in sorted(solvers_dir.glob("*.py")):
        try:
            module = _load_module_from_path(file)
            factory: Any = getattr(module, "get_solver", None)
            if callable(factory):
                solver = factory()
                registry.register(solver)
                loaded.append(solver.solver_id)
                logger.info("Загружен внешний решатель: %s", file.name)
            else:
                logger.warning("Пропуск внешнего модуля без get_solver(): %s", file.name)
        except Exception:
            logger.exception("Ошибка загрузки внешнего решателя: %s", file)
    return loaded
