from __future__ import annotations


class AppError(Exception):
    """Исключение с безопасным пользовательским сообщением."""

    def __init__(self, user_message: str) -> None:
        super().__init__(user_message)
        self.user_message = user_message


class ConfigError(AppError):
    pass


class ParseError(AppError):
    def __init__(self, path: str, problem: str) -> None:
        super().__init__(f"Ошибка разбора ({path}): {problem}")
        self.path = path


class ValidationError(AppError):
    """Инстанс нарушает структурные инварианты; `problems` перечисляет все найденные."""

    def __init__(self, problems: list[str]) -> None:
        super().__init__("Некорректный инстанс: " + "; ".join(problems))
        self.problems = problems


class UnknownJob(AppError):
    def __init__(self, job_id: int) -> None:
        super().__init__(f"Работа {job_id} отсутствует в инстансе.")
        self.job_id = job_id


class MissingStartTime(AppError):
    def __init__(self, job_id: int, segment: int) -> None:
        super().__init__(f"Нет времени старта работы {job_id} на участке {segment}.")
        self.job_id = job_id
        self.segment = segment


class DomainMismatch(AppError):
    pass


class ProfileDomainMismatch(AppError):
    pass


class InfeasibleSchedule(AppError):
    pass


class PreconditionViolated(AppError):
    """Инстанс не подходит решателю (число участков, процессинг, число классов и т.д.)."""


class MultiSegment(PreconditionViolated):
    def __init__(self, segments: int) -> None:
        super().__init__(f"Требуется ровно один участок, в инстансе их {segments}.")


class InstanceTooLarge(PreconditionViolated):
    pass


class UnsupportedCompatibility(PreconditionViolated):
    pass


class CapacityExceeded(AppError):
    pass


class InconsistentState(AppError):
    pass


class StateCapExceeded(AppError):
    def __init__(self, cap: int, reached_time: object) -> None:
        super().__init__(
            f"Превышен лимит состояний DP ({cap}); последний обработанный момент {reached_time}. "
            "Увеличьте BISCHED_STATE_CAP или уменьшите инстанс."
        )
        self.cap = cap


class EmptyGraph(AppError):
    pass


class InvalidPartition(AppError):
    pass


class AmbiguousState(AppError):
    pass


class MalformedFormula(AppError):
    pass


class IncompleteAssignment(AppError):
    pass


class AmbiguousAssignment(AppError):
    pass


class BadProfile(AppError):
    pass
