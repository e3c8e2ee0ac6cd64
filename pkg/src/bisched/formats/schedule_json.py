from __future__ import annotations

from fractions import Fraction
from typing import Any

from bisched.core.errors import ParseError
from bisched.core.model import Schedule
from bisched.core.objectives import Objective, ObjectiveReport
from bisched.core.rational import format_time, parse_time
from bisched.formats.instance_json import dumps_canonical, loads_object, require
from bisched.solvers.base import SolveResult


def schedule_to_dict(schedule: Schedule) -> dict[str, Any]:
    starts: dict[str, dict[str, int | str]] = {}
    for (job_id, segment), value in sorted(schedule.starts.items()):
        starts.setdefault(str(job_id), {})[str(segment)] = format_time(value)
    return {"starts": starts}


def serialize_schedule(schedule: Schedule) -> str:
    return dumps_canonical(schedule_to_dict(schedule))


def _parse_key(raw: str, path: str) -> int:
    try:
        return int(raw)
    except ValueError as exc:
        raise ParseError(path, f"ключ '{raw}' должен быть целым числом") from exc


def parse_schedule(text: str) -> Schedule:
    payload = loads_object(text, "расписание")
    raw_starts = require(payload, "starts", "$")
    if not isinstance(raw_starts, dict):
        raise ParseError("$.starts", "ожидался объект job → {segment → time}")
    starts: dict[tuple[int, int], Fraction] = {}
    for job_key, per_segment in raw_starts.items():
        path = f"$.starts.{job_key}"
        job_id = _parse_key(job_key, path)
        if not isinstance(per_segment, dict):
            raise ParseError(path, "ожидался объект segment → time")
        for segment_key, raw_time in per_segment.items():
            segment = _parse_key(segment_key, f"{path}.{segment_key}")
            starts[(job_id, segment)] = parse_time(raw_time, f"{path}.{segment_key}")
    return Schedule(starts)


def report_to_dict(report: ObjectiveReport, objective: Objective) -> dict[str, Any]:
    return {
        "objective": objective.value,
        "value": format_time(report.value(objective)),
        "total_completion": format_time(report.total_completion),
        "total_waiting": format_time(report.total_waiting),
        "makespan": format_time(report.makespan),
        "per_job_completion": {
            str(job_id): format_time(value)
            for job_id, value in sorted(report.per_job_completion.items())
        },
    }


def result_to_dict(
    solver_id: str, result: SolveResult, report: ObjectiveReport
) -> dict[str, Any]:
    payload = report_to_dict(report, result.objective)
    payload["solver"] = solver_id
    payload["stats"] = dict(sorted(result.stats.items()))
    certificate = result.certificate
    if certificate is not None:
        payload["certificate"] = {
            "epsilon": format_time(certificate.epsilon),
            "factors": [[name, format_time(factor)] for name, factor in certificate.factors],
            "stretch": format_time(certificate.stretch),
            "lower_bound": format_time(certificate.lower_bound),
            "safety_net_relaxed": certificate.safety_net_relaxed,
        }
    return payload
