from __future__ import annotations

import json
from json import JSONDecodeError
from typing import Any

from bisched.core.errors import ParseError
from bisched.core.model import CompatibilityGraph, Direction, Instance, Job, Segment
from bisched.core.rational import format_time, parse_time

FORMAT_VERSION = "bisched/1"


def dumps_canonical(payload: object) -> str:
    return json.dumps(payload, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def loads_object(text: str, what: str) -> dict[str, Any]:
    try:
        payload = json.loads(text)
    except JSONDecodeError as exc:
        raise ParseError(f"строка {exc.lineno}, столбец {exc.colno}", exc.msg) from exc
    if not isinstance(payload, dict):
        raise ParseError("$", f"{what}: ожидался JSON-объект")
    return payload


def require(container: dict[str, Any], key: str, path: str) -> Any:
    if key not in container:
        raise ParseError(f"{path}.{key}", "обязательное поле отсутствует")
    return container[key]


def require_int(container: dict[str, Any], key: str, path: str) -> int:
    value = require(container, key, path)
    if isinstance(value, bool) or not isinstance(value, int):
        raise ParseError(f"{path}.{key}", f"ожидалось целое число, получено {value!r}")
    return value


def require_list(container: dict[str, Any], key: str, path: str) -> list[Any]:
    value = require(container, key, path)
    if not isinstance(value, list):
        raise ParseError(f"{path}.{key}", "ожидался список")
    return value


def _require_dict(raw: object, path: str) -> dict[str, Any]:
    if not isinstance(raw, dict):
        raise ParseError(path, "ожидался объект")
    return raw


def instance_to_dict(instance: Instance) -> dict[str, Any]:
    jobs: list[dict[str, Any]] = []
    for job in instance.jobs:
        item: dict[str, Any] = {
            "id": job.id,
            "dir": job.direction.value,
            "release": format_time(job.release),
            "proc": format_time(job.proc),
            "start": job.start_seg,
            "target": job.target_seg,
        }
        if job.multiplicity > 1:
            item["multiplicity"] = job.multiplicity
        jobs.append(item)
    compat = [
        {"segment": segment, "pairs": [list(pair) for pair in sorted(pairs)]}
        for segment, pairs in sorted(instance.compat.edges.items())
        if pairs
    ]
    return {
        "version": FORMAT_VERSION,
        "segments": [{"transit": format_time(s.transit)} for s in instance.segments],
        "jobs": jobs,
        "compat": compat,
    }


def serialize_instance(instance: Instance) -> str:
    return dumps_canonical(instance_to_dict(instance))


def _parse_job(raw: object, path: str) -> Job:
    item = _require_dict(raw, path)
    direction_raw = require(item, "dir", path)
    try:
        direction = Direction(direction_raw)
    except ValueError as exc:
        raise ParseError(
            f"{path}.dir", f"ожидалось 'R' или 'L', получено {direction_raw!r}"
        ) from exc
    multiplicity = require_int(item, "multiplicity", path) if "multiplicity" in item else 1
    return Job(
        id=require_int(item, "id", path),
        direction=direction,
        release=parse_time(require(item, "release", path), f"{path}.release"),
        proc=parse_time(require(item, "proc", path), f"{path}.proc"),
        start_seg=require_int(item, "start", path),
        target_seg=require_int(item, "target", path),
        multiplicity=multiplicity,
    )


def instance_from_dict(payload: dict[str, Any]) -> Instance:
    version = payload.get("version", FORMAT_VERSION)
    if version != FORMAT_VERSION:
        raise ParseError("$.version", f"неподдерживаемая версия формата {version!r}")
    segments: list[Segment] = []
    for index, raw in enumerate(require_list(payload, "segments", "$")):
        path = f"$.segments[{index}]"
        transit = require(_require_dict(raw, path), "transit", path)
        segments.append(Segment(index + 1, parse_time(transit, f"{path}.transit")))
    jobs = tuple(
        _parse_job(raw, f"$.jobs[{index}]")
        for index, raw in enumerate(require_list(payload, "jobs", "$"))
    )
    triples: list[tuple[int, int, int]] = []
    for index, raw in enumerate(payload.get("compat", [])):
        path = f"$.compat[{index}]"
        entry = _require_dict(raw, path)
        segment = require_int(entry, "segment", path)
        for pos, pair in enumerate(require_list(entry, "pairs", path)):
            if (
                not isinstance(pair, list)
                or len(pair) != 2
                or not all(isinstance(v, int) and not isinstance(v, bool) for v in pair)
            ):
                raise ParseError(f"{path}.pairs[{pos}]", "ожидалась пара [right_id, left_id]")
            triples.append((segment, pair[0], pair[1]))
    # структурная проверка выполняется в конструкторе Instance (ValidationError)
    return Instance(tuple(segments), jobs, CompatibilityGraph.from_pairs(triples))


def parse_instance(text: str) -> Instance:
    return instance_from_dict(loads_object(text, "инстанс"))
