"""Witness index files that accompany generated reduction instances."""

from __future__ import annotations

import json
from dataclasses import asdict
from typing import Any

from bisched.reductions.maxcut import MaxCutReduction
from bisched.reductions.sat import SatReduction


def maxcut_index_to_dict(reduction: MaxCutReduction) -> dict[str, Any]:
    index = reduction.index
    return {
        "kind": "maxcut",
        "params": asdict(reduction.params),
        "vertices": list(index.vertices),
        "edges": [list(edge) for edge in index.edges],
        "rows": [list(row) for row in index.rows],
        "gadgets": [
            {
                "kind": record.kind.value,
                "row": record.row,
                "slot": record.slot,
                "vertices": list(record.vertices),
                "segments": [record.first_segment, record.last_segment],
                "window": list(record.window),
                "jobs": list(record.jobs),
                "blockers": list(record.blockers),
            }
            for record in index.records
        ],
    }


def sat_index_to_dict(reduction: SatReduction) -> dict[str, Any]:
    index = reduction.index
    return {
        "kind": "sat",
        "variables": index.formula.variables,
        "clauses": [list(clause) for clause in index.formula.clauses],
        "boundaries": list(index.boundaries),
        "targets": {"makespan": index.makespan_target, "waiting": index.waiting_target},
        "variable_jobs": {str(number): asdict(jobs) for number, jobs in index.variables.items()},
        "clause_blocking": index.clause_blocking,
        "clause_dummies": [list(pair) for pair in index.clause_dummies],
        "storage_blocking": index.storage_blocking,
        "tail_range": [index.tail[0], index.tail[-1]] if index.tail else [],
    }


def serialize_index(payload: dict[str, Any]) -> str:
    return json.dumps(payload, ensure_ascii=False, indent=2, sort_keys=True)
