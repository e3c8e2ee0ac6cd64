from __future__ import annotations

import json
from fractions import Fraction

import networkx as nx
import pytest

from bisched.core.errors import ParseError, ValidationError
from bisched.core.model import CompatibilityGraph, Direction, Instance, Job, Schedule, Segment
from bisched.formats.dimacs import parse_dimacs, write_dimacs
from bisched.formats.edgelist import parse_edgelist, write_edgelist
from bisched.formats.index_json import maxcut_index_to_dict, sat_index_to_dict, serialize_index
from bisched.formats.instance_json import (
    FORMAT_VERSION,
    instance_to_dict,
    parse_instance,
    serialize_instance,
)
from bisched.formats.schedule_json import parse_schedule, serialize_schedule
from bisched.reductions.maxcut import gen_maxcut
from bisched.reductions.sat import Formula, gen_sat

R = Direction.RIGHTBOUND
L = Direction.LEFTBOUND


def _instance() -> Instance:
    segments = (Segment(1, Fraction(3, 2)), Segment(2, Fraction(1)))
    jobs = (
        Job(1, R, Fraction(1, 2), 1, 1, 2),
        Job(2, L, 0, 0, 2, 1, multiplicity=3),
    )
    return Instance(segments, jobs, CompatibilityGraph.from_pairs([(2, 1, 2)]))


def test_instance_text_is_canonical() -> None:
    text = serialize_instance(_instance())
    payload = json.loads(text)
    assert payload["version"] == FORMAT_VERSION
    assert payload["segments"][0]["transit"] == "3/2"
    assert payload["jobs"][0]["release"] == "1/2"
    assert payload["jobs"][1]["multiplicity"] == 3
    assert "multiplicity" not in payload["jobs"][0]
    assert payload["compat"] == [{"segment": 2, "pairs": [[1, 2]]}]
    assert serialize_instance(parse_instance(text)) == text


def test_parsed_instance_keeps_semantics() -> None:
    parsed = parse_instance(serialize_instance(_instance()))
    assert parsed.transit(1) == Fraction(3, 2)
    assert parsed.job(2).multiplicity == 3
    assert parsed.compatible(2, parsed.job(1), parsed.job(2))
    assert not parsed.compatible(1, parsed.job(1), parsed.job(2))


def test_bad_instance_text() -> None:
    with pytest.raises(ParseError):
        parse_instance("[1, 2]")
    with pytest.raises(ParseError):
        parse_instance("{not json")
    payload = instance_to_dict(_instance())
    payload["jobs"][0]["dir"] = "X"
    with pytest.raises(ParseError) as info:
        parse_instance(json.dumps(payload))
    assert info.value.path == "$.jobs[0].dir"
    payload = instance_to_dict(_instance())
    payload["segments"][0]["transit"] = "6/4"
    with pytest.raises(ParseError):
        parse_instance(json.dumps(payload))
    payload = instance_to_dict(_instance())
    payload["version"] = "bisched/0"
    with pytest.raises(ParseError):
        parse_instance(json.dumps(payload))


def test_structurally_broken_instance() -> None:
    payload = instance_to_dict(_instance())
    payload["jobs"][0]["target"] = 5
    with pytest.raises(ValidationError):
        parse_instance(json.dumps(payload))


def test_schedule_text() -> None:
    schedule = Schedule({(1, 1): Fraction(1, 2), (1, 2): Fraction(2), (2, 1): Fraction(0)})
    text = serialize_schedule(schedule)
    assert json.loads(text) == {"starts": {"1": {"1": "1/2", "2": 2}, "2": {"1": 0}}}
    assert parse_schedule(text).starts == schedule.starts
    with pytest.raises(ParseError):
        parse_schedule('{"starts": {"a": {"1": 0}}}')
    with pytest.raises(ParseError):
        parse_schedule('{"starts": {"1": {"1": true}}}')


def test_dimacs() -> None:
    text = "c пример\np cnf 3 2\n1 -2 3 0\n-1 2 0\n"
    formula = parse_dimacs(text)
    assert formula == Formula(3, ((1, -2, 3), (-1, 2)))
    assert parse_dimacs(write_dimacs(formula)) == formula
    with pytest.raises(ParseError):
        parse_dimacs("1 2 0\n")
    with pytest.raises(ParseError):
        parse_dimacs("p cnf 3 2\n1 2 0\n")
    with pytest.raises(ParseError):
        parse_dimacs("p cnf 3 1\n1 x 0\n")


def test_edgelist() -> None:
    graph = parse_edgelist("# треугольник\n0 1\n1 2\n\n2 0  # замыкание\n")
    assert sorted(graph.edges) == sorted(nx.complete_graph(3).edges)
    assert write_edgelist(graph) == "0 1\n0 2\n1 2\n"
    with pytest.raises(ParseError) as info:
        parse_edgelist("0 1\n0 1 2\n")
    assert info.value.path == "строка 2"


def test_index_payloads() -> None:
    maxcut = gen_maxcut(nx.Graph([(0, 1)]), 1, lemma_scale=True)
    payload = json.loads(serialize_index(maxcut_index_to_dict(maxcut)))
    assert payload["kind"] == "maxcut"
    assert payload["params"]["target_waiting"] == maxcut.params.target_waiting
    assert len(payload["gadgets"]) == len(maxcut.index.records)
    sat = gen_sat(Formula(3, ((1, 2, 3),)))
    sat_payload = json.loads(serialize_index(sat_index_to_dict(sat)))
    assert sat_payload["boundaries"] == [0, 18, 30, 32, 37]
    assert sat_payload["targets"] == {"makespan": 38, "waiting": None}
    assert set(sat_payload["variable_jobs"]) == {"1", "2", "3"}
