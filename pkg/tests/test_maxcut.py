from __future__ import annotations

import itertools
from fractions import Fraction

import networkx as nx
import pytest

from bisched.core.errors import AmbiguousState, EmptyGraph, InvalidPartition, PreconditionViolated
from bisched.core.objectives import objectives
from bisched.core.validation import validate_schedule
from bisched.reductions.gadgets import BLOCK_WIDTH, GadgetKind
from bisched.reductions.maxcut import (
    SIDE_LEFT,
    SIDE_RIGHT,
    cut_size,
    decode_maxcut,
    encode_maxcut,
    gen_maxcut,
    max_cut,
    plan_blocks,
)


def _partitions(vertices: list[int]) -> list[dict[int, int]]:
    return [
        dict(zip(vertices, sides))
        for sides in itertools.product((SIDE_LEFT, SIDE_RIGHT), repeat=len(vertices))
    ]


def test_plan_brings_edge_ends_to_the_front() -> None:
    rows, blocks = plan_blocks((0, 1, 2), ((0, 1), (0, 2), (1, 2)))
    assert len(rows) == len(blocks) + 1
    edge_rows = [rows[i] for i, plan in enumerate(blocks) if plan.kind is GadgetKind.EDGE]
    for row, (u, v) in zip(edge_rows, [(0, 1), (0, 2), (1, 2)]):
        assert row[:2] == (u, v)


def test_triangle_waiting_follows_cut_size() -> None:
    graph = nx.complete_graph(3)
    reduction = gen_maxcut(graph, 2, lemma_scale=True)
    params = reduction.params
    assert not params.reduction_sound
    assert params.edges == 3
    assert params.vertex_gadgets == 3 * len(reduction.index.rows)
    assert reduction.instance.m == BLOCK_WIDTH * len(reduction.index.blocks) + 1
    for partition in _partitions([0, 1, 2]):
        schedule = encode_maxcut(reduction, partition)
        assert validate_schedule(reduction.instance, schedule) == []
        waiting = objectives(reduction.instance, schedule).total_waiting
        cut = cut_size(reduction.index.edges, partition)
        assert waiting == params.closed_form(cut)
        assert decode_maxcut(reduction, schedule) == partition


def _small_graphs() -> list[nx.Graph]:
    graphs: list[nx.Graph] = []
    for n in (2, 3, 4):
        pairs = list(itertools.combinations(range(n), 2))
        for size in range(1, len(pairs) + 1):
            for chosen in itertools.combinations(pairs, size):
                graph = nx.Graph(chosen)
                graph.add_nodes_from(range(n))
                if not any(nx.is_isomorphic(graph, seen) for seen in graphs):
                    graphs.append(graph)
    return graphs


def test_closed_form_on_every_small_graph_and_partition() -> None:
    graphs = _small_graphs()
    assert len(graphs) == 1 + 3 + 10
    for graph in graphs:
        reduction = gen_maxcut(graph, 1, lemma_scale=True)
        params = reduction.params
        for partition in _partitions(sorted(graph.nodes)):
            schedule = encode_maxcut(reduction, partition)
            assert validate_schedule(reduction.instance, schedule) == []
            cut = cut_size(reduction.index.edges, partition)
            waiting = objectives(reduction.instance, schedule).total_waiting
            assert waiting == params.closed_form(cut)
            assert decode_maxcut(reduction, schedule) == partition


def test_target_meets_the_best_cut() -> None:
    graph = nx.complete_graph(3)
    best = max_cut(graph)
    assert best == 2
    reduction = gen_maxcut(graph, best, lemma_scale=True)
    assert reduction.params.target_waiting == reduction.params.closed_form(best)
    assert reduction.params.x == reduction.params.target_waiting + 1
    cuts = [cut_size(reduction.index.edges, p) for p in _partitions([0, 1, 2])]
    assert max(cuts) == best


def test_single_edge_with_full_multiplicities() -> None:
    graph = nx.Graph([(0, 1)])
    reduction = gen_maxcut(graph, 1)
    params = reduction.params
    assert params.reduction_sound
    assert params.z == 5
    assert params.y == 18 * 4 * 1 * params.z
    assert params.target_waiting == params.closed_form(1)
    split = {0: SIDE_LEFT, 1: SIDE_RIGHT}
    schedule = encode_maxcut(reduction, split)
    assert validate_schedule(reduction.instance, schedule) == []
    assert objectives(reduction.instance, schedule).total_waiting == params.target_waiting
    together = encode_maxcut(reduction, {0: SIDE_LEFT, 1: SIDE_LEFT})
    waiting = objectives(reduction.instance, together).total_waiting
    assert waiting == params.target_waiting + 2


def test_rejected_inputs() -> None:
    with pytest.raises(EmptyGraph):
        gen_maxcut(nx.empty_graph(3), 1)
    with pytest.raises(PreconditionViolated):
        gen_maxcut(nx.Graph([(0, 1)]), 2)
    looped = nx.Graph([(0, 1), (1, 1)])
    with pytest.raises(PreconditionViolated):
        gen_maxcut(looped, 1)


def test_invalid_partitions() -> None:
    reduction = gen_maxcut(nx.Graph([(0, 1)]), 1, lemma_scale=True)
    with pytest.raises(InvalidPartition):
        encode_maxcut(reduction, {0: SIDE_LEFT})
    with pytest.raises(InvalidPartition):
        encode_maxcut(reduction, {0: SIDE_LEFT, 1: 3})
    with pytest.raises(InvalidPartition):
        encode_maxcut(reduction, {0: SIDE_LEFT, 1: SIDE_RIGHT, 5: SIDE_LEFT})


def test_inconsistent_vertex_gadget_is_ambiguous() -> None:
    reduction = gen_maxcut(nx.Graph([(0, 1)]), 1, lemma_scale=True)
    schedule = encode_maxcut(reduction, {0: SIDE_LEFT, 1: SIDE_RIGHT})
    record = reduction.index.vertex_gadgets(row=0)[0]
    job_id = record.jobs[0]
    broken = schedule.shifted(job_id, record.first_segment, Fraction(5))
    with pytest.raises(AmbiguousState):
        decode_maxcut(reduction, broken)
