from __future__ import annotations

import logging
from collections.abc import Mapping
from dataclasses import dataclass, field
from fractions import Fraction

import networkx as nx

from bisched.core.errors import (
    AmbiguousState,
    EmptyGraph,
    InvalidPartition,
    PreconditionViolated,
)
from bisched.core.model import Direction, Instance, Schedule
from bisched.reductions.gadgets import (
    BLOCK_WIDTH,
    GadgetBuilder,
    GadgetKind,
    GadgetRecord,
    closed_slots,
    traverse,
    vertex_start,
)

logger = logging.getLogger(__name__)

SIDE_LEFT = 1
SIDE_RIGHT = 2


@dataclass(frozen=True, slots=True)
class GadgetParams:
    x: int
    y: int
    z: int
    target_waiting: int
    cut_target: int
    vertex_gadgets: int
    copy_gadgets: int
    transposition_gadgets: int
    edges: int
    # False для уменьшенных кратностей: годится для проверки лемм, но не для сведения
    reduction_sound: bool = True

    def closed_form(self, cut: int) -> int:
        """Waiting of the consistent schedule that cuts `cut` edges."""
        return (
            12 * self.vertex_gadgets * self.y
            + 3 * self.copy_gadgets * self.z
            + 10 * self.transposition_gadgets * self.z
            + 5 * self.edges
            - 2 * cut
        )


@dataclass(frozen=True, slots=True)
class BlockPlan:
    kind: GadgetKind
    slot: int
    edge: tuple[int, int] | None = None


@dataclass(slots=True)
class GadgetIndex:
    vertices: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]
    # rows[ℓ][t]: вершина в слоте t на вершинном участке 9ℓ+1
    rows: list[tuple[int, ...]]
    blocks: list[BlockPlan]
    records: list[GadgetRecord] = field(default_factory=list)

    @staticmethod
    def vertex_segment(row: int) -> int:
        return BLOCK_WIDTH * row + 1

    def vertex_gadgets(self, row: int | None = None) -> list[GadgetRecord]:
        return [
            record
            for record in self.records
            if record.kind is GadgetKind.VERTEX and (row is None or record.row == row)
        ]

    def count(self, kind: GadgetKind) -> int:
        return sum(1 for record in self.records if record.kind is kind)


@dataclass(slots=True)
class MaxCutReduction:
    instance: Instance
    params: GadgetParams
    index: GadgetIndex


def plan_blocks(
    vertices: tuple[int, ...], edges: tuple[tuple[int, int], ...]
) -> tuple[list[tuple[int, ...]], list[BlockPlan]]:
    """Per edge: adjacent swaps bring its ends to slots 0 and 1, then one edge block."""
    perm = list(vertices)
    rows = [tuple(perm)]
    blocks: list[BlockPlan] = []

    def swap(slot: int) -> None:
        perm[slot], perm[slot + 1] = perm[slot + 1], perm[slot]
        blocks.append(BlockPlan(GadgetKind.TRANSPOSITION, slot))
        rows.append(tuple(perm))

    for u, v in edges:
        while perm.index(u) > 0:
            swap(perm.index(u) - 1)
        while perm.index(v) > 1:
            swap(perm.index(v) - 1)
        blocks.append(BlockPlan(GadgetKind.EDGE, 0, (u, v)))
        rows.append(tuple(perm))
    return rows, blocks


def _derive_params(
    n: int, m: int, blocks: list[BlockPlan], rows: int, k: int, lemma_scale: bool
) -> GadgetParams:
    swaps = sum(1 for plan in blocks if plan.kind is GadgetKind.TRANSPOSITION)
    copies = sum(n - 2 if plan.kind is GadgetKind.TRANSPOSITION else n for plan in blocks)
    z = 1 if lemma_scale else 5 * m
    y = 1 if lemma_scale else 18 * n * n * m * z
    params = GadgetParams(
        x=0,
        y=y,
        z=z,
        target_waiting=0,
        cut_target=k,
        vertex_gadgets=n * rows,
        copy_gadgets=copies,
        transposition_gadgets=swaps,
        edges=m,
        reduction_sound=not lemma_scale,
    )
    target = params.closed_form(k)
    return GadgetParams(
        x=target + 1,
        y=y,
        z=z,
        target_waiting=target,
        cut_target=k,
        vertex_gadgets=params.vertex_gadgets,
        copy_gadgets=copies,
        transposition_gadgets=swaps,
        edges=m,
        reduction_sound=not lemma_scale,
    )


def gen_maxcut(graph: nx.Graph, k: int, *, lemma_scale: bool = False) -> MaxCutReduction:
    if graph.number_of_edges() == 0:
        raise EmptyGraph("Граф без рёбер: сводить нечего.")
    if nx.number_of_selfloops(graph) > 0:
        raise PreconditionViolated("Граф должен быть простым (без петель).")
    m = graph.number_of_edges()
    if not 1 <= k <= m:
        raise PreconditionViolated(f"Целевой размер разреза k должен быть в диапазоне 1..{m}.")

    vertices = tuple(sorted(graph.nodes))
    edges = tuple(sorted((min(u, v), max(u, v)) for u, v in graph.edges))
    rows, blocks = plan_blocks(vertices, edges)
    params = _derive_params(len(vertices), m, blocks, len(rows), k, lemma_scale)

    builder = GadgetBuilder()
    for row, perm in enumerate(rows):
        segment = GadgetIndex.vertex_segment(row)
        for slot, vertex in enumerate(perm):
            builder.vertex(row, segment, slot, vertex, params.y)
    for row, plan in enumerate(blocks):
        a = GadgetIndex.vertex_segment(row)
        perm = rows[row]
        skip: set[int] = set()
        if plan.kind is GadgetKind.TRANSPOSITION:
            skip = {plan.slot, plan.slot + 1}
            builder.transposition(
                row, a, plan.slot, (perm[plan.slot], perm[plan.slot + 1]), params.z, params.x
            )
        for slot, vertex in enumerate(perm):
            if slot not in skip:
                builder.copy(row, a, slot, vertex, params.z, params.x)
        if plan.kind is GadgetKind.EDGE:
            assert plan.edge is not None
            builder.edge(row, a, plan.edge, params.x)

    instance = builder.instance(BLOCK_WIDTH * len(blocks) + 1)
    index = GadgetIndex(vertices, edges, rows, blocks, list(builder.records))
    logger.info(
        "MaxCut: n=%d, m=%d, участков %d, записей работ %d, W=%d",
        len(vertices),
        m,
        instance.m,
        instance.n,
        params.target_waiting,
    )
    return MaxCutReduction(instance, params, index)


def _check_partition(index: GadgetIndex, partition: Mapping[int, int]) -> None:
    missing = [v for v in index.vertices if v not in partition]
    if missing:
        raise InvalidPartition(f"Разбиение не задаёт сторону для вершин {missing}.")
    wrong = {v: side for v, side in partition.items() if side not in (SIDE_LEFT, SIDE_RIGHT)}
    if wrong:
        raise InvalidPartition(f"Сторона вершины должна быть 1 или 2: {wrong}.")
    extra = sorted(set(partition) - set(index.vertices))
    if extra:
        raise InvalidPartition(f"Разбиение содержит неизвестные вершины {extra}.")


def _state(side: int) -> Direction:
    return Direction.LEFTBOUND if side == SIDE_LEFT else Direction.RIGHTBOUND


def encode_maxcut(reduction: MaxCutReduction, partition: Mapping[int, int]) -> Schedule:
    """Consistent schedule: every vertex gadget of v in the state of v's side."""
    index = reduction.index
    instance = reduction.instance
    _check_partition(index, partition)

    pinned: dict[int, int] = {}
    free: list[int] = []
    for record in index.records:
        if record.kind is GadgetKind.VERTEX:
            state = _state(partition[record.vertices[0]])
            for job_id in record.jobs:
                pinned[job_id] = vertex_start(state, instance.job(job_id), record.slot)
        else:
            for job_id in record.blockers:
                pinned[job_id] = int(instance.job(job_id).release)
            free.extend(record.jobs)

    closed = {d: set(slots) for d, slots in closed_slots(instance, pinned).items()}
    starts: dict[tuple[int, int], Fraction] = {}
    for job_id, start in pinned.items():
        segment = instance.job(job_id).start_seg
        starts[(job_id, segment)] = Fraction(start)
    for job_id in free:
        job = instance.job(job_id)
        trajectory = traverse(job, closed)
        # уже проложенная свободная работа закрывает свои слоты для встречных
        closed[job.direction.opposite].update(trajectory.items())
        for segment, start in trajectory.items():
            starts[(job_id, segment)] = Fraction(start)
    return Schedule(starts)


def decode_maxcut(reduction: MaxCutReduction, schedule: Schedule) -> dict[int, int]:
    """Side of every vertex read off its gadget on the first vertex segment."""
    instance = reduction.instance
    partition: dict[int, int] = {}
    for record in reduction.index.vertex_gadgets(row=0):
        segment = record.first_segment
        sides = [
            side
            for side in (SIDE_LEFT, SIDE_RIGHT)
            if all(
                schedule.start(job_id, segment)
                == vertex_start(_state(side), instance.job(job_id), record.slot)
                for job_id in record.jobs
            )
        ]
        if len(sides) != 1:
            raise AmbiguousState(
                f"Вершинный гаджет вершины {record.vertices[0]} (слот {record.slot}) "
                "спланирован несогласованно."
            )
        partition[record.vertices[0]] = sides[0]
    return partition


def cut_size(edges: tuple[tuple[int, int], ...], partition: Mapping[int, int]) -> int:
    return sum(1 for u, v in edges if partition[u] != partition[v])


def max_cut(graph: nx.Graph) -> int:
    """Brute force over all 2-colourings; for small verification graphs only."""
    vertices = sorted(graph.nodes)
    edges = tuple((u, v) for u, v in graph.edges)
    best = 0
    for mask in range(1 << max(len(vertices) - 1, 0)):
        partition = {
            v: SIDE_RIGHT if pos > 0 and mask >> (pos - 1) & 1 else SIDE_LEFT
            for pos, v in enumerate(vertices)
        }
        best = max(best, cut_size(edges, partition))
    return best
