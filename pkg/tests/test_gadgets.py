from __future__ import annotations

import pytest

from bisched.core.model import Direction
from bisched.reductions.gadgets import (
    SLOT,
    GadgetBuilder,
    GadgetKind,
    closed_slots,
    isolated_gadget,
    served_direction,
    traverse,
    verify_gadgets,
)


@pytest.mark.parametrize("kind", list(GadgetKind))
def test_gadget_bounds_hold(kind: GadgetKind) -> None:
    report = verify_gadgets(kind)
    assert report.holds, report


def test_reported_numbers() -> None:
    vertex = verify_gadgets(GadgetKind.VERTEX, y=2)
    assert vertex.consistent == 24
    assert vertex.inconsistent >= 26
    copy = verify_gadgets(GadgetKind.COPY)
    assert copy.consistent == 3
    assert copy.inconsistent >= 5
    edge = verify_gadgets(GadgetKind.EDGE)
    assert edge.consistent == 3
    assert edge.inconsistent >= 5


def test_vertex_gadget_alternates_directions() -> None:
    assert served_direction(Direction.LEFTBOUND, 0) is Direction.LEFTBOUND
    assert served_direction(Direction.LEFTBOUND, 1) is Direction.RIGHTBOUND
    builder = GadgetBuilder()
    record = builder.vertex(0, 1, 2, 7, 3)
    assert record.window == (2 * SLOT, 3 * SLOT)
    assert len(record.jobs) == 24
    assert all(builder.jobs[job_id - 1].multiplicity == 3 for job_id in record.jobs)


def test_copy_jobs_wait_for_blockers() -> None:
    builder, record = isolated_gadget(GadgetKind.COPY)
    instance = builder.instance(10)
    pinned = {job_id: int(instance.job(job_id).release) for job_id in record.blockers}
    closed = closed_slots(instance, pinned)
    first = instance.job(record.jobs[0])
    starts = traverse(first, closed)
    # без закреплённых вершинных работ задерживает только блокировка на участке 4
    assert starts[1] == 0
    assert starts[4] == 4
    assert starts[10] == 10
