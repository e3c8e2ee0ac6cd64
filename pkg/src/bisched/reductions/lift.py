from __future__ import annotations

import logging
from dataclasses import replace
from fractions import Fraction

from bisched.core.errors import PreconditionViolated
from bisched.core.model import Instance, Segment

logger = logging.getLogger(__name__)


def lift_scale(instance: Instance) -> int:
    expanded = instance.expanded()
    return expanded.n * expanded.n * expanded.m


def lift_unit_processing(instance: Instance) -> Instance:
    """Turn a p = 0, τ = 1 instance into p = 1, τ = n²m with releases scaled by n²m.

    An optimum of W on the source maps to an optimum inside [Wτ, (W + 1)τ) on the result.
    """
    expanded = instance.expanded()
    if any(job.proc != 0 for job in expanded.jobs):
        raise PreconditionViolated("Подъём применим только к инстансам с p_j = 0.")
    if any(segment.transit != 1 for segment in expanded.segments):
        raise PreconditionViolated("Подъём применим только к инстансам с τ_i = 1.")

    scale = Fraction(lift_scale(instance))
    segments = tuple(Segment(segment.index, scale) for segment in expanded.segments)
    jobs = tuple(
        replace(job, release=job.release * scale, proc=Fraction(1)) for job in expanded.jobs
    )
    logger.info("Подъём: n=%d, m=%d, τ=%s", expanded.n, expanded.m, scale)
    return Instance(segments, jobs, expanded.compat)
