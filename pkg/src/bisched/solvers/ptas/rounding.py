from __future__ import annotations

import logging
from collections import defaultdict
from dataclasses import dataclass, field, replace
from fractions import Fraction

from bisched.core.errors import MultiSegment, PreconditionViolated, UnsupportedCompatibility
from bisched.core.model import Direction, Instance
from bisched.solvers.ptas.certificate import RatioCertificate
from bisched.solvers.ptas.config import PtasConfig

logger = logging.getLogger(__name__)


def ceil_power(value: Fraction, base: Fraction) -> int:
    """Smallest integer x with base**x >= value (value > 0)."""
    x = 0
    if value > 1:
        while base**x < value:
            x += 1
    else:
        while base ** (x - 1) >= value:
            x -= 1
    return x


@dataclass(frozen=True, slots=True)
class RoundedJob:
    job_id: int
    direction: Direction
    release_exp: int
    # масштабированный и округлённый p (степень 1+ε или 0)
    proc: Fraction
    original_release: Fraction
    original_proc: Fraction


@dataclass(frozen=True, slots=True)
class RoundedInstance:
    config: PtasConfig
    original: Instance
    scale: Fraction
    tau: Fraction
    complete: bool
    jobs: tuple[RoundedJob, ...]
    ignored: tuple[int, ...]
    certificate: RatioCertificate = field(compare=False)

    def release(self, x: int) -> Fraction:
        return self.config.base**x

    def interval_length(self, x: int) -> Fraction:
        return self.config.epsilon * self.config.base**x

    def is_small(self, job: RoundedJob) -> bool:
        eps = self.config.epsilon
        return job.proc <= eps * eps / 4 * self.interval_length(job.release_exp)


@dataclass(frozen=True, slots=True)
class JobPack:
    pack_id: int
    direction: Direction
    release_exp: int
    # SPT-порядок внутри пакета
    members: tuple[int, ...]
    proc: Fraction


def _graph_kind(instance: Instance) -> bool:
    """True for complete bipartite compatibility, False for empty; anything else is rejected."""
    pairs = instance.compat.pairs(1)
    if not pairs:
        return False
    rights = [job.id for job in instance.jobs if job.direction is Direction.RIGHTBOUND]
    lefts = [job.id for job in instance.jobs if job.direction is Direction.LEFTBOUND]
    if len(pairs) == len(rights) * len(lefts):
        return True
    raise UnsupportedCompatibility(
        "PTAS поддерживает только пустой или полный двудольный граф совместимости."
    )


def normalize(instance: Instance, config: PtasConfig) -> RoundedInstance:
    if instance.m != 1:
        raise MultiSegment(instance.m)
    if instance.has_multiplicity():
        raise PreconditionViolated("PTAS не поддерживает кратности работ.")
    complete = _graph_kind(instance)
    base = config.base
    eps = config.epsilon
    tau = instance.transit(1)
    certificate = RatioCertificate(epsilon=eps)

    ignored = tuple(
        job.id for job in instance.jobs if job.release == 0 and job.proc == 0 and tau == 0
    )
    active = [job for job in instance.jobs if job.id not in ignored]

    procs: dict[int, Fraction] = {}
    lifted: dict[int, Fraction] = {}
    for job in active:
        proc = base ** ceil_power(job.proc, base) if job.proc > 0 else Fraction(0)
        if proc != job.proc:
            certificate.apply("processing rounded up", base)
        procs[job.id] = proc
        lifted[job.id] = max(job.release, eps * (proc + tau))
        if lifted[job.id] != job.release:
            certificate.apply("release lifted to ε(p+τ)", base)

    scale = Fraction(1)
    if lifted:
        smallest = min(lifted.values())
        while smallest * scale < 1:
            scale *= base

    jobs: list[RoundedJob] = []
    for job in active:
        scaled = lifted[job.id] * scale
        exponent = ceil_power(scaled, base)
        if base**exponent != scaled:
            certificate.apply("release rounded up", base)
        jobs.append(
            RoundedJob(
                job_id=job.id,
                direction=job.direction,
                release_exp=exponent,
                proc=procs[job.id] * scale,
                original_release=job.release,
                original_proc=job.proc,
            )
        )
    logger.debug(
        "Округление: масштаб %s, работ %d, игнорируется %d", scale, len(jobs), len(ignored)
    )
    return RoundedInstance(
        config=config,
        original=instance,
        scale=scale,
        tau=tau * scale,
        complete=complete,
        jobs=tuple(jobs),
        ignored=ignored,
        certificate=certificate,
    )


def pack_small_jobs(rounded: RoundedInstance) -> tuple[RoundedInstance, list[JobPack]]:
    """Defer overflow to the next interval, bound large releases, glue small jobs in SPT order."""
    config = rounded.config
    eps = config.epsilon
    buckets: dict[tuple[Direction, int], list[RoundedJob]] = defaultdict(list)
    for job in rounded.jobs:
        buckets[(job.direction, job.release_exp)].append(job)

    settled: list[RoundedJob] = []
    x = min((job.release_exp for job in rounded.jobs), default=0)
    while buckets:
        for direction in Direction:
            bucket = buckets.pop((direction, x), [])
            if not bucket:
                continue
            length = rounded.interval_length(x)
            small = sorted(
                (job for job in bucket if job.proc <= eps * eps / 4 * length),
                key=lambda job: (job.proc, job.job_id),
            )
            large = [job for job in bucket if job.proc > eps * eps / 4 * length]
            deferred: list[RoundedJob] = []

            total = Fraction(0)
            for job in small:
                if total + job.proc <= length:
                    total += job.proc
                    settled.append(job)
                else:
                    deferred.append(job)
            if deferred:
                rounded.certificate.apply("small overflow deferred", config.base)

            kinds: dict[Fraction, int] = defaultdict(int)
            for job in sorted(large, key=lambda job: job.job_id):
                if kinds[job.proc] < config.large_per_kind:
                    kinds[job.proc] += 1
                    settled.append(job)
                else:
                    deferred.append(job)
                    rounded.certificate.apply("large releases bounded", config.base)

            for job in deferred:
                buckets[(direction, x + 1)].append(replace(job, release_exp=x + 1))
        x += 1

    updated = replace(rounded, jobs=tuple(sorted(settled, key=lambda job: job.job_id)))
    packs = _glue(updated)
    logger.debug("Пакетов мелких работ: %d", len(packs))
    return updated, packs


def _glue(rounded: RoundedInstance) -> list[JobPack]:
    eps = rounded.config.epsilon
    groups: dict[tuple[Direction, int], list[RoundedJob]] = defaultdict(list)
    for job in rounded.jobs:
        if rounded.is_small(job):
            groups[(job.direction, job.release_exp)].append(job)

    packs: list[JobPack] = []
    for (direction, x) in sorted(groups, key=lambda key: (key[1], key[0].value)):
        members = sorted(groups[(direction, x)], key=lambda job: (job.proc, job.job_id))
        floor = eps * eps / 8 * rounded.interval_length(x)
        glued: list[list[RoundedJob]] = []
        current: list[RoundedJob] = []
        singles: list[list[RoundedJob]] = []
        for job in members:
            if job.proc >= floor:
                singles.append([job])
                continue
            current.append(job)
            if sum((j.proc for j in current), Fraction(0)) >= floor:
                glued.append(current)
                current = []
        # неполный хвост идёт последним в своей группе
        ordered = glued + singles + ([current] if current else [])
        for run in ordered:
            packs.append(
                JobPack(
                    pack_id=len(packs),
                    direction=direction,
                    release_exp=x,
                    members=tuple(job.job_id for job in run),
                    proc=sum((job.proc for job in run), Fraction(0)),
                )
            )
    return packs
