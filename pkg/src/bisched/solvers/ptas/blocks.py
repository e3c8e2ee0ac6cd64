from __future__ import annotations

import logging
import math
from collections.abc import Iterator, Sequence
from dataclasses import dataclass
from fractions import Fraction

from bisched.config.schema import PtasDefaults
from bisched.core.errors import CapacityExceeded, InconsistentState, PreconditionViolated
from bisched.core.model import Direction, Instance, Schedule
from bisched.core.objectives import Objective, objectives
from bisched.solvers.oracle import Infeasible, SequenceProfile, timing_from_profile
from bisched.solvers.ptas.certificate import RatioCertificate
from bisched.solvers.ptas.config import PtasConfig
from bisched.solvers.ptas.rounding import RoundedInstance, normalize, pack_small_jobs

logger = logging.getLogger(__name__)


@dataclass(frozen=True, slots=True)
class Unit:
    """A large job or a job pack, scheduled as one unsplittable piece."""

    unit_id: int
    direction: Direction
    release_exp: int
    proc: Fraction
    members: tuple[int, ...]
    member_procs: tuple[Fraction, ...]

    @property
    def weight(self) -> int:
        return len(self.members)

    @property
    def offset(self) -> Fraction:
        total = Fraction(0)
        prefix = Fraction(0)
        for proc in self.member_procs:
            prefix += proc
            total += prefix
        return total

    def class_key(self) -> tuple[object, ...]:
        return (self.release_exp, self.direction.value, self.proc, self.weight, self.offset)


@dataclass(frozen=True, slots=True, order=True)
class Frontier:
    f_left: Fraction
    f_right: Fraction

    def get(self, direction: Direction) -> Fraction:
        return self.f_left if direction is Direction.LEFTBOUND else self.f_right


@dataclass(frozen=True, slots=True)
class BlockDpKey:
    block: int
    frontier: Frontier
    # по классам взаимозаменяемых единиц: сколько уже запланировано
    scheduled: tuple[int, ...]


# (стоимость, предыдущий ключ, старты по классам, было ли округление фронтира)
_TableEntry = tuple[Fraction, BlockDpKey | None, tuple[tuple[int, Fraction], ...], bool]


@dataclass(frozen=True, slots=True)
class _Placement:
    counts: tuple[int, ...]
    starts: tuple[tuple[int, Fraction], ...]
    cost: Fraction
    bound_left: Fraction
    bound_right: Fraction


class PtasStructure:
    """Interval grid, block partition, frontier grid and unit classes of a rounded instance."""

    def __init__(self, rounded: RoundedInstance, units: Sequence[Unit]) -> None:
        self.rounded = rounded
        self.config = rounded.config
        self.units = list(units)
        keys = sorted({unit.class_key() for unit in self.units}, key=repr)
        keys.sort(key=lambda key: (key[0], key[1]))
        self.class_keys = keys
        self._class_index = {key: pos for pos, key in enumerate(keys)}
        self.class_units: list[list[Unit]] = [[] for _ in keys]
        for unit in sorted(self.units, key=lambda u: u.unit_id):
            self.class_units[self._class_index[unit.class_key()]].append(unit)
        self.class_sample = [members[0] for members in self.class_units]
        self.totals = tuple(len(members) for members in self.class_units)

        tau = rounded.tau
        if self.units:
            max_release = max(rounded.release(u.release_exp) for u in self.units)
            max_proc = max(u.proc for u in self.units)
            self.horizon = max_release + len(self.units) * (max_proc + tau)
        else:
            self.horizon = Fraction(1)
        last = 0
        while rounded.release(last) <= self.horizon:
            last += 1
        self.blocks = last // self.config.sigma + 1

    def class_of(self, unit: Unit) -> int:
        return self._class_index[unit.class_key()]

    def block_start(self, t: int) -> Fraction:
        return self.rounded.release(t * self.config.sigma)

    def block_end(self, t: int) -> Fraction:
        return self.rounded.release((t + 1) * self.config.sigma)

    def safety_deadline(self, release_exp: int) -> Fraction:
        return self.rounded.release(release_exp + self.config.sigma_safety + self.config.sigma)

    def snap(self, value: Fraction) -> Fraction:
        """Round up to the frontier grid (grid_per_interval equal steps inside each interval)."""
        if value <= 1:
            return Fraction(1)
        x = math.floor(math.log(value, float(self.config.base)))
        while self.rounded.release(x) > value:
            x -= 1
        while self.rounded.release(x + 1) <= value:
            x += 1
        start = self.rounded.release(x)
        step = self.rounded.interval_length(x) / self.config.grid_per_interval
        k = math.ceil((value - start) / step)
        return start + k * step

    def capacity(self) -> int:
        if self.config.block_capacity is not None:
            return self.config.block_capacity
        eps = self.config.epsilon
        large = self.config.large_kinds * self.config.large_per_kind
        per_interval = math.ceil(8 / (eps * eps)) + large
        derived = 2 * (self.config.sigma + 1) * per_interval
        return min(derived, len(self.units))

    def unit_cost(self, unit: Unit, start: Fraction) -> Fraction:
        return unit.weight * (start + self.rounded.tau) + unit.offset


def _enumerate_block(
    structure: PtasStructure,
    t: int,
    f_in: Frontier,
    available: tuple[int, ...],
    capacity: int,
    safety_net: bool,
) -> Iterator[_Placement]:
    """All canonical block schedules: units appended in non-decreasing start inside B_t."""
    tau = structure.rounded.tau
    complete = structure.rounded.complete
    begin = structure.block_start(t)
    end = structure.block_end(t)
    counts = [0] * len(available)
    starts: list[tuple[int, Fraction]] = []

    def walk(
        last: Fraction, bound_l: Fraction, bound_r: Fraction, cost: Fraction
    ) -> Iterator[_Placement]:
        yield _Placement(tuple(counts), tuple(starts), cost, bound_l, bound_r)
        if len(starts) >= capacity:
            return
        for c, limit in enumerate(available):
            if counts[c] >= limit:
                continue
            unit = structure.class_sample[c]
            release = structure.rounded.release(unit.release_exp)
            own = bound_l if unit.direction is Direction.LEFTBOUND else bound_r
            start = max(release, begin, last, own)
            if start >= end:
                continue
            if safety_net and start >= structure.safety_deadline(unit.release_exp):
                continue
            same_next = start + unit.proc
            opp_next = start if complete else start + unit.proc + tau
            if unit.direction is Direction.LEFTBOUND:
                new_l, new_r = max(bound_l, same_next), max(bound_r, opp_next)
            else:
                new_l, new_r = max(bound_l, opp_next), max(bound_r, same_next)
            counts[c] += 1
            starts.append((c, start))
            yield from walk(start, new_l, new_r, cost + structure.unit_cost(unit, start))
            starts.pop()
            counts[c] -= 1

    yield from walk(begin, f_in.f_left, f_in.f_right, Fraction(0))


def block_cost(
    structure: PtasStructure,
    t: int,
    f_in: Frontier,
    f_out: Frontier,
    v: Sequence[Unit],
) -> Fraction | Infeasible:
    """Minimum total completion of the units V started inside B_t between the two frontiers."""
    if len(v) > structure.capacity() and structure.config.block_capacity is not None:
        raise CapacityExceeded(
            f"В блок {t} не помещается {len(v)} единиц (ёмкость {structure.capacity()})."
        )
    wanted = [0] * len(structure.class_keys)
    for unit in v:
        wanted[structure.class_of(unit)] += 1
    target = tuple(wanted)
    best: Fraction | None = None
    for placement in _enumerate_block(
        structure, t, f_in, target, len(v), safety_net=False
    ):
        if placement.counts != target:
            continue
        if placement.bound_left > f_out.f_left or placement.bound_right > f_out.f_right:
            continue
        if best is None or placement.cost < best:
            best = placement.cost
    if best is None:
        return Infeasible(())
    return best


@dataclass(slots=True)
class PtasResult:
    schedule: Schedule
    value: Fraction
    certificate: RatioCertificate
    structure: PtasStructure
    # старты единиц в округлённой шкале
    unit_starts: dict[int, Fraction]


def build_units(rounded: RoundedInstance) -> list[Unit]:
    rounded, packs = pack_small_jobs(rounded)
    by_id = {job.job_id: job for job in rounded.jobs}
    packed = {member for pack in packs for member in pack.members}
    units: list[Unit] = []
    for pack in packs:
        units.append(
            Unit(
                unit_id=len(units),
                direction=pack.direction,
                release_exp=pack.release_exp,
                proc=pack.proc,
                members=pack.members,
                member_procs=tuple(by_id[m].proc for m in pack.members),
            )
        )
    for job in rounded.jobs:
        if job.job_id in packed:
            continue
        units.append(
            Unit(
                unit_id=len(units),
                direction=job.direction,
                release_exp=job.release_exp,
                proc=job.proc,
                members=(job.job_id,),
                member_procs=(job.proc,),
            )
        )
    return units


def _run_block_dp(
    structure: PtasStructure, safety_net: bool
) -> tuple[dict[int, Fraction], int, bool] | None:
    n_classes = len(structure.class_keys)
    totals = structure.totals
    capacity = structure.capacity()
    start_key = BlockDpKey(-1, Frontier(Fraction(1), Fraction(1)), tuple([0] * n_classes))
    table: dict[BlockDpKey, _TableEntry] = {start_key: (Fraction(0), None, (), False)}
    layer = [start_key]
    best_final: BlockDpKey | None = None
    states = 1

    for t in range(structure.blocks):
        end_exp = (t + 1) * structure.config.sigma
        next_layer: dict[BlockDpKey, None] = {}
        for key in layer:
            cost = table[key][0]
            if best_final is not None and cost >= table[best_final][0]:
                continue
            available = tuple(
                totals[c] - key.scheduled[c]
                if structure.class_sample[c].release_exp < end_exp
                else 0
                for c in range(n_classes)
            )
            for placement in _enumerate_block(
                structure, t, key.frontier, available, capacity, safety_net
            ):
                scheduled = tuple(a + b for a, b in zip(key.scheduled, placement.counts))
                if safety_net and _misses_deadline(structure, scheduled, t):
                    continue
                block_end = structure.block_end(t)
                snapped_l = max(structure.snap(placement.bound_left), block_end)
                snapped_r = max(structure.snap(placement.bound_right), block_end)
                rounded_up = (snapped_l > max(placement.bound_left, block_end)) or (
                    snapped_r > max(placement.bound_right, block_end)
                )
                nxt = BlockDpKey(t, Frontier(snapped_l, snapped_r), scheduled)
                total = cost + placement.cost
                known = table.get(nxt)
                if known is None or total < known[0]:
                    table[nxt] = (total, key, placement.starts, rounded_up)
                    next_layer[nxt] = None
        layer = list(next_layer)
        states += len(layer)
        for key in layer:
            if key.scheduled == totals and (
                best_final is None or table[key][0] < table[best_final][0]
            ):
                best_final = key
        if layer and all(key.scheduled == totals for key in layer):
            break

    if best_final is None:
        return None
    unit_starts: dict[int, Fraction] = {}
    used = [0] * n_classes
    chain: list[tuple[tuple[int, Fraction], ...]] = []
    snapped_any = False
    node: BlockDpKey | None = best_final
    while node is not None:
        _, parent, starts, rounded_up = table[node]
        chain.append(starts)
        snapped_any = snapped_any or rounded_up
        node = parent
    for starts in reversed(chain):
        for c, start in starts:
            unit = structure.class_units[c][used[c]]
            used[c] += 1
            unit_starts[unit.unit_id] = start
    return unit_starts, states, snapped_any


def _misses_deadline(structure: PtasStructure, scheduled: tuple[int, ...], t: int) -> bool:
    end = structure.block_end(t)
    for c, done in enumerate(scheduled):
        if done < structure.totals[c]:
            if structure.safety_deadline(structure.class_sample[c].release_exp) <= end:
                return True
    return False


def safety_net_respected(result: PtasResult) -> bool:
    structure = result.structure
    for unit in structure.units:
        start = result.unit_starts[unit.unit_id]
        if start >= structure.safety_deadline(unit.release_exp):
            return False
    return True


def solve_ptas(
    instance: Instance,
    epsilon: Fraction,
    objective: Objective = Objective.SUM_COMPLETION,
    defaults: PtasDefaults | None = None,
) -> PtasResult:
    if objective is Objective.MAKESPAN:
        raise PreconditionViolated("PTAS реализован для суммарного времени завершения (sumc/sumw).")
    defaults = defaults or PtasDefaults()
    config = PtasConfig.derive(
        epsilon, block_capacity=defaults.block_capacity, safety_net=defaults.safety_net
    )
    rounded = normalize(instance, config)
    units = build_units(rounded)
    structure = PtasStructure(rounded, units)
    certificate = rounded.certificate

    outcome = _run_block_dp(structure, safety_net=config.safety_net)
    if outcome is None and config.safety_net:
        logger.warning("Страховочное окно не выполнимо, повтор без него (ε=%s)", epsilon)
        certificate.safety_net_relaxed = True
        outcome = _run_block_dp(structure, safety_net=False)
    if outcome is None:
        raise InconsistentState("Блочная динамика PTAS не нашла полного расписания.")
    unit_starts, states, snapped = outcome
    if snapped:
        certificate.apply("frontier grid", config.base)

    schedule = _to_original(instance, rounded, structure, unit_starts)
    report = objectives(instance, schedule)
    certificate.value = report.value(objective)
    certificate.lower_bound = sum(
        (instance.unhindered_completion(job) for job in instance.jobs), Fraction(0)
    )
    if objective is Objective.SUM_WAITING:
        certificate.lower_bound = Fraction(0)
    certificate.blocks = structure.blocks
    certificate.states = states
    logger.info(
        "PTAS ε=%s: единиц %d, блоков %d, состояний %d, значение %s",
        epsilon,
        len(units),
        structure.blocks,
        states,
        certificate.value,
    )
    return PtasResult(schedule, certificate.value, certificate, structure, unit_starts)


def _to_original(
    instance: Instance,
    rounded: RoundedInstance,
    structure: PtasStructure,
    unit_starts: dict[int, Fraction],
) -> Schedule:
    """Unpack units SPT, map back to the original scale and re-time the induced order."""
    mapped: dict[int, Fraction] = {job_id: Fraction(0) for job_id in rounded.ignored}
    for unit in structure.units:
        at = unit_starts[unit.unit_id]
        for member, proc in zip(unit.members, unit.member_procs):
            mapped[member] = at / rounded.scale
            at += proc
    order = tuple(sorted(mapped, key=lambda job_id: (mapped[job_id], job_id)))
    timed = timing_from_profile(instance, SequenceProfile({1: order}))
    if isinstance(timed, Infeasible):
        raise InconsistentState("Порядок PTAS образует цикл предшествования.")
    return timed
