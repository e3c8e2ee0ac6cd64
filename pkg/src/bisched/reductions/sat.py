"""≤3-SAT-3 → one-segment scheduling with compatibilities (p = τ = 1).

Parts on the time axis: assignment [0, A2), selection [A2, A3), clauses [A3, A4),
storage [A4, A5) and the optional tail after A5. A frame of blocking and dummy jobs must start at
release to reach makespan A5 + 1; the gaps left by the frame take the variable jobs.
"""

from __future__ import annotations

import logging
from collections import Counter
from collections.abc import Mapping
from dataclasses import dataclass, field
from fractions import Fraction

from bisched.core.errors import AmbiguousAssignment, IncompleteAssignment, MalformedFormula
from bisched.core.model import CompatibilityGraph, Direction, Instance, Job, Schedule, Segment

logger = logging.getLogger(__name__)

R = Direction.RIGHTBOUND
L = Direction.LEFTBOUND


@dataclass(frozen=True, slots=True)
class Formula:
    """CNF over variables 1..variables; literals are signed variable numbers."""

    variables: int
    clauses: tuple[tuple[int, ...], ...]

    def satisfied_by(self, assignment: Mapping[int, bool]) -> bool:
        return all(self.clause_satisfied(clause, assignment) for clause in self.clauses)

    @staticmethod
    def clause_satisfied(clause: tuple[int, ...], assignment: Mapping[int, bool]) -> bool:
        return any(bool(assignment[abs(literal)]) == (literal > 0) for literal in clause)


def check_formula(formula: Formula) -> None:
    if formula.variables < 1:
        raise MalformedFormula("Формула должна содержать хотя бы одну переменную.")
    occurrences: Counter[int] = Counter()
    literals: Counter[int] = Counter()
    for number, clause in enumerate(formula.clauses):
        if len(clause) != 3:
            raise MalformedFormula(
                f"Клауза {number}: ожидалось 3 литерала, получено {len(clause)}."
            )
        if any(literal == 0 or abs(literal) > formula.variables for literal in clause):
            raise MalformedFormula(
                f"Клауза {number}: литерал вне диапазона 1..{formula.variables}."
            )
        if len({abs(literal) for literal in clause}) != 3:
            raise MalformedFormula(f"Клауза {number}: переменные внутри клаузы повторяются.")
        occurrences.update(abs(literal) for literal in clause)
        literals.update(clause)
    heavy = sorted(v for v, count in occurrences.items() if count > 3)
    if heavy:
        raise MalformedFormula(f"Переменные {heavy} встречаются больше трёх раз.")
    repeated = sorted(lit for lit, count in literals.items() if count > 2)
    if repeated:
        raise MalformedFormula(f"Литералы {repeated} встречаются больше двух раз.")


@dataclass(slots=True)
class VariableJobs:
    true_pair: tuple[int, int]
    false_pair: tuple[int, int]
    left_true: int
    left_false: int
    indefinite_true: int
    indefinite_false: int
    blocking_true: int
    blocking_false: int
    dummies: tuple[int, ...]
    # блок выбора: (b_{i,1}, b_{i,2}) и его фиктивные работы
    selection_blocking: tuple[int, int]
    selection_dummies: tuple[int, ...]


@dataclass(slots=True)
class SatIndex:
    formula: Formula
    boundaries: tuple[int, int, int, int, int]
    variables: dict[int, VariableJobs]
    clause_blocking: list[int]
    clause_dummies: list[tuple[int, int]]
    storage_blocking: list[int]
    tail: list[int] = field(default_factory=list)
    makespan_target: int = 0
    waiting_target: int | None = None

    @property
    def a2(self) -> int:
        return self.boundaries[1]

    @property
    def a3(self) -> int:
        return self.boundaries[2]

    @property
    def a4(self) -> int:
        return self.boundaries[3]

    @property
    def a5(self) -> int:
        return self.boundaries[4]


@dataclass(frozen=True, slots=True)
class CannotMeetTarget:
    clause: int

    @property
    def message(self) -> str:
        return f"Присваивание не выполняет клаузу {self.clause}: целевой makespan недостижим."


@dataclass(slots=True)
class SatReduction:
    instance: Instance
    index: SatIndex


def boundaries(variables: int, clauses: int) -> tuple[int, int, int, int, int]:
    return (
        0,
        6 * variables,
        10 * variables,
        10 * variables + 2 * clauses,
        12 * variables + clauses,
    )


@dataclass(slots=True)
class _Builder:
    jobs: list[Job] = field(default_factory=list)
    pairs: set[tuple[int, int]] = field(default_factory=set)
    dummies: list[int] = field(default_factory=list)

    def add(self, direction: Direction, release: int, *, dummy: bool = False) -> int:
        job_id = len(self.jobs) + 1
        self.jobs.append(Job(job_id, direction, Fraction(release), Fraction(1), 1, 1))
        if dummy:
            self.dummies.append(job_id)
        return job_id

    def compatible(self, a: int, b: int) -> None:
        right, left = (a, b) if self.jobs[a - 1].direction is R else (b, a)
        self.pairs.add((right, left))

    def compatible_all(self, a: int, others: list[int]) -> None:
        for other in others:
            self.compatible(a, other)

    def apply_dummy_windows(self) -> None:
        # фиктивная работа совместима со встречными работами, выпущенными в [r-1, r+1]
        for dummy_id in self.dummies:
            dummy = self.jobs[dummy_id - 1]
            for job in self.jobs:
                if job.direction is not dummy.direction and abs(job.release - dummy.release) <= 1:
                    self.compatible(dummy_id, job.id)

    def instance(self) -> Instance:
        triples = ((1, right, left) for right, left in sorted(self.pairs))
        return Instance(
            (Segment(1, Fraction(1)),), tuple(self.jobs), CompatibilityGraph.from_pairs(triples)
        )


def gen_sat(formula: Formula, tail: bool = False) -> SatReduction:
    check_formula(formula)
    n_vars, n_clauses = formula.variables, len(formula.clauses)
    bounds = boundaries(n_vars, n_clauses)
    _, a2, a3, a4, a5 = bounds
    build = _Builder()

    variables: dict[int, VariableJobs] = {}
    for i in range(n_vars):
        base = 6 * i
        t1, t2 = build.add(R, base), build.add(R, base + 1)
        f1, f2 = build.add(R, base + 3), build.add(R, base + 4)
        dr_t = build.add(R, base + 2, dummy=True)
        dr_f = build.add(R, base + 5, dummy=True)
        b_t, b_f = build.add(L, base), build.add(L, base + 3)
        left_false, left_true = build.add(L, base + 1), build.add(L, base + 4)
        q_t, q_f = build.add(L, base + 1), build.add(L, base + 4)
        dl_t = build.add(L, base + 2, dummy=True)
        dl_f = build.add(L, base + 5, dummy=True)
        for left in (b_t, q_t):
            build.compatible_all(left, [t1, t2])
        for left in (b_f, q_f):
            build.compatible_all(left, [f1, f2])
        variables[i + 1] = VariableJobs(
            true_pair=(t1, t2),
            false_pair=(f1, f2),
            left_true=left_true,
            left_false=left_false,
            indefinite_true=q_t,
            indefinite_false=q_f,
            blocking_true=b_t,
            blocking_false=b_f,
            dummies=(dr_t, dr_f, dl_t, dl_f),
            selection_blocking=(0, 0),
            selection_dummies=(),
        )

    indefinite = [j for v in variables.values() for j in (v.indefinite_true, v.indefinite_false)]
    left_vars = [j for v in variables.values() for j in (v.left_true, v.left_false)]
    right_vars = [j for v in variables.values() for j in (*v.true_pair, *v.false_pair)]

    selection_blocking: list[int] = []
    for i in range(n_vars):
        base = a2 + 4 * i
        jobs = variables[i + 1]
        b1 = build.add(R, base)
        dr1 = build.add(R, base + 1, dummy=True)
        b2 = build.add(R, base + 2)
        dr2 = build.add(R, base + 3, dummy=True)
        dl1 = build.add(L, base + 1, dummy=True)
        dl2 = build.add(L, base + 3, dummy=True)
        build.compatible_all(b1, [jobs.indefinite_true, jobs.indefinite_false])
        build.compatible_all(b2, [jobs.left_true, jobs.left_false])
        for right_dummy in (dr1, dr2):
            build.compatible_all(right_dummy, indefinite + left_vars)
        build.compatible(dr1, dl1)
        build.compatible(dr2, dl2)
        selection_blocking += [b1, b2]
        jobs.selection_blocking = (b1, b2)
        jobs.selection_dummies = (dr1, dr2, dl1, dl2)
    for jobs in variables.values():
        build.compatible_all(jobs.selection_dummies[2], selection_blocking)
        build.compatible_all(jobs.selection_dummies[3], selection_blocking)

    clause_blocking: list[int] = []
    clause_dummies: list[tuple[int, int]] = []
    for k, clause in enumerate(formula.clauses):
        base = a3 + 2 * k
        blocker = build.add(L, base)
        dr = build.add(R, base + 1, dummy=True)
        dl = build.add(L, base + 1, dummy=True)
        for literal in clause:
            jobs = variables[abs(literal)]
            build.compatible_all(blocker, list(jobs.true_pair if literal > 0 else jobs.false_pair))
        build.compatible_all(dl, right_vars)
        clause_blocking.append(blocker)
        clause_dummies.append((dr, dl))

    storage_blocking: list[int] = []
    for i in range(2 * n_vars - n_clauses):
        blocker = build.add(L, a4 + i)
        build.compatible_all(blocker, right_vars)
        storage_blocking.append(blocker)

    # стыки частей: последняя фиктивная работа части бежит через границу и встречает первую
    # отложенную работу следующей части (q переменной 1 в A2, выбранную пару клаузы 0 в A3);
    # внутри частей те же пары дают правила dr ~ indefinite и dl клауз ~ right_vars
    first = variables[1]
    last = variables[n_vars]
    build.compatible_all(last.dummies[1], [first.indefinite_true, first.indefinite_false])
    build.compatible_all(last.selection_dummies[3], right_vars)
    build.apply_dummy_windows()

    core_jobs = len(build.jobs)
    makespan_target = a5 + 1
    waiting_target: int | None = None
    tail_ids: list[int] = []
    if tail:
        waiting_target = core_jobs * makespan_target
        tail_ids = [build.add(L, a5 + 1 + i) for i in range(waiting_target + 1)]

    index = SatIndex(
        formula=formula,
        boundaries=bounds,
        variables=variables,
        clause_blocking=clause_blocking,
        clause_dummies=clause_dummies,
        storage_blocking=storage_blocking,
        tail=tail_ids,
        makespan_target=makespan_target,
        waiting_target=waiting_target,
    )
    instance = build.instance()
    logger.info(
        "SAT: |X|=%d, |C|=%d, работ %d (хвост %d), makespan-цель %d",
        n_vars,
        n_clauses,
        instance.n,
        len(tail_ids),
        makespan_target,
    )
    return SatReduction(instance, index)


def _check_assignment(index: SatIndex, assignment: Mapping[int, bool]) -> None:
    missing = [v for v in index.variables if v not in assignment]
    if missing:
        raise IncompleteAssignment(f"Не заданы значения переменных {missing}.")


def encode_sat(
    reduction: SatReduction, assignment: Mapping[int, bool]
) -> Schedule | CannotMeetTarget:
    """Schedule meeting makespan A5 + 1, built from a satisfying assignment."""
    index = reduction.index
    _check_assignment(index, assignment)
    for k, clause in enumerate(index.formula.clauses):
        if not Formula.clause_satisfied(clause, assignment):
            return CannotMeetTarget(k)
    return frame_schedule(reduction, assignment)


def frame_schedule(reduction: SatReduction, assignment: Mapping[int, bool]) -> Schedule:
    """Frame at release, postponed pairs in the clause and storage slots.

    A clause slot takes a job of a true literal when there is one, otherwise any postponed job;
    such a slot then collides with the clause's blocking job.
    """
    index = reduction.index
    instance = reduction.instance
    _check_assignment(index, assignment)
    starts: dict[int, int] = {job.id: int(job.release) for job in instance.jobs}
    postponed_right: list[int] = []
    for number, jobs in index.variables.items():
        i = number - 1
        if bool(assignment[number]):
            postponed_right += jobs.true_pair
            late_q, late_left = jobs.indefinite_true, jobs.left_true
        else:
            postponed_right += jobs.false_pair
            late_q, late_left = jobs.indefinite_false, jobs.left_false
        base = index.a2 + 4 * i
        starts[late_q] = base
        starts[late_left] = base + 2

    unused = dict.fromkeys(postponed_right)
    unsatisfied: list[int] = []
    for k, clause in enumerate(index.formula.clauses):
        literal = next((lit for lit in clause if bool(assignment[abs(lit)]) == (lit > 0)), None)
        if literal is None:
            unsatisfied.append(k)
            continue
        jobs = index.variables[abs(literal)]
        pair = jobs.true_pair if literal > 0 else jobs.false_pair
        chosen = next(job_id for job_id in pair if job_id in unused)
        del unused[chosen]
        starts[chosen] = index.a3 + 2 * k
    for k in unsatisfied:
        chosen = next(iter(unused))
        del unused[chosen]
        starts[chosen] = index.a3 + 2 * k
    for i, job_id in enumerate(sorted(unused)):
        starts[job_id] = index.a4 + i

    return Schedule({(job_id, 1): Fraction(start) for job_id, start in starts.items()})


def decode_sat(reduction: SatReduction, schedule: Schedule) -> dict[int, bool]:
    """A variable is true when its rightbound true pair is held back past A2."""
    index = reduction.index
    assignment: dict[int, bool] = {}
    for number, jobs in index.variables.items():
        true_late = all(schedule.start(j, 1) >= index.a2 for j in jobs.true_pair)
        false_late = all(schedule.start(j, 1) >= index.a2 for j in jobs.false_pair)
        if true_late == false_late:
            raise AmbiguousAssignment(
                f"Переменная {number}: отложены {'обе пары' if true_late else 'ни одна пара'} "
                "правонаправленных работ."
            )
        assignment[number] = true_late
    return assignment
