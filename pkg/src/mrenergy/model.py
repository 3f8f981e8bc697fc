"""Instances, schedules, feasibility checks and objective/energy accounting.

Processors are numbered ``1..m``. A task is addressed by ``(job_id, index)``
where ``index`` is its position in ``job.tasks``.
"""

from __future__ import annotations

import enum
import math
from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator

from .errors import ScheduleError, UndefinedEnergyError

TIME_TOL = 1e-9

TaskRef = tuple[int, int]


class Kind(str, enum.Enum):
    MAP = "map"
    REDUCE = "reduce"


@dataclass(frozen=True)
class Task:
    processor: int
    kind: Kind
    volume: float

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind(self.kind))

    @property
    def is_map(self) -> bool:
        return self.kind is Kind.MAP


@dataclass(frozen=True)
class Job:
    id: int
    weight: float
    release: float
    tasks: tuple[Task, ...]

    def __post_init__(self):
        object.__setattr__(self, "tasks", tuple(self.tasks))

    @property
    def maps(self) -> list[int]:
        return [k for k, t in enumerate(self.tasks) if t.kind is Kind.MAP]

    @property
    def reduces(self) -> list[int]:
        return [k for k, t in enumerate(self.tasks) if t.kind is Kind.REDUCE]

    @property
    def total_volume(self) -> float:
        return sum(t.volume for t in self.tasks)


@dataclass(frozen=True)
class Instance:
    """A set of MapReduce jobs on ``num_processors`` speed-scalable processors.

    ``strict`` enables the at-most-one-task-per-processor-per-job rule.
    """

    beta: float
    energy_budget: float
    num_processors: int
    jobs: tuple[Job, ...]
    strict: bool = True

    def __post_init__(self):
        object.__setattr__(self, "jobs", tuple(self.jobs))

    @cached_property
    def _by_id(self) -> dict[int, Job]:
        return {j.id: j for j in self.jobs}

    def job(self, job_id: int) -> Job:
        return self._by_id[job_id]

    def task(self, ref: TaskRef) -> Task:
        job_id, k = ref
        return self._by_id[job_id].tasks[k]

    def tasks(self) -> Iterator[tuple[TaskRef, Job, Task]]:
        """All tasks in (job id, processor) order."""
        for job in sorted(self.jobs, key=lambda j: j.id):
            for k in sorted(range(len(job.tasks)), key=lambda k: (job.tasks[k].processor, k)):
                yield (job.id, k), job, job.tasks[k]

    @property
    def n(self) -> int:
        return len(self.jobs)

    @property
    def num_tasks(self) -> int:
        return sum(len(j.tasks) for j in self.jobs)

    @property
    def v_min(self) -> float:
        """Smallest positive volume."""
        vols = [t.volume for _, _, t in self.tasks() if t.volume > 0]
        if not vols:
            raise ValueError("instance has no positive-volume task")
        return min(vols)

    @property
    def v_max(self) -> float:
        return max(t.volume for _, _, t in self.tasks())

    def precedence_pairs(self) -> list[tuple[TaskRef, TaskRef]]:
        """(Map, Reduce) pairs of the same job where both carry work."""
        pairs = []
        for job in sorted(self.jobs, key=lambda j: j.id):
            for a in job.maps:
                for b in job.reduces:
                    if job.tasks[a].volume > 0 and job.tasks[b].volume > 0:
                        pairs.append(((job.id, a), (job.id, b)))
        return pairs

    def with_budget(self, energy_budget: float) -> "Instance":
        return Instance(self.beta, energy_budget, self.num_processors, self.jobs, self.strict)


@dataclass(frozen=True)
class Violation:
    rule: str
    field: str
    detail: str = ""

    def __str__(self):
        return f"{self.rule} [{self.field}] {self.detail}".rstrip()


def validate_instance(inst: Instance) -> list[Violation]:
    out: list[Violation] = []
    if not inst.beta > 1:
        out.append(Violation("beta must exceed 1", "beta", f"beta={inst.beta}"))
    if not inst.energy_budget > 0:
        out.append(Violation("energy budget must be positive", "energy_budget"))
    if inst.num_processors < 1:
        out.append(Violation("need at least one processor", "num_processors"))
    seen = set()
    for job in inst.jobs:
        where = f"jobs[{job.id}]"
        if job.id in seen:
            out.append(Violation("duplicate job id", where))
        seen.add(job.id)
        if not job.weight > 0:
            out.append(Violation("weight must be positive", where + ".weight"))
        if not (job.release >= 0 and math.isfinite(job.release)):
            out.append(Violation("release must be nonnegative", where + ".release"))
        if not job.maps:
            out.append(Violation("job lacks Map task", where + ".tasks"))
        if not job.reduces:
            out.append(Violation("job lacks Reduce task", where + ".tasks"))
        procs = [t.processor for t in job.tasks]
        if inst.strict and len(set(procs)) != len(procs):
            out.append(Violation("multiple tasks per processor", where + ".tasks"))
        for k, t in enumerate(job.tasks):
            tw = f"{where}.tasks[{k}]"
            if not 1 <= t.processor <= inst.num_processors:
                out.append(Violation("processor out of range", tw + ".processor"))
            if not (math.isfinite(t.volume) and t.volume >= 0):
                out.append(Violation("volume must be finite and nonnegative", tw + ".volume"))
    return out


def task_energy(volume: float, duration: float, beta: float) -> float:
    """Energy ``v**beta / p**(beta-1)`` of running ``volume`` in ``duration``."""
    if volume == 0:
        return 0.0
    if duration <= 0:
        raise UndefinedEnergyError(f"volume {volume} with duration {duration}")
    return volume**beta / duration ** (beta - 1)


@dataclass(frozen=True)
class ScheduleEntry:
    job_id: int
    task_index: int
    processor: int
    start: float
    duration: float
    speed: float

    @property
    def ref(self) -> TaskRef:
        return (self.job_id, self.task_index)

    @property
    def completion(self) -> float:
        return self.start + self.duration


def make_entry(inst: Instance, ref: TaskRef, start: float, duration: float) -> ScheduleEntry:
    task = inst.task(ref)
    speed = task.volume / duration if task.volume > 0 else 0.0
    return ScheduleEntry(ref[0], ref[1], task.processor, start, duration, speed)


@dataclass(frozen=True)
class Schedule:
    entries: tuple[ScheduleEntry, ...] = field(default_factory=tuple)

    def __post_init__(self):
        ordered = sorted(self.entries, key=lambda e: (e.start, e.processor, e.job_id, e.task_index))
        object.__setattr__(self, "entries", tuple(ordered))

    def __len__(self):
        return len(self.entries)

    @cached_property
    def by_ref(self) -> dict[TaskRef, ScheduleEntry]:
        return {e.ref: e for e in self.entries}

    def completion(self, ref: TaskRef) -> float:
        return self.by_ref[ref].completion

    @property
    def makespan(self) -> float:
        return max((e.completion for e in self.entries), default=0.0)


def job_completions(inst: Instance, sched: Schedule) -> dict[int, float]:
    """Completion of each job: the latest completion among its Reduce tasks."""
    out = {}
    for job in inst.jobs:
        try:
            out[job.id] = max(sched.completion((job.id, k)) for k in job.reduces)
        except KeyError as exc:
            raise ScheduleError(f"schedule misses task {exc.args[0]}") from None
    return out


def objective(inst: Instance, sched: Schedule) -> float:
    comp = job_completions(inst, sched)
    return sum(job.weight * comp[job.id] for job in inst.jobs)


def energy(inst: Instance, sched: Schedule) -> float:
    return sum(
        task_energy(inst.task(e.ref).volume, e.duration, inst.beta) for e in sched.entries
    )


def validate_schedule(
    inst: Instance,
    sched: Schedule,
    budget: float | None = None,
    tol: float = TIME_TOL,
) -> list[Violation]:
    """Feasibility report for ``sched``.

    ``budget`` overrides ``inst.energy_budget`` (for augmented runs).
    Unknown task references raise :class:`ScheduleError`.
    """
    budget = inst.energy_budget if budget is None else budget
    out: list[Violation] = []
    counts: dict[TaskRef, int] = defaultdict(int)
    for e in sched.entries:
        try:
            task = inst.task(e.ref)
        except (KeyError, IndexError):
            raise ScheduleError(f"unknown task reference {e.ref}") from None
        counts[e.ref] += 1
        where = f"task{e.ref}"
        job = inst.job(e.job_id)
        if e.processor != task.processor:
            out.append(Violation("processor mismatch", where, f"{e.processor} != {task.processor}"))
        if e.start < job.release - tol:
            out.append(Violation("release", where, f"start {e.start} < release {job.release}"))
        if task.volume > 0:
            if not e.duration > 0:
                out.append(Violation("duration", where, "positive volume needs positive duration"))
            elif abs(e.speed * e.duration - task.volume) > tol * max(1.0, task.volume):
                out.append(Violation("speed", where, "speed * duration != volume"))
        elif abs(e.duration) > tol:
            out.append(Violation("duration", where, "zero-volume task must take no time"))
    for ref, _, _ in inst.tasks():
        c = counts.get(ref, 0)
        if c == 0:
            out.append(Violation("missing task", f"task{ref}"))
        elif c > 1:
            out.append(Violation("duplicate task", f"task{ref}", f"{c} entries"))

    per_proc: dict[int, list[ScheduleEntry]] = defaultdict(list)
    for e in sched.entries:
        if e.duration > tol:
            per_proc[e.processor].append(e)
    for proc, es in per_proc.items():
        es.sort(key=lambda e: e.start)
        for a, b in zip(es, es[1:]):
            if b.start < a.completion - tol:
                out.append(
                    Violation("overlap", f"processor[{proc}]", f"task{a.ref} and task{b.ref}")
                )

    for job in inst.jobs:
        for r in job.reduces:
            er = sched.by_ref.get((job.id, r))
            if er is None:
                continue
            for mp in job.maps:
                em = sched.by_ref.get((job.id, mp))
                if em is not None and er.start < em.completion - tol:
                    out.append(
                        Violation("precedence", f"task{er.ref}", f"starts before task{em.ref} ends")
                    )

    if all(counts.get(ref, 0) >= 1 for ref, _, _ in inst.tasks()):
        try:
            total = energy(inst, sched)
        except UndefinedEnergyError:
            total = math.inf
        if total > budget + tol * max(1.0, budget):
            out.append(Violation("energy budget", "energy", f"{total} > {budget}"))
    return out


def entries_from_times(
    inst: Instance, start: dict[TaskRef, float], duration: dict[TaskRef, float]
) -> Schedule:
    return Schedule(tuple(make_entry(inst, ref, start[ref], duration[ref]) for ref in start))


def single_task_job(
    job_id: int, weight: float, release: float, processor: int, volume: float,
    reduce_processor: int,
) -> Job:
    """A job whose work is one Map task, plus an empty Reduce task elsewhere."""
    return Job(
        job_id,
        weight,
        release,
        (Task(processor, Kind.MAP, volume), Task(reduce_processor, Kind.REDUCE, 0.0)),
    )

