"""Exhaustive search over grid speeds and processor orders for tiny instances.

For fixed speeds and fixed per-processor task sequences, starting every task
as early as releases, its processor and its job's Map tasks allow is optimal
(completions only grow when a start is delayed), so enumerating speeds times
sequences covers every non-preemptive schedule whose speeds lie on the grid.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .discretization import SpeedGrid
from .errors import GuardError
from .model import Instance, Schedule, TaskRef, make_entry, objective


@dataclass(frozen=True)
class OracleLimits:
    max_jobs: int = 3
    max_tasks: int = 6
    max_speeds: int = 4


def _speeds(speed_grid: SpeedGrid | Iterable[float]) -> list[float]:
    values = speed_grid.speeds if isinstance(speed_grid, SpeedGrid) else speed_grid
    return sorted(float(s) for s in values)


def _earliest(
    inst: Instance, seqs: Sequence[Sequence[TaskRef]], dur: dict[TaskRef, float]
) -> dict[TaskRef, float] | None:
    """Earliest starts for fixed sequences, or None if they deadlock."""
    start: dict[TaskRef, float] = {}
    done: dict[TaskRef, float] = {}
    for job in inst.jobs:
        for k in job.maps:
            if job.tasks[k].volume == 0:
                done[(job.id, k)] = job.release
    heads = [0] * len(seqs)
    free = [0.0] * len(seqs)
    remaining = sum(len(s) for s in seqs)
    while remaining:
        moved = False
        for i, seq in enumerate(seqs):
            while heads[i] < len(seq):
                ref = seq[heads[i]]
                job, task = inst.job(ref[0]), inst.task(ref)
                s = max(job.release, free[i])
                if not task.is_map:
                    deps = [(job.id, m) for m in job.maps]
                    if any(d not in done for d in deps):
                        break
                    s = max([s] + [done[d] for d in deps])
                start[ref] = s
                free[i] = done[ref] = s + dur[ref]
                heads[i] += 1
                remaining -= 1
                moved = True
        if not moved:
            return None
    return start


def brute_force_oracle(
    inst: Instance,
    speed_grid: SpeedGrid | Iterable[float],
    limits: OracleLimits | None = None,
) -> tuple[float, Schedule] | None:
    """Minimum weighted completion over grid-speed schedules within budget.

    Returns None when no speed assignment fits the energy budget.
    """
    limits = limits or OracleLimits()
    speeds = _speeds(speed_grid)
    if inst.n > limits.max_jobs:
        raise GuardError(f"{inst.n} jobs exceed the oracle limit of {limits.max_jobs}")
    if inst.num_tasks > limits.max_tasks:
        raise GuardError(f"{inst.num_tasks} tasks exceed the oracle limit of {limits.max_tasks}")
    if len(speeds) > limits.max_speeds:
        raise GuardError(f"{len(speeds)} speeds exceed the oracle limit of {limits.max_speeds}")

    work = [ref for ref, _, t in inst.tasks() if t.volume > 0]
    by_proc: dict[int, list[TaskRef]] = {}
    for ref in work:
        by_proc.setdefault(inst.task(ref).processor, []).append(ref)
    seq_choices = [list(itertools.permutations(refs)) for refs in by_proc.values()]
    b, E = inst.beta, inst.energy_budget

    best: tuple[float, Schedule] | None = None
    for combo in itertools.product(speeds, repeat=len(work)):
        energy = sum(inst.task(r).volume * s ** (b - 1) for r, s in zip(work, combo))
        if energy > E * (1 + 1e-12):
            continue
        dur = {r: inst.task(r).volume / s for r, s in zip(work, combo)}
        for seqs in itertools.product(*seq_choices):
            start = _earliest(inst, seqs, dur)
            if start is None:
                continue
            sched = _complete(inst, start, dur)
            val = objective(inst, sched)
            if best is None or val < best[0] - 1e-15 * max(1.0, abs(val)):
                best = (val, sched)
    return best


def _complete(inst: Instance, start: dict[TaskRef, float], dur: dict[TaskRef, float]) -> Schedule:
    entries = [make_entry(inst, r, s, dur[r]) for r, s in start.items()]
    for job in inst.jobs:
        last_map = max(
            (start[(job.id, m)] + dur[(job.id, m)] if (job.id, m) in start else job.release)
            for m in job.maps
        )
        for k, task in enumerate(job.tasks):
            if task.volume == 0:
                at = job.release if task.is_map else max(job.release, last_map)
                entries.append(make_entry(inst, (job.id, k), at, 0.0))
    return Schedule(tuple(entries))


def bracketing_speeds(grid: SpeedGrid, inst: Instance, count: int = 4) -> list[float]:
    """Up to ``count`` grid speeds around the speed that spreads the budget evenly."""
    total = sum(t.volume for _, _, t in inst.tasks())
    target = (inst.energy_budget / total) ** (1 / (inst.beta - 1))
    speeds = list(grid.speeds)
    i = min(range(len(speeds)), key=lambda k: abs(math.log(speeds[k] / target)))
    lo = max(0, min(i - count // 2, len(speeds) - count))
    return speeds[lo: lo + count]
