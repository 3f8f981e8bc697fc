"""Turning processing times plus a priority rule into concrete schedules.

Tasks without work never occupy a processor: they complete at their job's
release (Map) or when the job's last Map task ends (Reduce).
"""

from __future__ import annotations

import math
from typing import Mapping

from .model import Instance, Schedule, TaskRef, make_entry


def _place_empty(inst: Instance, done: dict[TaskRef, float], entries: list) -> None:
    for job in inst.jobs:
        for k, task in enumerate(job.tasks):
            if task.volume > 0:
                continue
            at = job.release
            if not task.is_map:
                at = max([at] + [done[(job.id, m)] for m in job.maps])
            entries.append(make_entry(inst, (job.id, k), at, 0.0))


def _empty_maps(inst: Instance) -> dict[TaskRef, float]:
    return {
        (job.id, k): job.release
        for job in inst.jobs for k in job.maps if job.tasks[k].volume == 0
    }


def list_schedule(
    inst: Instance,
    durations: Mapping[TaskRef, float],
    priority: Mapping[int, list[TaskRef]],
    available: Mapping[TaskRef, float] | None = None,
) -> Schedule:
    """Non-idling list scheduling.

    Whenever a processor is idle it starts the first unscheduled task of its
    priority list that is released (and past ``available``), and, for a
    Reduce task, whose job's Map tasks have all completed.
    """
    available = available or {}
    done = _empty_maps(inst)
    maps_of = {j.id: [(j.id, k) for k in j.maps] for j in inst.jobs}
    pending = {i: list(refs) for i, refs in priority.items()}
    free_at = {i: 0.0 for i in pending}
    start: dict[TaskRef, float] = {}

    def avail(ref):
        return max(available.get(ref, 0.0), inst.job(ref[0]).release)

    def ready(ref, t):
        if t < avail(ref):
            return False
        if inst.task(ref).is_map:
            return True
        return all(m in done and done[m] <= t for m in maps_of[ref[0]])

    t = 0.0
    while any(pending.values()):
        for i in sorted(pending):
            if free_at[i] > t:
                continue
            for ref in pending[i]:
                if ready(ref, t):
                    pending[i].remove(ref)
                    start[ref] = t
                    free_at[i] = t + durations[ref]
                    if inst.task(ref).is_map:
                        done[ref] = free_at[i]
                    break
        future = [f for i, f in free_at.items() if f > t and pending[i]]
        for refs in pending.values():
            for ref in refs:
                future.append(avail(ref))
                if not inst.task(ref).is_map:
                    future.extend(done.get(m, math.inf) for m in maps_of[ref[0]])
        future = [e for e in future if t < e < math.inf]
        if not future:
            if any(pending.values()):
                raise RuntimeError("list scheduling stalled")
            break
        t = min(future)

    entries = [make_entry(inst, ref, s, durations[ref]) for ref, s in start.items()]
    _place_empty(inst, done, entries)
    return Schedule(tuple(entries))


def fixed_order_schedule(
    inst: Instance, durations: Mapping[TaskRef, float], position: Mapping[int, int]
) -> Schedule:
    """Every processor runs its tasks in the given job order, as early as possible."""
    refs = [ref for ref, _, task in inst.tasks() if task.volume > 0]
    refs.sort(key=lambda r: (position[r[0]], not inst.task(r).is_map, r[1]))
    done = _empty_maps(inst)
    free_at: dict[int, float] = {}
    entries = []
    for ref in refs:
        job, task = inst.job(ref[0]), inst.task(ref)
        s = max(job.release, free_at.get(task.processor, 0.0))
        if not task.is_map:
            s = max([s] + [done[(job.id, m)] for m in job.maps])
        free_at[task.processor] = done[ref] = s + durations[ref]
        entries.append(make_entry(inst, ref, s, durations[ref]))
    _place_empty(inst, done, entries)
    return Schedule(tuple(entries))
