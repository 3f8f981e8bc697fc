"""Job orders (FCFS, Smith's rule) and the instance families that defeat them."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

from .errors import ParameterError
from .model import Instance, Job, Kind, Task, single_task_job


@dataclass(frozen=True)
class JobOrder:
    jobs: tuple[int, ...]

    @cached_property
    def position(self) -> dict[int, int]:
        return {j: k for k, j in enumerate(self.jobs)}

    def precedes(self, a: int, b: int) -> bool:
        return self.position[a] < self.position[b]

    def check(self, inst: Instance) -> None:
        if sorted(self.jobs) != sorted(j.id for j in inst.jobs) or len(set(self.jobs)) != len(self.jobs):
            raise ParameterError(f"order {self.jobs} is not a permutation of the instance's jobs")

    def __iter__(self):
        return iter(self.jobs)

    def __len__(self):
        return len(self.jobs)


def fcfs_order(inst: Instance) -> JobOrder:
    return JobOrder(tuple(j.id for j in sorted(inst.jobs, key=lambda j: (j.release, j.id))))


def smith_ratio(job: Job) -> float:
    total = job.total_volume
    return math.inf if total == 0 else job.weight / total


def smith_order(inst: Instance) -> JobOrder:
    """Weight over total work, descending; jobs without work go first."""
    return JobOrder(tuple(j.id for j in sorted(inst.jobs, key=lambda j: (-smith_ratio(j), j.id))))


def order_by_name(inst: Instance, name: str) -> JobOrder:
    if name == "fcfs":
        return fcfs_order(inst)
    if name == "sr":
        return smith_order(inst)
    raise ParameterError(f"unknown order {name!r}")


def gen_fcfs_gap_instance(n: int, eps: float = 1e-4) -> Instance:
    """``n`` jobs on ``n`` processors; job ``j`` has its only Map task on processor ``j``.

    Every other processor gets a tiny Reduce task of the job, so under the
    release order each Map waits behind the previous job's Reduce tasks.
    """
    if n < 2:
        raise ParameterError("need n >= 2")
    jobs = []
    for j in range(1, n + 1):
        tasks = tuple(
            Task(i, Kind.MAP, 1.0) if i == j else Task(i, Kind.REDUCE, eps) for i in range(1, n + 1)
        )
        jobs.append(Job(j, 1.0, (j - 1) * eps, tasks))
    return Instance(2.0, 1.0, n, tuple(jobs))


def gen_sr_gap_instance(n: int, eps: float = 1e-4, r: float | None = None) -> Instance:
    """One busy processor; the last job is slightly smaller but released very late.

    Each job's work is a single Map task on processor 1 with an empty Reduce
    task on processor 2.
    """
    if n < 2:
        raise ParameterError("need n >= 2")
    r = 1e3 * n if r is None else r
    jobs = [single_task_job(j, 1.0, 0.0, 1, 1.0, 2) for j in range(1, n)]
    jobs.append(single_task_job(n, 1.0, r, 1, 1.0 - eps, 2))
    return Instance(2.0, 1.0, 2, tuple(jobs))


def gen_chain_instance(n: int, energy_budget: float = 1.0) -> Instance:
    """``n`` unit jobs, released at 0, sharing one processor (plus empty Reduce tasks)."""
    jobs = tuple(single_task_job(j, 1.0, 0.0, 1, 1.0, 2) for j in range(1, n + 1))
    return Instance(2.0, energy_budget, 2, jobs)
