"""Seeded random instances.

Draw order (one ``numpy.random.Generator(PCG64(seed))`` per instance):
for each job in id order, its distinct processors, Map volumes, Reduce
volumes and weight; then release dates for all jobs.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .errors import ParameterError
from .model import Instance, Job, Kind, Task

RNG_NAME = "numpy.random.PCG64"


@dataclass(frozen=True)
class GenConfig:
    m: int = 10
    n: int = 4
    maps_per_job: int = 3
    reduces_per_job: int = 2
    map_work: tuple[float, float] = (1.0, 10.0)
    reduce_work: tuple[float, float] = (1.0, 10.0)
    reduce_inflation: float = 3.0
    weight_range: tuple[float, float] = (1.0, 10.0)
    release: str = "bernoulli"  # "bernoulli" | "zero"
    energy_budget: float = 1000.0
    beta: float = 2.0
    seed: int = 0

    def __post_init__(self):
        if self.maps_per_job < 1 or self.reduces_per_job < 1:
            raise ParameterError("every job needs a Map and a Reduce task")
        if self.maps_per_job + self.reduces_per_job > self.m:
            raise ParameterError(
                f"{self.maps_per_job}+{self.reduces_per_job} tasks do not fit on {self.m} processors"
            )
        if self.release not in ("bernoulli", "zero"):
            raise ParameterError(f"unknown release protocol {self.release!r}")

    @classmethod
    def full_scale(cls, n: int, seed: int = 0) -> "GenConfig":
        return cls(m=50, n=n, maps_per_job=20, reduces_per_job=10, seed=seed)

    def as_dict(self) -> dict:
        d = asdict(self)
        d["rng"] = RNG_NAME
        return d


def release_dates(rng: np.random.Generator, n: int) -> list[float]:
    """Scan unit intervals ``(t, t+1]``; each is accepted with probability 1/2.

    Accepted intervals go to jobs in id order; the release is uniform inside.
    """
    out = []
    t = 0
    while len(out) < n:
        if rng.random() < 0.5:
            out.append(t + (1.0 - rng.random()))
        t += 1
    return out


def generate_instance(cfg: GenConfig) -> Instance:
    rng = np.random.Generator(np.random.PCG64(cfg.seed))
    k = cfg.maps_per_job + cfg.reduces_per_job
    drafts = []
    for _ in range(cfg.n):
        procs = rng.choice(cfg.m, size=k, replace=False) + 1
        maps = rng.uniform(*cfg.map_work, size=cfg.maps_per_job)
        extra = cfg.reduce_inflation * maps.mean()
        reduces = rng.uniform(*cfg.reduce_work, size=cfg.reduces_per_job) + extra
        weight = rng.uniform(*cfg.weight_range)
        tasks = [Task(int(p), Kind.MAP, float(v)) for p, v in zip(procs, maps)]
        tasks += [Task(int(p), Kind.REDUCE, float(v))
                  for p, v in zip(procs[cfg.maps_per_job:], reduces)]
        drafts.append((float(weight), tuple(tasks)))
    if cfg.release == "zero":
        releases = [0.0] * cfg.n
    else:
        releases = release_dates(rng, cfg.n)
    jobs = tuple(Job(j + 1, w, r, tasks) for j, ((w, tasks), r) in enumerate(zip(drafts, releases)))
    return Instance(cfg.beta, cfg.energy_budget, cfg.m, jobs)
