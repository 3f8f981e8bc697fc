import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from mrenergy.generator import GenConfig, generate_instance
from mrenergy.model import Instance, Job, Kind, Task

settings.register_profile(
    "repo", max_examples=200, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("repo")


def two_task_job(job_id=1, weight=1.0, release=0.0, map_proc=1, reduce_proc=2, vm=1.0, vr=1.0):
    return Job(job_id, weight, release,
               (Task(map_proc, Kind.MAP, vm), Task(reduce_proc, Kind.REDUCE, vr)))


@pytest.fixture
def one_job():
    """One Map and one Reduce task of unit work on two processors, E=2, beta=2."""
    return Instance(2.0, 2.0, 2, (two_task_job(),))


def small_random(seed, m=4, n=4, maps=2, reduces=1, energy=200.0, release="bernoulli"):
    return generate_instance(GenConfig(m=m, n=n, maps_per_job=maps, reduces_per_job=reduces,
                                       energy_budget=energy, release=release, seed=seed))


def rng(seed=0):
    return np.random.default_rng(seed)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
