import math

import numpy as np
import pytest

from conftest import small_random, two_task_job
from mrenergy.discretization import build_speed_grid, build_time_grid
from mrenergy.errors import ParameterError
from mrenergy.lp import (
    BACKENDS, SolverConfig, build_lp, register_backend, residuals, solve_lp, to_mps,
)
from mrenergy.discretization import SpeedGrid
from mrenergy.model import Instance, single_task_job


def test_counts_for_one_job(one_job):
    speeds = build_speed_grid(1.0, 2.0, 1.0)
    times = build_time_grid(1.0, 1.0, 4.0)
    assert len(speeds) == 2 and times.u == 3
    model = build_lp(one_job, speeds, times)
    assert model.num_vars == 2 * 2 * 4 + 2 + 1
    assert model.row_count(6) == 4
    assert model.row_count(1) == 2


def test_capacity_rows_per_processor_and_interval():
    inst = Instance(2.0, 10.0, 4, (two_task_job(1, map_proc=1, reduce_proc=2),
                                   two_task_job(2, map_proc=3, reduce_proc=4)))
    times = build_time_grid(0.5, 1.0, 4.0)
    model = build_lp(inst, build_speed_grid(1.0, 2.0, 1.0), times)
    assert model.row_count(2) == 4 * (times.u + 1)


def test_release_beyond_horizon_is_infeasible_by_construction():
    inst = Instance(2.0, 2.0, 2, (two_task_job(release=100.0),))
    model = build_lp(inst, build_speed_grid(1.0, 2.0, 1.0), build_time_grid(1.0, 1.0, 4.0))
    assert model.infeasible_by_construction
    assert solve_lp(model).status == "infeasible"


def test_empty_speed_grid_rejected(one_job):
    with pytest.raises(ParameterError):
        build_lp(one_job, SpeedGrid(1.0, 1.0, 0.5, ()), build_time_grid(1.0, 1.0, 2.0))


def _unit_speed_lp(inst):
    return solve_lp(build_lp(inst, build_speed_grid(1.0, 1.0, 0.5), build_time_grid(0.5, 1.0, 8.0)))


def test_single_task_unit_speed_hand_solution():
    # one unit of work at speed 1: half a unit in (0, .5] costs .5, the rest in (.5, 1] costs .5
    inst = Instance(2.0, math.inf, 2, (single_task_job(1, 1.0, 0.0, 1, 1.0, 2),))
    sol = _unit_speed_lp(inst)
    assert sol.ok
    assert sol.objective == pytest.approx(1.0, abs=1e-7)


def test_two_tasks_one_processor_hand_solution():
    # two units of work fill (0,.5], (.5,1] and (1,2] at unit costs 1, 1 and 1.5
    jobs = (single_task_job(1, 1.0, 0.0, 1, 1.0, 2), single_task_job(2, 1.0, 0.0, 1, 1.0, 2))
    sol = _unit_speed_lp(Instance(2.0, math.inf, 2, jobs))
    assert sol.objective == pytest.approx(2.5, abs=1e-7)


def test_zero_volume_only_gives_zero():
    inst = Instance(2.0, 1.0, 2, (two_task_job(vm=0.0, vr=0.0),), )
    model = build_lp(inst, build_speed_grid(1.0, 2.0, 1.0), build_time_grid(1.0, 1.0, 2.0))
    assert solve_lp(model).objective == pytest.approx(0.0, abs=1e-12)


def test_one_job_relaxes_best_schedule(one_job):
    model = build_lp(one_job, build_speed_grid(0.5, 2.0, 1.0), build_time_grid(0.1, 0.5, 2.0))
    sol = solve_lp(model)
    assert sol.ok
    assert 0 < sol.objective <= 2.0 + 1e-7


@pytest.mark.parametrize("seed", range(3))
def test_solution_respects_rows(seed):
    inst = small_random(seed, m=3, n=2, maps=1, reduces=1, energy=60.0, release="zero")
    from mrenergy.discretization import compute_t_max, instance_speed_grid
    t_max = compute_t_max(inst)
    speeds = instance_speed_grid(inst, 0.5, t_max)
    model = build_lp(inst, speeds, build_time_grid(0.5 * 0.7 * inst.v_min / speeds.s_max, 0.5, t_max))
    sol = solve_lp(model)
    assert sol.ok
    assert max(residuals(model, sol.x).values()) < 1e-6
    for ref, _, _ in inst.tasks():
        if inst.task(ref).volume > 0:
            assert sol.fractions(ref).sum() == pytest.approx(1.0, abs=1e-6)
    # executed Map fraction never trails the Reduce fraction
    for m, r in inst.precedence_pairs():
        fm, fr = np.cumsum(sol.fractions(m)), np.cumsum(sol.fractions(r))
        assert np.all(fm >= fr - 1e-6)
    total = sum(sol.task_energy(ref) for ref, _, t in inst.tasks() if t.volume > 0)
    assert total <= inst.energy_budget * (1 + 1e-6)


def test_pluggable_backend(one_job):
    calls = []

    def spy(*args):
        calls.append(1)
        return BACKENDS["highs"](*args)

    register_backend("spy", spy)
    model = build_lp(one_job, build_speed_grid(0.5, 2.0, 1.0), build_time_grid(0.1, 0.5, 2.0))
    assert solve_lp(model, SolverConfig(backend="spy")).ok and calls


def test_mps_export(one_job):
    model = build_lp(one_job, build_speed_grid(1.0, 2.0, 1.0), build_time_grid(1.0, 1.0, 4.0))
    text = to_mps(model)
    assert text.startswith("NAME") and text.rstrip().endswith("ENDATA")
    assert "ROWS" in text and "COLUMNS" in text and "RHS" in text
