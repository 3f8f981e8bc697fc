"""One test per acceptance criterion; each also prints a PASS/FAIL line.

Run directly (``python tests/test_acceptance.py``) for just the summary lines.
"""

import math
import time
from dataclasses import replace

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from mrenergy import cp, ratios
from mrenergy.alpha import run_algomr
from mrenergy.discretization import (
    build_time_grid, compute_t_max, default_lambda, instance_speed_grid,
)
from mrenergy.experiments import ExperimentConfig, run_experiment
from mrenergy.generator import GenConfig, generate_instance
from mrenergy.model import Instance, Job, Task, objective, task_energy, validate_schedule
from mrenergy.oracle import bracketing_speeds, brute_force_oracle
from mrenergy.orders import (
    fcfs_order, gen_chain_instance, gen_fcfs_gap_instance, gen_sr_gap_instance, smith_order,
)

TABLE = {
    2.0: (37.52, 9.44, 6.75), 2.2: (34.89, 8.84, 6.29), 2.4: (33.01, 8.41, 5.97),
    2.6: (31.59, 8.09, 5.72), 2.8: (30.50, 7.84, 5.53), 3.0: (29.62, 7.64, 5.38),
}
CURVES = {
    2.0: (37.52, 33.32, 29.97, 27.25, 24.99, 23.10, 21.49, 20.10, 18.90, 17.84, 16.91),
    2.5: (32.25, 29.80, 27.75, 26.02, 24.53, 23.24, 22.11, 21.11, 20.22, 19.42, 18.69),
    3.0: (29.62, 27.91, 26.46, 25.20, 24.10, 23.13, 22.27, 21.49, 20.79, 20.15, 19.57),
}


def report(name, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'}  {name}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def test_ratio_table():
    t0 = time.perf_counter()
    worst = 0.0
    for beta, expected in TABLE.items():
        for variant, want in zip(ratios.VARIANTS, expected):
            worst = max(worst, abs(ratios.optimal_ratio(beta, variant)[1] - want))
    elapsed = time.perf_counter() - t0
    ok = worst <= 0.02 and elapsed < 1.0
    assert report("ratio table", ok, f"18 entries, max abs error {worst:.4f}, {elapsed:.2f}s")


def test_tradeoff_curves():
    t0 = time.perf_counter()
    worst = 0.0
    for beta, expected in CURVES.items():
        got = [r for r, _ in ratios.tradeoff_curve(beta)]
        worst = max(worst, max(abs(a - b) for a, b in zip(got, expected)))
    elapsed = time.perf_counter() - t0
    ok = worst <= 0.05 and elapsed < 2.0
    assert report("tradeoff curves", ok, f"33 points, max abs error {worst:.4f}, {elapsed:.2f}s")


def test_cp_closed_form():
    t0 = time.perf_counter()
    worst = 0.0
    for n in (2, 5, 10):
        inst = gen_chain_instance(n, 1.0)
        got = cp.solve_cp(inst, fcfs_order(inst)).objective
        want = sum(math.sqrt(i) for i in range(1, n + 1)) ** 2
        worst = max(worst, abs(got - want) / want)
    s1 = np.arange(1, 1000) * 1e-3
    grid = float(np.min(2 / s1 + 1 / (1 - s1)))
    inst = gen_chain_instance(2, 1.0)
    two = cp.solve_cp(inst, fcfs_order(inst)).objective
    grid_err = abs(two - grid) / grid
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-4 and grid_err <= 1e-4 and elapsed < 10
    assert report("convex program vs closed form", ok,
                  f"max rel error {worst:.2e}, grid-search rel error {grid_err:.2e}, {elapsed:.2f}s")


def certification_instances():
    out = []
    for s in range(24):
        n = 2 + s % 5
        maps, reduces = (1, 1) if s % 3 == 0 else (2, 1) if s % 3 == 1 else (1, 2)
        out.append(generate_instance(GenConfig(
            m=4, n=n, maps_per_job=maps, reduces_per_job=reduces, energy_budget=20.0 * n,
            release="zero" if s % 4 == 0 else "bernoulli", seed=1000 + s)))
    return out


@pytest.fixture(scope="module")
def certified_runs():
    alpha, _ = ratios.optimal_ratio(2.0, "general")
    t0 = time.perf_counter()
    runs = [(inst, run_algomr(inst, alpha=alpha, gamma=1 / alpha**2, epsilon=0.5, delta=0.5,
                              raise_on_failure=False))
            for inst in certification_instances()]
    return runs, time.perf_counter() - t0


def test_alpha_certification(certified_runs):
    runs, elapsed = certified_runs
    failures = sum(len(res.certificate.failures) for _, res in runs)
    invalid = sum(bool(validate_schedule(inst, res.schedule)) for inst, res in runs)
    checks = sum(len(res.certificate.checks) for _, res in runs)
    ok = len(runs) >= 20 and failures == 0 and invalid == 0 and elapsed < 300
    assert report("alpha-point certification", ok,
                  f"{len(runs)} instances, {checks} checks, {failures} failures, "
                  f"{invalid} infeasible schedules, {elapsed:.1f}s")


def oracle_instances():
    """Tiny instances; some have release dates moved onto interval endpoints."""
    alpha, _ = ratios.optimal_ratio(2.0, "general")
    out = []
    for s in range(12):
        n, maps = (3, 1) if s % 2 == 0 else (2, 2)
        inst = generate_instance(GenConfig(
            m=3, n=n, maps_per_job=maps, reduces_per_job=1, energy_budget=15.0 * n,
            release="bernoulli" if s % 3 == 0 else "zero", seed=2000 + s))
        t_max = compute_t_max(inst)
        if s % 3 == 0:
            speeds = instance_speed_grid(inst, 0.5, t_max)
            tau = build_time_grid(default_lambda(alpha, inst.v_min, speeds.s_max), 0.5, t_max).tau
            jobs = tuple(replace(j, release=max(t for t in tau if t <= j.release)) for j in inst.jobs)
            inst = replace(inst, jobs=jobs)
        out.append((inst, t_max))
    return out


def test_oracle_sandwich():
    bad, rows = 0, []
    for inst, t_max in oracle_instances():
        res = run_algomr(inst, t_max=t_max)
        lp = res.solution.objective
        found = brute_force_oracle(inst, bracketing_speeds(res.speeds, inst))
        assert found is not None
        opt = found[0]
        heur = res.objective
        bad += lp > opt * (1 + 1e-6) or opt > heur * (1 + 1e-6)
        rows.append(opt / lp)
    ok = bad == 0 and len(rows) >= 10
    assert report("LP <= oracle <= alpha-point schedule", ok,
                  f"{len(rows)} instances, {bad} violations, oracle/LP in "
                  f"[{min(rows):.2f}, {max(rows):.2f}]")


def without_precedence(inst: Instance) -> Instance:
    jobs = tuple(replace(j, tasks=tuple(t if t.is_map else replace(t, volume=0.0) for t in j.tasks))
                 for j in inst.jobs)
    return replace(inst, jobs=jobs)


def test_cp_lower_bound_and_exactness():
    below, pairs = 0, 0
    for s in range(20):
        inst = generate_instance(GenConfig(m=6, n=2 + s % 5, maps_per_job=2, reduces_per_job=2,
                                           energy_budget=60.0, seed=3000 + s))
        for order in (fcfs_order(inst), smith_order(inst)):
            sol = cp.solve_cp(inst, order)
            sched = cp.schedule_from_order(inst, order, sol.p)
            below += sol.objective > objective(inst, sched) * (1 + 1e-7)
            pairs += 1
    worst = 0.0
    for s in range(10):
        inst = without_precedence(generate_instance(GenConfig(
            m=6, n=2 + s % 5, maps_per_job=3, reduces_per_job=1, energy_budget=60.0, seed=4000 + s)))
        assert not inst.precedence_pairs()
        for order in (fcfs_order(inst), smith_order(inst)):
            sol = cp.solve_cp(inst, order)
            sched_obj = objective(inst, cp.schedule_from_order(inst, order, sol.p))
            worst = max(worst, abs(sched_obj - sol.objective) / sol.objective)
    ok = below == 0 and worst <= 1e-6
    assert report("convex program bounds fixed-order schedules", ok,
                  f"{pairs} instance-orders with {below} violations; "
                  f"precedence-free max rel gap {worst:.1e}")


def fitted_exponent(ns, values):
    return float(np.polyfit(np.log(ns), np.log(values), 1)[0])


def test_counterexample_growth():
    ns = (4, 8, 16)
    cp_vals, sched_vals = [], []
    for n in ns:
        inst = gen_fcfs_gap_instance(n)
        order = fcfs_order(inst)
        sol = cp.solve_cp(inst, order)
        cp_vals.append(sol.objective)
        sched_vals.append(objective(inst, cp.schedule_from_order(inst, order, sol.p)))
    exp_cp, exp_sched = fitted_exponent(ns, cp_vals), fitted_exponent(ns, sched_vals)

    gaps = []
    for r in (300.0, 3000.0):
        inst = gen_sr_gap_instance(3, r=r)
        gaps.append(cp.solve_cp(inst, smith_order(inst)).objective
                    - cp.solve_cp(inst, fcfs_order(inst)).objective)
    growth = gaps[1] / gaps[0]
    ok = exp_cp >= 2.5 and growth >= 1.9
    assert report("counterexample growth", ok,
                  f"FCFS family: relaxation exponent {exp_cp:.2f} (needs >= 2.5), "
                  f"order-respecting schedule exponent {exp_sched:.2f}; "
                  f"SR family gap x{growth:.2f} for r x10 (needs >= 1.9)")


def test_fcfs_vs_sr_direction():
    t0 = time.perf_counter()
    res = run_experiment(ExperimentConfig.desk(seeds=10))
    m = res.means()
    parts, ok = [], True
    for n in (3, 5, 8):
        heur_f, heur_s = m[(n, "CP(FCFS)")]["objective"], m[(n, "CP(SR)")]["objective"]
        lb_f, lb_s = m[(n, "CP(FCFS)")]["lb"], m[(n, "CP(SR)")]["lb"]
        ok &= heur_f <= heur_s and lb_s <= lb_f
        parts.append(f"n={n}: heuristic SR/FCFS {heur_s / heur_f:.3f}, bound FCFS/SR {lb_f / lb_s:.3f}")
    elapsed = time.perf_counter() - t0
    ok &= elapsed < 900 and not any("invalid" in r.note for r in res.rows)
    assert report("FCFS vs SR direction", ok, "; ".join(parts) + f"; {elapsed:.0f}s")


def test_invariant_suite(certified_runs):
    rng = np.random.default_rng(7)
    bad = {}
    # energy and duration determine each other
    v, p, beta = rng.uniform(1e-2, 1e2, 1000), rng.uniform(1e-2, 1e2, 1000), rng.uniform(1.1, 3, 1000)
    e = np.array([task_energy(*args) for args in zip(v, p, beta)])
    bad["duality"] = int(np.sum(np.abs(e * p ** (beta - 1) / v**beta - 1) > 1e-12))
    # Jensen-type inequality behind the energy bound
    count = 0
    for _ in range(1000):
        k = rng.integers(1, 8)
        a, s, b = rng.uniform(1e-3, 10, k), rng.uniform(1e-3, 10, k), rng.uniform(2, 3)
        lhs = (1 / np.sum(a / s)) ** (b - 1)
        rhs = np.sum(a * s ** (b - 1)) / np.sum(a) ** b
        count += lhs > rhs * (1 + 1e-12)
    bad["inequality"] = count
    # interval lengths telescope to the endpoints
    count = 0
    for _ in range(200):
        g = build_time_grid(rng.uniform(1e-3, 1), rng.uniform(0.05, 2), rng.uniform(1, 1e4))
        count += int(np.max(np.abs(np.cumsum(g.lengths) - np.array(g.tau[1:])) /
                            np.array(g.tau[1:])) > 1e-12)
    bad["telescoping"] = count
    # proof steps checked on every alpha-point run
    runs, _ = certified_runs
    for name in ("priority-prefix", "map-completion"):
        bad[name] = sum(res.certificate.summary()[name][1] for _, res in runs)
    # every policy yields a permutation
    count = 0
    for inst, _ in runs:
        for order in (fcfs_order(inst), smith_order(inst)):
            count += sorted(order.jobs) != sorted(j.id for j in inst.jobs)
    bad["order totality"] = count
    ok = not any(bad.values())
    assert report("invariant suite", ok, ", ".join(f"{k} {v}" for k, v in bad.items()) + " violations")


if __name__ == "__main__":
    import sys
    sys.exit(pytest.main([__file__, "-q", "-s", "-p", "no:cacheprovider"]))
