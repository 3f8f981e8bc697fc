"""
Speed and time grids, and the interval-indexed LP
=================================================

Speeds are rounded onto a geometric grid and time is cut into geometrically
growing intervals. The LP decides what fraction of each interval every task
runs at every grid speed; its optimum bounds every schedule from below.
"""

from mrenergy.discretization import (
    build_time_grid, compute_t_max, default_lambda, instance_speed_grid,
)
from mrenergy.generator import GenConfig, generate_instance
from mrenergy.lp import build_lp, solve_lp

inst = generate_instance(GenConfig(m=4, n=3, maps_per_job=2, reduces_per_job=1,
                                   energy_budget=60.0, seed=1))
t_max = compute_t_max(inst)
speeds = instance_speed_grid(inst, epsilon=0.5, t_max=t_max)
times = build_time_grid(default_lambda(0.72, inst.v_min, speeds.s_max), 0.5, t_max)
print(f"horizon bound {t_max:.1f}, {len(speeds)} speeds, {times.num_intervals} intervals")

model = build_lp(inst, speeds, times)
print(f"{model.num_vars} variables, {model.num_rows} rows")
for tag in range(1, 7):
    print(f"  constraint family {tag}: {model.row_count(tag)} rows")

sol = solve_lp(model)
print("status", sol.status, "objective", round(sol.objective, 3))

# where each task's work lands in time
for ref, _, task in inst.tasks():
    frac = sol.fractions(ref)
    busy = [t for t, f in enumerate(frac) if f > 1e-6]
    print(ref, task.kind.value, "active in intervals", busy)
