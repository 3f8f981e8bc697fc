"""
The convex relaxation for a fixed job order
===========================================

Once the order of jobs is fixed, only the processing times remain to be
chosen. The relaxation lower-bounds completions by release-anchored prefix
sums and the Map-to-Reduce chain, so it is convex in the processing times.
"""

import math

from mrenergy import cp
from mrenergy.generator import GenConfig, generate_instance
from mrenergy.model import objective
from mrenergy.orders import fcfs_order, gen_chain_instance, smith_order

# n unit jobs on one processor: the optimum has a closed form
for n in (2, 5, 10):
    inst = gen_chain_instance(n)
    sol = cp.solve_cp(inst, fcfs_order(inst))
    _, closed = cp.closed_form_chain(n, 1.0)
    print(f"n={n:2d} solver {sol.objective:.6f} closed form {closed:.6f} "
          f"({sol.iterations} cutting-plane rounds)")

# a random instance under both orders
inst = generate_instance(GenConfig(m=6, n=4, maps_per_job=3, reduces_per_job=2,
                                   energy_budget=80.0, seed=3))
for name, order in (("FCFS", fcfs_order(inst)), ("SR", smith_order(inst))):
    sol = cp.solve_cp(inst, order)
    fixed = objective(inst, cp.schedule_from_order(inst, order, sol.p, mode="fixed"))
    listed = objective(inst, cp.schedule_from_order(inst, order, sol.p, mode="list"))
    print(f"{name:4s} order {order.jobs}: bound {sol.objective:.1f}, "
          f"order kept {fixed:.1f}, list scheduled {listed:.1f}, gap {sol.gap:.1e}")
