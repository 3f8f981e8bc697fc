"""
Instances where a fixed order is a bad idea
===========================================

Under FCFS each job's Map waits behind tiny Reduce tasks of earlier jobs, so
work that could run in parallel is serialised. Under Smith's rule a slightly
smaller job released very late is put first and holds everybody up.
"""

import numpy as np

from mrenergy import cp
from mrenergy.model import objective
from mrenergy.orders import fcfs_order, gen_fcfs_gap_instance, gen_sr_gap_instance, smith_order

ns = (4, 8, 16)
bound, kept = [], []
for n in ns:
    inst = gen_fcfs_gap_instance(n)
    order = fcfs_order(inst)
    sol = cp.solve_cp(inst, order)
    bound.append(sol.objective)
    kept.append(objective(inst, cp.schedule_from_order(inst, order, sol.p)))
    print(f"n={n:2d}: relaxation {bound[-1]:9.1f}  order-respecting schedule {kept[-1]:9.1f}")
slope = lambda v: np.polyfit(np.log(ns), np.log(v), 1)[0]
print(f"growth exponents: relaxation {slope(bound):.2f}, schedule {slope(kept):.2f}")

for r in (300.0, 3000.0, 30000.0):
    inst = gen_sr_gap_instance(3, r=r)
    sr = cp.solve_cp(inst, smith_order(inst)).objective
    fcfs = cp.solve_cp(inst, fcfs_order(inst)).objective
    print(f"r={r:7.0f}: SR {sr:10.1f}  FCFS {fcfs:9.1f}  gap {sr - fcfs:10.1f}")
