"""
Instances, schedules and the feasibility check
==============================================

A job is a set of Map and Reduce tasks pinned to processors. Running a
task of work ``v`` for time ``p`` costs ``v**beta / p**(beta - 1)`` energy,
so slower is cheaper, and all tasks share one energy budget.
"""

from mrenergy.model import (
    Instance, Job, Kind, Task, energy, entries_from_times, objective, validate_schedule,
)
from mrenergy.serialize import dumps_instance, dumps_schedule

# two jobs on three processors; job 2 is released at time 1
jobs = (
    Job(1, 2.0, 0.0, (Task(1, Kind.MAP, 2.0), Task(2, Kind.REDUCE, 1.0))),
    Job(2, 1.0, 1.0, (Task(1, Kind.MAP, 1.0), Task(3, Kind.REDUCE, 1.0))),
)
inst = Instance(beta=2.0, energy_budget=6.0, num_processors=3, jobs=jobs)
print(dumps_instance(inst))

# every task at speed 1: Maps back to back on processor 1, each Reduce after its Map
start = {(1, 0): 0.0, (1, 1): 2.0, (2, 0): 2.0, (2, 1): 3.0}
duration = {(1, 0): 2.0, (1, 1): 1.0, (2, 0): 1.0, (2, 1): 1.0}
sched = entries_from_times(inst, start, duration)
print(dumps_schedule(inst, sched))
print("objective", objective(inst, sched), "energy", energy(inst, sched))
print("violations", validate_schedule(inst, sched))

# starting the second Reduce too early breaks precedence; halving a duration blows the budget
start[(2, 1)] = 2.5
duration[(1, 0)] = 1.0
bad = entries_from_times(inst, start, duration)
for v in validate_schedule(inst, bad):
    print(v.rule, v.field, v.detail)
