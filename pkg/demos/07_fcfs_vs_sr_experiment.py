"""
FCFS against Smith's rule on random instances
=============================================

For every order the relaxation is solved, its processing times are list
scheduled, and both numbers are averaged over seeds. Ten processors with six
Map and three Reduce tasks per job keep the run to a few seconds.
"""

import sys

from mrenergy.experiments import ExperimentConfig, run_experiment

seeds = int(sys.argv[1]) if len(sys.argv) > 1 else 3
res = run_experiment(ExperimentConfig.desk(seeds=seeds))
print(res.means_csv())

m = res.means()
for n in res.config.ns:
    f, s = m[(n, "CP(FCFS)")], m[(n, "CP(SR)")]
    print(f"n={n}: heuristic FCFS {f['objective']:9.1f} vs SR {s['objective']:9.1f};  "
          f"bound FCFS {f['lb']:9.1f} vs SR {s['lb']:9.1f}")
