"""
Checking the LP and the alpha-point schedule against brute force
================================================================

On tiny instances every choice of grid speeds and processor sequences can
be tried. The exhaustive optimum must sit between the LP bound and the
alpha-point schedule.
"""

from mrenergy.alpha import run_algomr
from mrenergy.generator import GenConfig, generate_instance
from mrenergy.oracle import bracketing_speeds, brute_force_oracle

for seed in range(4):
    inst = generate_instance(GenConfig(m=3, n=3, maps_per_job=1, reduces_per_job=1,
                                       energy_budget=45.0, release="zero", seed=seed))
    res = run_algomr(inst)
    speeds = bracketing_speeds(res.speeds, inst)
    opt, sched = brute_force_oracle(inst, speeds)
    print(f"seed {seed}: LP {res.solution.objective:8.2f} <= oracle {opt:8.2f} "
          f"<= alpha-point {res.objective:8.2f}")
