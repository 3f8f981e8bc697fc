"""Energy-constrained scheduling of MapReduce jobs on speed-scalable processors.

Minimise total weighted job completion time when every task is preassigned
to a processor, Reduce tasks wait for their job's Map tasks, and running a
task of work ``v`` for time ``p`` costs ``v**beta / p**(beta - 1)`` energy out
of a shared budget.
"""

from .alpha import AlphaParams, certify_bounds, run_algomr
from .cp import CpConfig, closed_form_chain, evaluate_completions, schedule_from_order, solve_cp
from .discretization import build_speed_grid, build_time_grid, compute_t_max
from .errors import (
    CertificationError, GuardError, ParameterError, ScheduleError, UndefinedEnergyError,
)
from .experiments import ExperimentConfig, run_experiment
from .generator import GenConfig, generate_instance
from .lp import SolverConfig, build_lp, solve_lp
from .model import (
    Instance, Job, Kind, Schedule, Task, energy, objective, validate_instance, validate_schedule,
)
from .oracle import brute_force_oracle
from .orders import JobOrder, fcfs_order, smith_order
from .ratios import optimal_ratio, ratio_bound, tradeoff_curve

__version__ = "0.1.0"
