"""Rounding a fractional LP solution into a non-preemptive schedule by alpha-points.

Each task gets the first interval by which an ``alpha`` share of its work is
done in the LP, a processing time equal to ``gamma`` times the LP busy time
up to that interval, and becomes available once that interval ends. Every
processor then list-schedules its tasks in alpha-point order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import ratios, simulate
from .discretization import (
    SpeedGrid, TimeGrid, build_time_grid, compute_t_max, default_lambda, instance_speed_grid,
)
from .errors import CertificationError, ParameterError
from .lp import FractionalLpSolution, SolverConfig, build_lp, solve_lp
from .model import Instance, Schedule, TaskRef, objective, task_energy

FRACTION_TOL = 1e-9


@dataclass(frozen=True)
class AlphaParams:
    alpha: float
    gamma: float
    delta: float
    lam: float
    lambda_limit: float = math.inf

    def __post_init__(self):
        if not 0 < self.alpha < 1:
            raise ParameterError(f"alpha must lie in (0, 1), got {self.alpha}")
        if not self.gamma > 0:
            raise ParameterError(f"gamma must be positive, got {self.gamma}")
        if not self.lam < self.lambda_limit:
            raise ParameterError(
                f"lambda={self.lam} must stay below alpha * v_min / s_max = {self.lambda_limit}"
            )

    @classmethod
    def for_grids(cls, alpha, gamma, inst: Instance, speeds: SpeedGrid, times: TimeGrid):
        return cls(alpha, gamma, times.delta, times.lam, alpha * inst.v_min / speeds.s_max)


def alpha_point(fractions, alpha: float, tol: float = FRACTION_TOL) -> int:
    """First interval index by which the cumulative fraction reaches ``alpha``."""
    cum = np.cumsum(fractions)
    hit = np.nonzero(cum >= alpha - tol)[0]
    if hit.size == 0:
        raise CertificationError("alpha-point", alpha, float(cum[-1]) if cum.size else 0.0)
    return int(hit[0])


@dataclass(frozen=True)
class TaskPlan:
    ref: TaskRef
    alpha_index: int
    processing_time: float
    speed: float
    available_at: float


@dataclass
class AlphaPlan:
    tasks: dict[TaskRef, TaskPlan]
    priority: dict[int, list[TaskRef]]
    gate_on_alpha: bool = True

    def release_time(self, ref: TaskRef) -> float:
        return self.tasks[ref].available_at if self.gate_on_alpha else 0.0


def guarantee_variant(inst: Instance) -> str:
    if inst.precedence_pairs():
        return "general"
    if any(j.release > 0 for j in inst.jobs):
        return "no_prec"
    return "no_prec_no_release"


def build_plan(solution: FractionalLpSolution, params: AlphaParams) -> AlphaPlan:
    """Alpha-points, stretched processing times and per-processor priority lists.

    Without precedence and release dates the availability gate is dropped,
    since the tighter guarantee for that case relies on it.
    """
    model = solution.model
    inst, tau = model.inst, model.times.tau
    plans: dict[TaskRef, TaskPlan] = {}
    priority: dict[int, list[TaskRef]] = {}
    for ref, job, task in inst.tasks():
        if task.volume == 0:
            continue
        t_a = alpha_point(solution.fractions(ref), params.alpha)
        p = params.gamma * float(solution.busy_times(ref)[: t_a + 1].sum())
        if not p > 0:
            raise CertificationError("positive processing time", 0.0, p)
        plans[ref] = TaskPlan(ref, t_a, p, task.volume / p, tau[t_a + 1])
        priority.setdefault(task.processor, []).append(ref)
    for refs in priority.values():
        refs.sort(key=lambda r: (plans[r].alpha_index, r[0], r[1]))
    gate = guarantee_variant(inst) != "no_prec_no_release"
    return AlphaPlan(plans, priority, gate)


def list_schedule(inst: Instance, plan: AlphaPlan) -> Schedule:
    """Event-driven list scheduling along each processor's priority list.

    An idle processor starts the first not-yet-run task of its list that is
    available; Reduce tasks additionally wait for every Map task of their job.
    """
    durations = {ref: tp.processing_time for ref, tp in plan.tasks.items()}
    available = {ref: plan.release_time(ref) for ref in plan.tasks}
    return simulate.list_schedule(inst, durations, plan.priority, available)


@dataclass(frozen=True)
class BoundCheck:
    name: str
    lhs: float
    rhs: float

    @property
    def slack(self) -> float:
        return self.rhs - self.lhs

    def ok(self, tol: float) -> bool:
        return self.lhs <= self.rhs + tol * max(1.0, abs(self.rhs))


@dataclass
class Certificate:
    checks: list[BoundCheck] = field(default_factory=list)
    tol: float = 1e-6
    variant: str = "general"
    certified_regime: bool = True

    @property
    def failures(self) -> list[BoundCheck]:
        return [c for c in self.checks if not c.ok(self.tol)]

    @property
    def passed(self) -> bool:
        return not self.failures

    def summary(self) -> dict[str, tuple[int, int]]:
        """Per bound name: (checks run, failures)."""
        out: dict[str, tuple[int, int]] = {}
        for c in self.checks:
            key = c.name.split("[")[0]
            n, f = out.get(key, (0, 0))
            out[key] = (n + 1, f + (not c.ok(self.tol)))
        return out

    def to_csv(self) -> str:
        lines = ["bound,lhs,rhs,slack,ok"]
        for c in self.checks:
            lines.append(f"{c.name},{c.lhs!r},{c.rhs!r},{c.slack!r},{c.ok(self.tol)}")
        return "\n".join(lines) + "\n"


def certify_bounds(
    inst: Instance,
    solution: FractionalLpSolution,
    plan: AlphaPlan,
    schedule: Schedule,
    params: AlphaParams,
    tol: float = 1e-6,
    raise_on_failure: bool = True,
) -> Certificate:
    """Check the proven energy and objective guarantees on a concrete run.

    Besides the headline bounds it checks the intermediate facts the proof
    chains together: no alpha-point in the first interval, the priority-prefix
    load bound, and the Map completion bound.
    """
    alpha, gamma, beta = params.alpha, params.gamma, inst.beta
    tau = solution.model.times.tau
    factor = ratios.energy_augmentation_factor(alpha, gamma, beta)
    variant = guarantee_variant(inst)
    cert = Certificate(tol=tol, variant=variant, certified_regime=beta >= 2)

    total = 0.0
    for ref, tp in plan.tasks.items():
        v = inst.task(ref).volume
        e = task_energy(v, schedule.by_ref[ref].duration, beta)
        total += e
        cert.checks.append(BoundCheck(f"task-energy[{ref}]", e, factor * solution.task_energy(ref)))
        cert.checks.append(BoundCheck(f"alpha-point-after-first[{ref}]", 1.0, tp.alpha_index))
    cert.checks.append(BoundCheck("total-energy", total, factor * inst.energy_budget))

    for i, refs in plan.priority.items():
        load = 0.0
        for ref in refs:
            load += plan.tasks[ref].processing_time
            t_a = plan.tasks[ref].alpha_index
            cert.checks.append(BoundCheck(f"priority-prefix[{ref}]", load, gamma * tau[t_a + 1]))
    for ref, tp in plan.tasks.items():
        if inst.task(ref).is_map:
            cert.checks.append(
                BoundCheck(f"map-completion[{ref}]", schedule.completion(ref),
                           (gamma + 1) * tau[tp.alpha_index + 1])
            )

    bound = ratios.ratio_bound(alpha, gamma, params.delta, variant)
    cert.checks.append(BoundCheck("objective", objective(inst, schedule), bound * solution.objective))

    if raise_on_failure and cert.certified_regime and cert.failures:
        c = cert.failures[0]
        raise CertificationError(c.name, c.lhs, c.rhs)
    return cert


@dataclass
class AlgoResult:
    speeds: SpeedGrid
    times: TimeGrid
    params: AlphaParams
    solution: FractionalLpSolution
    plan: AlphaPlan
    schedule: Schedule
    certificate: Certificate

    @property
    def objective(self) -> float:
        return objective(self.solution.model.inst, self.schedule)


def run_algomr(
    inst: Instance,
    alpha: float | None = None,
    gamma: float | None = None,
    epsilon: float = 0.5,
    delta: float = 0.5,
    lam: float | None = None,
    t_max: float | None = None,
    solver: SolverConfig | None = None,
    raise_on_failure: bool = True,
) -> AlgoResult:
    """Full pipeline: grids, LP, alpha-point plan, list schedule, certificate.

    ``alpha`` defaults to the minimiser of the general no-augmentation bound
    and ``gamma`` to the stretch that needs no extra energy.
    """
    if alpha is None:
        alpha, _ = ratios.optimal_ratio(max(inst.beta, 2.0), "general")
    if gamma is None:
        gamma = ratios.no_augmentation_gamma(alpha, inst.beta)
    t_max = compute_t_max(inst) if t_max is None else t_max
    speeds = instance_speed_grid(inst, epsilon, t_max)
    if lam is None:
        lam = default_lambda(alpha, inst.v_min, speeds.s_max)
    times = build_time_grid(lam, delta, t_max)
    params = AlphaParams.for_grids(alpha, gamma, inst, speeds, times)
    solution = solve_lp(build_lp(inst, speeds, times), solver)
    if not solution.ok:
        raise RuntimeError(f"LP not solved: {solution.status} {solution.message}")
    plan = build_plan(solution, params)
    schedule = list_schedule(inst, plan)
    cert = certify_bounds(inst, solution, plan, schedule, params,
                          raise_on_failure=raise_on_failure)
    return AlgoResult(speeds, times, params, solution, plan, schedule, cert)
