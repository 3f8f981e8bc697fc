"""Convex relaxation of the problem restricted to one global job order.

For an order ``sigma`` and processing times ``p`` the relaxation bounds task
completions from below by

* release-anchored prefix sums along each processor (jobs in ``sigma`` order),
* a Map-to-Reduce chain inside each job,

and the job completion by its latest task. The energy constraint
``sum v**beta / p**(beta-1) <= E`` is the only nonlinear part.

:func:`solve_cp` minimises the weighted completion over ``p`` by outer
approximation: the energy of every task is replaced by the maximum of its
tangent lines, the resulting LP gives a lower bound, rescaling its ``p``
onto the energy surface gives a feasible point, and a tangent is added at
each new point until the two bounds meet.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np
import scipy.optimize
import scipy.sparse as sp

from . import simulate
from .errors import ParameterError
from .model import Instance, Schedule, TaskRef
from .orders import JobOrder


def processor_chains(inst: Instance, order: JobOrder) -> dict[int, list[TaskRef]]:
    """Tasks with work on each processor, in job order (Maps first within a job)."""
    pos = order.position
    chains: dict[int, list[TaskRef]] = {}
    for ref, _, task in inst.tasks():
        if task.volume > 0:
            chains.setdefault(task.processor, []).append(ref)
    for refs in chains.values():
        refs.sort(key=lambda r: (pos[r[0]], not inst.task(r).is_map, r[1]))
    return chains


def evaluate_completions(
    inst: Instance, order: JobOrder, p: Mapping[TaskRef, float]
) -> tuple[dict[TaskRef, float], dict[int, float]]:
    """Smallest task and job completions the relaxation allows for ``p``."""
    chain_end: dict[TaskRef, float] = {}
    for refs in processor_chains(inst, order).values():
        run = -math.inf
        for ref in refs:
            run = max(run, inst.job(ref[0]).release) + p[ref]
            chain_end[ref] = run
    C: dict[TaskRef, float] = {}
    for job in inst.jobs:
        for k in job.maps:
            ref = (job.id, k)
            C[ref] = chain_end.get(ref, job.release)
        last_map = max(C[(job.id, k)] for k in job.maps)
        for k in job.reduces:
            ref = (job.id, k)
            if ref in chain_end:
                C[ref] = max(chain_end[ref], last_map + p[ref])
            else:
                C[ref] = max(job.release, last_map)
    Cj = {job.id: max(C[(job.id, k)] for k in range(len(job.tasks))) for job in inst.jobs}
    return C, Cj


def weighted_completion(inst: Instance, Cj: Mapping[int, float]) -> float:
    return sum(j.weight * Cj[j.id] for j in inst.jobs)


def energy_of(inst: Instance, p: Mapping[TaskRef, float]) -> float:
    b = inst.beta
    return sum(inst.task(ref).volume ** b / t ** (b - 1) for ref, t in p.items())


def equal_energy_split(inst: Instance) -> dict[TaskRef, float]:
    """Processing times giving every task with work the same share of the budget."""
    refs = [ref for ref, _, t in inst.tasks() if t.volume > 0]
    share = inst.energy_budget / len(refs)
    b = inst.beta
    return {ref: inst.task(ref).volume * (inst.task(ref).volume / share) ** (1 / (b - 1))
            for ref in refs}


def scale_to_budget(inst: Instance, p: Mapping[TaskRef, float]) -> dict[TaskRef, float]:
    """Uniformly rescale ``p`` so it spends exactly the energy budget."""
    c = (energy_of(inst, p) / inst.energy_budget) ** (1 / (inst.beta - 1))
    return {ref: c * t for ref, t in p.items()}


@dataclass(frozen=True)
class CpConfig:
    tol: float = 1e-7
    max_iter: int = 400
    lp_tol: float = 1e-9


@dataclass
class CpSolution:
    order: JobOrder
    p: dict[TaskRef, float]
    C_task: dict[TaskRef, float]
    C_job: dict[int, float]
    objective: float
    lower_bound: float
    energy: float
    budget: float
    iterations: int
    converged: bool
    message: str = ""
    history: list[tuple[float, float]] = field(default_factory=list)

    @property
    def gap(self) -> float:
        """Relative distance between the feasible objective and the proven lower bound."""
        return (self.objective - self.lower_bound) / max(abs(self.objective), 1e-300)

    @property
    def energy_slack(self) -> float:
        return self.budget - self.energy

    def speeds(self, inst: Instance) -> dict[TaskRef, float]:
        return {ref: inst.task(ref).volume / t for ref, t in self.p.items()}

    def to_csv(self, inst: Instance) -> str:
        b = inst.beta
        lines = ["job_id,task_index,p,speed,energy,completion"]
        for (j, k), t in sorted(self.p.items()):
            v = inst.task((j, k)).volume
            lines.append(f"{j},{k},{t!r},{v / t!r},{v**b / t ** (b - 1)!r},{self.C_task[(j, k)]!r}")
        lines.append("")
        lines.append(f"# objective,{self.objective!r}")
        lines.append(f"# lower_bound,{self.lower_bound!r}")
        lines.append(f"# gap,{self.gap!r}")
        lines.append(f"# energy,{self.energy!r}")
        lines.append(f"# energy_slack,{self.energy_slack!r}")
        lines.append(f"# iterations,{self.iterations}")
        lines.append(f"# converged,{self.converged}")
        return "\n".join(lines) + "\n"


class _LpFailure(RuntimeError):
    pass


class _OuterLp:
    """LP over (p, e, chain, C, Cj) with tangent cuts on each task's energy."""

    def __init__(self, inst: Instance, order: JobOrder):
        self.inst = inst
        b, E = inst.beta, inst.energy_budget
        self.refs = [ref for ref, _, t in inst.tasks() if t.volume > 0]
        # times are measured in units of the mean equal-split duration, energy in units of E
        self.t0 = float(np.mean(list(equal_energy_split(inst).values())))
        t0 = self.t0
        all_refs = [ref for ref, _, _ in inst.tasks()]
        K, T = len(self.refs), len(all_refs)
        jobs = sorted(inst.jobs, key=lambda j: j.id)
        self.ip = {ref: k for k, ref in enumerate(self.refs)}
        self.ie = {ref: K + k for k, ref in enumerate(self.refs)}
        self.im = {ref: 2 * K + k for k, ref in enumerate(self.refs)}
        self.ic = {ref: 3 * K + k for k, ref in enumerate(all_refs)}
        self.ij = {j.id: 3 * K + T + k for k, j in enumerate(jobs)}
        self.nv = 3 * K + T + len(jobs)
        self.cost = np.zeros(self.nv)
        w_max = max(j.weight for j in jobs)
        for j in jobs:
            self.cost[self.ij[j.id]] = j.weight / w_max
        self.obj_scale = w_max * t0
        lb = np.zeros(self.nv)
        for ref in self.refs:
            v = inst.task(ref).volume
            lb[self.ip[ref]] = v * (v / E) ** (1 / (b - 1)) / t0
        self.bounds = np.column_stack([lb, np.full(self.nv, np.inf)])

        rows, cols, vals, rhs = [], [], [], []

        def ge(entries, r):  # sum(coef * x) >= r, stored as -sum <= -r
            i = len(rhs)
            for c, v in entries:
                rows.append(i)
                cols.append(c)
                vals.append(-v)
            rhs.append(-r)

        for refs in processor_chains(inst, order).values():
            prev = None
            for ref in refs:
                rel = inst.job(ref[0]).release / t0
                ge([(self.im[ref], 1), (self.ip[ref], -1)], rel)
                if prev is not None:
                    ge([(self.im[ref], 1), (self.im[prev], -1), (self.ip[ref], -1)], 0.0)
                prev = ref
        for job in inst.jobs:
            for k in range(len(job.tasks)):
                ref = (job.id, k)
                task = job.tasks[k]
                if task.volume > 0:
                    ge([(self.ic[ref], 1), (self.im[ref], -1)], 0.0)
                else:
                    ge([(self.ic[ref], 1)], job.release / t0)
                if not task.is_map:
                    for m in job.maps:
                        terms = [(self.ic[ref], 1), (self.ic[(job.id, m)], -1)]
                        if task.volume > 0:
                            terms.append((self.ip[ref], -1))
                        ge(terms, 0.0)
                ge([(self.ij[job.id], 1), (self.ic[ref], -1)], 0.0)
        # energy budget
        i = len(rhs)
        for ref in self.refs:
            rows.append(i)
            cols.append(self.ie[ref])
            vals.append(1.0)
        rhs.append(1.0)
        self.base = (rows, cols, vals, rhs)
        self.cuts: list[tuple[int, int, float, float]] = []  # (p col, e col, slope, intercept)

    def add_cut(self, ref: TaskRef, p0: float):
        b = self.inst.beta
        v = self.inst.task(ref).volume
        E, t0 = self.inst.energy_budget, self.t0
        f = v**b * p0 ** (1 - b) / E
        slope = (1 - b) * v**b * p0 ** (-b) * t0 / E
        self.cuts.append((self.ip[ref], self.ie[ref], slope, f - slope * p0 / t0))

    def solve(self, lp_tol: float):
        rows, cols, vals, rhs = (list(x) for x in self.base)
        for pc, ec, slope, icpt in self.cuts:
            # e >= slope * p + icpt  ->  slope * p - e <= -icpt
            i = len(rhs)
            rows += [i, i]
            cols += [pc, ec]
            vals += [slope, -1.0]
            rhs.append(-icpt)
        A = sp.csr_matrix((vals, (rows, cols)), shape=(len(rhs), self.nv))
        res = scipy.optimize.linprog(
            self.cost, A_ub=A, b_ub=np.asarray(rhs), bounds=self.bounds, method="highs",
            options={"primal_feasibility_tolerance": lp_tol, "dual_feasibility_tolerance": lp_tol},
        )
        if res.status != 0:
            raise _LpFailure(res.message)
        p = {ref: float(res.x[self.ip[ref]]) * self.t0 for ref in self.refs}
        return float(res.fun) * self.obj_scale, p


def solve_cp(inst: Instance, order: JobOrder, cfg: CpConfig | None = None) -> CpSolution:
    cfg = cfg or CpConfig()
    order.check(inst)
    if not inst.energy_budget > 0:
        raise ParameterError("energy budget must be positive")
    lp = _OuterLp(inst, order)
    p0 = equal_energy_split(inst)
    for ref, t in p0.items():
        for mult in (0.25, 0.5, 1.0, 2.0, 4.0):
            lp.add_cut(ref, mult * t)

    best_p = p0
    best = weighted_completion(inst, evaluate_completions(inst, order, p0)[1])
    lower = -math.inf
    history = []
    it = 0
    converged = False
    msg = ""
    for it in range(1, cfg.max_iter + 1):
        try:
            lb, p_lp = lp.solve(cfg.lp_tol)
        except _LpFailure as exc:
            msg = f"outer LP failed at iteration {it}: {exc}"
            break
        lower = max(lower, lb)
        p_feas = scale_to_budget(inst, p_lp)
        val = weighted_completion(inst, evaluate_completions(inst, order, p_feas)[1])
        if val < best:
            best, best_p = val, p_feas
        history.append((lower, best))
        if best - lower <= cfg.tol * abs(best):
            converged = True
            break
        for ref in lp.refs:
            lp.add_cut(ref, p_lp[ref])
            lp.add_cut(ref, p_feas[ref])

    C, Cj = evaluate_completions(inst, order, best_p)
    if not converged and not msg:
        msg = f"gap {(best - lower) / abs(best):.3g} after {it} iterations"
    return CpSolution(
        order, dict(best_p), C, Cj, best, min(lower, best), energy_of(inst, best_p),
        inst.energy_budget, it,
        converged, msg, history,
    )


def closed_form_chain(n: int, E: float, beta: float = 2.0) -> tuple[list[float], float]:
    """Optimal speeds and objective for ``n`` unit jobs in sequence on one processor.

    Position ``j`` weighs ``n - j + 1`` completions; only ``beta = 2`` has a
    closed form.
    """
    if beta != 2:
        raise ParameterError("closed form only exists for beta = 2")
    roots = [math.sqrt(n - j + 1) for j in range(1, n + 1)]
    total = sum(roots)
    speeds = [E * r / total for r in roots]
    return speeds, sum(math.sqrt(i) for i in range(1, n + 1)) ** 2 / E


def schedule_from_order(
    inst: Instance, order: JobOrder, p: Mapping[TaskRef, float], mode: str = "fixed"
) -> Schedule:
    """Feasible schedule with processing times ``p``.

    ``mode="fixed"`` keeps the job order on every processor, so the result
    can never beat the relaxation. ``mode="list"`` lets an idle processor
    start the highest-priority task that is released and, for a Reduce
    task, whose Map tasks are done.
    """
    order.check(inst)
    durations = dict(p)
    if mode == "fixed":
        return simulate.fixed_order_schedule(inst, durations, order.position)
    if mode == "list":
        pos = order.position
        priority: dict[int, list[TaskRef]] = {}
        for ref in sorted(durations, key=lambda r: (pos[r[0]], not inst.task(r).is_map, r[1])):
            priority.setdefault(inst.task(ref).processor, []).append(ref)
        return simulate.list_schedule(inst, durations, priority)
    raise ParameterError(f"unknown mode {mode!r}")
