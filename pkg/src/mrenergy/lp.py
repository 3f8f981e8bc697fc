"""Interval-indexed LP relaxation over (task, grid speed, time interval).

``y[task, s, t]`` is the share of interval ``I_t`` during which the task runs at
grid speed ``s``; ``y * |I_t| * s / v`` is the fraction of its work done there.
Rows are tagged with the constraint family they belong to:

    1  every task is fully processed
    2  per processor and interval, busy share <= 1
    3  task completion lower bound (mean-busy-time style)
    4  job completion >= task completion
    5  energy budget
    6  Map fraction done by every prefix >= Reduce fraction done
    7  no processing before the release date (variable bounds)
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
import scipy.optimize
import scipy.sparse as sp

from .discretization import SpeedGrid, TimeGrid
from .errors import ParameterError
from .model import Instance, TaskRef

LE, GE, EQ = "<=", ">=", "="


@dataclass
class LpModel:
    inst: Instance
    speeds: SpeedGrid
    times: TimeGrid
    y_index: list[tuple[TaskRef, int, int]]
    c_task: dict[TaskRef, int]
    c_job: dict[int, int]
    cost: np.ndarray
    A: sp.csr_matrix
    senses: list[str]
    rhs: np.ndarray
    tags: list[int]
    lb: np.ndarray
    ub: np.ndarray
    infeasible_by_construction: bool = False

    @property
    def num_vars(self) -> int:
        return len(self.cost)

    @property
    def num_rows(self) -> int:
        return len(self.senses)

    def row_count(self, tag: int) -> int:
        return sum(1 for t in self.tags if t == tag)

    def y_columns(self, ref: TaskRef) -> list[int]:
        return self._y_by_task.get(ref, [])

    def __post_init__(self):
        self._y_by_task: dict[TaskRef, list[int]] = {}
        for col, (ref, _, _) in enumerate(self.y_index):
            self._y_by_task.setdefault(ref, []).append(col)


class _Rows:
    def __init__(self):
        self.r, self.c, self.v = [], [], []
        self.senses, self.rhs, self.tags = [], [], []

    def add(self, cols, vals, sense, rhs, tag):
        i = len(self.senses)
        self.r.extend([i] * len(cols))
        self.c.extend(cols)
        self.v.extend(vals)
        self.senses.append(sense)
        self.rhs.append(rhs)
        self.tags.append(tag)


def build_lp(inst: Instance, speeds: SpeedGrid, times: TimeGrid) -> LpModel:
    if len(speeds) == 0:
        raise ParameterError("empty speed grid")
    tau, length, u = times.tau, times.lengths, times.u
    beta = inst.beta

    y_index: list[tuple[TaskRef, int, int]] = []
    lb: list[float] = []
    ub: list[float] = []
    task_refs = [(ref, job, task) for ref, job, task in inst.tasks()]
    infeasible = False
    for ref, job, task in task_refs:
        if task.volume == 0:
            continue
        live = 0
        for si in range(len(speeds)):
            for t in range(u + 1):
                if tau[t + 1] <= job.release:
                    continue
                y_index.append((ref, si, t))
                lb.append(0.0)
                pinned = tau[t] < job.release
                ub.append(0.0 if pinned else math.inf)
                live += not pinned
        if live == 0:
            infeasible = True
    n_y = len(y_index)
    c_task = {ref: n_y + k for k, (ref, _, _) in enumerate(task_refs)}
    jobs = sorted(inst.jobs, key=lambda j: j.id)
    c_job = {j.id: n_y + len(task_refs) + k for k, j in enumerate(jobs)}
    n_var = n_y + len(task_refs) + len(jobs)
    lb += [0.0] * (n_var - n_y)
    ub += [math.inf] * (n_var - n_y)

    cost = np.zeros(n_var)
    for j in jobs:
        cost[c_job[j.id]] = j.weight

    cols_of: dict[TaskRef, list[int]] = {}
    for col, (ref, _, _) in enumerate(y_index):
        cols_of.setdefault(ref, []).append(col)

    def frac_coef(ref, col):
        _, si, t = y_index[col]
        return length[t] * speeds.speeds[si] / inst.task(ref).volume

    rows = _Rows()
    # (1)
    for ref, _, task in task_refs:
        if task.volume > 0:
            cols = cols_of.get(ref, [])
            rows.add(cols, [frac_coef(ref, c) for c in cols], EQ, 1.0, 1)
    # (2)
    by_proc_t: dict[tuple[int, int], list[int]] = {}
    for col, (ref, _, t) in enumerate(y_index):
        by_proc_t.setdefault((inst.task(ref).processor, t), []).append(col)
    for i in range(1, inst.num_processors + 1):
        for t in range(u + 1):
            cols = by_proc_t.get((i, t), [])
            rows.add(cols, [1.0] * len(cols), LE, 1.0, 2)
    # (3)
    for ref, _, task in task_refs:
        if task.volume == 0:
            continue
        cols = cols_of.get(ref, [])
        vals = []
        for c in cols:
            _, si, t = y_index[c]
            f = frac_coef(ref, c)
            if t == 0:
                vals.append(-0.5 * (f + length[0]))
            else:
                vals.append(-(f * tau[t] + 0.5 * length[t]))
        rows.add(cols + [c_task[ref]], vals + [1.0], GE, 0.0, 3)
    # (4)
    for ref, job, _ in task_refs:
        rows.add([c_job[job.id], c_task[ref]], [1.0, -1.0], GE, 0.0, 4)
    # (5)
    if math.isfinite(inst.energy_budget):
        cols = list(range(n_y))
        vals = [length[t] * speeds.speeds[si] ** beta for (_, si, t) in y_index]
        rows.add(cols, vals, LE, inst.energy_budget, 5)
    # (6)
    for a, b in inst.precedence_pairs():
        for ell in range(u + 1):
            ca = [c for c in cols_of.get(a, []) if y_index[c][2] <= ell]
            cb = [c for c in cols_of.get(b, []) if y_index[c][2] <= ell]
            rows.add(
                ca + cb,
                [frac_coef(a, c) for c in ca] + [-frac_coef(b, c) for c in cb],
                GE, 0.0, 6,
            )

    A = sp.csr_matrix((rows.v, (rows.r, rows.c)), shape=(len(rows.senses), n_var))
    return LpModel(
        inst, speeds, times, y_index, c_task, c_job, cost, A, rows.senses,
        np.asarray(rows.rhs, dtype=float), rows.tags, np.asarray(lb), np.asarray(ub),
        infeasible,
    )


# -- solver contract ---------------------------------------------------------

@dataclass(frozen=True)
class SolverConfig:
    backend: str = "highs"
    rel_tol: float = 1e-6
    feas_tol: float = 1e-7
    time_limit: float | None = None


@dataclass(frozen=True)
class RawResult:
    x: np.ndarray | None
    objective: float
    status: str  # "optimal" | "infeasible" | "error"
    message: str = ""


Backend = Callable[[np.ndarray, sp.csr_matrix, list, np.ndarray, np.ndarray, np.ndarray, SolverConfig], RawResult]

BACKENDS: dict[str, Backend] = {}


def register_backend(name: str, fn: Backend) -> None:
    BACKENDS[name] = fn


def _highs(cost, A, senses, rhs, lb, ub, cfg: SolverConfig) -> RawResult:
    senses = np.asarray(senses)
    le, ge, eq = senses == LE, senses == GE, senses == EQ
    A_ub = sp.vstack([A[le], -A[ge]]).tocsr()
    b_ub = np.concatenate([rhs[le], -rhs[ge]])
    options = {
        "primal_feasibility_tolerance": cfg.feas_tol,
        "dual_feasibility_tolerance": cfg.feas_tol,
    }
    if cfg.time_limit is not None:
        options["time_limit"] = cfg.time_limit
    res = scipy.optimize.linprog(
        cost,
        A_ub=A_ub if A_ub.shape[0] else None,
        b_ub=b_ub if A_ub.shape[0] else None,
        A_eq=A[eq] if eq.any() else None,
        b_eq=rhs[eq] if eq.any() else None,
        bounds=np.column_stack([lb, ub]),
        method="highs",
        options=options,
    )
    if res.status == 0:
        return RawResult(res.x, float(res.fun), "optimal", res.message)
    if res.status == 2:
        return RawResult(None, math.nan, "infeasible", res.message)
    return RawResult(res.x, math.nan, "error", res.message)


register_backend("highs", _highs)


@dataclass
class FractionalLpSolution:
    model: LpModel
    x: np.ndarray | None
    objective: float
    status: str  # "optimal" | "infeasible" | "tolerance-failure"
    residuals: dict[int, float] = field(default_factory=dict)
    message: str = ""

    @property
    def ok(self) -> bool:
        return self.status == "optimal"

    def C_task(self, ref: TaskRef) -> float:
        return float(self.x[self.model.c_task[ref]])

    def C_job(self, job_id: int) -> float:
        return float(self.x[self.model.c_job[job_id]])

    def y(self, ref: TaskRef) -> dict[tuple[int, int], float]:
        """Nonzero ``y`` values of one task keyed by (speed index, interval)."""
        m = self.model
        return {
            m.y_index[c][1:]: float(self.x[c]) for c in m.y_columns(ref) if self.x[c] > 0
        }

    def _per_interval(self, ref: TaskRef, weight) -> np.ndarray:
        m = self.model
        out = np.zeros(m.times.u + 1)
        lengths = m.times.lengths
        for c in m.y_columns(ref):
            _, si, t = m.y_index[c]
            out[t] += self.x[c] * lengths[t] * weight(m.speeds.speeds[si])
        return out

    def fractions(self, ref: TaskRef) -> np.ndarray:
        """Fraction of the task's work done in each interval."""
        v = self.model.inst.task(ref).volume
        return self._per_interval(ref, lambda s: s / v)

    def busy_times(self, ref: TaskRef) -> np.ndarray:
        """Processing time the task receives in each interval."""
        return self._per_interval(ref, lambda s: 1.0)

    def task_energy(self, ref: TaskRef) -> float:
        beta = self.model.inst.beta
        return float(self._per_interval(ref, lambda s: s**beta).sum())


def residuals(model: LpModel, x: np.ndarray) -> dict[int, float]:
    """Largest violation of each constraint family at ``x``."""
    ax = model.A @ x
    out: dict[int, float] = {}
    for k, (sense, b, tag) in enumerate(zip(model.senses, model.rhs, model.tags)):
        if sense == LE:
            viol = ax[k] - b
        elif sense == GE:
            viol = b - ax[k]
        else:
            viol = abs(ax[k] - b)
        out[tag] = max(out.get(tag, 0.0), float(viol))
    out[7] = float(np.max(x - model.ub, initial=0.0))
    out[8] = float(np.max(-x, initial=0.0))
    return out


def solve_lp(model: LpModel, config: SolverConfig | None = None) -> FractionalLpSolution:
    cfg = config or SolverConfig()
    if model.infeasible_by_construction:
        return FractionalLpSolution(model, None, math.nan, "infeasible",
                                    message="a task has no admissible interval")
    backend = BACKENDS[cfg.backend]
    raw = backend(model.cost, model.A, model.senses, model.rhs, model.lb, model.ub, cfg)
    if raw.status == "infeasible":
        return FractionalLpSolution(model, None, math.nan, "infeasible", message=raw.message)
    if raw.x is None or raw.status != "optimal":
        return FractionalLpSolution(model, raw.x, math.nan, "tolerance-failure",
                                    message=raw.message)
    res = residuals(model, raw.x)
    x = np.clip(raw.x, 0.0, None)
    scale = max(1.0, float(np.abs(model.rhs).max(initial=0.0)))
    status = "optimal" if max(res.values()) <= 10 * cfg.feas_tol * scale else "tolerance-failure"
    return FractionalLpSolution(model, x, float(model.cost @ x), status, res, raw.message)


# -- export ------------------------------------------------------------------

def to_mps(model: LpModel, name: str = "MRLP") -> str:
    """Free-format MPS text of the model."""
    names = [f"y_{j}_{k}_{si}_{t}" for (j, k), si, t in model.y_index]
    names += [""] * (model.num_vars - len(names))
    for (j, k), col in model.c_task.items():
        names[col] = f"C_{j}_{k}"
    for jid, col in model.c_job.items():
        names[col] = f"CJ_{jid}"
    rnames = [f"R{tag}_{k}" for k, tag in enumerate(model.tags)]
    kind = {LE: "L", GE: "G", EQ: "E"}
    lines = [f"NAME {name}", "ROWS", " N OBJ"]
    lines += [f" {kind[s]} {r}" for s, r in zip(model.senses, rnames)]
    lines.append("COLUMNS")
    csc = model.A.tocsc()
    for c in range(model.num_vars):
        if model.cost[c]:
            lines.append(f" {names[c]} OBJ {model.cost[c]!r}")
        for k in range(csc.indptr[c], csc.indptr[c + 1]):
            lines.append(f" {names[c]} {rnames[csc.indices[k]]} {csc.data[k]!r}")
    lines.append("RHS")
    lines += [f" RHS {r} {b!r}" for r, b in zip(rnames, model.rhs) if b]
    lines.append("BOUNDS")
    for c in range(model.num_vars):
        if model.ub[c] == 0:
            lines.append(f" FX BND {names[c]} 0")
    lines.append("ENDATA")
    return "\n".join(lines) + "\n"
