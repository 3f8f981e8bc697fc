"""FCFS versus Smith's rule, with and without the fixed-order relaxation.

Instance ``s`` of size ``n`` uses generator seed ``base_seed + s``.
Every policy list-schedules its order: an idle processor starts the
highest-priority task that is released and, for a Reduce task, whose Map
tasks are done. Plain policies use equal-energy-split processing times,
the relaxation-based ones the processing times of the convex program for
that order. The convex program's value is reported as the lower bound.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field, replace
from importlib import metadata
from statistics import mean

from . import cp
from .errors import ParameterError
from .generator import GenConfig, generate_instance
from .model import energy, objective, validate_schedule
from .orders import fcfs_order, smith_order

POLICIES = ("FCFS", "SR", "CP(FCFS)", "CP(SR)")
FIELDS = ("n", "seed", "policy", "objective", "energy", "lb", "ratio", "note")


@dataclass(frozen=True)
class ExperimentConfig:
    ns: tuple[int, ...] = (3, 5, 8)
    seeds: int = 10
    base: GenConfig = field(default_factory=GenConfig)
    policies: tuple[str, ...] = POLICIES
    cp: cp.CpConfig = field(default_factory=cp.CpConfig)

    def __post_init__(self):
        unknown = set(self.policies) - set(POLICIES)
        if unknown:
            raise ParameterError(f"unknown policies {sorted(unknown)}")

    @classmethod
    def desk(cls, seeds: int = 10) -> "ExperimentConfig":
        """Ten processors, six Map and three Reduce tasks per job, budget 100."""
        return cls(ns=(3, 5, 8), seeds=seeds,
                   base=GenConfig(m=10, maps_per_job=6, reduces_per_job=3, energy_budget=100.0))

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        base = dict(d.get("base", {}))
        for key in ("map_work", "reduce_work", "weight_range"):
            if key in base:
                base[key] = tuple(base[key])
        base.pop("rng", None)
        return cls(
            ns=tuple(d.get("ns", cls.ns)),
            seeds=int(d.get("seeds", cls.seeds)),
            base=GenConfig(**base),
            policies=tuple(d.get("policies", POLICIES)),
            cp=cp.CpConfig(**d.get("cp", {})),
        )

    def as_dict(self) -> dict:
        return {
            "ns": list(self.ns), "seeds": self.seeds, "base": self.base.as_dict(),
            "policies": list(self.policies),
            "cp": {"tol": self.cp.tol, "max_iter": self.cp.max_iter},
        }


@dataclass(frozen=True)
class Row:
    n: int
    seed: int
    policy: str
    objective: float
    energy: float
    lb: float
    ratio: float
    note: str = ""


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    rows: list[Row]

    def means(self) -> dict[tuple[int, str], dict[str, float]]:
        """Per (n, policy): mean objective, mean lower bound and mean ratio."""
        out = {}
        keys = sorted({(r.n, r.policy) for r in self.rows})
        for key in keys:
            cell = [r for r in self.rows if (r.n, r.policy) == key]
            out[key] = {
                "objective": mean(r.objective for r in cell),
                "lb": mean(r.lb for r in cell),
                "ratio": mean(r.ratio for r in cell),
            }
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(f"# config: {json.dumps(self.config.as_dict(), sort_keys=True)}\n")
        buf.write(f"# seed rule: generator seed = base.seed + repetition index\n")
        buf.write(f"# code version: {_version()}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(FIELDS)
        for r in self.rows:
            w.writerow([r.n, r.seed, r.policy, repr(r.objective), repr(r.energy), repr(r.lb),
                        repr(r.ratio), r.note])
        return buf.getvalue()

    def means_csv(self) -> str:
        lines = ["n,policy,mean_objective,mean_lb,mean_ratio"]
        for (n, pol), m in self.means().items():
            lines.append(f"{n},{pol},{m['objective']!r},{m['lb']!r},{m['ratio']!r}")
        return "\n".join(lines) + "\n"


def _version() -> str:
    try:
        return metadata.version("mrenergy")
    except metadata.PackageNotFoundError:
        return "unknown"


def run_instance(inst, policies, cp_cfg: cp.CpConfig) -> list[tuple[str, float, float, float, str]]:
    """(policy, objective, energy, lower bound, note) for each requested policy.

    The relaxation is solved once per order and serves as the lower bound
    of both the plain and the relaxation-based row for that order.
    """
    out = []
    for name, order in (("FCFS", fcfs_order(inst)), ("SR", smith_order(inst))):
        wanted = [pol for pol in (name, f"CP({name})") if pol in policies]
        if not wanted:
            continue
        sol = cp.solve_cp(inst, order, cp_cfg)
        for pol in wanted:
            p = sol.p if pol.startswith("CP(") else cp.equal_energy_split(inst)
            sched = cp.schedule_from_order(inst, order, p, mode="list")
            notes = [] if sol.converged else [f"cp: {sol.message}"]
            problems = validate_schedule(inst, sched)
            if problems:
                notes.append(f"invalid: {problems[0].rule}")
            obj = objective(inst, sched)
            if obj < sol.lower_bound * (1 - 1e-9):
                notes.append("list schedule leaves the order")
            out.append((pol, obj, energy(inst, sched), sol.lower_bound, "; ".join(notes)))
    return out


def run_experiment(config: ExperimentConfig) -> ExperimentResult:
    rows = []
    for n in config.ns:
        for s in range(config.seeds):
            seed = config.base.seed + s
            inst = generate_instance(replace(config.base, n=n, seed=seed))
            for pol, obj, en, lb, note in run_instance(inst, config.policies, config.cp):
                rows.append(Row(n, seed, pol, obj, en, lb, obj / lb, note))
    rows.sort(key=lambda r: (r.n, r.seed, POLICIES.index(r.policy)))
    return ExperimentResult(config, rows)
