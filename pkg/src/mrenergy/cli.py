"""Command-line entry point; every numeric result is written as CSV.

Exit codes: 0 success, 1 validation failure, 2 certification failure,
3 bad input or refused request.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

from . import cp, ratios
from .alpha import run_algomr
from .discretization import (
    build_time_grid, compute_t_max, default_lambda, instance_speed_grid,
)
from .errors import CertificationError, GuardError, ParameterError, ScheduleError
from .experiments import ExperimentConfig, run_experiment
from .generator import GenConfig, generate_instance
from .lp import build_lp, solve_lp, to_mps
from .model import validate_instance, validate_schedule
from .oracle import OracleLimits, bracketing_speeds, brute_force_oracle
from .orders import (
    JobOrder, gen_chain_instance, gen_fcfs_gap_instance, gen_sr_gap_instance, order_by_name,
)
from .serialize import dumps_instance, dumps_schedule, load_instance, load_schedule

OK, INVALID, UNCERTIFIED, BAD_INPUT = 0, 1, 2, 3


def _emit(text: str, path: str | None) -> None:
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def _order(inst, args) -> JobOrder:
    if args.order == "file":
        if not args.order_file:
            raise ParameterError("--order file needs --order-file")
        ids = Path(args.order_file).read_text().replace(",", " ").split()
        order = JobOrder(tuple(int(x) for x in ids))
        order.check(inst)
        return order
    return order_by_name(inst, args.order)


def cmd_generate(args) -> int:
    if args.family == "fcfs-gap":
        inst = gen_fcfs_gap_instance(args.n, args.eps)
    elif args.family == "sr-gap":
        inst = gen_sr_gap_instance(args.n, args.eps, args.r)
    elif args.family == "chain":
        inst = gen_chain_instance(args.n, args.energy if args.energy is not None else 1.0)
    else:
        cfg = GenConfig()
        if args.config:
            d = json.loads(Path(args.config).read_text())
            d.pop("rng", None)
            for key in ("map_work", "reduce_work", "weight_range"):
                if key in d:
                    d[key] = tuple(d[key])
            cfg = GenConfig(**d)
        overrides = {
            "m": args.m, "n": args.n, "maps_per_job": args.maps, "reduces_per_job": args.reduces,
            "energy_budget": args.energy, "beta": args.beta, "seed": args.seed,
            "release": args.release,
        }
        cfg = replace(cfg, **{k: v for k, v in overrides.items() if v is not None})
        inst = generate_instance(cfg)
    _emit(dumps_instance(inst), args.output)
    return OK


def cmd_validate(args) -> int:
    inst = load_instance(args.instance)
    problems = validate_instance(inst)
    if args.schedule and not problems:
        problems = validate_schedule(inst, load_schedule(inst, args.schedule), args.budget)
    lines = ["rule,field,detail"] + [f"{v.rule},{v.field},\"{v.detail}\"" for v in problems]
    _emit("\n".join(lines) + "\n", args.output)
    return INVALID if problems else OK


def cmd_solve_lp(args) -> int:
    inst = load_instance(args.instance)
    t_max = compute_t_max(inst)
    speeds = instance_speed_grid(inst, args.epsilon, t_max)
    lam = args.lam if args.lam is not None else default_lambda(args.alpha, inst.v_min, speeds.s_max)
    times = build_time_grid(lam, args.delta, t_max)
    model = build_lp(inst, speeds, times)
    if args.mps:
        Path(args.mps).write_text(to_mps(model))
    sol = solve_lp(model)
    lines = ["job_id,task_index,lp_completion,lp_energy"]
    if sol.ok:
        for ref, _, _ in inst.tasks():
            lines.append(f"{ref[0]},{ref[1]},{sol.C_task(ref)!r},{sol.task_energy(ref)!r}")
    lines += ["", f"# status,{sol.status}", f"# objective,{sol.objective!r}",
              f"# variables,{model.A.shape[1]}", f"# rows,{model.A.shape[0]}"]
    _emit("\n".join(lines) + "\n", args.output)
    return OK if sol.ok else INVALID


def cmd_schedule_alpha(args) -> int:
    inst = load_instance(args.instance)
    res = run_algomr(inst, alpha=args.alpha, gamma=args.gamma, epsilon=args.epsilon,
                     delta=args.delta, lam=args.lam, raise_on_failure=False)
    _emit(dumps_schedule(inst, res.schedule), args.output)
    if args.certificate:
        Path(args.certificate).write_text(res.certificate.to_csv())
    for name, (count, failed) in res.certificate.summary().items():
        print(f"{name}: {count - failed}/{count} hold", file=sys.stderr)
    if validate_schedule(inst, res.schedule, inst.energy_budget * ratios.energy_augmentation_factor(
            res.params.alpha, res.params.gamma, inst.beta)):
        return INVALID
    if res.certificate.certified_regime and not res.certificate.passed:
        return UNCERTIFIED
    return OK


def cmd_solve_cp(args) -> int:
    inst = load_instance(args.instance)
    sol = cp.solve_cp(inst, _order(inst, args), cp.CpConfig(tol=args.tol, max_iter=args.max_iter))
    _emit(sol.to_csv(inst), args.output)
    if not sol.converged:
        print(f"not converged: {sol.message}", file=sys.stderr)
        return INVALID
    return OK


def cmd_schedule_order(args) -> int:
    inst = load_instance(args.instance)
    order = _order(inst, args)
    if args.processing == "cp":
        p = cp.solve_cp(inst, order, cp.CpConfig(tol=args.tol)).p
    else:
        p = cp.equal_energy_split(inst)
    sched = cp.schedule_from_order(inst, order, p, mode=args.mode)
    _emit(dumps_schedule(inst, sched), args.output)
    return INVALID if validate_schedule(inst, sched) else OK


def cmd_ratios(args) -> int:
    betas = args.beta or list(ratios.TABLE_BETAS)
    lines = ["beta,variant,alpha_star,ratio"]
    for row in ratios.table1(betas):
        lines.append(f"{row['beta']},{row['variant']},{row['alpha_star']:.6f},{row['ratio']:.6f}")
    _emit("\n".join(lines) + "\n", args.output)
    return OK


def cmd_tradeoff(args) -> int:
    betas = args.beta or list(ratios.FIGURE_BETAS)
    levels = [float(x) for x in args.levels.split(",")] if args.levels else None
    lines = ["beta,augmentation_pct,ratio"]
    for beta in betas:
        for ratio, pct in ratios.tradeoff_curve(beta, levels):
            lines.append(f"{beta},{pct:g},{ratio:.6f}")
    _emit("\n".join(lines) + "\n", args.output)
    return OK


def cmd_experiment(args) -> int:
    if args.config:
        cfg = ExperimentConfig.from_dict(json.loads(Path(args.config).read_text()))
    else:
        cfg = ExperimentConfig.desk()
    if args.seeds is not None:
        cfg = replace(cfg, seeds=args.seeds)
    res = run_experiment(cfg)
    _emit(res.to_csv(), args.output)
    if args.means:
        Path(args.means).write_text(res.means_csv())
    return INVALID if any("invalid" in r.note for r in res.rows) else OK


def cmd_oracle(args) -> int:
    inst = load_instance(args.instance)
    jobs, tasks, nspeeds = (int(x) for x in args.limits.split(","))
    limits = OracleLimits(jobs, tasks, nspeeds)
    if args.speeds:
        speeds = [float(x) for x in args.speeds.split(",")]
    else:
        speeds = bracketing_speeds(instance_speed_grid(inst, args.epsilon), inst, nspeeds)
    found = brute_force_oracle(inst, speeds, limits)
    if found is None:
        _emit("# no schedule fits the energy budget\n", args.output)
        return INVALID
    value, sched = found
    _emit(dumps_schedule(inst, sched) + f"# objective,{value!r}\n", args.output)
    return OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="mrenergy", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, help_text, instance=True):
        p = sub.add_parser(name, help=help_text)
        if instance:
            p.add_argument("instance", help="instance JSON file")
        p.add_argument("-o", "--output", help="write here instead of stdout")
        p.set_defaults(fn=fn)
        return p

    def add_order(p):
        p.add_argument("--order", choices=("fcfs", "sr", "file"), default="fcfs")
        p.add_argument("--order-file", help="job ids, whitespace or comma separated")
        p.add_argument("--tol", type=float, default=1e-7)

    p = add("generate", cmd_generate, "write a seeded random or structured instance", False)
    p.add_argument("--config", help="JSON generator settings")
    p.add_argument("--family", choices=("random", "fcfs-gap", "sr-gap", "chain"), default="random")
    p.add_argument("--m", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--maps", type=int)
    p.add_argument("--reduces", type=int)
    p.add_argument("--energy", type=float)
    p.add_argument("--beta", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--release", choices=("bernoulli", "zero"))
    p.add_argument("--eps", type=float, default=1e-4)
    p.add_argument("--r", type=float)

    p = add("validate", cmd_validate, "check an instance and optionally a schedule")
    p.add_argument("--schedule", help="schedule CSV file")
    p.add_argument("--budget", type=float, help="energy allowance (default: the instance budget)")

    for name, fn, text in (("solve-lp", cmd_solve_lp, "solve the interval-indexed LP"),
                           ("schedule-alpha", cmd_schedule_alpha, "alpha-point schedule with certificate")):
        p = add(name, fn, text)
        p.add_argument("--alpha", type=float, default=None if name == "schedule-alpha" else 0.7)
        p.add_argument("--epsilon", type=float, default=0.5)
        p.add_argument("--delta", type=float, default=0.5)
        p.add_argument("--lambda", dest="lam", type=float)
        if name == "solve-lp":
            p.add_argument("--mps", help="also export the model in MPS format")
        else:
            p.add_argument("--gamma", type=float)
            p.add_argument("--certificate", help="write the bound checks as CSV")

    p = add("solve-cp", cmd_solve_cp, "solve the fixed-order convex relaxation")
    add_order(p)
    p.add_argument("--max-iter", type=int, default=cp.CpConfig.max_iter)

    p = add("schedule-order", cmd_schedule_order, "schedule following a job order")
    add_order(p)
    p.add_argument("--processing", choices=("cp", "equal"), default="cp")
    p.add_argument("--mode", choices=("fixed", "list"), default="fixed")

    p = add("ratios", cmd_ratios, "optimal ratio per beta and variant", False)
    p.add_argument("--beta", type=float, action="append")

    p = add("tradeoff", cmd_tradeoff, "ratio versus energy augmentation", False)
    p.add_argument("--beta", type=float, action="append")
    p.add_argument("--levels", help="comma separated augmentation percentages")

    p = add("experiment", cmd_experiment, "FCFS versus SR experiment", False)
    p.add_argument("--config", help="JSON experiment settings (default: desk scale)")
    p.add_argument("--seeds", type=int)
    p.add_argument("--means", help="also write per-n means here")

    p = add("oracle", cmd_oracle, "exhaustive optimum on a tiny instance")
    p.add_argument("--limits", default="3,6,4", help="max jobs,tasks,speeds")
    p.add_argument("--speeds", help="comma separated speeds (default: 4 grid speeds)")
    p.add_argument("--epsilon", type=float, default=0.5)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except CertificationError as exc:
        print(f"certification failed: {exc}", file=sys.stderr)
        return UNCERTIFIED
    except (ParameterError, GuardError, ScheduleError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
