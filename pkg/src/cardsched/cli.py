"""Command-line harness: run schedulers, drive adversaries, query the oracle.

Reports are JSON objects (schema version 1) on stdout or --out.  Floats are
serialized with Python's shortest round-tripping repr, so replaying a report
reproduces makespans bit-exactly.  Transcripts longer than TRANSCRIPT_LIMIT
entries are omitted from the JSON (the length is always present).
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time

from .adversaries import (
    AdversaryReport,
    balanced_lb_drive,
    phi_lb_drive,
    pure_lb_drive,
    robust_lb_drive,
)
from .clcs import greedy_clcs, identical_lb_report, run_classed_stream, uniform_lb_drive
from .constant import new_constant_scheduler
from .engine import (
    ContractViolation,
    competitive_metrics,
    list_scheduling_capped,
    migration_stats,
    phi_scheduler,
    round_robin_scheduler,
    run_stream,
)
from .jsonl import load_jobs
from .model import InfeasibleError, check_feasible, instance_from_sizes, makespan
from .oracle import EXACT_RECOMMENDED_MAX_JOBS, exact_opt, lower_bound
from .ordinal import ordinal_map, ordinal_schedule
from .robust import robust_scheduler

SCHEMA_VERSION = 1
TRANSCRIPT_LIMIT = 10000
ONLINE_ALGOS = ("round-robin", "greedy-capped", "phi", "constant", "robust-ordinal")
ALGOS = ONLINE_ALGOS + ("ordinal",)


def build_scheduler(key: str, m: int, k: int, epsilon: float):
    if key == "round-robin":
        return round_robin_scheduler(m, k)
    if key == "greedy-capped":
        return list_scheduling_capped(m, k)
    if key == "phi":
        if (m, k) != (2, 2):
            raise ValueError("the phi scheduler is defined for m=2, k=2 only")
        return phi_scheduler()
    if key == "constant":
        return new_constant_scheduler(m, k)
    if key == "robust-ordinal":
        return robust_scheduler(m, k, epsilon)
    raise ValueError(f"unknown scheduler key {key!r}")


def generate_sizes(name: str, n: int, seed: int) -> list[float]:
    rng = random.Random(seed)
    if name == "uniform":
        return [rng.uniform(1.0, 100.0) for _ in range(n)]
    if name == "loguniform":
        return [2.0 ** rng.uniform(-10.0, 10.0) for _ in range(n)]
    raise ValueError(f"unknown generator {name!r}")


def _emit(report: dict, out: str | None) -> None:
    text = json.dumps(report, indent=2, sort_keys=True)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _load_sizes(args) -> list[float]:
    if args.input:
        return [size for size, _ in load_jobs(args.input)]
    if not args.gen:
        raise ValueError("either --input or --gen is required")
    return generate_sizes(args.gen, args.n, args.seed)


def _pick_mode(mode: str, n: int) -> str:
    if mode == "auto":
        return "exact" if n <= EXACT_RECOMMENDED_MAX_JOBS else "lower_bound"
    return "exact" if mode == "exact" else "lower_bound"


def cmd_run(args) -> dict:
    sizes = _load_sizes(args)
    m, k = args.m, args.k
    if len(sizes) > m * k:
        raise InfeasibleError(f"infeasible: {len(sizes)} jobs exceed capacity m*k = {m * k}")
    instance = instance_from_sizes(sizes, m, k)
    mode = _pick_mode(args.mode, len(sizes))
    started = time.perf_counter()
    report = {
        "schema": SCHEMA_VERSION,
        "command": "run",
        "algorithm": args.algo,
        "m": m,
        "k": k,
        "n": len(sizes),
        "seed": args.seed if args.gen else None,
        "generator": args.gen,
        "input": args.input,
        "denominator_mode": mode,
    }
    if args.algo == "ordinal":
        schedule = ordinal_schedule(instance)
        violations = check_feasible(schedule, instance)
        if violations:
            raise ContractViolation(len(sizes), "; ".join(violations))
        final = makespan(schedule, instance)
        if mode == "exact" and len(sizes) > EXACT_RECOMMENDED_MAX_JOBS:
            raise ValueError(
                f"exact mode guard: {len(sizes)} jobs > {EXACT_RECOMMENDED_MAX_JOBS}; "
                "use --mode lower-bound"
            )
        denom = (
            exact_opt(instance).opt_makespan if mode == "exact" else lower_bound(instance)
        )
        report.update(
            {
                "final_makespan": final,
                "denominator": denom,
                "final_ratio": final / denom if denom else 1.0,
                "prefix_max_ratio": None,
                "migration": {"total_moved": 0.0, "max_factor": 0.0},
                "assignment": {str(j): mach for j, mach in sorted(schedule.assignment.items())},
            }
        )
        if args.emit_map:
            report["ordinal_map"] = list(ordinal_map(m, k).sigma)
    else:
        scheduler = build_scheduler(args.algo, m, k, args.epsilon)
        trace = run_stream(scheduler, sizes, m, k)
        metrics = competitive_metrics(trace, instance, mode)
        stats = migration_stats(trace)
        report.update(
            {
                "final_makespan": trace.final_makespan(),
                "denominator": metrics.denominator,
                "final_ratio": metrics.final_ratio,
                "prefix_max_ratio": metrics.prefix_max_ratio,
                "migration": {
                    "total_moved": stats.total_moved,
                    "max_factor": stats.max_factor,
                },
            }
        )
        if args.algo == "robust-ordinal":
            report["epsilon"] = args.epsilon
        if len(sizes) <= TRANSCRIPT_LIMIT:
            report["sizes"] = sizes
            report["machines"] = [r.machine for r in trace.records]
        else:
            report["transcript_omitted"] = True
        if args.dump_structure and args.algo == "constant":
            snap = scheduler.structure_snapshot()
            report["structure"] = {
                "active_k": snap.active_k,
                "l": snap.l,
                "p_max": snap.p_max,
                "fallback": snap.fallback,
                "terminal": snap.terminal,
                "rows": [
                    {"rid": r.rid, "kind": r.kind, "group": r.group, "slots": list(r.slots)}
                    for r in snap.rows
                ],
                "removed_rows": [
                    {"rid": r.rid, "kind": r.kind, "group": r.group, "slots": list(r.slots)}
                    for r in snap.removed_rows
                ],
            }
    report["wall_time_s"] = time.perf_counter() - started
    return report


def cmd_oracle(args) -> dict:
    sizes = _load_sizes(args)
    instance = instance_from_sizes(sizes, args.m, args.k)
    started = time.perf_counter()
    result = exact_opt(instance)
    return {
        "schema": SCHEMA_VERSION,
        "command": "oracle",
        "m": args.m,
        "k": args.k,
        "n": len(sizes),
        "opt": result.opt_makespan,
        "schedule": {str(j): mach for j, mach in sorted(result.schedule.assignment.items())},
        "nodes_explored": result.nodes_explored,
        "lower_bound": lower_bound(instance),
        "wall_time_s": time.perf_counter() - started,
    }


def _report_to_dict(report: AdversaryReport, extra: dict) -> dict:
    out = {
        "schema": SCHEMA_VERSION,
        "command": "adversary",
        "family": report.family,
        "m": report.m,
        "k": report.k,
        "n": report.n,
        "alg_makespan": report.alg_makespan,
        "opt_value": report.opt_value,
        "opt_provenance": report.opt_provenance,
        "ratio": report.ratio,
        "note": report.note,
    }
    out.update(extra)
    if report.n <= TRANSCRIPT_LIMIT:
        out["transcript"] = [[size, mach] for size, mach in report.transcript]
        if report.classes is not None:
            out["classes"] = list(report.classes)
    else:
        out["transcript_omitted"] = True
    return out


def cmd_adversary(args) -> dict:
    family = args.family
    started = time.perf_counter()
    if family == "phi-lb":
        scheduler = build_scheduler(args.algo, 2, 2, args.epsilon)
        report = phi_lb_drive(scheduler, args.big_m)
    else:
        scheduler = build_scheduler(args.algo, args.m, args.k, args.epsilon)
        if family == "pure-lb":
            n_param = args.n_param if args.n_param is not None else float(args.k)
            report = pure_lb_drive(scheduler, args.m, args.k, n_param)
        elif family == "balanced-lb":
            n_param = args.n_param if args.n_param is not None else 10.0
            report = balanced_lb_drive(scheduler, args.m, args.k, n_param, args.round_cap)
        elif family == "robust-lb":
            report = robust_lb_drive(scheduler, args.m, args.k)
        else:
            raise ValueError(f"unknown adversary family {family!r}")
    out = _report_to_dict(report, {"algorithm": args.algo})
    out["wall_time_s"] = time.perf_counter() - started
    return out


def cmd_clcs(args) -> dict:
    started = time.perf_counter()
    if args.clcs_command == "run":
        jobs = load_jobs(args.input)
        missing = [i + 1 for i, (_, cls) in enumerate(jobs) if cls is None]
        if missing:
            raise ValueError(f"{args.input}: line {missing[0]}: 'class' field required for clcs")
        speeds = [float(x) for x in args.speeds.split(",")] if args.speeds else None
        drive = run_classed_stream(greedy_clcs(args.m, args.k), jobs, args.m, args.k, speeds)
        return {
            "schema": SCHEMA_VERSION,
            "command": "clcs-run",
            "algorithm": "greedy-clcs",
            "m": args.m,
            "k": args.k,
            "n": drive.n,
            "speeds": list(drive.speeds),
            "makespan": drive.makespan,
            "loads": list(drive.loads),
            "machines": list(drive.machines),
            "wall_time_s": time.perf_counter() - started,
        }
    if args.family == "identical-lb":
        report = identical_lb_report(greedy_clcs(args.m, args.k), args.m, args.k)
    elif args.family == "uniform-lb":
        report = uniform_lb_drive(
            greedy_clcs(args.m, args.k),
            args.m,
            args.k,
            args.speed,
            args.beta,
            args.eps_param,
            args.big_m,
        )
    else:
        raise ValueError(f"unknown clcs family {args.family!r}")
    out = _report_to_dict(report, {"algorithm": "greedy-clcs", "command": "clcs-adversary"})
    out["wall_time_s"] = time.perf_counter() - started
    return out


def _add_input_args(p: argparse.ArgumentParser):
    p.add_argument("--input", help="JSONL instance file")
    p.add_argument("--gen", choices=("uniform", "loguniform"), help="size generator")
    p.add_argument("--n", type=int, default=0, help="generated stream length")
    p.add_argument("--seed", type=int, default=0, help="generator seed")


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cardsched", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a scheduler on an instance")
    p_run.add_argument("--algo", required=True, choices=ALGOS)
    p_run.add_argument("--m", type=int, required=True)
    p_run.add_argument("--k", type=int, required=True)
    _add_input_args(p_run)
    p_run.add_argument("--epsilon", type=float, default=1.0, help="robust-ordinal accuracy")
    p_run.add_argument("--mode", choices=("auto", "exact", "lower-bound"), default="auto")
    p_run.add_argument("--dump-structure", action="store_true")
    p_run.add_argument("--emit-map", action="store_true")
    p_run.add_argument("--out")

    p_oracle = sub.add_parser("oracle", help="exact offline optimum")
    p_oracle.add_argument("--m", type=int, required=True)
    p_oracle.add_argument("--k", type=int, required=True)
    _add_input_args(p_oracle)
    p_oracle.add_argument("--out")

    p_adv = sub.add_parser("adversary", help="drive a lower-bound adversary")
    p_adv.add_argument(
        "--family", required=True, choices=("pure-lb", "balanced-lb", "robust-lb", "phi-lb")
    )
    p_adv.add_argument("--algo", required=True, choices=ONLINE_ALGOS)
    p_adv.add_argument("--m", type=int, default=2)
    p_adv.add_argument("--k", type=int, default=2)
    p_adv.add_argument("--n-param", type=float, default=None, help="N for pure/balanced families")
    p_adv.add_argument("--round-cap", type=int, default=100)
    p_adv.add_argument("--big-m", type=float, default=1e4, help="M for the phi family")
    p_adv.add_argument("--epsilon", type=float, default=1.0)
    p_adv.add_argument("--out")

    p_clcs = sub.add_parser("clcs", help="class-constrained scheduling")
    clcs_sub = p_clcs.add_subparsers(dest="clcs_command", required=True)
    c_run = clcs_sub.add_parser("run", help="greedy ClCS on a classed JSONL instance")
    c_run.add_argument("--m", type=int, required=True)
    c_run.add_argument("--k", type=int, required=True)
    c_run.add_argument("--input", required=True)
    c_run.add_argument("--speeds", help="comma-separated machine speeds")
    c_run.add_argument("--out")
    c_adv = clcs_sub.add_parser("adversary", help="ClCS lower-bound drivers vs greedy")
    c_adv.add_argument("--family", required=True, choices=("identical-lb", "uniform-lb"))
    c_adv.add_argument("--m", type=int, required=True)
    c_adv.add_argument("--k", type=int, default=1)
    c_adv.add_argument("--speed", type=float, default=2.0)
    c_adv.add_argument("--beta", type=float, default=1.0)
    c_adv.add_argument("--eps-param", type=float, default=0.01)
    c_adv.add_argument("--big-m", type=int, default=200)
    c_adv.add_argument("--out")
    return parser


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            report = cmd_run(args)
        elif args.command == "oracle":
            report = cmd_oracle(args)
        elif args.command == "adversary":
            report = cmd_adversary(args)
        else:
            report = cmd_clcs(args)
    except (InfeasibleError, ContractViolation, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    _emit(report, args.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
