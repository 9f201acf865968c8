"""Exact and heuristic offline solvers.

These provide the denominators for every competitive-ratio measurement in the
repo: a branch-and-bound exact solver, an independent full-enumeration oracle
for cross-checks, a cheap lower bound and the sorted round-robin heuristic.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .model import InfeasibleError, Instance, Schedule, makespan

BRUTE_MAX_JOBS = 10
EXACT_RECOMMENDED_MAX_JOBS = 20


@dataclass(frozen=True)
class OracleResult:
    opt_makespan: float
    schedule: Schedule
    nodes_explored: int


def lower_bound(instance: Instance) -> float:
    """max(largest job, average machine load); never exceeds the true optimum."""
    if not instance.jobs:
        return 0.0
    total = instance.total_size()
    return max(max(j.size for j in instance.jobs), total / instance.m)


def sorted_round_robin_makespan(sizes, m: int) -> float:
    """Makespan of dealing the sizes, sorted non-increasingly, round-robin over m machines."""
    ld = [0.0] * m
    for i, s in enumerate(sorted(sizes, reverse=True)):
        ld[i % m] += s
    return max(ld)


def sorted_round_robin(instance: Instance) -> Schedule:
    """Sort jobs non-increasingly, send the i-th to machine 1+(i-1) mod m."""
    if not instance.is_feasible():
        raise InfeasibleError(
            f"{instance.n} jobs exceed capacity m*k = {instance.m * instance.k}"
        )
    order = sorted(instance.jobs, key=lambda j: (-j.size, j.id))
    return Schedule({j.id: 1 + i % instance.m for i, j in enumerate(order)})


@lru_cache(maxsize=None)
def _feasible_assignments(n: int, m: int, k: int) -> tuple[tuple[int, ...], ...]:
    # all of m**n assignment vectors, filtered to those obeying the cap
    out = []
    for assign in itertools.product(range(m), repeat=n):
        counts = [0] * m
        ok = True
        for mi in assign:
            counts[mi] += 1
            if counts[mi] > k:
                ok = False
                break
        if ok:
            out.append(assign)
    return tuple(out)


def brute_opt(instance: Instance) -> float:
    """Minimum makespan by full enumeration; independent of the branch-and-bound path."""
    n, m, k = instance.n, instance.m, instance.k
    if n > BRUTE_MAX_JOBS:
        raise ValueError(f"brute_opt guard: {n} jobs > {BRUTE_MAX_JOBS}")
    if not instance.is_feasible():
        raise InfeasibleError(f"{n} jobs exceed capacity m*k = {m * k}")
    if n == 0:
        return 0.0
    sizes = [j.size for j in instance.jobs]
    best = None
    for assign in _feasible_assignments(n, m, k):
        ld = [0.0] * m
        for s, mi in zip(sizes, assign):
            ld[mi] += s
        cost = max(ld)
        if best is None or cost < best:
            best = cost
    return best


def _lpt_capped_assignment(sizes: list[float], m: int, k: int) -> list[int]:
    """Greedy least-load assignment of pre-sorted sizes, honoring the cap."""
    loads = [0.0] * m
    counts = [0] * m
    out = []
    for s in sizes:
        best = None
        for mi in range(m):
            if counts[mi] < k and (best is None or loads[mi] < loads[best]):
                best = mi
        out.append(best)
        loads[best] += s
        counts[best] += 1
    return out


def exact_opt(instance: Instance) -> OracleResult:
    """True optimal makespan via branch-and-bound over jobs sorted non-increasingly.

    Pruning: never branch twice into machines with an identical (load, count)
    state; equal-size jobs take machines in non-decreasing index order; and a
    slot-forcing bound charges every machine the smallest remaining jobs it is
    still forced to take.  Incumbent: the better of sorted round-robin and
    capped LPT.
    """
    if not instance.is_feasible():
        raise InfeasibleError(
            f"{instance.n} jobs exceed capacity m*k = {instance.m * instance.k}"
        )
    m, k = instance.m, instance.k
    srr = sorted_round_robin(instance)
    incumbent = makespan(srr, instance)
    lb = lower_bound(instance)
    if incumbent == lb or not instance.jobs:
        return OracleResult(incumbent, srr, 0)

    order = sorted(instance.jobs, key=lambda j: (-j.size, j.id))
    sizes = [j.size for j in order]
    n = len(sizes)
    best_assign = [srr.assignment[j.id] - 1 for j in order]
    best = incumbent
    lpt = _lpt_capped_assignment(sizes, m, k)
    lpt_make = max(
        sum(s for s, mi in zip(sizes, lpt) if mi == target) for target in range(m)
    )
    if lpt_make < best:
        best, best_assign = lpt_make, lpt
    if best == lb:
        schedule = Schedule({j.id: best_assign[i] + 1 for i, j in enumerate(order)})
        return OracleResult(best, schedule, 0)

    # suffix_sum[j] = total size of jobs j..n-1; the t smallest remaining jobs
    # always sit at the tail of the sorted order
    suffix_sum = [0.0] * (n + 1)
    for j in range(n - 1, -1, -1):
        suffix_sum[j] = suffix_sum[j + 1] + sizes[j]

    machine_load = [0.0] * m
    machine_count = [0] * m
    current = [0] * n
    nodes = 0

    def recurse(idx: int, cur_max: float):
        nonlocal best, best_assign, nodes
        nodes += 1
        if cur_max >= best:
            return
        if idx == n:
            best = cur_max
            best_assign = current[:]
            return
        remaining = n - idx
        slack = sum(k - c for c in machine_count) - remaining
        if slack < m:  # some machine is forced to take more jobs
            for mi in range(m):
                forced = k - machine_count[mi] - slack
                if forced > 0 and machine_load[mi] + suffix_sum[n - forced] >= best:
                    return
        size = sizes[idx]
        start = current[idx - 1] if idx and sizes[idx - 1] == size else 0
        seen = set()
        for mi in range(start, m):
            if machine_count[mi] == k:
                continue
            state = (machine_load[mi], machine_count[mi])
            if state in seen:
                continue
            seen.add(state)
            old_load = machine_load[mi]
            new_load = old_load + size
            if new_load >= best:
                continue
            machine_load[mi] = new_load
            machine_count[mi] += 1
            current[idx] = mi
            recurse(idx + 1, cur_max if cur_max >= new_load else new_load)
            machine_load[mi] = old_load
            machine_count[mi] -= 1

    recurse(0, 0.0)
    schedule = Schedule({j.id: best_assign[i] + 1 for i, j in enumerate(order)})
    result = OracleResult(best, schedule, nodes)
    assert makespan(schedule, instance) == result.opt_makespan
    return result
