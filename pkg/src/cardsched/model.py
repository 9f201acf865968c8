"""Core domain types for cardinality-constrained makespan scheduling.

A problem instance is a list of jobs, a machine count m and a per-machine
cardinality cap k: every machine may hold at most k jobs.  Machines are
1-based everywhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field


class InfeasibleError(Exception):
    """No feasible schedule exists (or capacity would be exceeded)."""


@dataclass(frozen=True)
class Job:
    """A job: `id` is the 1-based arrival index, `size` is nonnegative."""

    id: int
    size: float

    def __post_init__(self):
        if self.size < 0:
            raise ValueError(f"job {self.id}: size must be >= 0, got {self.size}")


@dataclass(frozen=True)
class Instance:
    jobs: tuple[Job, ...]
    m: int
    k: int

    def __post_init__(self):
        if self.m < 1 or self.k < 1:
            raise ValueError("m and k must be >= 1")
        ids = [j.id for j in self.jobs]
        if len(set(ids)) != len(ids):
            raise ValueError("job ids must be unique")

    @property
    def n(self) -> int:
        return len(self.jobs)

    def is_feasible(self) -> bool:
        return self.n <= self.m * self.k

    def total_size(self) -> float:
        return sum(j.size for j in self.jobs)

    def job_by_id(self, jid: int) -> Job:
        for j in self.jobs:
            if j.id == jid:
                return j
        raise KeyError(jid)


def instance_from_sizes(sizes, m: int, k: int) -> Instance:
    """Build an Instance with ids equal to arrival order (1-based)."""
    return Instance(tuple(Job(i + 1, float(s)) for i, s in enumerate(sizes)), m, k)


@dataclass(frozen=True)
class Schedule:
    """Job id -> machine index in [1, m]."""

    assignment: dict[int, int]

    def machine_of(self, jid: int) -> int:
        return self.assignment[jid]


@dataclass(frozen=True)
class Move:
    job: int
    src: int
    dst: int


@dataclass(frozen=True)
class MigrationRecord:
    """Jobs reassigned when `trigger` arrived; `moved_size` sums original sizes."""

    trigger: int
    moves: tuple[Move, ...] = ()
    moved_size: float = 0.0

    def __post_init__(self):
        for mv in self.moves:
            if mv.job == self.trigger:
                raise ValueError("trigger job may not appear in its own moves")
            if mv.src == mv.dst:
                raise ValueError(f"move of job {mv.job}: src == dst")


@dataclass(frozen=True)
class ArrivalRecord:
    job: int
    size: float
    machine: int
    migration: MigrationRecord
    loads: tuple[float, ...]
    makespan: float


@dataclass
class Trace:
    """Evidence stream of an online run: one record per arrival."""

    m: int
    k: int
    records: list[ArrivalRecord] = field(default_factory=list)

    @property
    def n(self) -> int:
        return len(self.records)

    def sizes(self) -> list[float]:
        return [r.size for r in self.records]

    def final_makespan(self) -> float:
        return self.records[-1].makespan if self.records else 0.0

    def final_schedule(self) -> Schedule:
        assignment: dict[int, int] = {}
        for r in self.records:
            for mv in r.migration.moves:
                assignment[mv.job] = mv.dst
            assignment[r.job] = r.machine
        return Schedule(assignment)

    def instance(self) -> Instance:
        return instance_from_sizes(self.sizes(), self.m, self.k)


def loads(schedule: Schedule, instance: Instance) -> list[float]:
    """Per-machine total size under `schedule`; machine i is component i-1."""
    sizes = {j.id: j.size for j in instance.jobs}
    out = [0.0] * instance.m
    for jid, machine in schedule.assignment.items():
        if jid not in sizes:
            raise KeyError(f"schedule references unknown job id {jid}")
        if not 1 <= machine <= instance.m:
            raise ValueError(f"job {jid} assigned to machine {machine} outside [1, {instance.m}]")
        out[machine - 1] += sizes[jid]
    return out


def makespan(schedule: Schedule, instance: Instance) -> float:
    ld = loads(schedule, instance)
    return max(ld) if ld else 0.0


def check_feasible(schedule: Schedule, instance: Instance) -> list[str]:
    """All cap/assignment violations; an empty list means the schedule is ok."""
    violations = []
    counts = [0] * instance.m
    seen = set()
    for jid, machine in schedule.assignment.items():
        if not 1 <= machine <= instance.m:
            violations.append(f"job {jid}: machine {machine} outside [1, {instance.m}]")
            continue
        counts[machine - 1] += 1
        seen.add(jid)
    for mi, c in enumerate(counts, start=1):
        if c > instance.k:
            violations.append(f"machine {mi}: {c} jobs exceeds cap {instance.k}")
    for j in instance.jobs:
        if j.id not in seen:
            violations.append(f"job {j.id}: unassigned")
    for jid in seen:
        if all(j.id != jid for j in instance.jobs):
            violations.append(f"job {jid}: not part of the instance")
    return violations


def round_down_pow2(size: float) -> tuple[float, int]:
    """Largest power of two <= size, as (value, exponent); exponent may be negative."""
    if not (size > 0) or not math.isfinite(size):
        raise ValueError(f"size must be positive and finite, got {size}")
    frac, exp = math.frexp(size)  # size = frac * 2**exp with frac in [0.5, 1)
    e = exp - 1
    rounded = math.ldexp(1.0, e)
    # neighbor validation: guards against edge rounding at exact powers
    if rounded > size:
        e -= 1
        rounded = math.ldexp(1.0, e)
    elif math.ldexp(1.0, e + 1) <= size:
        e += 1
        rounded = math.ldexp(1.0, e)
    return rounded, e


def power(base: float, exponent: int) -> float:
    """base**exponent by binary lifting; deterministic for size-class keys."""
    if exponent < 0:
        return 1.0 / power(base, -exponent)
    result = 1.0
    acc = base
    e = exponent
    while e:
        if e & 1:
            result *= acc
        acc *= acc
        e >>= 1
    return result


def round_up_geometric(size: float, eps: float) -> tuple[float, int]:
    """Smallest integer power of (1+eps) >= size, as (value, exponent).

    The exponent is found from a log estimate and then corrected by neighbor
    comparison on the lifted powers themselves, so two equal sizes always land
    in the same class even at class boundaries.
    """
    if not (size > 0) or not math.isfinite(size):
        raise ValueError(f"size must be positive and finite, got {size}")
    if not (eps > 0) or not math.isfinite(eps):
        raise ValueError(f"eps must be positive and finite, got {eps}")
    base = 1.0 + eps
    e = math.ceil(math.log(size) / math.log(base) - 1e-12)
    while power(base, e) < size:
        e += 1
    while power(base, e - 1) >= size:
        e -= 1
    return power(base, e), e
