"""Class-constrained scheduling (ClCS).

Here a machine may host jobs from at most k *distinct classes* instead of at
most k jobs.  The greedy scheduler pins each class to one machine; it is
m-competitive and that is the best possible even with migration, which the
two lower-bound drivers demonstrate on identical and uniform machines.
"""

from __future__ import annotations

import itertools
from array import array
from dataclasses import dataclass

from .adversaries import AdversaryReport
from .engine import ContractViolation
from .model import InfeasibleError

CLCS_BRUTE_MAX_JOBS = 8


@dataclass(frozen=True)
class ClassedJob:
    id: int
    size: float
    cls: int

    def __post_init__(self):
        if self.size < 0:
            raise ValueError(f"job {self.id}: size must be >= 0")
        if self.cls < 1:
            raise ValueError(f"job {self.id}: class must be >= 1")


@dataclass(frozen=True)
class ClcsInstance:
    jobs: tuple[ClassedJob, ...]
    m: int
    k: int
    speeds: tuple[float, ...]

    def __post_init__(self):
        if self.m < 1 or self.k < 1:
            raise ValueError("m and k must be >= 1")
        if len(self.speeds) != self.m:
            raise ValueError("speeds must have one entry per machine")
        if any(s <= 0 for s in self.speeds):
            raise ValueError("speeds must be positive")


def clcs_instance(jobs, m: int, k: int, speeds=None) -> ClcsInstance:
    """jobs: iterable of (size, class); identical machines unless speeds given."""
    speeds = tuple(float(s) for s in speeds) if speeds is not None else (1.0,) * m
    return ClcsInstance(
        tuple(ClassedJob(i + 1, float(sz), int(c)) for i, (sz, c) in enumerate(jobs)),
        m,
        k,
        speeds,
    )


class GreedyClcsScheduler:
    """First job of an unseen class binds it to the machine with fewest bound
    classes (among those below k), tie to the lowest index; every later job of
    the class follows it."""

    def __init__(self, m: int, k: int):
        self.m, self.k = m, k
        self._machine_of_class: dict[int, int] = {}
        self._bound = [0] * m

    def on_arrival(self, size: float, cls: int) -> int:
        machine = self._machine_of_class.get(cls)
        if machine is None:
            best = None
            for mi in range(self.m):
                if self._bound[mi] >= self.k:
                    continue
                if best is None or self._bound[mi] < self._bound[best]:
                    best = mi
            if best is None:
                raise InfeasibleError("all machines already host k classes")
            self._bound[best] += 1
            machine = best + 1
            self._machine_of_class[cls] = machine
        return machine


def greedy_clcs(m: int, k: int) -> GreedyClcsScheduler:
    return GreedyClcsScheduler(m, k)


class _ClassedDrive:
    """Stream runner for class-constrained schedulers on (possibly) uniform machines."""

    def __init__(self, scheduler, m: int, k: int, speeds=None):
        self.scheduler = scheduler
        self.m, self.k = m, k
        self.speeds = tuple(speeds) if speeds is not None else (1.0,) * m
        self.sizes = array("d")
        self.classes = array("q")
        self.machines = array("q")
        self.loads = [0.0] * m
        self.class_sets: list[set[int]] = [set() for _ in range(m)]

    @property
    def n(self) -> int:
        return len(self.sizes)

    @property
    def makespan(self) -> float:
        return max(ld / sp for ld, sp in zip(self.loads, self.speeds))

    def feed(self, size: float, cls: int) -> int:
        jid = self.n + 1
        machine = self.scheduler.on_arrival(size, cls)
        if not 1 <= machine <= self.m:
            raise ContractViolation(jid, f"machine {machine} outside [1, {self.m}]")
        self.class_sets[machine - 1].add(cls)
        if len(self.class_sets[machine - 1]) > self.k:
            raise ContractViolation(jid, f"machine {machine} hosts more than {self.k} classes")
        self.sizes.append(size)
        self.classes.append(cls)
        self.machines.append(machine)
        self.loads[machine - 1] += size
        return machine

    def report(self, family: str, opt: float, provenance: str, note=None) -> AdversaryReport:
        return AdversaryReport(
            family=family,
            m=self.m,
            k=self.k,
            sizes=self.sizes,
            machines=self.machines,
            alg_makespan=self.makespan,
            opt_value=opt,
            opt_provenance=provenance,
            ratio=self.makespan / opt,
            note=note,
            classes=self.classes,
        )


def run_classed_stream(scheduler, jobs, m: int, k: int, speeds=None) -> _ClassedDrive:
    """Feed (size, class) pairs in order; returns the finished drive."""
    drive = _ClassedDrive(scheduler, m, k, speeds)
    for size, cls in jobs:
        drive.feed(float(size), int(cls))
    return drive


def clcs_exact(instance: ClcsInstance) -> float:
    """True optimum by enumerating all assignments (n <= 8)."""
    n, m, k = len(instance.jobs), instance.m, instance.k
    if n > CLCS_BRUTE_MAX_JOBS:
        raise ValueError(f"clcs_exact guard: {n} jobs > {CLCS_BRUTE_MAX_JOBS}")
    if n == 0:
        return 0.0
    best = None
    for assign in itertools.product(range(m), repeat=n):
        loads = [0.0] * m
        class_sets: list[set[int]] = [set() for _ in range(m)]
        ok = True
        for job, mi in zip(instance.jobs, assign):
            loads[mi] += job.size
            class_sets[mi].add(job.cls)
            if len(class_sets[mi]) > k:
                ok = False
                break
        if not ok:
            continue
        cost = max(ld / sp for ld, sp in zip(loads, instance.speeds))
        if best is None or cost < best:
            best = cost
    if best is None:
        raise InfeasibleError("no class-feasible assignment exists")
    return best


def identical_lb_report(scheduler, m: int, k: int) -> AdversaryReport:
    """m unit jobs of one common class; offline puts one on each machine."""
    if m < 2:
        raise ValueError(f"requires m >= 2, got {m}")
    drive = _ClassedDrive(scheduler, m, k)
    for _ in range(m):
        drive.feed(1.0, 1)
    return drive.report("clcs-identical-lb", 1.0, "analytic")


def uniform_lb_drive(
    scheduler, m: int, k: int, s: float, beta: float, eps: float, M: int
) -> AdversaryReport:
    """Machine 1 has speed 1, the rest speed s > 1.  Phase 1 hands out m*k unit
    jobs with distinct classes; phase 2 floods the classes stuck on machine 1
    with M*beta rounds of jobs of size 1/beta - eps, too small to migrate."""
    if s <= 1:
        raise ValueError(f"requires s > 1, got {s}")
    if beta <= 0 or not 0 < eps < 1.0 / beta:
        raise ValueError("requires beta > 0 and 0 < eps < 1/beta")
    if M < 0:
        raise ValueError("M must be >= 0")
    speeds = (1.0,) + (float(s),) * (m - 1)
    drive = _ClassedDrive(scheduler, m, k, speeds)
    for cls in range(1, m * k + 1):
        drive.feed(1.0, cls)

    k_prime = min(k, m - 1)
    on_machine_1 = sorted(
        {drive.classes[j] for j in range(drive.n) if drive.machines[j] == 1}
    )
    targets = on_machine_1[:k_prime]
    note = None
    if len(targets) < k_prime:
        # non-conforming scheduler left machine 1 short; pad to keep the drive total
        spare = [c for c in range(1, m * k + 1) if c not in targets]
        targets += spare[: k_prime - len(targets)]
        note = "machine 1 held fewer than min(k, m-1) classes after phase 1"

    rounds = round(M * beta)
    size = 1.0 / beta - eps
    for _ in range(rounds):
        for cls in targets:
            drive.feed(size, cls)
    return drive.report("clcs-uniform-lb", M / s + k / s, "analytic", note)
