"""Core data model for preemptive multi-host scheduling over discrete time slots.

Time is a sequence of integer slots 1..T (closed intervals).  A job j has a
release/due window, an integral length p_j (number of slots it must be
processed in), a d-dimensional demand vector with components in (0, 1], and a
weight.  Hosts are identical with unit capacity per dimension per slot.  A
schedule places jobs into (host, slot) bins; within one slot a job may occupy
at most one host, and the demand vectors resident in a bin must sum to at most
one in every dimension.  Preemption and migration between slots are free.

All numeric fields are exact rationals (`fractions.Fraction`); nothing in this
module touches floating point, so feasibility checks are decidable exactly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence


def parse_rational(value) -> Fraction:
    """Parse a JSON-level rational: an int or a 'p/q' (or 'p') string.

    Floats are rejected on purpose: the whole pipeline relies on exact
    arithmetic and a float in the input is almost always an upstream bug.
    """
    if isinstance(value, bool):
        raise ValueError(f"not a rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if "/" in text:
            num, _, den = text.partition("/")
            return Fraction(int(num), int(den))
        return Fraction(int(text))
    if isinstance(value, Fraction):
        return value
    raise ValueError(f"not a rational: {value!r} (floats are not accepted)")


def format_rational(q: Fraction):
    """Serialize a rational as an int when integral, else a 'p/q' string."""
    q = Fraction(q)
    if q.denominator == 1:
        return int(q)
    return f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True, order=True)
class TimeWindow:
    """Closed integer slot interval [start, end], 1-based."""

    start: int
    end: int

    def __post_init__(self):
        if self.start < 1 or self.end < self.start:
            raise ValueError(f"bad window [{self.start}, {self.end}]")

    def __len__(self) -> int:
        return self.end - self.start + 1

    @property
    def size(self) -> int:
        return self.end - self.start + 1

    def slots(self) -> range:
        return range(self.start, self.end + 1)

    def contains(self, other: "TimeWindow") -> bool:
        return self.start <= other.start and other.end <= self.end

    def contains_slot(self, t: int) -> bool:
        return self.start <= t <= self.end

    def overlaps(self, other: "TimeWindow") -> bool:
        return self.start <= other.end and other.start <= self.end


@dataclass(frozen=True)
class Job:
    """One preemptible job.

    length is the number of distinct slots the job must run in; demand is the
    per-slot resource vector, one component per dimension, in (0, 1].
    """

    id: int
    release: int
    due: int
    length: int
    demand: tuple[Fraction, ...]
    weight: Fraction | None = None  # None: defaults to the job's area

    def __post_init__(self):
        if self.release < 1 or self.due < self.release:
            raise ValueError(f"job {self.id}: bad window [{self.release}, {self.due}]")
        if not 1 <= self.length <= self.due - self.release + 1:
            raise ValueError(f"job {self.id}: length {self.length} does not fit window")
        if not self.demand:
            raise ValueError(f"job {self.id}: empty demand vector")
        for s in self.demand:
            if not 0 < s <= 1:
                raise ValueError(f"job {self.id}: demand component {s} outside (0, 1]")
        if self.weight is None:
            object.__setattr__(self, "weight", self.length * max(self.demand))
        elif self.weight < 0:
            raise ValueError(f"job {self.id}: negative weight")

    @property
    def window(self) -> TimeWindow:
        return TimeWindow(self.release, self.due)

    @property
    def height(self) -> Fraction:
        """Scalar demand: the max-norm of the demand vector."""
        return max(self.demand)


def area(job: Job) -> Fraction:
    """Scalar area length * height (max-norm for multi-dimensional demands)."""
    return job.length * job.height


def density(job: Job) -> Fraction:
    """weight / area.  Area is positive by construction for valid jobs."""
    a = area(job)
    if a == 0:
        raise ValueError(f"job {job.id}: zero area has no density")
    return job.weight / a


@dataclass(frozen=True)
class Instance:
    """A scheduling instance: identical unit-capacity hosts and a job list."""

    hosts: int
    dim: int
    jobs: tuple[Job, ...]

    def __post_init__(self):
        if self.hosts < 1:
            raise ValueError("hosts must be >= 1")
        if self.dim < 1:
            raise ValueError("dim must be >= 1")
        seen = set()
        for job in self.jobs:
            if job.id in seen:
                raise ValueError(f"duplicate job id {job.id}")
            seen.add(job.id)
            if len(job.demand) != self.dim:
                raise ValueError(
                    f"job {job.id}: demand has {len(job.demand)} components, dim is {self.dim}"
                )

    @property
    def horizon(self) -> int:
        return max((job.due for job in self.jobs), default=0)

    def job_by_id(self, jid: int) -> Job:
        for job in self.jobs:
            if job.id == jid:
                return job
        raise KeyError(jid)

    def job_map(self) -> dict[int, Job]:
        return {job.id: job for job in self.jobs}

    def with_jobs(self, jobs: Iterable[Job]) -> "Instance":
        return Instance(hosts=self.hosts, dim=self.dim, jobs=tuple(jobs))


def slackness(instance: Instance) -> Fraction:
    """max_j length / window-size; 0 for an empty instance."""
    return max(
        (Fraction(job.length, job.window.size) for job in instance.jobs),
        default=Fraction(0),
    )


def total_area(jobs: Iterable[Job]) -> Fraction:
    return sum((area(job) for job in jobs), Fraction(0))


@dataclass(frozen=True)
class Schedule:
    """Placements: job id -> set of (host, slot) pairs, hosts and slots 1-based."""

    placements: Mapping[int, frozenset[tuple[int, int]]]

    @classmethod
    def from_pairs(cls, pairs: Mapping[int, Iterable[tuple[int, int]]]) -> "Schedule":
        return cls(
            placements={
                int(jid): frozenset((int(h), int(t)) for h, t in hs)
                for jid, hs in pairs.items()
            }
        )

    def merged_with(self, other: "Schedule") -> "Schedule":
        combined: dict[int, set[tuple[int, int]]] = {
            jid: set(ps) for jid, ps in self.placements.items()
        }
        for jid, ps in other.placements.items():
            combined.setdefault(jid, set()).update(ps)
        return Schedule.from_pairs(combined)

    def slots_of(self, jid: int) -> set[int]:
        return {t for _, t in self.placements.get(jid, ())}


@dataclass(frozen=True)
class Violation:
    kind: str
    job: int | None = None
    host: int | None = None
    slot: int | None = None

    def to_json(self) -> dict:
        out: dict = {"kind": self.kind}
        if self.job is not None:
            out["job"] = self.job
        if self.host is not None:
            out["host"] = self.host
        if self.slot is not None:
            out["slot"] = self.slot
        return out


@dataclass(frozen=True)
class ValidationReport:
    feasible: bool
    violations: tuple[Violation, ...]
    completed_ids: tuple[int, ...]
    total_weight: Fraction
    total_area: Fraction

    def to_json(self) -> dict:
        return {
            "feasible": self.feasible,
            "violations": [v.to_json() for v in self.violations],
            "completed_ids": list(self.completed_ids),
            "total_weight": format_rational(self.total_weight),
            "total_area": format_rational(self.total_area),
        }


def validate(
    instance: Instance,
    schedule: Schedule,
    require_all_complete: bool = False,
    hosts: int | None = None,
) -> ValidationReport:
    """Check a schedule against an instance.  Never raises on bad input;
    every problem becomes a Violation in the report.

    A job that appears in the schedule must be completed exactly: `length`
    distinct slots, no more.  With require_all_complete, every job of the
    instance must be completed (host-minimization mode).

    `hosts` overrides the instance's host count as the bound on host
    indices — host minimizers produce schedules on however many hosts
    their answer says, not on the instance's.
    """
    host_limit = instance.hosts if hosts is None else hosts
    jobs = instance.job_map()
    violations: list[Violation] = []
    # (host, slot) -> list of jobs resident there
    bins: dict[tuple[int, int], list[Job]] = {}

    for jid in sorted(schedule.placements):
        placed = schedule.placements[jid]
        job = jobs.get(jid)
        if job is None:
            violations.append(Violation("unknown-job", job=jid))
            continue
        slots_seen: dict[int, int] = {}
        for host, slot in sorted(placed):
            if not 1 <= host <= host_limit:
                violations.append(Violation("bad-host", job=jid, host=host, slot=slot))
            if not 1 <= slot <= instance.horizon:
                violations.append(Violation("bad-slot", job=jid, host=host, slot=slot))
            elif not job.window.contains_slot(slot):
                violations.append(Violation("outside-window", job=jid, host=host, slot=slot))
            slots_seen[slot] = slots_seen.get(slot, 0) + 1
            bins.setdefault((host, slot), []).append(job)
        for slot, count in sorted(slots_seen.items()):
            if count > 1:
                violations.append(Violation("simultaneous", job=jid, slot=slot))
        distinct = len(slots_seen)
        if distinct > job.length:
            violations.append(Violation("overcomplete", job=jid))
        elif 0 < distinct < job.length:
            violations.append(Violation("incomplete", job=jid))

    for (host, slot) in sorted(bins):
        resident = bins[(host, slot)]
        for i in range(instance.dim):
            load = sum((job.demand[i] for job in resident), Fraction(0))
            if load > 1:
                violations.append(Violation("capacity", host=host, slot=slot))
                break

    completed = tuple(
        jid
        for jid in sorted(schedule.placements)
        if jid in jobs and len(schedule.slots_of(jid)) == jobs[jid].length
    )
    if require_all_complete:
        done = set(completed)
        for job in instance.jobs:
            if job.id not in done and len(schedule.slots_of(job.id)) == 0:
                violations.append(Violation("incomplete", job=job.id))

    return ValidationReport(
        feasible=not violations,
        violations=tuple(violations),
        completed_ids=completed,
        total_weight=sum((jobs[j].weight for j in completed), Fraction(0)),
        total_area=sum((area(jobs[j]) for j in completed), Fraction(0)),
    )


# ---------------------------------------------------------------------------
# JSON serialization.  Canonical form: sorted keys, 2-space indent, trailing
# newline.  Byte-stable across runs for identical data.
# ---------------------------------------------------------------------------


def job_to_json(job: Job) -> dict:
    return {
        "id": job.id,
        "release": job.release,
        "due": job.due,
        "length": job.length,
        "weight": format_rational(job.weight),
        "demand": [format_rational(s) for s in job.demand],
    }


def job_from_json(obj: Mapping, dim: int) -> Job:
    demand_raw = obj["demand"]
    if not isinstance(demand_raw, Sequence) or isinstance(demand_raw, str):
        demand_raw = [demand_raw]
    demand = tuple(parse_rational(s) for s in demand_raw)
    weight_raw = obj.get("weight")
    length = int(obj["length"])
    if weight_raw is None:
        # weight defaults to area when omitted
        weight = length * max(demand)
    else:
        weight = parse_rational(weight_raw)
    return Job(
        id=int(obj["id"]),
        release=int(obj["release"]),
        due=int(obj["due"]),
        length=length,
        demand=demand,
        weight=weight,
    )


def instance_to_json(instance: Instance) -> dict:
    return {
        "hosts": instance.hosts,
        "dim": instance.dim,
        "jobs": [job_to_json(job) for job in sorted(instance.jobs, key=lambda j: j.id)],
    }


def instance_from_json(obj: Mapping) -> Instance:
    dim = int(obj["dim"])
    return Instance(
        hosts=int(obj["hosts"]),
        dim=dim,
        jobs=tuple(job_from_json(j, dim) for j in obj["jobs"]),
    )


def schedule_to_json(schedule: Schedule) -> dict:
    return {
        "placements": {
            str(jid): [[h, t] for h, t in sorted(schedule.placements[jid])]
            for jid in sorted(schedule.placements)
        }
    }


def schedule_from_json(obj: Mapping) -> Schedule:
    return Schedule.from_pairs(
        {int(jid): [(int(h), int(t)) for h, t in pairs] for jid, pairs in obj["placements"].items()}
    )


def dumps_canonical(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def load_instance(path) -> Instance:
    with open(path, "r", encoding="utf-8") as fh:
        return instance_from_json(json.load(fh))


def save_instance(instance: Instance, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_canonical(instance_to_json(instance)))


def load_schedule(path) -> Schedule:
    with open(path, "r", encoding="utf-8") as fh:
        return schedule_from_json(json.load(fh))


def save_schedule(schedule: Schedule, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_canonical(schedule_to_json(schedule)))
