"""Throughput maximization: schedule a max-weight job subset on m hosts.

The laminar pipeline is LP -> rounding -> greedy packing:

* solve_relaxation: fractional selection x in [0,1]^J maximizing total
  weight, with the area inside every window chi of the (laminar) family
  capped at omega * m * |chi|.  The capacity headroom bought by omega < 1 is
  exactly what the later packing steps spend.
* round_selection: walks the window forest bottom-up moving fractional area
  from a node's fractional job to fractional jobs strictly inside it, so at
  most one fractional job survives per root-leaf path; survivors round up.
  On an LP-optimal input the strictly-contained jobs have no lower density,
  so the rounded profit never drops below the LP optimum, while the area in
  any window grows by at most lambda * |chi| (one fractional job per branch,
  each of area <= lambda * |chi|).
* schedule_selected: places the rounded set unit by unit.  "pairing" mode
  opens at most one gray bin per slot and closes bins in black pairs whose
  combined load exceeds one, which is the counting argument that makes
  omega = 1/2 - lambda(1/2 + 1/m) always succeed.  "smallfit" mode just
  needs a bin less than (1 - s_j) full in enough slots and backs the
  height-split variant for jobs of height <= alpha.

Arbitrary instances are laminarized first (windows shrink by at most 4x, so
lambda inflates to 4*lambda), and separate pipelines cover high jobs
(height-class decomposition driven by an exact single-host solver), the
log-n fallback, and utilization greedy (weights forced to areas).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from slotsched.laminar import forest_order, is_laminar, transform_instance
from slotsched.model import (
    Instance,
    Job,
    Schedule,
    area,
    density,
    format_rational,
    schedule_to_json,
    slackness,
)
from slotsched.simplex import LinearProgram, solve as lp_solve


class ScheduleError(RuntimeError):
    """The greedy packer got stuck on a job (preconditions not met)."""

    def __init__(self, job_id: int, detail: str):
        super().__init__(f"job {job_id}: {detail}")
        self.job_id = job_id


# -- guarantee-range arithmetic ----------------------------------------------


def alpha_split(m: int, lam: Fraction) -> Fraction:
    """Height threshold separating the small and large pipelines."""
    lam = Fraction(lam)
    return lam * (1 - lam) / (1 - lam + lam / m)


def omega_small(m: int, lam: Fraction) -> Fraction:
    """LP cap for the small-height path; algebraically equals (1-lam)^2."""
    lam = Fraction(lam)
    a = alpha_split(m, lam)
    return (1 - a) * (1 - lam) - a * lam / m


def omega_single(m: int, lam: Fraction) -> Fraction:
    """LP cap under which the pairing scheduler can never fail."""
    return Fraction(1, 2) - Fraction(lam) * (Fraction(1, 2) + Fraction(1, m))


def single_slack_limit(m: int) -> Fraction:
    """Largest lambda (exclusive) with omega_single > 0."""
    return 1 - Fraction(2, m + 2)


def general_slack_limit(m: int) -> Fraction:
    """Largest lambda (exclusive) for the laminarize-then-solve pipeline."""
    return Fraction(1, 4) - Fraction(1, 2 * (m + 2))


# -- LP relaxation ------------------------------------------------------------


@dataclass(frozen=True)
class FractionalSelection:
    values: dict[int, Fraction]  # job id -> x in [0, 1]
    objective: Fraction
    omega: Fraction


def solve_relaxation(instance: Instance, omega: Fraction) -> FractionalSelection:
    """Exact optimum of the windowed-area relaxation over a laminar family."""
    omega = Fraction(omega)
    if omega <= 0:
        raise ValueError(f"omega must be positive, got {omega}")
    windows = [job.window for job in instance.jobs]
    if not is_laminar(windows):
        raise ValueError("job windows are not laminar; transform the instance first")
    if not instance.jobs:
        return FractionalSelection({}, Fraction(0), omega)
    jobs = sorted(instance.jobs, key=lambda j: j.id)
    lp = LinearProgram("max")
    col = {job.id: lp.add_variable(objective=job.weight, lo=0, hi=1) for job in jobs}
    for node in forest_order(windows):
        coeffs = {
            col[job.id]: area(job) for job in jobs if node.contains(job.window)
        }
        lp.add_row(coeffs, "<=", omega * instance.hosts * node.size)
    sol = lp_solve(lp)
    if not sol.optimal:  # box-bounded and 0 is feasible: cannot happen
        raise AssertionError(f"relaxation came back {sol.status}")
    values = {job.id: sol.x[col[job.id]] for job in jobs}
    return FractionalSelection(values, sol.objective, omega)


# -- rounding ------------------------------------------------------------------


@dataclass(frozen=True)
class RoundingResult:
    selected: tuple[int, ...]
    adjusted: dict[int, Fraction]  # post-transfer values, before the round-up


def round_selection(instance: Instance, selection: FractionalSelection | dict) -> RoundingResult:
    """Round a fractional selection to a job set, never losing LP profit when
    the input is LP-optimal.  Zeros stay zero; per window family node the
    selected area exceeds the LP cap by at most lambda * m-th of the node."""
    values = dict(selection.values if isinstance(selection, FractionalSelection) else selection)
    jobs = {job.id: job for job in instance.jobs}
    for jid, x in values.items():
        if jid not in jobs:
            raise ValueError(f"selection mentions unknown job {jid}")
        if not 0 <= x <= 1:
            raise ValueError(f"fractional value {x} for job {jid} outside [0, 1]")

    def fractional(jid: int) -> bool:
        return 0 < values[jid] < 1

    def move_area(donor: int, receiver: int) -> None:
        a_d, a_r = area(jobs[donor]), area(jobs[receiver])
        give = min(a_d * values[donor], a_r * (1 - values[receiver]))
        values[donor] -= give / a_d
        values[receiver] += give / a_r

    order = forest_order(job.window for job in instance.jobs if job.id in values)
    by_density = lambda jid: (-density(jobs[jid]), jid)

    # one fractional job per window: push area toward the denser job
    for node in order:
        while True:
            fracs = sorted(
                (j for j in values if jobs[j].window == node and fractional(j)),
                key=by_density,
            )
            if len(fracs) < 2:
                break
            move_area(fracs[-1], fracs[0])

    # bottom-up: drain a node's fractional job into fractional jobs strictly
    # inside the node until it empties or they all saturate
    for node in order:
        here = [j for j in values if jobs[j].window == node and fractional(j)]
        if not here:
            continue
        (jid,) = here
        below = sorted(
            (
                k
                for k in values
                if fractional(k) and jobs[k].window != node and node.contains(jobs[k].window)
            ),
            key=by_density,
        )
        for k in below:
            if not fractional(jid):
                break
            move_area(jid, k)

    selected = tuple(sorted(j for j, x in values.items() if x > 0))
    return RoundingResult(selected=selected, adjusted=values)


# -- bin state and the two packing modes ---------------------------------------

WHITE, GRAY, BLACK = "white", "gray", "black"


class SlotBins:
    """Mutable bin state for one packing run: m hosts x T slots, scalar loads."""

    def __init__(self, hosts: int, horizon: int):
        self.hosts = hosts
        self.horizon = horizon
        self.load: dict[tuple[int, int], Fraction] = {}
        self.color: dict[tuple[int, int], str] = {}
        self.pairs: list[tuple[tuple[int, int], tuple[int, int]]] = []

    def load_of(self, h: int, t: int) -> Fraction:
        return self.load.get((h, t), Fraction(0))

    def color_of(self, h: int, t: int) -> str:
        return self.color.get((h, t), WHITE)

    def place(self, h: int, t: int, height: Fraction) -> None:
        self.load[(h, t)] = self.load_of(h, t) + height

    def bins_at(self, slots: Iterable[int]) -> list[tuple[int, int]]:
        """(host, slot) pairs ordered lowest host first, then lowest slot."""
        ordered = sorted(set(slots))
        return [(h, t) for h in range(1, self.hosts + 1) for t in ordered]

    def allocate_pairing(self, job_id: int, height: Fraction, avail: Iterable[int]) -> tuple[int, int]:
        """One processing unit of a job into one slot of `avail`.

        Use the first gray bin that fits; if grays exist but none fit, put the
        unit in the first white bin and close it with the first gray as a
        black pair (their combined load then exceeds one); with no gray in
        reach, open the first white bin as the new gray.
        """
        candidates = self.bins_at(avail)
        grays = [b for b in candidates if self.color_of(*b) == GRAY]
        if grays:
            for b in grays:
                if self.load_of(*b) + height <= 1:
                    self.place(*b, height)
                    return b
            for b in candidates:
                if self.color_of(*b) == WHITE:
                    self.place(*b, height)
                    self.color[grays[0]] = BLACK
                    self.color[b] = BLACK
                    self.pairs.append((grays[0], b))
                    return b
            raise ScheduleError(job_id, "no gray bin fits and no white bin available")
        for b in candidates:
            if self.color_of(*b) == WHITE:
                self.place(*b, height)
                self.color[b] = GRAY
                return b
        raise ScheduleError(job_id, "no white bin available to open")

    def open_host(self, t: int, cap: Fraction) -> int | None:
        """Lowest host whose bin at t is strictly less than `cap` full."""
        for h in range(1, self.hosts + 1):
            if self.load_of(h, t) < cap:
                return h
        return None


def schedule_selected(
    instance: Instance, selected: Iterable[int], mode: str = "pairing"
) -> tuple[Schedule, SlotBins]:
    """Pack the selected jobs unit by unit, windows bottom-up, ids ascending.

    Raises ScheduleError when stuck; under the omega preconditions of the
    respective pipeline that must not happen (tested property, not checked
    here).
    """
    if mode not in ("pairing", "smallfit"):
        raise ValueError(f"unknown mode {mode!r}")
    jobs = instance.job_map()
    chosen = [jobs[j] for j in selected]
    node_rank = {w: i for i, w in enumerate(forest_order(j.window for j in chosen))}
    chosen.sort(key=lambda j: (node_rank[j.window], j.id))
    bins = SlotBins(instance.hosts, instance.horizon)
    placements: dict[int, set[tuple[int, int]]] = {}
    for job in chosen:
        height = job.height
        spots: set[tuple[int, int]] = set()
        if mode == "pairing":
            avail = set(job.window.slots())
            for _ in range(job.length):
                h, t = bins.allocate_pairing(job.id, height, avail)
                avail.discard(t)
                spots.add((h, t))
        else:
            good = [
                t for t in job.window.slots() if bins.open_host(t, 1 - height) is not None
            ]
            if len(good) < job.length:
                raise ScheduleError(
                    job.id, f"only {len(good)} open slots for {job.length} units"
                )
            for t in good[: job.length]:
                h = bins.open_host(t, 1 - height)
                bins.place(h, t, height)
                spots.add((h, t))
        placements[job.id] = spots
    return Schedule.from_pairs(placements), bins


# -- solver results -------------------------------------------------------------


@dataclass(frozen=True)
class MaxTResult:
    selected: tuple[int, ...]
    schedule: Schedule
    profit: Fraction
    path: str
    omega: Fraction | None = None
    lp_bound: Fraction | None = None
    dropped: tuple[int, ...] = ()

    def to_json(self) -> dict:
        return {
            "selected": list(self.selected),
            "profit": format_rational(self.profit),
            "path": self.path,
            "omega": None if self.omega is None else format_rational(self.omega),
            "lp_bound": None if self.lp_bound is None else format_rational(self.lp_bound),
            "dropped": list(self.dropped),
            "schedule": schedule_to_json(self.schedule),
        }


def _profit(instance: Instance, ids: Iterable[int]) -> Fraction:
    jm = instance.job_map()
    return sum((jm[j].weight for j in ids), Fraction(0))


def _empty_result(path: str, omega: Fraction | None = None) -> MaxTResult:
    return MaxTResult((), Schedule.from_pairs({}), Fraction(0), path, omega=omega)


# -- exact single-host throughput ------------------------------------------------


def single_host_throughput(
    jobs: Sequence[Job],
) -> tuple[Fraction, tuple[int, ...], dict[int, set[int]]]:
    """Best-weight subset of unit-height jobs feasible on one host, plus its
    earliest-deadline slot assignment.

    Feasibility of a set is decided by the earliest-due-date simulation
    (exact for preemptive single-host windows on integer slots); the subset
    search is include/exclude with a remaining-weight bound, so it is exact
    and affordable for the per-class job counts the callers produce.
    """
    if not jobs:
        return Fraction(0), (), {}
    horizon = max(j.due for j in jobs)

    def edf(sel: list[Job]) -> dict[int, set[int]] | None:
        remaining = {j.id: j.length for j in sel}
        assign: dict[int, set[int]] = {j.id: set() for j in sel}
        for t in range(1, horizon + 1):
            ready = [
                j for j in sel if j.release <= t <= j.due and remaining[j.id] > 0
            ]
            if not ready:
                continue
            job = min(ready, key=lambda j: (j.due, j.id))
            remaining[job.id] -= 1
            assign[job.id].add(t)
        if any(remaining.values()):
            return None
        return assign

    order = sorted(jobs, key=lambda j: (-j.weight, j.id))
    suffix = [Fraction(0)] * (len(order) + 1)
    for i in range(len(order) - 1, -1, -1):
        suffix[i] = suffix[i + 1] + order[i].weight

    best_weight = Fraction(0)
    best_set: list[Job] = []

    def dfs(i: int, current: list[Job], weight: Fraction) -> None:
        nonlocal best_weight, best_set
        if weight > best_weight:
            best_weight = weight
            best_set = list(current)
        if i == len(order) or weight + suffix[i] <= best_weight:
            return
        trial = current + [order[i]]
        if edf(trial) is not None:
            dfs(i + 1, trial, weight + order[i].weight)
        dfs(i + 1, current, weight)

    dfs(0, [], Fraction(0))
    assign = edf(best_set) or {}
    return best_weight, tuple(sorted(j.id for j in best_set)), assign


# -- height classes ----------------------------------------------------------------


def height_class(s: Fraction, delta: Fraction, eps: Fraction) -> int:
    """Largest k >= 0 with delta * (1+eps)^k <= s (requires s >= delta)."""
    if s < delta:
        raise ValueError(f"height {s} below delta {delta}")
    k = 0
    step = delta * (1 + eps)
    while step <= s:
        k += 1
        step *= 1 + eps
    return k


def class_hosts(m: int, delta: Fraction, eps: Fraction, k: int) -> int:
    """Unit-height host budget for class k: m * floor(1 / rounded-height)."""
    h = delta * (1 + eps) ** k
    return m * (Fraction(1) / h).__floor__()


def solve_large_heights(
    instance: Instance, delta: Fraction, eps: Fraction = Fraction(1)
) -> MaxTResult:
    """Height-class decomposition for jobs of height >= delta.

    Per class: round heights down to delta*(1+eps)^k, treat them as unit
    height on m_k = m*floor(1/h_k) virtual hosts filled by repeated exact
    single-host solves, then map virtual hosts back to the m real ones.  When
    m_k > m only floor(floor(1/h_k)/(1+eps)) virtual hosts fit per real host
    at original heights (per-host floor; a global floor can overcommit), so
    the heaviest that many per host survive.  Best class wins.
    """
    delta = Fraction(delta)
    eps = Fraction(eps)
    if not 0 < delta <= 1:
        raise ValueError(f"delta must be in (0, 1], got {delta}")
    if eps <= 0:
        raise ValueError(f"eps must be positive, got {eps}")
    if not instance.jobs:
        return _empty_result("large-heights")
    classes: dict[int, list[Job]] = {}
    for job in instance.jobs:
        classes.setdefault(height_class(job.height, delta, eps), []).append(job)

    m = instance.hosts
    best: tuple[Fraction, int, dict[int, set[tuple[int, int]]], tuple[int, ...]] | None = None
    for k in sorted(classes):
        m_k = class_hosts(m, delta, eps, k)
        remaining = sorted(classes[k], key=lambda j: j.id)
        strips: list[tuple[Fraction, dict[int, set[int]]]] = []
        for _ in range(m_k):
            if not remaining:
                break
            weight, ids, assign = single_host_throughput(remaining)
            if not ids:
                break
            strips.append((weight, assign))
            taken = set(ids)
            remaining = [j for j in remaining if j.id not in taken]
        if m_k > m:
            per_host = ((Fraction(m_k, m)) / (1 + eps)).__floor__()
            keep = min(len(strips), m * per_host)
            order = sorted(range(len(strips)), key=lambda i: (-strips[i][0], i))[:keep]
        else:
            per_host = 1
            order = list(range(len(strips)))
        placements: dict[int, set[tuple[int, int]]] = {}
        ids: list[int] = []
        profit = Fraction(0)
        for rank, idx in enumerate(order):
            host = rank // per_host + 1 if per_host else 1
            weight, assign = strips[idx]
            profit += weight
            for jid, slots in assign.items():
                placements[jid] = {(host, t) for t in slots}
                ids.append(jid)
        if best is None or profit > best[0]:
            best = (profit, k, placements, tuple(sorted(ids)))
    profit, _, placements, ids = best
    return MaxTResult(
        selected=ids,
        schedule=Schedule.from_pairs(placements),
        profit=profit,
        path="large-heights",
    )


# -- solver entry points -------------------------------------------------------------


def _resolve_lambda(instance: Instance, lam: Fraction | None) -> Fraction:
    measured = slackness(instance)
    if lam is None:
        return measured
    lam = Fraction(lam)
    if measured > lam:
        raise ValueError(f"instance slackness {measured} exceeds declared lambda {lam}")
    return lam


def solve_maxt_laminar(
    instance: Instance, lam: Fraction | None = None, variant: str = "single"
) -> MaxTResult:
    """Throughput on laminar windows.

    variant="single": one LP at omega = 1/2 - lambda(1/2 + 1/m) and the
    pairing packer; needs lambda < 1 - 2/(m+2), works for any heights.
    variant="split": heights <= alpha go through the LP at the tighter
    omega = (1-lambda)^2 with the smallfit packer, heights > alpha through
    the height-class pipeline; the better profit wins.
    """
    if variant not in ("single", "split"):
        raise ValueError(f"unknown variant {variant!r}")
    if not is_laminar([j.window for j in instance.jobs]):
        raise ValueError("windows not laminar; use solve_maxt_general")
    if not instance.jobs:
        return _empty_result(f"laminar-{variant}")
    lam = _resolve_lambda(instance, lam)
    m = instance.hosts
    if variant == "single":
        limit = single_slack_limit(m)
        if lam >= limit:
            raise ValueError(f"lambda {lam} >= {limit}; omega would be nonpositive")
        omega = omega_single(m, lam)
        relax = solve_relaxation(instance, omega)
        rounded = round_selection(instance, relax)
        schedule, _ = schedule_selected(instance, rounded.selected, mode="pairing")
        return MaxTResult(
            selected=rounded.selected,
            schedule=schedule,
            profit=_profit(instance, rounded.selected),
            path="laminar-single",
            omega=omega,
            lp_bound=relax.objective,
        )

    alpha = alpha_split(m, lam)
    small = [j for j in instance.jobs if j.height <= alpha]
    large = [j for j in instance.jobs if j.height > alpha]
    small_res = _empty_result("laminar-split-small")
    if small:
        omega = omega_small(m, lam)
        sub = instance.with_jobs(small)
        relax = solve_relaxation(sub, omega)
        rounded = round_selection(sub, relax)
        schedule, _ = schedule_selected(sub, rounded.selected, mode="smallfit")
        small_res = MaxTResult(
            selected=rounded.selected,
            schedule=schedule,
            profit=_profit(instance, rounded.selected),
            path="laminar-split-small",
            omega=omega,
            lp_bound=relax.objective,
        )
    large_res = _empty_result("laminar-split-large")
    if large:
        large_res = solve_large_heights(instance.with_jobs(large), delta=alpha)
    return small_res if small_res.profit >= large_res.profit else large_res


def solve_maxt_general(
    instance: Instance, lam: Fraction | None = None, variant: str = "single"
) -> MaxTResult:
    """Arbitrary windows: laminarize (lambda inflates to at most 4*lambda),
    solve there, keep the schedule (mapped windows nest in the originals).
    Jobs whose length no longer fits the mapped window are dropped and
    reported in the result."""
    if not instance.jobs:
        return _empty_result(f"general-{variant}")
    lam = _resolve_lambda(instance, lam)
    trans, mapping = transform_instance(instance)
    lam_t = 4 * lam  # windows shrink at most 4x, so slackness(trans) <= 4 * lam
    if variant == "single":
        limit = general_slack_limit(instance.hosts)
        if lam >= limit:
            raise ValueError(f"lambda {lam} >= {limit}; omega would be nonpositive")
    elif lam >= Fraction(1, 4):
        raise ValueError(f"lambda {lam} >= 1/4; the laminarized instance leaves no headroom")
    inner = solve_maxt_laminar(trans, lam=lam_t, variant=variant)
    return MaxTResult(
        selected=inner.selected,
        schedule=inner.schedule,
        profit=inner.profit,
        path=f"general-{inner.path}",
        omega=inner.omega,
        lp_bound=inner.lp_bound,
        dropped=mapping.untransformable,
    )


def solve_maxt_logn(instance: Instance) -> MaxTResult:
    """Split at height 1/n: everything below fits together on one host (the
    heights sum to less than one), everything above goes through the
    height-class pipeline; the better side wins."""
    n = len(instance.jobs)
    if n == 0:
        return _empty_result("logn")
    cut = Fraction(1, n)
    tiny = [j for j in instance.jobs if j.height < cut]
    tall = [j for j in instance.jobs if j.height >= cut]
    tiny_res = _empty_result("logn-tiny")
    if tiny:
        placements = {
            job.id: {(1, t) for t in list(job.window.slots())[: job.length]}
            for job in tiny
        }
        tiny_res = MaxTResult(
            selected=tuple(sorted(j.id for j in tiny)),
            schedule=Schedule.from_pairs(placements),
            profit=sum((j.weight for j in tiny), Fraction(0)),
            path="logn-tiny",
        )
    tall_res = _empty_result("logn-tall")
    if tall:
        tall_res = solve_large_heights(instance.with_jobs(tall), delta=cut)
    if tiny_res.profit >= tall_res.profit:
        return MaxTResult(
            selected=tiny_res.selected,
            schedule=tiny_res.schedule,
            profit=tiny_res.profit,
            path="logn-tiny",
        )
    return MaxTResult(
        selected=tall_res.selected,
        schedule=tall_res.schedule,
        profit=tall_res.profit,
        path="logn-tall",
    )


def utilization_bound(m: int, lam: Fraction) -> Fraction:
    """Guaranteed fraction of the long-job optimum the greedy achieves."""
    return (1 - alpha_split(m, lam)) * Fraction(lam) / 3


def greedy_long_lowheight(instance: Instance, lam: Fraction) -> MaxTResult:
    """Utilization greedy for long jobs of height <= alpha: admit a job iff
    its window still has `length` slots where some bin is less than
    (1 - height) full, widest windows first."""
    alpha = alpha_split(instance.hosts, lam)
    eligible = sorted(
        (j for j in instance.jobs if j.height <= alpha),
        key=lambda j: (-j.window.size, j.id),
    )
    bins = SlotBins(instance.hosts, instance.horizon)
    placements: dict[int, set[tuple[int, int]]] = {}
    admitted: list[int] = []
    for job in eligible:
        cap = 1 - job.height
        good = [t for t in job.window.slots() if bins.open_host(t, cap) is not None]
        if len(good) < job.length:
            continue
        spots = set()
        for t in good[: job.length]:
            h = bins.open_host(t, cap)
            bins.place(h, t, job.height)
            spots.add((h, t))
        placements[job.id] = spots
        admitted.append(job.id)
    ids = tuple(sorted(admitted))
    return MaxTResult(
        selected=ids,
        schedule=Schedule.from_pairs(placements),
        profit=_profit(instance, ids),
        path="utilization-greedy",
    )


def solve_utilization(instance: Instance, lam: Fraction = Fraction(1, 5)) -> MaxTResult:
    """Maximize total scheduled area (weights are forced to areas).

    Jobs split at slackness lambda < 1/4: short jobs ride the general
    throughput pipeline, long low jobs the sorted greedy, long high jobs the
    height-class pipeline; best of the three candidates is returned.
    """
    lam = Fraction(lam)
    if not 0 < lam < Fraction(1, 4):
        raise ValueError(f"lambda must be in (0, 1/4), got {lam}")
    if not instance.jobs:
        return _empty_result("utilization")
    weighted = instance.with_jobs(
        Job(
            id=j.id,
            release=j.release,
            due=j.due,
            length=j.length,
            demand=j.demand,
            weight=area(j),
        )
        for j in instance.jobs
    )
    alpha = alpha_split(weighted.hosts, lam)
    short = [j for j in weighted.jobs if Fraction(j.length, j.window.size) <= lam]
    long_jobs = [j for j in weighted.jobs if Fraction(j.length, j.window.size) > lam]
    candidates: list[MaxTResult] = []
    long_low = [j for j in long_jobs if j.height <= alpha]
    if long_low:
        candidates.append(greedy_long_lowheight(weighted.with_jobs(long_jobs), lam))
    long_high = [j for j in long_jobs if j.height > alpha]
    if long_high:
        candidates.append(solve_large_heights(weighted.with_jobs(long_high), delta=alpha))
    if short:
        candidates.append(solve_maxt_general(weighted.with_jobs(short), variant="split"))
    if not candidates:
        return _empty_result("utilization")
    best = max(candidates, key=lambda r: r.profit)
    return MaxTResult(
        selected=best.selected,
        schedule=best.schedule,
        profit=best.profit,
        path=f"utilization-{best.path}",
        omega=best.omega,
        lp_bound=best.lp_bound,
    )
