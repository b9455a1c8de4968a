"""Host minimization: complete every job on as few hosts as possible.

The pipeline:

* solve_config_lp: exact column generation on the configuration relaxation.
  A configuration (S, t) is a job set that fits one host at slot t in all d
  demand dimensions.  The master minimizes the host count m subject to: at
  most m configurations active per slot, each (job, slot) covered at most
  once, each job covered at least `length` times.  Pricing per slot is an
  exact multi-dimensional knapsack over profits alpha_j - beta_{j,t}; a
  column enters when its value exceeds gamma_t.  All arithmetic is rational,
  so m* is the exact LP optimum and a true lower bound on the integer answer.
* sample_configurations: ceil(m*) rounds up to m_int; every slot draws m1
  configurations independently (probability x_C / m* each, possibly none),
  then overlapping draws are disjointified in draw order.  Draw i of slot t
  runs on phase-1 host i+1.
* build_residual: a job covered n_j times keeps its first `length` covered
  slots (forb), and the remainder p' = length - n_j becomes a residual job
  with scalarized (max-norm) demand.
* schedule_residual: residual windows are mapped into the fixed binary
  laminar tree and packed by the pairing allocator on m_int fresh hosts,
  avoiding each job's forb slots.  Residuals whose mapped window cannot hold
  them get a dedicated host each (counted; absent when windows are roomy).
* partition_by_window: for horizons too long for one shot, window sizes are
  bucketed by the psi recursion into O(log* T) ranges, each range cut into
  time-disjoint odd/even slabs that share a host pool, and every slab solved
  independently.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from slotsched.laminar import LaminarTree, build_tree, forest_order, map_window
from slotsched.maxt import ScheduleError, SlotBins
from slotsched.model import (
    Instance,
    Job,
    Schedule,
    TimeWindow,
    format_rational,
    schedule_to_json,
    slackness,
    validate,
)
from slotsched.simplex import LinearProgram, solve as lp_solve


class MinRError(RuntimeError):
    """Residual scheduling failed past every retry and escalation."""


# -- configurations -------------------------------------------------------------


@dataclass(frozen=True)
class Configuration:
    """A job set that shares one host at one slot."""

    slot: int
    jobs: frozenset[int]

    @property
    def key(self) -> tuple[int, tuple[int, ...]]:
        return (self.slot, tuple(sorted(self.jobs)))


def config_fits(instance: Instance, ids: Iterable[int], slot: int) -> bool:
    """True when every job's window covers the slot and the demands fit one
    host in every dimension."""
    jm = instance.job_map()
    chosen = [jm[j] for j in ids]
    if any(not j.window.contains_slot(slot) for j in chosen):
        return False
    return all(
        sum((j.demand[i] for j in chosen), Fraction(0)) <= 1
        for i in range(instance.dim)
    )


# -- pricing ----------------------------------------------------------------------


def price_column(
    instance: Instance,
    slot: int,
    alpha: Mapping[int, Fraction],
    beta: Mapping[tuple[int, int], Fraction],
) -> tuple[Fraction, frozenset[int]]:
    """Exact best configuration at `slot` under profits alpha_j - beta_{j,slot}.

    Depth-first include/exclude with a remaining-profit bound; items with
    nonpositive profit never help and are dropped up front.  Returns
    (value, job set), (0, empty) when nothing profitable fits.
    """
    items = []
    for job in instance.jobs:
        if not job.window.contains_slot(slot):
            continue
        profit = alpha.get(job.id, Fraction(0)) - beta.get((job.id, slot), Fraction(0))
        if profit > 0:
            items.append((profit, job.id, job.demand))
    items.sort(key=lambda it: (-it[0], it[1]))
    suffix = [Fraction(0)] * (len(items) + 1)
    for i in range(len(items) - 1, -1, -1):
        suffix[i] = suffix[i + 1] + items[i][0]

    dim = instance.dim
    best_value = Fraction(0)
    best_set: tuple[int, ...] = ()

    def dfs(i: int, value: Fraction, chosen: tuple[int, ...], room: tuple[Fraction, ...]):
        nonlocal best_value, best_set
        if value > best_value:
            best_value, best_set = value, chosen
        if i == len(items) or value + suffix[i] <= best_value:
            return
        profit, jid, demand = items[i]
        if all(demand[k] <= room[k] for k in range(dim)):
            dfs(
                i + 1,
                value + profit,
                chosen + (jid,),
                tuple(room[k] - demand[k] for k in range(dim)),
            )
        dfs(i + 1, value, chosen, room)

    dfs(0, Fraction(0), (), tuple(Fraction(1) for _ in range(dim)))
    return best_value, frozenset(best_set)


# -- configuration LP ---------------------------------------------------------------


@dataclass(frozen=True)
class IterationAudit:
    objective: Fraction
    columns_added: int
    max_violation: Fraction


@dataclass(frozen=True)
class ConfigLpResult:
    m_star: Fraction
    m_int: int
    columns: tuple[tuple[Configuration, Fraction], ...]  # positive-value columns
    column_count: int  # all columns generated, including zero-value ones
    slots: tuple[int, ...]  # slots covered by at least one window
    alpha: dict[int, Fraction]
    beta: dict[tuple[int, int], Fraction]
    gamma: dict[int, Fraction]
    iterations: int
    trace: tuple[IterationAudit, ...]


def solve_config_lp(instance: Instance) -> ConfigLpResult:
    """Exact optimum of the configuration relaxation by column generation.

    Rows (all >=): per covered slot t, m - sum of x_C at t >= 0; per (job,
    slot) in the job's window, -sum of x_C containing the job at t >= -1;
    per job, sum of x_C containing it >= length.  Slots no window covers
    never carry a configuration, so they get no row.  Seed columns are
    singletons at each job's first `length` window slots, which are feasible
    on their own.  Each pass prices every covered slot and adds every
    improving column, until a full pass adds none.  The trace records, per
    master solve, the objective and the (always zero) worst exact constraint
    violation.
    """
    jobs = sorted(instance.jobs, key=lambda j: j.id)
    slots = sorted({t for job in jobs for t in job.window.slots()})
    lp = LinearProgram("min")
    m_var = lp.add_variable(objective=1)

    col_of: dict[tuple[int, tuple[int, ...]], int] = {}
    configs: list[Configuration] = []  # index-aligned with column variables

    def new_config(c: Configuration) -> int:
        var = lp.add_variable(objective=0)
        col_of[c.key] = var
        configs.append(c)
        return var

    seeds: dict[int, list[int]] = {}  # slot -> column var indices
    for job in jobs:
        for t in list(job.window.slots())[: job.length]:
            var = new_config(Configuration(t, frozenset({job.id})))
            seeds.setdefault(t, []).append(var)

    slot_row: dict[int, int] = {}
    pair_row: dict[tuple[int, int], int] = {}
    job_row: dict[int, int] = {}
    for t in slots:
        coeffs = {m_var: Fraction(1)}
        for var in seeds.get(t, []):
            coeffs[var] = Fraction(-1)
        slot_row[t] = lp.add_row(coeffs, ">=", 0)
    for job in jobs:
        for t in job.window.slots():
            entries = {
                var: Fraction(-1)
                for var in seeds.get(t, [])
                if job.id in configs[var - 1].jobs
            }
            pair_row[(job.id, t)] = lp.add_row(entries, ">=", -1)
    for job in jobs:
        entries = {
            var: Fraction(1)
            for var, c in enumerate(configs, start=1)
            if job.id in c.jobs
        }
        job_row[job.id] = lp.add_row(entries, ">=", job.length)

    trace: list[IterationAudit] = []

    def audited_solve(added: int):
        sol = lp_solve(lp)
        if not sol.optimal:
            raise AssertionError(f"configuration master came back {sol.status}")
        worst = Fraction(0)
        for i, (_, rel, rhs) in enumerate(lp.rows):
            act = lp.row_activity(sol.x, i)
            assert rel == ">="
            worst = max(worst, rhs - act)
        trace.append(IterationAudit(sol.objective, added, worst))
        return sol

    sol = audited_solve(added=len(configs))
    while True:
        duals = sol.duals
        alpha = {j.id: duals[job_row[j.id]] for j in jobs}
        beta = {key: duals[row] for key, row in pair_row.items()}
        gamma = {t: duals[row] for t, row in slot_row.items()}
        added = 0
        for t in slots:
            value, chosen = price_column(instance, t, alpha, beta)
            if chosen and value > gamma[t]:
                c = Configuration(t, chosen)
                assert c.key not in col_of, "priced an existing column"
                entries = {slot_row[t]: Fraction(-1)}
                for jid in chosen:
                    entries[pair_row[(jid, t)]] = Fraction(-1)
                    entries[job_row[jid]] = Fraction(1)
                var = lp.add_column(0, entries)
                col_of[c.key] = var
                configs.append(c)
                added += 1
        if added == 0:
            break
        sol = audited_solve(added)

    m_star = sol.objective
    columns = tuple(
        (c, sol.x[var])
        for var, c in enumerate(configs, start=1)
        if sol.x[var] > 0
    )
    return ConfigLpResult(
        m_star=m_star,
        m_int=math.ceil(m_star),
        columns=columns,
        column_count=len(configs),
        slots=tuple(slots),
        alpha={j.id: sol.duals[job_row[j.id]] for j in jobs},
        beta={key: sol.duals[row] for key, row in pair_row.items()},
        gamma={t: sol.duals[row] for t, row in slot_row.items()},
        iterations=len(trace),
        trace=tuple(trace),
    )


# -- randomized sampling --------------------------------------------------------------


def _unit_fraction(rng: random.Random) -> Fraction:
    """Uniform rational in [0, 1) with exact comparisons downstream."""
    return Fraction(rng.getrandbits(53), 2**53)


def sample_configurations(
    instance: Instance, lpsol: ConfigLpResult, draws: int, seed
) -> dict[int, list[frozenset[int]]]:
    """Per slot: `draws` independent picks, configuration C with probability
    x_C / m*, nothing with the leftover probability; overlapping picks are
    disjointified in draw order (later sets drop jobs already taken).  Each
    slot consumes its own derived random stream, so results do not depend on
    slot evaluation order.
    """
    m_star = lpsol.m_star
    by_slot: dict[int, list[tuple[tuple[int, ...], Fraction]]] = {}
    for c, x in lpsol.columns:
        by_slot.setdefault(c.slot, []).append((tuple(sorted(c.jobs)), x))
    out: dict[int, list[frozenset[int]]] = {}
    for t in lpsol.slots:
        cols = sorted(by_slot.get(t, []))
        mass = sum((x for _, x in cols), Fraction(0))
        if mass > m_star:
            raise ValueError(
                f"slot {t}: configuration mass {mass} exceeds m* = {m_star}"
            )
        rng = random.Random(f"{seed}:slot{t}")
        picks: list[frozenset[int]] = []
        taken: set[int] = set()
        for _ in range(draws):
            chosen: frozenset[int] = frozenset()
            if m_star > 0 and cols:
                u = _unit_fraction(rng) * m_star
                acc = Fraction(0)
                for ids, x in cols:
                    acc += x
                    if u < acc:
                        chosen = frozenset(ids)
                        break
            chosen = chosen - taken
            taken |= chosen
            picks.append(chosen)
        out[t] = picks
    return out


# -- residuals ---------------------------------------------------------------------


@dataclass(frozen=True)
class ResidualJob:
    """Unfinished part of a job after phase 1: `units` slots still needed,
    scalar height (max-norm), original window, and the forbidden slots where
    phase 1 already runs the job."""

    job_id: int
    units: int
    height: Fraction
    window: TimeWindow
    forb: frozenset[int]


def build_residual(
    instance: Instance, chosen: Mapping[int, Sequence[frozenset[int]]]
) -> tuple[tuple[ResidualJob, ...], dict[int, tuple[tuple[int, int], ...]]]:
    """From per-slot disjoint picks, keep each job's first `length` covered
    slots as its phase-1 assignment and return the leftovers as residuals.

    Returns (residuals, kept) where kept maps job id -> ((slot, draw), ...)
    actually retained; forb(job) is exactly the kept slots, so the identity
    units + |forb| = length holds for every residual job.
    """
    cover: dict[int, list[tuple[int, int]]] = {}
    for t in sorted(chosen):
        for draw, ids in enumerate(chosen[t]):
            for jid in ids:
                cover.setdefault(jid, []).append((t, draw))
    residuals: list[ResidualJob] = []
    kept: dict[int, tuple[tuple[int, int], ...]] = {}
    for job in sorted(instance.jobs, key=lambda j: j.id):
        mine = cover.get(job.id, [])
        mine.sort()
        keep = tuple(mine[: job.length])
        kept[job.id] = keep
        missing = job.length - len(keep)
        if missing > 0:
            residuals.append(
                ResidualJob(
                    job_id=job.id,
                    units=missing,
                    height=job.height,
                    window=job.window,
                    forb=frozenset(t for t, _ in keep),
                )
            )
    return tuple(residuals), kept


def residual_avail(residual: ResidualJob, tree: LaminarTree) -> list[int]:
    """Slots the residual may use: its window mapped into the tree, minus the
    forbidden phase-1 slots."""
    mapped = map_window(tree, residual.window)
    return [t for t in mapped.slots() if t not in residual.forb]


def split_residuals(
    residuals: Sequence[ResidualJob], tree: LaminarTree
) -> tuple[list[ResidualJob], list[ResidualJob]]:
    """(schedulable, fallback): a residual is schedulable when its mapped
    window keeps at least `units` non-forbidden slots; the rest each need a
    dedicated host (never happens when windows are roomy, counted anyway)."""
    schedulable: list[ResidualJob] = []
    fallback: list[ResidualJob] = []
    for r in residuals:
        if len(residual_avail(r, tree)) >= r.units:
            schedulable.append(r)
        else:
            fallback.append(r)
    return schedulable, fallback


def schedule_residual(
    residuals: Sequence[ResidualJob], hosts: int, tree: LaminarTree
) -> tuple[Schedule, SlotBins]:
    """Pack residuals on `hosts` fresh hosts with the pairing allocator,
    windows mapped into the tree, forb slots excluded, smaller windows first.
    Raises ScheduleError when stuck (cannot happen when every mapped window
    has enough free room and the residual area per tree node is small)."""
    mapped = {r.job_id: map_window(tree, r.window) for r in residuals}
    rank = {w: i for i, w in enumerate(forest_order(mapped.values()))}
    ordered = sorted(residuals, key=lambda r: (rank[mapped[r.job_id]], r.job_id))
    bins = SlotBins(hosts, tree.horizon)
    placements: dict[int, set[tuple[int, int]]] = {}
    for r in ordered:
        avail = set(residual_avail(r, tree))
        if len(avail) < r.units:
            raise ScheduleError(
                r.job_id, f"mapped window offers {len(avail)} slots for {r.units} units"
            )
        spots: set[tuple[int, int]] = set()
        for _ in range(r.units):
            h, t = bins.allocate_pairing(r.job_id, r.height, avail)
            avail.discard(t)
            spots.add((h, t))
        placements[r.job_id] = spots
    return Schedule.from_pairs(placements), bins


# -- parameters and reports ------------------------------------------------------------


@dataclass(frozen=True)
class MinRParams:
    c: Fraction = Fraction(6)
    epsilon: Fraction = Fraction(1, 10)
    omega: Fraction | None = None  # residual-area target; default (1 - 4*lambda)/8
    theta: Fraction = Fraction(1)
    max_retries: int = 5

    def __post_init__(self):
        if self.c <= 2:
            raise ValueError(f"c must exceed 2, got {self.c}")
        if not 0 < self.epsilon < 1:
            raise ValueError(f"epsilon must be in (0, 1), got {self.epsilon}")
        if self.omega is not None and not 0 < self.omega < 1:
            raise ValueError(f"omega must be in (0, 1), got {self.omega}")
        if self.theta <= 0:
            raise ValueError(f"theta must be positive, got {self.theta}")
        if self.max_retries < 1:
            raise ValueError(f"max_retries must be at least 1, got {self.max_retries}")


def log2_factor(dim: int) -> Fraction | float:
    """max(1, log2 dim); exact for powers of two."""
    if dim < 1:
        raise ValueError(f"dimension must be positive, got {dim}")
    if dim & (dim - 1) == 0:
        return Fraction(max(1, dim.bit_length() - 1))
    return max(1.0, math.log2(dim))


def draw_count(c: Fraction, m_int: int, dim: int) -> int:
    """Phase-1 hosts: ceil(c * m_int * max(1, log2 d))."""
    return math.ceil(c * m_int * log2_factor(dim))


def window_condition_threshold(
    horizon: int, dim: int, m_int: int, params: MinRParams
) -> float:
    """Window length above which the concentration guarantee is designed to
    hold: theta * d^2 * max(1, log2 d) * log2(T / sqrt(epsilon)) / m."""
    if m_int == 0 or horizon == 0:
        return 0.0
    t_term = math.log2(horizon / math.sqrt(float(params.epsilon)))
    return float(params.theta) * dim * dim * float(log2_factor(dim)) * t_term / m_int


@dataclass(frozen=True)
class ResidualAreaReport:
    omega: Fraction
    hosts_bound: int  # the m the bound is scaled by (m_int)
    checked: int
    violations: int
    qualifying_checked: int
    qualifying_violations: int
    threshold: float  # qualifying interval length
    worst_ratio: float  # max residual area / bound over checked intervals

    @property
    def rate(self) -> float:
        return self.violations / self.checked if self.checked else 0.0

    @property
    def qualifying_rate(self) -> float:
        return (
            self.qualifying_violations / self.qualifying_checked
            if self.qualifying_checked
            else 0.0
        )

    def to_json(self) -> dict:
        return {
            "omega": format_rational(self.omega),
            "hosts_bound": self.hosts_bound,
            "checked": self.checked,
            "violations": self.violations,
            "rate": self.rate,
            "qualifying_checked": self.qualifying_checked,
            "qualifying_violations": self.qualifying_violations,
            "qualifying_rate": self.qualifying_rate,
            "threshold": self.threshold,
            "worst_ratio": self.worst_ratio,
        }


def residual_area_report(
    instance: Instance,
    residuals: Sequence[ResidualJob],
    m_int: int,
    params: MinRParams = MinRParams(),
) -> ResidualAreaReport:
    """Compare residual area against omega * m_int * |I| on every subinterval
    I of the horizon (exhaustive for T <= 64, a seeded 2000-interval sample
    beyond).  Also reported for the qualifying intervals at least as long as
    the design threshold."""
    horizon = instance.horizon
    if params.omega is not None:
        omega = params.omega
    else:
        lam = slackness(instance)
        omega = (1 - 4 * lam) / 8
    if horizon <= 64:
        intervals = [
            (a, b) for a in range(1, horizon + 1) for b in range(a, horizon + 1)
        ]
    else:
        rng = random.Random(f"residual-area:{horizon}")
        intervals = sorted(
            {
                tuple(sorted((rng.randint(1, horizon), rng.randint(1, horizon))))
                for _ in range(2000)
            }
        )
    threshold = window_condition_threshold(horizon, instance.dim, m_int, params)
    checked = violations = q_checked = q_violations = 0
    worst = 0.0
    for a, b in intervals:
        size = b - a + 1
        inside = sum(
            (
                r.units * r.height
                for r in residuals
                if a <= r.window.start and r.window.end <= b
            ),
            Fraction(0),
        )
        bound = omega * m_int * size
        checked += 1
        bad = inside > bound
        violations += bad
        if bound > 0:
            worst = max(worst, float(inside / bound))
        if size >= threshold:
            q_checked += 1
            q_violations += bad
    return ResidualAreaReport(
        omega=omega,
        hosts_bound=m_int,
        checked=checked,
        violations=violations,
        qualifying_checked=q_checked,
        qualifying_violations=q_violations,
        threshold=threshold,
        worst_ratio=worst,
    )


# -- end-to-end solver -------------------------------------------------------------------


@dataclass(frozen=True)
class MinRResult:
    schedule: Schedule
    hosts_used: int
    m_star: Fraction
    m_int: int
    m1: int
    m2: int
    retries: int
    effective_c: Fraction
    fallback_ids: tuple[int, ...]
    phase2_idle: int
    residual_count: int
    residual_stats: ResidualAreaReport
    window_condition_met: int
    window_condition_total: int
    window_threshold: float

    def to_json(self) -> dict:
        return {
            "hosts_used": self.hosts_used,
            "m_star": format_rational(self.m_star),
            "m1": self.m1,
            "m2": self.m2,
            "retries": self.retries,
            "effective_c": format_rational(self.effective_c),
            "fallbacks": list(self.fallback_ids),
            "phase2_idle": self.phase2_idle,
            "residual_count": self.residual_count,
            "residual_area_stats": self.residual_stats.to_json(),
            "window_condition": {
                "met": self.window_condition_met,
                "total": self.window_condition_total,
                "threshold": self.window_threshold,
            },
            "schedule": schedule_to_json(self.schedule),
        }


def solve_minr(
    instance: Instance, params: MinRParams = MinRParams(), seed=0
) -> MinRResult:
    """Complete every job, reporting the hosts used.

    Phase 1 samples LP configurations onto m1 = ceil(c * m_int * max(1,
    log2 d)) hosts; phase 2 packs the residuals onto m_int more.  A stuck
    phase 2 retries with fresh randomness up to max_retries times, then
    another max_retries with c + 1, then raises MinRError.  Residuals whose
    tree-mapped window cannot hold them run on dedicated extra hosts
    (fallbacks; empty when windows are roomy relative to lengths).  Both
    phase-2 hosts and fallbacks count toward hosts_used.
    """
    lpsol = solve_config_lp(instance)
    m_int = lpsol.m_int
    horizon = instance.horizon
    tree = build_tree(horizon) if horizon else None
    threshold = window_condition_threshold(horizon, instance.dim, m_int, params)
    met = sum(1 for j in instance.jobs if j.window.size >= threshold)

    attempts = 2 * params.max_retries
    for attempt in range(attempts):
        c_eff = params.c if attempt < params.max_retries else params.c + 1
        m1 = draw_count(c_eff, m_int, instance.dim)
        chosen = sample_configurations(instance, lpsol, m1, seed=f"{seed}:a{attempt}")
        residuals, kept = build_residual(instance, chosen)
        work_tree = tree or build_tree(1)
        schedulable, fallback = split_residuals(residuals, work_tree)
        try:
            phase2, bins2 = schedule_residual(schedulable, m_int, work_tree)
        except ScheduleError:
            continue

        placements: dict[int, set[tuple[int, int]]] = {}
        for jid, pairs in kept.items():
            if pairs:
                placements[jid] = {(draw + 1, t) for t, draw in pairs}
        for jid, spots in phase2.placements.items():
            placements.setdefault(jid, set()).update(
                (m1 + h, t) for h, t in spots
            )
        for k, r in enumerate(fallback, start=1):
            host = m1 + m_int + k
            free = [t for t in r.window.slots() if t not in r.forb][: r.units]
            placements.setdefault(r.job_id, set()).update((host, t) for t in free)

        hosts_used = m1 + m_int + len(fallback)
        schedule = Schedule.from_pairs(placements)
        report = validate(
            instance, schedule, require_all_complete=True, hosts=hosts_used
        )
        if not report.feasible:
            raise AssertionError(
                f"internal: assembled schedule invalid: {report.violations[:3]}"
            )
        used_phase2 = sum(1 for v in bins2.load.values() if v > 0)
        return MinRResult(
            schedule=schedule,
            hosts_used=hosts_used,
            m_star=lpsol.m_star,
            m_int=m_int,
            m1=m1,
            m2=m_int,
            retries=attempt,
            effective_c=c_eff,
            fallback_ids=tuple(r.job_id for r in fallback),
            phase2_idle=m_int * horizon - used_phase2,
            residual_count=len(residuals),
            residual_stats=residual_area_report(instance, residuals, m_int, params),
            window_condition_met=met,
            window_condition_total=len(instance.jobs),
            window_threshold=threshold,
        )
    raise MinRError(
        f"residual scheduling failed {attempts} attempts "
        f"(c = {params.c} then {params.c + 1}); seed {seed!r}"
    )


# -- window-size partition ------------------------------------------------------------------


@dataclass(frozen=True)
class PsiPartition:
    gamma: float
    psi: tuple[float, ...]  # psi[0] = 0 sentinel; psi[kappa] == horizon
    kappa: int
    horizon: int

    def ranges(self) -> list[tuple[float, float]]:
        """Window-size buckets (lo exclusive, hi inclusive] covering (0, T]."""
        return [(self.psi[w], self.psi[w + 1]) for w in range(self.kappa)]


def psi_table(horizon: int, dim: int, theta: Fraction = Fraction(1)) -> PsiPartition:
    """The recursion psi(1) = 4*ceil(gamma^2), psi(i) = min(T, 2^(psi(i-1)/2gamma))
    with gamma = theta * d^2 * max(1, log2 d), capped at T.  Guards: the
    exponent is compared against log2 T before exponentiating (no overflow),
    and a non-increasing step jumps straight to T (the recursion has provably
    escaped its growth regime, e.g. tiny gamma)."""
    if horizon < 1:
        raise ValueError(f"horizon must be positive, got {horizon}")
    gamma = float(theta) * dim * dim * float(log2_factor(dim))
    psi = [0.0, float(min(horizon, 4 * math.ceil(gamma * gamma)))]
    while psi[-1] < horizon:
        prev = psi[-1]
        exponent = prev / (2 * gamma)
        if exponent >= math.log2(horizon):
            nxt = float(horizon)
        else:
            nxt = min(float(horizon), 2.0**exponent)
        if nxt <= prev:
            nxt = float(horizon)
        psi.append(nxt)
    return PsiPartition(
        gamma=gamma, psi=tuple(psi), kappa=len(psi) - 1, horizon=horizon
    )


def slab_windows(block: int, horizon: int) -> tuple[list[TimeWindow], list[TimeWindow]]:
    """Odd and even slab families of width 2*block covering [1, horizon].

    Even slabs start at 1, 2B+1, 4B+1, ...; odd slabs at B+1, 3B+1, ....
    Any window of length at most B lies inside a slab of one family."""
    odd: list[TimeWindow] = []
    even: list[TimeWindow] = []
    i = 0
    while 2 * i * block + 1 <= horizon:
        even.append(TimeWindow(2 * i * block + 1, min((2 * i + 2) * block, horizon)))
        i += 1
    i = 0
    while (2 * i + 1) * block + 1 <= horizon:
        odd.append(
            TimeWindow((2 * i + 1) * block + 1, min((2 * i + 3) * block, horizon))
        )
        i += 1
    return odd, even


@dataclass(frozen=True)
class SlabRun:
    range_index: int
    parity: str  # "odd" | "even"
    slab: TimeWindow
    job_ids: tuple[int, ...]
    result: MinRResult
    host_base: int  # merged schedule uses hosts host_base+1 .. host_base+hosts_used


@dataclass(frozen=True)
class PartitionResult:
    partition: PsiPartition
    runs: tuple[SlabRun, ...]
    pool_hosts: tuple[tuple[int, int], ...]  # per range: (odd pool, even pool)
    total_hosts: int
    schedule: Schedule

    def to_json(self) -> dict:
        return {
            "gamma": self.partition.gamma,
            "psi": list(self.partition.psi[1:]),
            "kappa": self.partition.kappa,
            "total_hosts": self.total_hosts,
            "pools": [list(p) for p in self.pool_hosts],
            "runs": [
                {
                    "range": r.range_index,
                    "parity": r.parity,
                    "slab": [r.slab.start, r.slab.end],
                    "jobs": list(r.job_ids),
                    "hosts_used": r.result.hosts_used,
                    "host_base": r.host_base,
                }
                for r in self.runs
            ],
            "schedule": schedule_to_json(self.schedule),
        }


def partition_by_window(
    instance: Instance, params: MinRParams = MinRParams(), seed=0
) -> PartitionResult:
    """Bucket jobs by window size with the psi recursion, cut each bucket
    into time-disjoint odd/even slabs, solve every slab independently, and
    merge: a range's odd slabs share one host pool (they never overlap in
    time), its even slabs another, and ranges stack pools on top of each
    other.  Every job lands in exactly one slab."""
    part = psi_table(max(instance.horizon, 1), instance.dim, params.theta)
    horizon = instance.horizon
    range_jobs: dict[int, list[Job]] = {}
    for job in instance.jobs:
        size = job.window.size
        for w, (lo, hi) in enumerate(part.ranges()):
            if lo < size <= hi:
                range_jobs.setdefault(w, []).append(job)
                break
        else:
            raise AssertionError(f"job {job.id}: window size {size} outside (0, T]")

    runs: list[SlabRun] = []
    pools: list[tuple[int, int]] = []
    base = 0
    merged: dict[int, set[tuple[int, int]]] = {}
    for w, (lo, hi) in enumerate(part.ranges()):
        jobs_here = range_jobs.get(w, [])
        if not jobs_here:
            pools.append((0, 0))
            continue
        block = math.ceil(hi)
        odd_slabs, even_slabs = slab_windows(block, horizon)
        groups: dict[tuple[str, TimeWindow], list[Job]] = {}
        for job in jobs_here:
            slab = next((s for s in odd_slabs if s.contains(job.window)), None)
            parity = "odd"
            if slab is None:
                slab = next((s for s in even_slabs if s.contains(job.window)), None)
                parity = "even"
            if slab is None:
                raise AssertionError(
                    f"job {job.id}: window fits no slab of width {2 * block}"
                )
            groups.setdefault((parity, slab), []).append(job)
        range_pool = {}
        for parity in ("odd", "even"):
            slabs = sorted(
                (s for p, s in groups if p == parity), key=lambda s: s.start
            )
            parity_runs = []
            for slab in slabs:
                sub = instance.with_jobs(groups[(parity, slab)])
                result = solve_minr(
                    sub, params, seed=f"{seed}:w{w}:{parity}:{slab.start}"
                )
                parity_runs.append((slab, sub, result))
            pool = max((r.hosts_used for _, _, r in parity_runs), default=0)
            for slab, sub, result in parity_runs:
                runs.append(
                    SlabRun(
                        range_index=w,
                        parity=parity,
                        slab=slab,
                        job_ids=tuple(sorted(j.id for j in sub.jobs)),
                        result=result,
                        host_base=base,
                    )
                )
                for jid, spots in result.schedule.placements.items():
                    merged.setdefault(jid, set()).update(
                        (base + h, t) for h, t in spots
                    )
            range_pool[parity] = pool
            base += pool
        pools.append((range_pool["odd"], range_pool["even"]))

    schedule = Schedule.from_pairs(merged)
    return PartitionResult(
        partition=part,
        runs=tuple(runs),
        pool_hosts=tuple(pools),
        total_hosts=base,
        schedule=schedule,
    )
