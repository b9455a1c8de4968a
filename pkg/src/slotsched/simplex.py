"""Exact rational linear programming with duals.

Dense two-phase simplex over exact rationals, with per-variable bounds
handled natively (nonbasic variables sit at either bound, so box constraints
never become rows).  Pivoting uses Bland's smallest-index rule throughout,
which trades speed for guaranteed termination; at the problem sizes this
package deals in, that trade is free.  Internally the tableau runs on
gmpy2.mpq (measured ~8x faster than fractions.Fraction); the public API
speaks Fraction only.

Duals are Lagrange multipliers for the rows as written: for a maximization,
a binding <= row has a nonnegative dual and a binding >= row a nonpositive
one; for a minimization the signs flip.  Columns can be appended to a solved
program and the next solve resumes from the previous basis, which is what
makes column generation affordable.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

try:
    from gmpy2 import mpq as _q
except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
    from fractions import Fraction as _q

_ZERO = _q(0)
_ONE = _q(1)

LOWER, UPPER, BASIC, FIXED = 0, 1, 2, 3

_REL = ("<=", ">=", "==")


class CyclingLimitError(RuntimeError):
    """Pivot count exceeded the safety limit (should never happen with Bland)."""


def _to_q(value) -> "_q":
    f = Fraction(value)
    return _q(f.numerator, f.denominator)


def _to_fraction(value) -> Fraction:
    return Fraction(int(value.numerator), int(value.denominator))


@dataclass(frozen=True)
class LpSolution:
    status: str  # "optimal" | "infeasible" | "unbounded"
    x: tuple[Fraction, ...] | None
    duals: tuple[Fraction, ...] | None
    objective: Fraction | None

    @property
    def optimal(self) -> bool:
        return self.status == "optimal"


class LinearProgram:
    """Mutable LP builder: variables with [lo, hi] bounds (hi=None for +inf),
    rows with <=, >= or == relations.  All data exact rationals."""

    def __init__(self, sense: str = "max"):
        if sense not in ("max", "min"):
            raise ValueError(f"sense must be 'max' or 'min', got {sense!r}")
        self.sense = sense
        self.obj: list[Fraction] = []
        self.lo: list[Fraction] = []
        self.hi: list[Fraction | None] = []
        # rows: (coeffs dict var->Fraction, rel, rhs)
        self.rows: list[tuple[dict[int, Fraction], str, Fraction]] = []
        self._tableau: "_Tableau | None" = None
        self._pending_cols: list[int] = []

    @property
    def n_vars(self) -> int:
        return len(self.obj)

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    def add_variable(self, objective=0, lo=0, hi=None) -> int:
        lo = Fraction(lo)
        if hi is not None:
            hi = Fraction(hi)
            if hi < lo:
                raise ValueError(f"empty bound interval [{lo}, {hi}]")
        self.obj.append(Fraction(objective))
        self.lo.append(lo)
        self.hi.append(hi)
        return len(self.obj) - 1

    def add_row(self, coeffs: dict[int, Fraction], rel: str, rhs) -> int:
        if rel not in _REL:
            raise ValueError(f"relation must be one of {_REL}, got {rel!r}")
        for var in coeffs:
            if not 0 <= var < self.n_vars:
                raise ValueError(f"row references unknown variable {var}")
        self.rows.append(({v: Fraction(c) for v, c in coeffs.items()}, rel, Fraction(rhs)))
        self._tableau = None  # rows changed: any cached basis is stale
        self._pending_cols.clear()
        return len(self.rows) - 1

    def add_column(self, objective, entries: dict[int, Fraction], lo=0, hi=None) -> int:
        """Append a variable given its column: entries map row index -> coeff.

        The previous optimal basis stays feasible (the new variable enters
        nonbasic at its lower bound), so a following solve() warm-starts.
        """
        for row in entries:
            if not 0 <= row < self.n_rows:
                raise ValueError(f"column references unknown row {row}")
        var = self.add_variable(objective, lo=lo, hi=hi)
        for row, coeff in entries.items():
            self.rows[row][0][var] = Fraction(coeff)
        self._pending_cols.append(var)
        return var

    def row_activity(self, x: tuple[Fraction, ...], row: int) -> Fraction:
        coeffs, _, _ = self.rows[row]
        return sum((c * x[v] for v, c in coeffs.items()), Fraction(0))


def solve(lp: LinearProgram, warm: bool = True, pivot_limit: int = 1_000_000) -> LpSolution:
    """Solve to proven optimality (or infeasible/unbounded), exactly."""
    tab = lp._tableau if warm else None
    if tab is not None and lp._pending_cols:
        if all(lp.lo[v] == 0 for v in lp._pending_cols):
            for var in sorted(lp._pending_cols):
                tab.absorb_column(var)
        else:
            tab = None
    lp._pending_cols.clear()
    if tab is None:
        tab = _Tableau(lp)
        if tab.phase1(pivot_limit) == "infeasible":
            lp._tableau = None
            return LpSolution("infeasible", None, None, None)
    if tab.phase2(pivot_limit) == "unbounded":
        lp._tableau = None
        return LpSolution("unbounded", None, None, None)
    lp._tableau = tab
    x = tab.primal_values()
    duals = tab.dual_values()
    obj = sum((lp.obj[j] * x[j] for j in range(lp.n_vars)), Fraction(0))
    return LpSolution("optimal", tuple(x), tuple(duals), obj)


class _Tableau:
    """Dense bounded-variable simplex state.  All entries gmpy2.mpq.

    Columns: structural variables (shifted to lower bound 0), then one slack
    per inequality row, then artificials where the slack could not provide a
    feasible initial basis.  Artificials are fixed to 0 after phase 1 but keep
    their columns: together with the slacks they embed B^-1, which is what
    dual extraction and warm column absorption read.
    """

    def __init__(self, lp: LinearProgram):
        self.lp = lp
        m, n = lp.n_rows, lp.n_vars
        self.sign = _ONE if lp.sense == "max" else -_ONE
        # structural columns, shifted: x = x' + lo, x' in [0, hi-lo]
        self.ncols = 0
        self.ubound: list["_q | None"] = []
        self.cost: list["_q"] = []
        for j in range(n):
            lo, hi = lp.lo[j], lp.hi[j]
            self.ubound.append(None if hi is None else _to_q(hi - lo))
            self.cost.append(self.sign * _to_q(lp.obj[j]))
            self.ncols += 1
        rows_q: list[list["_q"]] = []
        rhs_q: list["_q"] = []
        for coeffs, rel, rhs in lp.rows:
            dense = [_ZERO] * n
            shift = _ZERO
            for v, c in coeffs.items():
                cq = _to_q(c)
                dense[v] += cq
                shift += cq * _to_q(lp.lo[v])
            rows_q.append(dense)
            rhs_q.append(_to_q(rhs) - shift)
        # slack columns: +1 for <=, -1 for >=
        self.slack_col: list[int | None] = [None] * m
        self.slack_sign: list["_q"] = [_ZERO] * m
        for i, (_, rel, _) in enumerate(lp.rows):
            if rel == "==":
                continue
            col = self._new_col()
            s = _ONE if rel == "<=" else -_ONE
            self.slack_col[i] = col
            self.slack_sign[i] = s
            for r in range(m):
                rows_q[r].append(s if r == i else _ZERO)
        # initial basis: the slack where it starts feasible, else an artificial
        self.art_col: list[int | None] = [None] * m
        self.art_sign: list["_q"] = [_ZERO] * m
        self.art_cols: list[int] = []
        basis: list[int] = []
        for i, (_, rel, _) in enumerate(lp.rows):
            b = rhs_q[i]
            if (rel == "<=" and b >= 0) or (rel == ">=" and b <= 0):
                basis.append(self.slack_col[i])
            else:
                col = self._new_col()
                s = _ONE if b >= 0 else -_ONE
                self.art_col[i] = col
                self.art_sign[i] = s
                self.art_cols.append(col)
                for r in range(m):
                    rows_q[r].append(s if r == i else _ZERO)
                basis.append(col)
        # normalize each row so its basic column has coefficient +1
        self.tab: list[list["_q"]] = []
        self.val: list["_q"] = []
        for i in range(m):
            if rows_q[i][basis[i]] == 1:
                self.tab.append(rows_q[i])
                self.val.append(rhs_q[i])
            else:  # the coefficient is -1 by construction
                self.tab.append([-a for a in rows_q[i]])
                self.val.append(-rhs_q[i])
        self.basis = basis
        self.status = [LOWER] * self.ncols
        for j in range(self.ncols):
            if self.ubound[j] == 0:
                self.status[j] = FIXED
        for b in self.basis:
            self.status[b] = BASIC
        self.zrow: list["_q"] = []

    def _new_col(self) -> int:
        self.ubound.append(None)
        self.cost.append(_ZERO)
        self.ncols += 1
        return self.ncols - 1

    # -- phases ------------------------------------------------------------

    def _reset_zrow(self, costs: list["_q"]) -> None:
        m = len(self.basis)
        cb = [costs[self.basis[i]] for i in range(m)]
        zrow = []
        for j in range(self.ncols):
            z = -costs[j]
            for i in range(m):
                if cb[i]:
                    z += cb[i] * self.tab[i][j]
            zrow.append(z)
        self.zrow = zrow

    def phase1(self, pivot_limit: int) -> str:
        if not self.art_cols:
            return "feasible"
        costs = [_ZERO] * self.ncols
        for col in self.art_cols:
            costs[col] = -_ONE
        self._reset_zrow(costs)
        if self._iterate(pivot_limit) == "unbounded":
            raise AssertionError("phase 1 objective is bounded above by zero")
        arts = set(self.art_cols)
        infeas = sum((self.val[i] for i, b in enumerate(self.basis) if b in arts), _ZERO)
        if infeas != 0:
            return "infeasible"
        # lock artificials at zero; basic-at-zero artificials may remain
        for col in self.art_cols:
            self.ubound[col] = _ZERO
            if self.status[col] != BASIC:
                self.status[col] = FIXED
        return "feasible"

    def phase2(self, pivot_limit: int) -> str:
        self._reset_zrow(self.cost)
        return self._iterate(pivot_limit)

    # -- core pivoting -----------------------------------------------------

    def _iterate(self, pivot_limit: int) -> str:
        for _ in range(pivot_limit):
            enter = -1
            direction = _ONE
            for j in range(self.ncols):
                st = self.status[j]
                if st == LOWER and self.zrow[j] < 0:
                    enter, direction = j, _ONE
                    break
                if st == UPPER and self.zrow[j] > 0:
                    enter, direction = j, -_ONE
                    break
            if enter < 0:
                return "optimal"
            # ratio test: largest step t >= 0 along the improving direction;
            # start from the entering variable's own bound span
            limit: "_q | None" = self.ubound[enter]
            leave_row = -1
            leave_to = LOWER
            for i in range(len(self.basis)):
                g = direction * self.tab[i][enter]
                if g > 0:
                    cap = self.val[i] / g
                    to = LOWER
                elif g < 0:
                    ub = self.ubound[self.basis[i]]
                    if ub is None:
                        continue
                    cap = (ub - self.val[i]) / (-g)
                    to = UPPER
                else:
                    continue
                if limit is None or cap < limit:
                    limit, leave_row, leave_to = cap, i, to
                elif cap == limit and (
                    leave_row < 0 or self.basis[i] < self.basis[leave_row]
                ):
                    # prefer pivoting over a bound flip on a tie, and break
                    # row ties by the smallest basic index (Bland)
                    limit, leave_row, leave_to = cap, i, to
            if limit is None:
                return "unbounded"
            t = limit
            if t != 0:
                for i in range(len(self.basis)):
                    a = self.tab[i][enter]
                    if a:
                        self.val[i] -= t * direction * a
            if leave_row < 0:
                self.status[enter] = UPPER if direction > 0 else LOWER
                continue
            self._pivot(leave_row, enter, t, direction, leave_to)
        raise CyclingLimitError(f"exceeded {pivot_limit} pivots")

    def _pivot(self, r: int, enter: int, t: "_q", direction: "_q", leave_to: int) -> None:
        leaving = self.basis[r]
        row = self.tab[r]
        piv = row[enter]
        if piv != 1:
            inv = _ONE / piv
            self.tab[r] = row = [a * inv for a in row]
        for i in range(len(self.basis)):
            if i == r:
                continue
            f = self.tab[i][enter]
            if f:
                ti = self.tab[i]
                self.tab[i] = [a - f * b for a, b in zip(ti, row)]
        f = self.zrow[enter]
        if f:
            self.zrow = [a - f * b for a, b in zip(self.zrow, row)]
        if self.ubound[leaving] == 0:
            self.status[leaving] = FIXED
        else:
            self.status[leaving] = leave_to
        self.status[enter] = BASIC
        self.basis[r] = enter
        self.val[r] = t if direction > 0 else self.ubound[enter] - t

    # -- extraction and warm columns ----------------------------------------

    def primal_values(self) -> list[Fraction]:
        lp = self.lp
        vals: list["_q"] = [
            self.ubound[j] if self.status[j] == UPPER else _ZERO
            for j in range(self.ncols)
        ]
        for i, b in enumerate(self.basis):
            vals[b] = self.val[i]
        return [_to_fraction(vals[j]) + lp.lo[j] for j in range(lp.n_vars)]

    def dual_values(self) -> list[Fraction]:
        # row i's multiplier is read off the z-row under its slack column
        # (artificial column for equality rows); the witness sign restores
        # A's original +-1 entry, the outer sign undoes the min->max flip
        duals: list[Fraction] = []
        for i in range(len(self.basis)):
            col, s = self.slack_col[i], self.slack_sign[i]
            if col is None:
                col, s = self.art_col[i], self.art_sign[i]
            duals.append(_to_fraction(self.sign * s * self.zrow[col]))
        return duals

    def absorb_column(self, var: int) -> None:
        """Extend the tableau with a structural column appended after the last
        solve.  The z-row is rebuilt at the next phase2 call, so only the
        B^-1 A column needs computing here."""
        lp = self.lp
        col = self._insert_structural_col(var)
        m = len(self.basis)
        tcol = [_ZERO] * m
        for i, (coeffs, _, _) in enumerate(lp.rows):
            c = coeffs.get(var)
            if not c:
                continue
            # B^-1 e_i is embedded in row i's witness column
            wcol, ws = self.slack_col[i], self.slack_sign[i]
            if wcol is None:
                wcol, ws = self.art_col[i], self.art_sign[i]
            f = _to_q(c) * ws
            for r in range(m):
                tcol[r] += f * self.tab[r][wcol]
        for r in range(m):
            self.tab[r][col] = tcol[r]

    def _insert_structural_col(self, var: int) -> int:
        """Place the new variable at tableau index `var` so structural columns
        stay contiguous; shift slack/artificial bookkeeping right by one."""
        lp = self.lp
        lo, hi = lp.lo[var], lp.hi[var]
        if lo != 0:
            raise ValueError("warm-absorbed columns must have lo == 0")
        ub = None if hi is None else _to_q(hi - lo)
        self.ubound.insert(var, ub)
        self.cost.insert(var, self.sign * _to_q(lp.obj[var]))
        self.status.insert(var, FIXED if ub == 0 else LOWER)
        self.ncols += 1
        for i in range(len(self.basis)):
            self.tab[i].insert(var, _ZERO)
            if self.basis[i] >= var:
                self.basis[i] += 1
        self.slack_col = [c + 1 if c is not None and c >= var else c for c in self.slack_col]
        self.art_col = [c + 1 if c is not None and c >= var else c for c in self.art_col]
        self.art_cols = [c + 1 if c >= var else c for c in self.art_cols]
        return var
