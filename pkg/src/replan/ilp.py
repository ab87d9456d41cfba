"""Pure-binary integer linear programs and an exact branch-and-bound solver.

Coefficients are exact rationals. Internally every row and the objective are
scaled to integers, so no tolerance is ever involved.

The search is depth first, branching on variables in order of decreasing
absolute objective coefficient (ties by index), trying 1 before 0. The
incumbent is only replaced by a strictly better point, which makes the
returned optimum the first one in that order and therefore deterministic.
By default HiGHS (through scipy) supplies the optimal value and guides the
walk to that same first optimum; every point it proposes is re-checked
exactly.
"""

from __future__ import annotations

import math
import re
import time
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import MalformedProblem
from .model import Number, as_number, format_number


class Relation(Enum):
    LE = "<="
    EQ = "="
    GE = ">="


class Status(Enum):
    OPTIMAL = "Optimal"
    INFEASIBLE = "Infeasible"
    TIMED_OUT = "TimedOut"


Term = tuple[Number, int]


def _coef(value) -> Number:
    try:
        return as_number(value)
    except (TypeError, ValueError, ZeroDivisionError, OverflowError) as exc:
        raise MalformedProblem(f"bad coefficient {value!r}: {exc}") from None


@dataclass(frozen=True)
class LinearConstraint:
    terms: tuple[Term, ...]
    relation: Relation
    rhs: Number
    label: str = ""

    def __post_init__(self):
        terms = tuple((_coef(c), int(v)) for c, v in self.terms)
        seen = set()
        for _, v in terms:
            if v in seen:
                raise MalformedProblem(f"constraint {self.label!r}: variable {v} appears twice")
            seen.add(v)
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "relation", Relation(self.relation))
        object.__setattr__(self, "rhs", _coef(self.rhs))

    def activity(self, values: Sequence[int]) -> Number:
        return sum((c * values[v] for c, v in self.terms), 0)

    def satisfied(self, values: Sequence[int]) -> bool:
        lhs = self.activity(values)
        if self.relation is Relation.LE:
            return lhs <= self.rhs
        if self.relation is Relation.GE:
            return lhs >= self.rhs
        return lhs == self.rhs


@dataclass(frozen=True)
class Objective:
    """Always maximised."""

    terms: tuple[Term, ...] = ()
    constant: Number = 0
    sense: str = "maximize"

    def __post_init__(self):
        if self.sense != "maximize":
            raise MalformedProblem("only maximisation is supported")
        merged: dict[int, Number] = {}
        for c, v in self.terms:
            merged[int(v)] = merged.get(int(v), 0) + _coef(c)
        object.__setattr__(self, "terms", tuple((as_number(merged[v]), v) for v in merged))
        object.__setattr__(self, "constant", _coef(self.constant))

    def value(self, values: Sequence[int]) -> Number:
        return as_number(self.constant + sum((c * values[v] for c, v in self.terms), 0))


@dataclass(frozen=True)
class IlpProblem:
    labels: tuple[str, ...] = ()
    constraints: tuple[LinearConstraint, ...] = ()
    objective: Objective = field(default_factory=Objective)

    @property
    def var_count(self) -> int:
        return len(self.labels)

    def check(self) -> None:
        n = self.var_count
        for con in self.constraints:
            for _, v in con.terms:
                if not 0 <= v < n:
                    raise MalformedProblem(f"constraint {con.label!r} references variable {v} (have {n})")
        for _, v in self.objective.terms:
            if not 0 <= v < n:
                raise MalformedProblem(f"objective references variable {v} (have {n})")

    def is_feasible(self, values: Sequence[int]) -> bool:
        return all(con.satisfied(values) for con in self.constraints)


class ProblemBuilder:
    """Incremental construction of an :class:`IlpProblem`."""

    def __init__(self):
        self.labels: list[str] = []
        self.constraints: list[LinearConstraint] = []
        self.objective: dict[int, Number] = {}
        self.constant: Number = 0

    def add_var(self, label: str = "", weight: Number = 0) -> int:
        self.labels.append(label)
        v = len(self.labels) - 1
        if weight:
            self.objective[v] = weight
        return v

    def add_constraint(self, terms: Iterable[Term], relation: Relation, rhs: Number, label: str = ""):
        self.constraints.append(LinearConstraint(tuple(terms), relation, rhs, label))

    def add_objective(self, var: int, weight: Number):
        self.objective[var] = self.objective.get(var, 0) + weight

    def build(self) -> IlpProblem:
        obj = Objective(tuple((w, v) for v, w in sorted(self.objective.items())), self.constant)
        problem = IlpProblem(tuple(self.labels), tuple(self.constraints), obj)
        problem.check()
        return problem


@dataclass(frozen=True)
class IlpSolution:
    status: Status
    values: tuple[int, ...] | None = None
    objective_value: Number | None = None
    nodes: int = 0
    incumbents: tuple[Number, ...] = ()

    @property
    def has_values(self) -> bool:
        return self.values is not None


# ------------------------------------------------------------------ solving

def _integer_row(coefs: list[Number], rhs: Number) -> tuple[list[int], int]:
    den = 1
    for c in (*coefs, rhs):
        if isinstance(c, Fraction):
            den = den * c.denominator // math.gcd(den, c.denominator)
    return [int(c * den) for c in coefs], int(rhs * den)


class _Search:
    """Partial assignment with bound propagation, plus the plain DFS."""

    def __init__(self, problem: IlpProblem, time_limit: float | None):
        n = problem.var_count
        self.n = n
        self.deadline = None if time_limit is None else time.monotonic() + time_limit

        # objective scaled to integers; ordering and bounds use the scaled form
        obj = [0] * n
        for c, v in problem.objective.terms:
            obj[v] = c
        self.obj, _ = _integer_row(obj, 0)

        # every row becomes sum(a_j x_j) <= b
        rows: list[tuple[list[int], list[int], int]] = []
        for con in problem.constraints:
            coefs = [c for c, _ in con.terms]
            vars_ = [v for _, v in con.terms]
            a, b = _integer_row(coefs, con.rhs)
            if con.relation in (Relation.LE, Relation.EQ):
                rows.append((vars_, a, b))
            if con.relation in (Relation.GE, Relation.EQ):
                rows.append((vars_, [-x for x in a], -b))
        self.row_vars = [r[0] for r in rows]
        self.row_coefs = [r[1] for r in rows]
        self.rhs = [r[2] for r in rows]
        self.row_maxabs = [max((abs(x) for x in a), default=0) for a in self.row_coefs]
        self.cols: list[list[tuple[int, int]]] = [[] for _ in range(n)]
        for r, (vars_, a) in enumerate(zip(self.row_vars, self.row_coefs)):
            for v, c in zip(vars_, a):
                if c:
                    self.cols[v].append((r, c))
        # minimum achievable activity per row under the current partial fixing
        self.minact = [sum(c for c in a if c < 0) for a in self.row_coefs]

        self.val = [-1] * n
        self.trail: list[int] = []
        self.order = sorted(range(n), key=lambda j: (-abs(self.obj[j]), j))
        self.fixed_obj = 0
        self._build_groups()

    def _build_groups(self):
        """Disjoint cardinality groups ``sum x <= k`` used for the bound."""
        group_of = [-1] * self.n
        groups: list[tuple[list[int], int]] = []
        for vars_, a, b in zip(self.row_vars, self.row_coefs, self.rhs):
            if not a or a[0] <= 0 or any(c != a[0] for c in a) or b < 0:
                continue
            members = [v for v in vars_ if group_of[v] < 0 and self.obj[v] > 0]
            if not members:
                continue
            k = b // a[0]
            if k >= len(members):
                continue
            gi = len(groups)
            for v in members:
                group_of[v] = gi
            members.sort(key=lambda j: (-self.obj[j], j))
            groups.append((members, k))
        self.groups = groups
        self.free = [j for j in range(self.n) if group_of[j] < 0 and self.obj[j] > 0]

    def bound(self) -> int:
        """Fixed value plus the best the free variables could add, where each
        cardinality group contributes only its top remaining entries."""
        val, obj = self.val, self.obj
        total = self.fixed_obj
        for members, k in self.groups:
            room = k
            for j in members:
                if val[j] == 1:
                    room -= 1
            if room <= 0:
                continue
            for j in members:
                if val[j] < 0:
                    total += obj[j]
                    room -= 1
                    if not room:
                        break
        for j in self.free:
            if val[j] < 0:
                total += obj[j]
        return total

    def fix(self, j: int, v: int) -> bool:
        """Fix ``x_j = v`` and propagate; False on conflict (state still undoable)."""
        queue = [(j, v)]
        minact, rhs = self.minact, self.rhs
        while queue:
            j, v = queue.pop()
            cur = self.val[j]
            if cur >= 0:
                if cur != v:
                    return False
                continue
            self.val[j] = v
            self.trail.append(j)
            if v:
                self.fixed_obj += self.obj[j]
            touched = []
            for r, c in self.cols[j]:
                if c > 0 and v:
                    minact[r] += c
                elif c < 0 and not v:
                    minact[r] -= c
                else:
                    continue
                touched.append(r)
            for r in touched:
                if minact[r] > rhs[r]:
                    return False
            for r in touched:
                slack = rhs[r] - minact[r]
                if slack >= self.row_maxabs[r]:
                    continue
                for u, a in zip(self.row_vars[r], self.row_coefs[r]):
                    if self.val[u] >= 0 or abs(a) <= slack:
                        continue
                    queue.append((u, 0 if a > 0 else 1))
        return True

    def undo(self, mark: int):
        val, minact = self.val, self.minact
        while len(self.trail) > mark:
            j = self.trail.pop()
            v = val[j]
            for r, c in self.cols[j]:
                if c > 0 and v:
                    minact[r] -= c
                elif c < 0 and not v:
                    minact[r] += c
            if v:
                self.fixed_obj -= self.obj[j]
            val[j] = -1

    def exact_feasible(self, point: Sequence[int]) -> bool:
        return all(sum(c * point[v] for v, c in zip(vars_, a)) <= b
                   for vars_, a, b in zip(self.row_vars, self.row_coefs, self.rhs))

    def fix_all_trivial(self) -> bool:
        """Root propagation: rows already violated or forcing variables."""
        for r in range(len(self.rhs)):
            if self.minact[r] > self.rhs[r]:
                return False
        for r in range(len(self.rhs)):
            slack = self.rhs[r] - self.minact[r]
            if slack >= self.row_maxabs[r]:
                continue
            for u, a in zip(self.row_vars[r], self.row_coefs[r]):
                if a and self.val[u] < 0 and abs(a) > slack:
                    if not self.fix(u, 0 if a > 0 else 1):
                        return False
                    slack = self.rhs[r] - self.minact[r]
        return True

    def run(self):
        """Depth-first branch and bound; returns ``(status, point, history, nodes)``.

        The incumbent is only replaced by a strictly better point, so the
        result is the first optimum in branch order.
        """
        best_val: int | None = None
        best: list[int] | None = None
        history: list[int] = []
        nodes = 0
        timed_out = False
        order, val = self.order, self.val

        ok = self.fix_all_trivial()
        # stack frames: (var, trail mark, value still to try or None)
        stack: list[tuple[int, int, int | None]] = []
        pos_stack: list[int] = []
        pos = 0
        while True:
            if ok and (best_val is None or self.bound() > best_val):
                nodes += 1
                if self.deadline is not None and time.monotonic() > self.deadline:
                    timed_out = True
                    break
                while pos < len(order) and val[order[pos]] >= 0:
                    pos += 1
                if pos == len(order):
                    if best_val is None or self.fixed_obj > best_val:
                        best_val, best = self.fixed_obj, list(val)
                        history.append(best_val)
                else:
                    j = order[pos]
                    stack.append((j, len(self.trail), 0))
                    pos_stack.append(pos)
                    ok = self.fix(j, 1)
                    continue
            # backtrack
            while stack:
                j, mark, alt = stack.pop()
                pos = pos_stack.pop()
                self.undo(mark)
                if alt is not None:
                    stack.append((j, mark, None))
                    pos_stack.append(pos)
                    ok = self.fix(j, alt)
                    break
            else:
                break
        self.undo(0)
        if timed_out:
            return Status.TIMED_OUT, best, history, nodes
        if best is None:
            return Status.INFEASIBLE, None, history, nodes
        return Status.OPTIMAL, best, history, nodes


class _Highs:
    """HiGHS MIP over the search's integer rows, honouring its current fixings."""

    def __init__(self, search: _Search):
        import numpy as np
        from scipy.sparse import csr_matrix

        self.np = np
        self.search = search
        rows, cols, data = [], [], []
        for r, (vars_, a) in enumerate(zip(search.row_vars, search.row_coefs)):
            for v, c in zip(vars_, a):
                rows.append(r)
                cols.append(v)
                data.append(float(c))
        m = len(search.rhs)
        self.a_ub = csr_matrix((data, (rows, cols)), shape=(m, search.n)) if m else None
        self.b_ub = np.array(search.rhs, dtype=float) if m else None
        self.c = -np.array(search.obj, dtype=float)
        self.calls = 0

    def best(self, time_limit: float | None):
        """``(status, value, point)`` for the best completion of the current fixing.

        The point is rounded to 0/1 and re-checked with exact arithmetic; a
        point failing that check is reported as absent.
        """
        from scipy.optimize import Bounds, LinearConstraint as ScipyConstraint, milp

        np = self.np
        self.calls += 1
        v = np.array(self.search.val)
        lb, ub = (v == 1).astype(float), (v != 0).astype(float)
        constraints = [ScipyConstraint(self.a_ub, -np.inf, self.b_ub)] if self.a_ub is not None else []
        options = {"mip_rel_gap": 0.0}
        if time_limit is not None:
            options["time_limit"] = max(time_limit, 0.01)
        res = milp(self.c, constraints=constraints, integrality=np.ones(self.search.n),
                   bounds=Bounds(lb, ub), options=options)
        if res.status == 2:
            return Status.INFEASIBLE, None, None
        if res.x is None:
            return Status.TIMED_OUT, None, None
        point = [int(round(x)) for x in res.x]
        if not self.search.exact_feasible(point):
            return Status.TIMED_OUT, None, None
        status = Status.OPTIMAL if res.status == 0 else Status.TIMED_OUT
        return status, sum(c * x for c, x in zip(self.search.obj, point)), point


def _first_optimum(search: _Search, oracle: _Highs):
    """Walk the branch order, keeping each 1 that an optimal completion allows.

    Gives the same point as the plain search (the first optimum in branch
    order) while only consulting HiGHS where the current witness has a 0.
    Returns None when HiGHS and exact arithmetic disagree.
    """
    def remaining():
        return None if search.deadline is None else search.deadline - time.monotonic()

    status, target, witness = oracle.best(remaining())
    if status is not Status.OPTIMAL:
        return status, witness, target
    if not search.fix_all_trivial():
        search.undo(0)
        return None
    for j in search.order:
        if search.val[j] >= 0:
            continue
        if witness[j] == 1:
            if not search.fix(j, 1):
                search.undo(0)
                return None
            continue
        mark = len(search.trail)
        if search.fix(j, 1) and search.bound() >= target:
            left = remaining()
            if left is not None and left <= 0:
                search.undo(0)
                return Status.TIMED_OUT, witness, target
            status, value, point = oracle.best(left)
            if status is Status.OPTIMAL and value >= target:
                witness = point
                continue
        search.undo(mark)
        if not search.fix(j, 0):
            search.undo(0)
            return None
    point = list(search.val)
    search.undo(0)
    if point != witness:
        return None
    return Status.OPTIMAL, point, target


def solve(problem: IlpProblem, time_limit: float | None = 60.0, method: str = "highs") -> IlpSolution:
    """Solve a pure-binary maximisation problem.

    Among several optima the first in branch order is returned (variables by
    decreasing absolute objective coefficient, then index; 1 before 0), so
    equal problems always give equal answers.

    ``method="bnb"`` runs the exact branch and bound on its own, with integer
    arithmetic only. ``method="highs"`` asks HiGHS for the optimal value and
    then fixes variables in branch order, keeping each 1 for which HiGHS
    still finds a completion of optimal value. Both return the same point;
    the second is far faster when hour caps bind.

    ``time_limit`` is in seconds (``None`` for no limit). On time-out the
    best incumbent found so far, if any, is returned with status TIMED_OUT.
    """
    if method not in ("highs", "bnb"):
        raise ValueError(f"unknown method {method!r}")
    problem.check()
    search = _Search(problem, time_limit)
    result = None
    if method == "highs" and search.n:
        oracle = _Highs(search)
        walk = _first_optimum(search, oracle)
        if walk is not None:
            status, point, target = walk
            if status is Status.INFEASIBLE:
                return IlpSolution(Status.INFEASIBLE, nodes=oracle.calls)
            result = (status, point, [] if target is None else [target], oracle.calls)
    if result is None:
        result = search.run()
    status, best, history, nodes = result
    if best is None:
        return IlpSolution(status, None, None, nodes)
    values = tuple(best)
    obj_scale = _objective_scale(problem)
    incumbents = tuple(as_number(Fraction(h, obj_scale) + problem.objective.constant) for h in history)
    return IlpSolution(status, values, problem.objective.value(values), nodes, incumbents)


def _objective_scale(problem: IlpProblem) -> int:
    den = 1
    for c, _ in problem.objective.terms:
        if isinstance(c, Fraction):
            den = den * c.denominator // math.gcd(den, c.denominator)
    return den


# ------------------------------------------------------------------ LP export

_NAME_BAD = re.compile(r"[^A-Za-z0-9_]")


def _names(labels: Sequence[str], default: str) -> list[str]:
    out, used = [], set()
    for i, label in enumerate(labels):
        name = _NAME_BAD.sub("_", label) or f"{default}{i}"
        if not name[0].isalpha() and name[0] != "_":
            name = f"{default}_{name}"
        if name in used:
            name = f"{name}_{i}"
        used.add(name)
        out.append(name)
    return out


def _lp_terms(terms, names) -> list[str]:
    parts = []
    for k, (c, v) in enumerate(terms):
        sign = "-" if c < 0 else "+"
        mag = format_number(abs(c))
        if k == 0:
            parts.append(f"{'-' if c < 0 else ''}{mag} {names[v]}")
        else:
            parts.append(f"{sign} {mag} {names[v]}")
    return parts


def _wrap(head: str, parts: list[str], tail: str = "", width: int = 10) -> list[str]:
    lines = []
    for i in range(0, max(len(parts), 1), width):
        chunk = " ".join(parts[i:i + width])
        lines.append(("" if i else head) + ("   " if i else "") + chunk)
    lines[-1] = lines[-1] + tail
    return lines


def export_lp(problem: IlpProblem) -> str:
    """Render ``problem`` in CPLEX LP format (Maximize/Subject To/Binary/End)."""
    problem.check()
    names = _names(problem.labels, "x")
    con_names = _names([c.label for c in problem.constraints], "c")
    lines = ["Maximize"]
    obj = problem.objective
    obj_terms = [(c, v) for c, v in sorted(obj.terms, key=lambda t: t[1]) if c != 0]
    dummy = None
    if obj_terms or obj.constant:
        parts = _lp_terms(obj_terms, names)
        if obj.constant:
            const = format_number(abs(obj.constant))
            parts.append(f"{'-' if obj.constant < 0 else '+'} {const}" if parts
                         else f"{'-' if obj.constant < 0 else ''}{const}")
        lines += _wrap(" obj: ", parts)
    lines.append("Subject To")
    for con, cname in zip(problem.constraints, con_names):
        terms = list(con.terms)
        if not terms:
            # LP rows need a variable; a zero-coefficient placeholder keeps the row
            if problem.var_count:
                terms = [(0, 0)]
            else:
                dummy = "empty_row_placeholder"
        parts = _lp_terms(terms, names) if terms else [f"0 {dummy}"]
        op = {"<=": "<=", "=": "=", ">=": ">="}[con.relation.value]
        rhs = con.rhs
        tail = f" {op} {'-' if rhs < 0 else ''}{format_number(abs(rhs))}"
        lines += _wrap(f" {cname}: ", parts, tail)
    lines.append("Binary")
    for name in names:
        lines.append(f" {name}")
    if dummy:
        lines.append(f" {dummy}")
    lines.append("End")
    return "\n".join(lines) + "\n"
