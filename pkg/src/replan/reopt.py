"""Reoptimisation strategies and edit scripts.

Four strategies of increasing reach:

* ``BASIC``: refill each broken seat with a fresh TA, nothing else moves.
* ``SMART``: repair each broken pair by swapping its TA with the TA of one
  other, unaffected assignment.
* ``SET``: re-plan every assignment of the problematic TA(s), preferring to
  keep what still fits; assignments of other TAs stay frozen.
* ``FULL``: re-solve the whole changed problem with a bonus for every
  original pair that survives, so the solver perturbs as little as possible.
"""

from __future__ import annotations

import dataclasses
from collections import defaultdict
from dataclasses import dataclass
from enum import Enum
from typing import Iterable

from .changes import ChangeImpact, LocalViolations, TaOverload, Vacuous, classify_change
from .encoder import (Pair, WeightConfig, add_hour_caps, encode_original, pair_label,
                      solution_weight)
from .errors import LockedPairIneligible
from .ilp import IlpProblem, Objective, ProblemBuilder, Relation, Status, solve
from .model import (IneligibleAssignment, Instance, Number, Solution, Understaffed,
                    WeeklyHoursExceeded, SemesterHoursExceeded, check_references,
                    eligible_tas, usage)


class Strategy(Enum):
    BASIC = "basic"
    SMART = "smart"
    SET = "set"
    FULL = "full"

    @property
    def title(self) -> str:
        return {"basic": "Basic plaster", "smart": "Smart plaster",
                "set": "Plaster set", "full": "Full recomputation"}[self.value]


class ReoptStatus(Enum):
    SOLVED = "Solved"
    INAPPLICABLE = "StrategyInapplicable"
    INFEASIBLE = "Infeasible"
    TIMED_OUT = "TimedOut"


# ------------------------------------------------------------------ edit scripts

@dataclass(frozen=True, order=True)
class Unassign:
    occurrence: str
    ta: str

    def __str__(self):
        return f"unassign occurrence={self.occurrence} ta={self.ta}"


@dataclass(frozen=True, order=True)
class Assign:
    occurrence: str
    ta: str

    def __str__(self):
        return f"assign occurrence={self.occurrence} ta={self.ta}"


@dataclass(frozen=True)
class EditScript:
    operations: tuple[Unassign | Assign, ...] = ()

    def __iter__(self):
        return iter(self.operations)

    def __len__(self):
        return len(self.operations)

    def apply(self, solution: Solution) -> Solution:
        pairs = set(solution.assignments)
        for op in self.operations:
            pair = (op.occurrence, op.ta)
            if isinstance(op, Unassign):
                if pair not in pairs:
                    raise ValueError(f"cannot unassign missing pair {pair}")
                pairs.remove(pair)
            else:
                if pair in pairs:
                    raise ValueError(f"pair {pair} already assigned")
                pairs.add(pair)
        return Solution(frozenset(pairs))

    def __str__(self):
        return "".join(f"{op}\n" for op in self.operations)


def diff(original: Solution, new: Solution) -> EditScript:
    """Unassign everything that disappears, then assign everything new."""
    gone = sorted(original.assignments - new.assignments)
    added = sorted(new.assignments - original.assignments)
    return EditScript(tuple(Unassign(o, t) for o, t in gone) + tuple(Assign(o, t) for o, t in added))


# ------------------------------------------------------------------ results

@dataclass(frozen=True)
class ReoptResult:
    strategy: Strategy
    status: ReoptStatus
    impact: ChangeImpact
    new_solution: Solution | None = None
    kept_count: int = 0
    total_count: int = 0
    edit_script: EditScript = EditScript()
    objective_value: int | None = None
    problem: IlpProblem | None = None
    message: str = ""

    @property
    def solved(self) -> bool:
        return self.status is ReoptStatus.SOLVED


def _finish(strategy, impact, original, new, instance, weights, problem=None,
            status=ReoptStatus.SOLVED, message=""):
    return ReoptResult(
        strategy=strategy, status=status, impact=impact, new_solution=new,
        kept_count=new.kept(original), total_count=len(new),
        edit_script=diff(original, new),
        objective_value=solution_weight(instance, new, weights),
        problem=problem, message=message)


def _not_solved(strategy, impact, status, message, problem=None):
    return ReoptResult(strategy, status, impact, problem=problem, message=message)


# ------------------------------------------------------------------ strategies

def _broken_pairs(instance: Instance, original: Solution) -> set[Pair]:
    return {(o, t) for o, t in original.assignments if not instance.is_eligible(o, t)}


def _solve_choice(builder: ProblemBuilder, time_limit):
    problem = builder.build()
    return problem, solve(problem, time_limit)


def _fill_slots(instance, weights, occurrences, frozen: set[Pair], bonus_pairs=frozenset()):
    """Program choosing TAs for ``occurrences`` around a frozen remainder."""
    builder = ProblemBuilder()
    chosen: list[Pair] = []
    frozen_at: dict[str, set[str]] = defaultdict(set)
    for o, t in frozen:
        frozen_at[o].add(t)
    for occ in sorted(occurrences):
        terms = []
        for ta in eligible_tas(instance, occ):
            if ta in frozen_at[occ]:
                continue
            w = weights.weight(instance.occurrence_rating(occ, ta))
            if (occ, ta) in bonus_pairs:
                w += weights.keep_bonus
            v = builder.add_var(pair_label(occ, ta), w)
            chosen.append((occ, ta))
            terms.append((1, v))
        builder.add_constraint(terms, Relation.EQ, instance.need(occ) - len(frozen_at[occ]),
                               f"staff_{occ}")
    add_hour_caps(builder, instance, enumerate(chosen), frozen)
    index = {p: i for i, p in enumerate(chosen)}
    for lk in instance.locks:
        pair = (lk.occurrence_id, lk.ta_id)
        if pair in index:
            builder.add_constraint([(1, index[pair])], Relation.EQ, 1, f"lock_{pair[0]}_{pair[1]}")
    return builder, chosen


def _basic(instance, original, impact, weights, time_limit):
    broken = _broken_pairs(instance, original)
    frozen = set(original.assignments) - broken
    slots = set(impact.classification.occurrences)
    builder, chosen = _fill_slots(instance, weights, slots, frozen)
    problem, sol = _solve_choice(builder, time_limit)
    return problem, sol, lambda values: frozen | {p for p, x in zip(chosen, values) if x}


def _smart(instance, original, impact, weights, time_limit):
    broken = sorted(_broken_pairs(instance, original))
    current = set(original.assignments)
    locked = {(lk.occurrence_id, lk.ta_id) for lk in instance.locks}
    donors = sorted(current - set(broken) - locked)
    staffed: dict[str, int] = defaultdict(int)
    for o, _ in current:
        staffed[o] += 1
    if any(staffed[o] < instance.need(o) for o in impact.classification.occurrences):
        # a swap moves TAs between seats; it cannot create a missing seat
        return None, None, None

    def w(o, t):
        return weights.weight(instance.occurrence_rating(o, t))

    builder = ProblemBuilder()
    swaps: list[tuple[Pair, Pair]] = []
    per_broken: dict[Pair, list[int]] = defaultdict(list)
    per_donor: dict[Pair, list[int]] = defaultdict(list)
    per_created: dict[Pair, list[int]] = defaultdict(list)
    week_delta: dict[tuple[str, int], dict[int, Number]] = defaultdict(lambda: defaultdict(int))
    sem_delta: dict[str, dict[int, Number]] = defaultdict(lambda: defaultdict(int))
    for o1, t1 in broken:
        for o2, t2 in donors:
            if o1 == o2 or t1 == t2:
                continue
            if not (instance.is_eligible(o1, t2) and instance.is_eligible(o2, t1)):
                continue
            if (o1, t2) in current or (o2, t1) in current:
                continue
            gain = w(o1, t2) + w(o2, t1) - w(o2, t2)
            v = builder.add_var(f"swap_{o1}_{t1}_{o2}_{t2}", gain)
            swaps.append(((o1, t1), (o2, t2)))
            per_broken[o1, t1].append(v)
            per_donor[o2, t2].append(v)
            per_created[o1, t2].append(v)
            per_created[o2, t1].append(v)
            h1, h2 = instance.hours(o1), instance.hours(o2)
            wk1, wk2 = instance.occurrence(o1).week, instance.occurrence(o2).week
            week_delta[t1, wk1][v] -= h1
            week_delta[t1, wk2][v] += h2
            week_delta[t2, wk2][v] -= h2
            week_delta[t2, wk1][v] += h1
            sem_delta[t1][v] += h2 - h1
            sem_delta[t2][v] += h1 - h2
    for pair in broken:
        builder.add_constraint([(1, v) for v in per_broken[pair]], Relation.EQ, 1,
                               f"repair_{pair[0]}_{pair[1]}")
    for pair, vs in sorted(per_donor.items()):
        if len(vs) > 1:
            builder.add_constraint([(1, v) for v in vs], Relation.LE, 1, f"donor_{pair[0]}_{pair[1]}")
    for pair, vs in sorted(per_created.items()):
        if len(vs) > 1:
            builder.add_constraint([(1, v) for v in vs], Relation.LE, 1, f"new_{pair[0]}_{pair[1]}")
    weekly, semester = usage(instance, current)
    for (ta, week), deltas in sorted(week_delta.items()):
        terms = [(c, v) for v, c in sorted(deltas.items()) if c]
        if terms:
            cap = instance.ta(ta).max_hours_per_week - weekly.get((ta, week), 0)
            builder.add_constraint(terms, Relation.LE, cap, f"week_{ta}_{week}")
    for ta, deltas in sorted(sem_delta.items()):
        terms = [(c, v) for v, c in sorted(deltas.items()) if c]
        if terms:
            cap = instance.ta(ta).max_hours_per_semester - semester.get(ta, 0)
            builder.add_constraint(terms, Relation.LE, cap, f"semester_{ta}")
    problem, sol = _solve_choice(builder, time_limit)

    def rebuild(values):
        pairs = set(current)
        for ((o1, t1), (o2, t2)), x in zip(swaps, values):
            if x:
                pairs -= {(o1, t1), (o2, t2)}
                pairs |= {(o1, t2), (o2, t1)}
        return pairs

    return problem, sol, rebuild


def problematic_tas(impact: ChangeImpact) -> set[str]:
    tas = set()
    for v in impact.violations:
        if isinstance(v, (IneligibleAssignment, WeeklyHoursExceeded, SemesterHoursExceeded)):
            tas.add(v.ta)
    return tas


def _plaster_set(instance, original, impact, weights, time_limit):
    tas = problematic_tas(impact)
    touched = {o for o, t in original.assignments if t in tas}
    touched |= {v.occurrence for v in impact.violations if isinstance(v, Understaffed)}
    frozen = {(o, t) for o, t in original.assignments if t not in tas}
    builder, chosen = _fill_slots(instance, weights, touched, frozen,
                                  bonus_pairs=original.assignments)
    problem, sol = _solve_choice(builder, time_limit)
    return problem, sol, lambda values: frozen | {p for p, x in zip(chosen, values) if x}


def _full(instance, original, impact, weights, time_limit):
    problem, varmap = encode_original(instance, weights)
    bonus = tuple((weights.keep_bonus, varmap.var(p)) for p in original
                  if varmap.var(p) is not None)
    objective = Objective(problem.objective.terms + bonus, problem.objective.constant)
    problem = dataclasses.replace(problem, objective=objective)
    sol = solve(problem, time_limit)
    return problem, sol, lambda values: {p for p, x in zip(varmap.pairs, values) if x}


_RUNNERS = {Strategy.BASIC: _basic, Strategy.SMART: _smart,
            Strategy.SET: _plaster_set, Strategy.FULL: _full}


def applicable(strategy: Strategy, impact: ChangeImpact) -> bool:
    cls = impact.classification
    if isinstance(cls, Vacuous) or strategy is Strategy.FULL:
        return True
    if strategy in (Strategy.BASIC, Strategy.SMART):
        return isinstance(cls, LocalViolations)
    return isinstance(cls, (LocalViolations, TaOverload))


def reoptimise(instance: Instance, original: Solution, strategy: Strategy | str,
               weights: WeightConfig = WeightConfig(), time_limit: float | None = 60.0
               ) -> ReoptResult:
    """Repair ``original`` for the changed ``instance`` with one strategy."""
    strategy = Strategy(strategy)
    check_references(instance, original)
    impact = classify_change(instance, original)
    if not applicable(strategy, impact):
        return _not_solved(strategy, impact, ReoptStatus.INAPPLICABLE,
                           f"strategy inapplicable: {impact.kind}")
    for lk in instance.locks:
        if not instance.is_eligible(lk.occurrence_id, lk.ta_id):
            return _not_solved(strategy, impact, ReoptStatus.INFEASIBLE,
                               str(LockedPairIneligible(lk.occurrence_id, lk.ta_id)))
    if isinstance(impact.classification, Vacuous) and strategy is not Strategy.FULL:
        return _finish(strategy, impact, original, original, instance, weights)

    problem, sol, rebuild = _RUNNERS[strategy](instance, original, impact, weights, time_limit)
    if sol is None:
        return _not_solved(strategy, impact, ReoptStatus.INFEASIBLE,
                           "no swap can fill an empty seat")
    if sol.status is Status.INFEASIBLE:
        return _not_solved(strategy, impact, ReoptStatus.INFEASIBLE,
                           "reoptimisation problem is infeasible", problem)
    new = Solution(frozenset(rebuild(sol.values))) if sol.values is not None else None
    if sol.status is Status.TIMED_OUT:
        if new is None:
            return _not_solved(strategy, impact, ReoptStatus.TIMED_OUT,
                               "time limit reached without an incumbent", problem)
        return _finish(strategy, impact, original, new, instance, weights, problem,
                       ReoptStatus.TIMED_OUT, "time limit reached; best incumbent returned")
    return _finish(strategy, impact, original, new, instance, weights, problem)


def reoptimise_all(instance: Instance, original: Solution,
                   strategies: Iterable[Strategy] = tuple(Strategy),
                   weights: WeightConfig = WeightConfig(), time_limit: float | None = 60.0
                   ) -> dict[Strategy, ReoptResult]:
    return {s: reoptimise(instance, original, s, weights, time_limit) for s in strategies}
