"""Seeded synthetic instances and the four change scenarios.

Everything here is a pure function of its inputs and seed; randomness comes
from :class:`random.Random`, whose integer streams are stable across
platforms.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from .changes import (BlockOccurrence, ChangeSet, SetMaxWeekHours, apply_changes)
from .encoder import WeightConfig, decode, encode_original
from .errors import GenerationFailed, ScenarioUnconstructible
from .ilp import Status, solve
from .model import (Approval, ApprovalRating, CourseModule, Instance, SessionOccurrence,
                    Solution, TeachingAssistant, TeachingSession, eligible_tas, usage)

Range = tuple[int, int]


@dataclass(frozen=True)
class GeneratorConfig:
    seed: int = 42
    num_modules: int = 7
    num_tas: int = 20
    weeks: int = 4
    sessions_per_module: Range = (1, 2)
    weeks_per_session: Range = (2, 4)
    num_tas_per_session: Range = (1, 2)
    hours_per_occurrence: Range = (1, 3)
    # fractions of GREEN, AMBER and RED approvals
    approval_distribution: tuple[float, float, float] = (0.3, 0.3, 0.4)
    max_hours_per_week: Range = (3, 8)
    max_hours_per_semester: Range = (8, 20)
    max_attempts: int = 25
    time_limit: float = 30.0

    def __post_init__(self):
        for name in ("sessions_per_module", "weeks_per_session", "num_tas_per_session",
                     "hours_per_occurrence", "max_hours_per_week", "max_hours_per_semester"):
            lo, hi = getattr(self, name)
            if lo > hi or lo < 0:
                raise ValueError(f"{name}: empty range {lo}..{hi}")
        if min(self.sessions_per_module[0], self.weeks_per_session[0],
               self.num_tas_per_session[0], self.hours_per_occurrence[0]) < 1:
            raise ValueError("session counts, weeks, staffing and hours need lower bound >= 1")
        if self.weeks_per_session[1] > self.weeks:
            raise ValueError("weeks_per_session exceeds the planning horizon")
        fractions = self.approval_distribution
        if len(fractions) != 3 or min(fractions) < 0 or not math.isclose(sum(fractions), 1.0):
            raise ValueError("approval fractions must be three non-negative numbers summing to 1")
        if self.num_modules < 1 or self.num_tas < 1 or self.weeks < 1:
            raise ValueError("need at least one module, TA and week")


def _ids(prefix: str, count: int) -> list[str]:
    width = len(str(count))
    return [f"{prefix}{i:0{width}d}" for i in range(1, count + 1)]


def _draw(rng: random.Random, config: GeneratorConfig) -> Instance:
    modules = [CourseModule(mid, f"Module {mid[1:]}") for mid in _ids("m", config.num_modules)]
    sessions, occurrences = [], []
    for m in modules:
        count = rng.randint(*config.sessions_per_module)
        for sid in _ids(f"{m.id}-s", count):
            k = rng.randint(*config.weeks_per_session)
            weeks = sorted(rng.sample(range(1, config.weeks + 1), k))
            s = TeachingSession(sid, m.id, rng.randint(*config.num_tas_per_session),
                                rng.randint(*config.hours_per_occurrence), tuple(weeks))
            sessions.append(s)
            occurrences += [SessionOccurrence(f"{sid}-w{w}", sid, w) for w in weeks]
    tas = []
    for i, tid in enumerate(_ids("ta", config.num_tas), start=1):
        week = rng.randint(*config.max_hours_per_week)
        sem = rng.randint(max(week, config.max_hours_per_semester[0]),
                          max(week, config.max_hours_per_semester[1]))
        tas.append(TeachingAssistant(tid, f"TA {i}", week, sem))
    green, amber, _ = config.approval_distribution
    approvals = []
    for t in tas:
        for m in modules:
            u = rng.random()
            rating = (ApprovalRating.GREEN if u < green
                      else ApprovalRating.AMBER if u < green + amber else ApprovalRating.RED)
            if rating is not ApprovalRating.RED:
                approvals.append(Approval(t.id, m.id, rating))
    return Instance(modules=tuple(modules), sessions=tuple(sessions),
                    occurrences=tuple(occurrences), tas=tuple(tas), approvals=tuple(approvals))


def solve_original(instance: Instance, weights: WeightConfig = WeightConfig(),
                   time_limit: float | None = 60.0) -> Solution | None:
    """Optimal solution of the unchanged problem, or None if infeasible."""
    problem, varmap = encode_original(instance, weights)
    result = solve(problem, time_limit)
    if result.status is not Status.OPTIMAL:
        return None
    return decode(varmap, result)


def generate_instance(config: GeneratorConfig = GeneratorConfig()) -> Instance:
    """A random instance whose original problem has an optimal solution."""
    rng = random.Random(config.seed)
    for _ in range(config.max_attempts):
        instance = _draw(rng, config)
        if solve_original(instance, time_limit=config.time_limit) is not None:
            return instance
    raise GenerationFailed(f"no feasible instance after {config.max_attempts} attempts "
                           f"(seed {config.seed})")


# ------------------------------------------------------------------ scenarios

def _spare(instance: Instance, weekly, semester, ta: str, occ: str) -> bool:
    h = instance.hours(occ)
    t = instance.ta(ta)
    week = instance.occurrence(occ).week
    return (weekly.get((ta, week), 0) + h <= t.max_hours_per_week
            and semester.get(ta, 0) + h <= t.max_hours_per_semester)


def _has_substitute(changed: Instance, solution: Solution, occ: str) -> bool:
    weekly, semester = usage(changed, solution.assignments)
    there = set(solution.tas_at(occ))
    return any(t not in there and _spare(changed, weekly, semester, t, occ)
               for t in eligible_tas(changed, occ))


def _has_swap(changed: Instance, solution: Solution, occ1: str, ta1: str) -> bool:
    pairs = solution.assignments
    locked = {(lk.occurrence_id, lk.ta_id) for lk in changed.locks}
    for occ2, ta2 in sorted(pairs):
        if occ2 == occ1 or ta2 == ta1 or (occ2, ta2) in locked:
            continue
        if (occ1, ta2) in pairs or (occ2, ta1) in pairs:
            continue
        if not (changed.is_eligible(occ1, ta2) and changed.is_eligible(occ2, ta1)):
            continue
        after = (pairs - {(occ1, ta1), (occ2, ta2)}) | {(occ1, ta2), (occ2, ta1)}
        weekly, semester = usage(changed, after)
        ok = all(used <= changed.ta(t).max_hours_per_week for (t, _), used in weekly.items()
                 if t in (ta1, ta2))
        ok = ok and all(semester[t] <= changed.ta(t).max_hours_per_semester for t in (ta1, ta2))
        if ok:
            return True
    return False


def _min_drops(hours: list, cap) -> int:
    """Fewest items to remove so the remaining hours fit under ``cap``."""
    total, drops = sum(hours), 0
    for h in sorted(hours, reverse=True):
        if total <= cap:
            break
        total -= h
        drops += 1
    return drops


def _feasible(instance: Instance) -> bool:
    problem, _ = encode_original(instance)
    return solve(problem, 60.0).status is Status.OPTIMAL


def generate_scenario(instance: Instance, solution: Solution, kind: int, seed: int = 0) -> ChangeSet:
    """Change commands reproducing scenario ``kind`` (1 to 4) against ``solution``.

    1. block one assigned pair that both a substitute and a swap can repair;
    2. cut one TA's weekly cap to half its peak weekly load (at least two
       sessions must move);
    3. block every assigned pair, provided an alternative solution exists;
    4. block a pair that is not assigned.
    """
    rng = random.Random(seed * 4 + kind)
    pairs = list(solution)
    if kind == 1:
        rng.shuffle(pairs)
        for occ, ta in pairs:
            change = (BlockOccurrence(ta, occ),)
            changed = apply_changes(instance, change, solution)
            if _has_substitute(changed, solution, occ) and _has_swap(changed, solution, occ, ta):
                return change
        raise ScenarioUnconstructible("no assigned pair has both a substitute and a swap partner")
    if kind == 2:
        tas = sorted({t for _, t in pairs})
        rng.shuffle(tas)
        for ta in tas:
            per_week: dict[int, list] = {}
            for occ in solution.occurrences_of(ta):
                per_week.setdefault(instance.occurrence(occ).week, []).append(instance.hours(occ))
            if max(len(v) for v in per_week.values()) < 3:
                continue
            cap = max(sum(v) for v in per_week.values()) // 2
            if sum(_min_drops(v, cap) for v in per_week.values()) < 2:
                continue
            change = (SetMaxWeekHours(ta, cap),)
            if _feasible(apply_changes(instance, change, solution)):
                return change
        raise ScenarioUnconstructible("no TA carries three sessions in one week")
    if kind == 3:
        change = tuple(BlockOccurrence(ta, occ) for occ, ta in pairs)
        if not change or not _feasible(apply_changes(instance, change, solution)):
            raise ScenarioUnconstructible("no solution avoids every original assignment")
        return change
    if kind == 4:
        free = [(o.id, t) for o in instance.occurrences for t in eligible_tas(instance, o.id)
                if (o.id, t) not in solution]
        if not free:
            free = [(o.id, t.id) for o in instance.occurrences for t in instance.tas
                    if (o.id, t.id) not in solution]
        if not free:
            raise ScenarioUnconstructible("every pair is assigned")
        occ, ta = rng.choice(free)
        return (BlockOccurrence(ta, occ),)
    raise ValueError(f"unknown scenario kind {kind!r}")
