"""Domain types for TA allocation and feasibility checking of solutions.

All types are immutable. Collections inside an :class:`Instance` are stored
as tuples sorted by id so that iteration order is deterministic everywhere.
"""

from __future__ import annotations

import dataclasses
import math
from collections import defaultdict
from dataclasses import dataclass, field
from enum import IntEnum
from fractions import Fraction
from functools import cached_property
from typing import ClassVar, Iterable, Iterator, Union

from .errors import DanglingReference, IntegrityError, UnknownOccurrence, UnknownTa

Number = Union[int, Fraction]


def as_number(value) -> Number:
    """Exact rational view of ``value``; integral values come back as ``int``."""
    if isinstance(value, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"non-finite number {value!r}")
        value = Fraction(value)
    elif isinstance(value, str):
        value = Fraction(value.strip())
    elif not isinstance(value, (int, Fraction)):
        value = Fraction(value)
    if isinstance(value, Fraction) and value.denominator == 1:
        return int(value.numerator)
    return value


def format_number(value: Number) -> str:
    value = as_number(value)
    if isinstance(value, int):
        return str(value)
    den = value.denominator
    twos = fives = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den != 1:
        return f"{value.numerator}/{value.denominator}"
    digits = max(twos, fives)
    scaled = abs(value) * 10**digits
    whole, frac = divmod(int(scaled), 10**digits)
    sign = "-" if value < 0 else ""
    return f"{sign}{whole}.{frac:0{digits}d}"


class ApprovalRating(IntEnum):
    RED = 0
    AMBER = 1
    GREEN = 2


@dataclass(frozen=True, order=True)
class TeachingAssistant:
    id: str
    name: str = ""
    max_hours_per_week: Number = 0
    max_hours_per_semester: Number = 0

    def __post_init__(self):
        week = as_number(self.max_hours_per_week)
        sem = as_number(self.max_hours_per_semester)
        if week < 0 or sem < 0:
            raise IntegrityError(f"TA {self.id}: hour caps must be non-negative")
        object.__setattr__(self, "max_hours_per_week", week)
        object.__setattr__(self, "max_hours_per_semester", sem)


@dataclass(frozen=True, order=True)
class CourseModule:
    id: str
    name: str = ""


@dataclass(frozen=True, order=True)
class TeachingSession:
    id: str
    module_id: str
    num_tas_per_session: int = 1
    hours_per_occurrence: Number = 1
    weeks: tuple[int, ...] = (1,)

    def __post_init__(self):
        hours = as_number(self.hours_per_occurrence)
        weeks = tuple(sorted(set(int(w) for w in self.weeks)))
        if int(self.num_tas_per_session) < 1:
            raise IntegrityError(f"session {self.id}: numTasPerSession must be >= 1")
        if hours <= 0:
            raise IntegrityError(f"session {self.id}: hoursPerOccurrence must be > 0")
        if not weeks or weeks[0] < 1:
            raise IntegrityError(f"session {self.id}: weeks must be a non-empty set of 1-based indices")
        object.__setattr__(self, "num_tas_per_session", int(self.num_tas_per_session))
        object.__setattr__(self, "hours_per_occurrence", hours)
        object.__setattr__(self, "weeks", weeks)


@dataclass(frozen=True, order=True)
class SessionOccurrence:
    id: str
    session_id: str
    week: int


@dataclass(frozen=True, order=True)
class Approval:
    ta_id: str
    module_id: str
    rating: ApprovalRating

    def __post_init__(self):
        rating = self.rating
        if isinstance(rating, str):
            rating = ApprovalRating[rating.upper()]
        object.__setattr__(self, "rating", ApprovalRating(rating))


@dataclass(frozen=True, order=True)
class Unavailability:
    ta_id: str
    occurrence_id: str


@dataclass(frozen=True, order=True)
class Lock:
    occurrence_id: str
    ta_id: str


def _sorted_unique(items, what: str, key=lambda x: x.id):
    seen = {}
    for item in items:
        k = key(item)
        if k in seen and seen[k] != item:
            raise IntegrityError(f"duplicate {what} id {k!r}")
        seen[k] = item
    return tuple(seen[k] for k in sorted(seen))


@dataclass(frozen=True)
class Instance:
    """The complete problem world.

    Construction normalises every collection (sorted, de-duplicated) and
    checks referential integrity, so an ``Instance`` that exists is valid.
    """

    modules: tuple[CourseModule, ...] = ()
    sessions: tuple[TeachingSession, ...] = ()
    occurrences: tuple[SessionOccurrence, ...] = ()
    tas: tuple[TeachingAssistant, ...] = ()
    approvals: tuple[Approval, ...] = ()
    unavailabilities: tuple[Unavailability, ...] = ()
    locks: tuple[Lock, ...] = ()

    def __post_init__(self):
        set_ = object.__setattr__
        set_(self, "modules", _sorted_unique(self.modules, "module"))
        set_(self, "sessions", _sorted_unique(self.sessions, "session"))
        set_(self, "occurrences", _sorted_unique(self.occurrences, "occurrence"))
        set_(self, "tas", _sorted_unique(self.tas, "TA"))
        set_(self, "approvals", _sorted_unique(
            self.approvals, "approval", key=lambda a: (a.ta_id, a.module_id)))
        set_(self, "unavailabilities", tuple(sorted(set(self.unavailabilities))))
        set_(self, "locks", tuple(sorted(set(self.locks))))
        self._check_integrity()

    def _check_integrity(self):
        modules = {m.id for m in self.modules}
        sessions = {s.id: s for s in self.sessions}
        tas = {t.id for t in self.tas}
        occs = {o.id for o in self.occurrences}
        for s in self.sessions:
            if s.module_id not in modules:
                raise IntegrityError(f"session {s.id} references unknown module {s.module_id!r}")
        seen = set()
        for o in self.occurrences:
            s = sessions.get(o.session_id)
            if s is None:
                raise IntegrityError(f"occurrence {o.id} references unknown session {o.session_id!r}")
            if o.week not in s.weeks:
                raise IntegrityError(f"occurrence {o.id}: week {o.week} not among session {s.id} weeks")
            if (s.id, o.week) in seen:
                raise IntegrityError(f"session {s.id} has more than one occurrence in week {o.week}")
            seen.add((s.id, o.week))
        for s in self.sessions:
            for w in s.weeks:
                if (s.id, w) not in seen:
                    raise IntegrityError(f"session {s.id} has no occurrence for week {w}")
        for a in self.approvals:
            if a.ta_id not in tas or a.module_id not in modules:
                raise IntegrityError(f"approval ({a.ta_id}, {a.module_id}) references unknown ids")
        for u in self.unavailabilities:
            if u.ta_id not in tas or u.occurrence_id not in occs:
                raise IntegrityError(f"unavailability ({u.ta_id}, {u.occurrence_id}) references unknown ids")
        for lk in self.locks:
            if lk.ta_id not in tas or lk.occurrence_id not in occs:
                raise IntegrityError(f"lock ({lk.occurrence_id}, {lk.ta_id}) references unknown ids")

    # lookups; cached_property writes to __dict__ directly, which frozen allows
    @cached_property
    def module_by_id(self) -> dict[str, CourseModule]:
        return {m.id: m for m in self.modules}

    @cached_property
    def session_by_id(self) -> dict[str, TeachingSession]:
        return {s.id: s for s in self.sessions}

    @cached_property
    def occurrence_by_id(self) -> dict[str, SessionOccurrence]:
        return {o.id: o for o in self.occurrences}

    @cached_property
    def ta_by_id(self) -> dict[str, TeachingAssistant]:
        return {t.id: t for t in self.tas}

    @cached_property
    def _ratings(self) -> dict[tuple[str, str], ApprovalRating]:
        return {(a.ta_id, a.module_id): a.rating for a in self.approvals}

    @cached_property
    def _unavailable(self) -> frozenset[tuple[str, str]]:
        return frozenset((u.ta_id, u.occurrence_id) for u in self.unavailabilities)

    @cached_property
    def weeks(self) -> tuple[int, ...]:
        return tuple(sorted({o.week for o in self.occurrences}))

    def session_of(self, occurrence_id: str) -> TeachingSession:
        return self.session_by_id[self.occurrence(occurrence_id).session_id]

    def occurrence(self, occurrence_id: str) -> SessionOccurrence:
        try:
            return self.occurrence_by_id[occurrence_id]
        except KeyError:
            raise UnknownOccurrence(occurrence_id) from None

    def ta(self, ta_id: str) -> TeachingAssistant:
        try:
            return self.ta_by_id[ta_id]
        except KeyError:
            raise UnknownTa(ta_id) from None

    def hours(self, occurrence_id: str) -> Number:
        return self.session_of(occurrence_id).hours_per_occurrence

    def need(self, occurrence_id: str) -> int:
        return self.session_of(occurrence_id).num_tas_per_session

    def rating(self, ta_id: str, module_id: str) -> ApprovalRating:
        """Approval rating; a missing approval counts as RED."""
        return self._ratings.get((ta_id, module_id), ApprovalRating.RED)

    def occurrence_rating(self, occurrence_id: str, ta_id: str) -> ApprovalRating:
        return self.rating(ta_id, self.session_of(occurrence_id).module_id)

    def is_unavailable(self, ta_id: str, occurrence_id: str) -> bool:
        return (ta_id, occurrence_id) in self._unavailable

    def is_eligible(self, occurrence_id: str, ta_id: str) -> bool:
        return (self.occurrence_rating(occurrence_id, ta_id) >= ApprovalRating.AMBER
                and not self.is_unavailable(ta_id, occurrence_id))

    @cached_property
    def _eligible(self) -> dict[str, tuple[str, ...]]:
        return {o.id: tuple(t.id for t in self.tas if self.is_eligible(o.id, t.id))
                for o in self.occurrences}


@dataclass(frozen=True)
class Solution:
    """A set of (occurrence id, TA id) assignment pairs."""

    assignments: frozenset[tuple[str, str]] = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "assignments",
                           frozenset((str(o), str(t)) for o, t in self.assignments))

    def __iter__(self) -> Iterator[tuple[str, str]]:
        return iter(sorted(self.assignments))

    def __len__(self) -> int:
        return len(self.assignments)

    def __contains__(self, pair) -> bool:
        return tuple(pair) in self.assignments

    def tas_at(self, occurrence_id: str) -> list[str]:
        return sorted(t for o, t in self.assignments if o == occurrence_id)

    def occurrences_of(self, ta_id: str) -> list[str]:
        return sorted(o for o, t in self.assignments if t == ta_id)

    def kept(self, other: "Solution") -> int:
        return len(self.assignments & other.assignments)


# ---------------------------------------------------------------- violations

@dataclass(frozen=True)
class Violation:
    rank: ClassVar[int] = 99

    @property
    def key(self) -> tuple:
        raise NotImplementedError

    @property
    def kind(self) -> str:
        return type(self).__name__

    def sort_key(self):
        return (self.rank, self.key)

    def __str__(self):
        fields = " ".join(f"{f.name}={format_number(v) if isinstance(v, (int, Fraction)) else v}"
                          for f in dataclasses.fields(self) for v in [getattr(self, f.name)])
        return f"{self.kind} {fields}"


@dataclass(frozen=True)
class Understaffed(Violation):
    rank: ClassVar[int] = 0
    occurrence: str
    have: int
    need: int

    @property
    def key(self):
        return (self.occurrence,)


@dataclass(frozen=True)
class Overstaffed(Violation):
    rank: ClassVar[int] = 1
    occurrence: str
    have: int
    need: int

    @property
    def key(self):
        return (self.occurrence,)


@dataclass(frozen=True)
class WeeklyHoursExceeded(Violation):
    rank: ClassVar[int] = 2
    ta: str
    week: int
    used: Number
    cap: Number

    @property
    def key(self):
        return (self.ta, self.week)


@dataclass(frozen=True)
class SemesterHoursExceeded(Violation):
    rank: ClassVar[int] = 3
    ta: str
    used: Number
    cap: Number

    @property
    def key(self):
        return (self.ta,)


@dataclass(frozen=True)
class IneligibleAssignment(Violation):
    rank: ClassVar[int] = 4
    occurrence: str
    ta: str
    reason: str  # "Red" or "Unavailable"

    @property
    def key(self):
        return (self.occurrence, self.ta)


@dataclass(frozen=True)
class LockViolated(Violation):
    rank: ClassVar[int] = 5
    occurrence: str
    ta: str

    @property
    def key(self):
        return (self.occurrence, self.ta)


# ---------------------------------------------------------------- operations

def eligible_tas(instance: Instance, occurrence_id: str) -> tuple[str, ...]:
    """TAs rated at least AMBER for the occurrence's module and not blocked for it.

    Returned in id order.
    """
    try:
        return instance._eligible[occurrence_id]
    except KeyError:
        raise UnknownOccurrence(occurrence_id) from None


@dataclass(frozen=True)
class Week:
    week: int


SEMESTER = "semester"


def hours_assigned(instance: Instance, solution: Solution, ta_id: str,
                   scope: Week | str = SEMESTER) -> Number:
    instance.ta(ta_id)
    total: Number = 0
    for occ_id, t in solution.assignments:
        if t != ta_id:
            continue
        if isinstance(scope, Week) and instance.occurrence(occ_id).week != scope.week:
            continue
        total += instance.hours(occ_id)
    return as_number(total)


def check_references(instance: Instance, solution: Solution) -> None:
    for occ_id, ta_id in solution.assignments:
        if occ_id not in instance.occurrence_by_id:
            raise DanglingReference(f"unknown occurrence {occ_id!r}")
        if ta_id not in instance.ta_by_id:
            raise DanglingReference(f"unknown TA {ta_id!r}")


def usage(instance: Instance, pairs: Iterable[tuple[str, str]]):
    """Hours per (TA, week) and per TA for a collection of pairs."""
    weekly: dict[tuple[str, int], Number] = defaultdict(int)
    semester: dict[str, Number] = defaultdict(int)
    for occ_id, ta_id in pairs:
        h = instance.hours(occ_id)
        weekly[ta_id, instance.occurrence(occ_id).week] += h
        semester[ta_id] += h
    return weekly, semester


def validate_solution(instance: Instance, solution: Solution) -> list[Violation]:
    """Every constraint breach of ``solution`` under ``instance``, sorted."""
    check_references(instance, solution)
    found: list[Violation] = []
    staffed: dict[str, int] = defaultdict(int)
    for occ_id, ta_id in solution.assignments:
        staffed[occ_id] += 1
        if instance.occurrence_rating(occ_id, ta_id) < ApprovalRating.AMBER:
            found.append(IneligibleAssignment(occ_id, ta_id, "Red"))
        elif instance.is_unavailable(ta_id, occ_id):
            found.append(IneligibleAssignment(occ_id, ta_id, "Unavailable"))
    for occ in instance.occurrences:
        have, need = staffed[occ.id], instance.need(occ.id)
        if have < need:
            found.append(Understaffed(occ.id, have, need))
        elif have > need:
            found.append(Overstaffed(occ.id, have, need))
    weekly, semester = usage(instance, solution.assignments)
    for (ta_id, week), used in weekly.items():
        cap = instance.ta(ta_id).max_hours_per_week
        if used > cap:
            found.append(WeeklyHoursExceeded(ta_id, week, as_number(used), cap))
    for ta_id, used in semester.items():
        cap = instance.ta(ta_id).max_hours_per_semester
        if used > cap:
            found.append(SemesterHoursExceeded(ta_id, as_number(used), cap))
    for lk in instance.locks:
        if (lk.occurrence_id, lk.ta_id) not in solution.assignments:
            found.append(LockViolated(lk.occurrence_id, lk.ta_id))
    return sorted(found, key=Violation.sort_key)
