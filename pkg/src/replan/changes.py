"""Change commands: parsing, printing, application and impact classification.

Grammar, one command per line::

    block <ta> occurrence <occ>
    block <ta> week <int>
    block <ta> session <session> weeks <int>[,<int>]*
    set-max-week-hours <ta> <number>
    set-max-semester-hours <ta> <number>
    lock <occ> <ta>
    lock-before-week <int>

Blank lines and ``#`` comments are ignored.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import Iterable, Union

from .errors import ChangeSyntaxError, UnknownCommand, UnknownId
from .model import (IneligibleAssignment, Instance, Lock, Number, SemesterHoursExceeded,
                    Solution, Unavailability, Understaffed, Violation,
                    WeeklyHoursExceeded, as_number, format_number, validate_solution)


@dataclass(frozen=True)
class BlockOccurrence:
    ta: str
    occurrence: str

    def __str__(self):
        return f"block {self.ta} occurrence {self.occurrence}"


@dataclass(frozen=True)
class BlockWeek:
    ta: str
    week: int

    def __str__(self):
        return f"block {self.ta} week {self.week}"


@dataclass(frozen=True)
class BlockSession:
    ta: str
    session: str
    weeks: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "weeks", tuple(sorted(set(self.weeks))))

    def __str__(self):
        return f"block {self.ta} session {self.session} weeks {','.join(map(str, self.weeks))}"


@dataclass(frozen=True)
class SetMaxWeekHours:
    ta: str
    hours: Number

    def __post_init__(self):
        object.__setattr__(self, "hours", as_number(self.hours))

    def __str__(self):
        return f"set-max-week-hours {self.ta} {format_number(self.hours)}"


@dataclass(frozen=True)
class SetMaxSemesterHours:
    ta: str
    hours: Number

    def __post_init__(self):
        object.__setattr__(self, "hours", as_number(self.hours))

    def __str__(self):
        return f"set-max-semester-hours {self.ta} {format_number(self.hours)}"


@dataclass(frozen=True)
class LockAssignment:
    occurrence: str
    ta: str

    def __str__(self):
        return f"lock {self.occurrence} {self.ta}"


@dataclass(frozen=True)
class LockBeforeWeek:
    week: int

    def __str__(self):
        return f"lock-before-week {self.week}"


Change = Union[BlockOccurrence, BlockWeek, BlockSession, SetMaxWeekHours,
              SetMaxSemesterHours, LockAssignment, LockBeforeWeek]
ChangeSet = tuple[Change, ...]


# ------------------------------------------------------------------ parsing

def _int(tok: str, lineno: int, col: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ChangeSyntaxError(lineno, f"expected an integer, got {tok!r}", col) from None


def _hours(tok: str, lineno: int, col: int) -> Number:
    try:
        value = as_number(tok)
    except (ValueError, ZeroDivisionError):
        raise ChangeSyntaxError(lineno, f"expected a number, got {tok!r}", col) from None
    if value < 0:
        raise ChangeSyntaxError(lineno, "hours must be non-negative", col)
    return value


def _parse_line(tokens: list[tuple[str, int]], lineno: int) -> Change:
    words = [t for t, _ in tokens]
    cols = [c for _, c in tokens]
    cmd = words[0]

    def arity(n):
        if len(words) != n:
            raise ChangeSyntaxError(lineno, f"{cmd!r} takes {n - 1} arguments, got {len(words) - 1}",
                                    cols[min(len(cols) - 1, n)] if len(words) > n else cols[-1])

    if cmd == "block":
        if len(words) < 3:
            raise ChangeSyntaxError(lineno, "block needs <ta> and a target", cols[-1])
        what = words[2]
        if what == "occurrence":
            arity(4)
            return BlockOccurrence(words[1], words[3])
        if what == "week":
            arity(4)
            return BlockWeek(words[1], _int(words[3], lineno, cols[3]))
        if what == "session":
            arity(6)
            if words[4] != "weeks":
                raise ChangeSyntaxError(lineno, f"expected 'weeks', got {words[4]!r}", cols[4])
            weeks = tuple(_int(w, lineno, cols[5]) for w in words[5].split(","))
            return BlockSession(words[1], words[3], weeks)
        raise ChangeSyntaxError(lineno, f"unknown block target {what!r}", cols[2])
    if cmd == "set-max-week-hours":
        arity(3)
        return SetMaxWeekHours(words[1], _hours(words[2], lineno, cols[2]))
    if cmd == "set-max-semester-hours":
        arity(3)
        return SetMaxSemesterHours(words[1], _hours(words[2], lineno, cols[2]))
    if cmd == "lock":
        arity(3)
        return LockAssignment(words[1], words[2])
    if cmd == "lock-before-week":
        arity(2)
        return LockBeforeWeek(_int(words[1], lineno, cols[1]))
    raise UnknownCommand(lineno, f"unknown command {cmd!r}", cols[0])


def _tokenize(line: str) -> list[tuple[str, int]]:
    tokens, i = [], 0
    while i < len(line):
        if line[i].isspace():
            i += 1
            continue
        j = i
        while j < len(line) and not line[j].isspace():
            j += 1
        tokens.append((line[i:j], i + 1))
        i = j
    return tokens


def parse_changes(text: str) -> ChangeSet:
    changes = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        tokens = _tokenize(line)
        if tokens:
            changes.append(_parse_line(tokens, lineno))
    return tuple(changes)


def format_changes(changes: Iterable[Change]) -> str:
    return "".join(f"{c}\n" for c in changes)


# ------------------------------------------------------------------ applying

def _require(instance: Instance, change, *, ta=None, occurrence=None, session=None):
    if ta is not None and ta not in instance.ta_by_id:
        raise UnknownId(change, ta)
    if occurrence is not None and occurrence not in instance.occurrence_by_id:
        raise UnknownId(change, occurrence)
    if session is not None and session not in instance.session_by_id:
        raise UnknownId(change, session)


def apply_changes(instance: Instance, changes: Iterable[Change],
                  original: Solution = Solution()) -> Instance:
    """New instance with ``changes`` applied in order; ``instance`` is untouched."""
    unavail = set(instance.unavailabilities)
    locks = set(instance.locks)
    tas = dict(instance.ta_by_id)
    for ch in changes:
        if isinstance(ch, BlockOccurrence):
            _require(instance, ch, ta=ch.ta, occurrence=ch.occurrence)
            unavail.add(Unavailability(ch.ta, ch.occurrence))
        elif isinstance(ch, BlockWeek):
            _require(instance, ch, ta=ch.ta)
            unavail.update(Unavailability(ch.ta, o.id) for o in instance.occurrences
                           if o.week == ch.week)
        elif isinstance(ch, BlockSession):
            _require(instance, ch, ta=ch.ta, session=ch.session)
            unavail.update(Unavailability(ch.ta, o.id) for o in instance.occurrences
                           if o.session_id == ch.session and o.week in ch.weeks)
        elif isinstance(ch, SetMaxWeekHours):
            _require(instance, ch, ta=ch.ta)
            tas[ch.ta] = dataclasses.replace(tas[ch.ta], max_hours_per_week=ch.hours)
        elif isinstance(ch, SetMaxSemesterHours):
            _require(instance, ch, ta=ch.ta)
            tas[ch.ta] = dataclasses.replace(tas[ch.ta], max_hours_per_semester=ch.hours)
        elif isinstance(ch, LockAssignment):
            _require(instance, ch, ta=ch.ta, occurrence=ch.occurrence)
            locks.add(Lock(ch.occurrence, ch.ta))
        elif isinstance(ch, LockBeforeWeek):
            for occ_id, ta_id in original:
                _require(instance, ch, ta=ta_id, occurrence=occ_id)
                if instance.occurrence(occ_id).week < ch.week:
                    locks.add(Lock(occ_id, ta_id))
        else:
            raise TypeError(f"not a change command: {ch!r}")
    return dataclasses.replace(instance, tas=tuple(tas.values()),
                               unavailabilities=tuple(unavail), locks=tuple(locks))


# ------------------------------------------------------------------ impact

@dataclass(frozen=True)
class Vacuous:
    def __str__(self):
        return "Vacuous"


@dataclass(frozen=True)
class LocalViolations:
    occurrences: tuple[str, ...]

    def __str__(self):
        return f"LocalViolations({', '.join(self.occurrences)})"


@dataclass(frozen=True)
class TaOverload:
    ta: str
    # (week or None for the semester, excess hours)
    excess: tuple[tuple[int | None, Number], ...]

    def __str__(self):
        parts = [f"{'semester' if w is None else f'week {w}'}: +{format_number(x)}h"
                 for w, x in self.excess]
        return f"TaOverload({self.ta}; {', '.join(parts)})"


@dataclass(frozen=True)
class Complex:
    def __str__(self):
        return "Complex"


Classification = Union[Vacuous, LocalViolations, TaOverload, Complex]


@dataclass(frozen=True)
class ChangeImpact:
    classification: Classification
    violations: tuple[Violation, ...]

    @property
    def kind(self) -> str:
        return type(self.classification).__name__


def classify_change(instance: Instance, original: Solution) -> ChangeImpact:
    """How the changed ``instance`` affects ``original``.

    LocalViolations requires every breach to be a seat problem (an ineligible
    assignment or a missing TA) and all ineligible assignments to belong to
    one TA. Several blocked TAs, mixed kinds or more than one overloaded TA
    route to Complex.
    """
    violations = tuple(validate_solution(instance, original))
    if not violations:
        return ChangeImpact(Vacuous(), violations)
    if all(isinstance(v, (IneligibleAssignment, Understaffed)) for v in violations):
        blocked = {v.ta for v in violations if isinstance(v, IneligibleAssignment)}
        if len(blocked) <= 1:
            occs = tuple(sorted({v.occurrence for v in violations}))
            return ChangeImpact(LocalViolations(occs), violations)
        return ChangeImpact(Complex(), violations)
    if all(isinstance(v, (WeeklyHoursExceeded, SemesterHoursExceeded)) for v in violations):
        tas = {v.ta for v in violations}
        if len(tas) == 1:
            excess = tuple(
                (v.week if isinstance(v, WeeklyHoursExceeded) else None, as_number(v.used - v.cap))
                for v in violations)
            return ChangeImpact(TaOverload(tas.pop(), excess), violations)
    return ChangeImpact(Complex(), violations)
