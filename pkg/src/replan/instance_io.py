"""Line-oriented text formats for instances and solutions.

Every record is a keyword followed by ``key=value`` fields::

    module id=m1 name=Mathematics
    session id=m1-s1 module=m1 need=1 hours=2 weeks=1,2,3
    occurrence id=m1-s1-w1 session=m1-s1 week=1
    ta id=ta01 name=Ada maxweek=6 maxsem=20
    approval ta=ta01 module=m1 rating=GREEN
    unavailable ta=ta01 occurrence=m1-s1-w1
    lock occurrence=m1-s1-w1 ta=ta01

Solutions use ``assign occurrence=.. ta=..``. Values containing whitespace
are shell-quoted. Writers emit records grouped by type and sorted by id, so
equal values always produce byte-equal text.
"""

from __future__ import annotations

import shlex

from .errors import ParseError
from .model import (Approval, ApprovalRating, CourseModule, Instance, Lock, SessionOccurrence,
                    Solution, TeachingAssistant, TeachingSession, Unavailability,
                    as_number, format_number)

_FIELDS = {
    "module": ("id", "name"),
    "session": ("id", "module", "need", "hours", "weeks"),
    "occurrence": ("id", "session", "week"),
    "ta": ("id", "name", "maxweek", "maxsem"),
    "approval": ("ta", "module", "rating"),
    "unavailable": ("ta", "occurrence"),
    "lock": ("occurrence", "ta"),
    "assign": ("occurrence", "ta"),
}
_OPTIONAL = {("module", "name"), ("ta", "name")}


def _records(text: str, allowed: set[str]):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        try:
            tokens = shlex.split(raw, comments=True)
        except ValueError as exc:
            raise ParseError(lineno, str(exc)) from None
        if not tokens:
            continue
        kind = tokens[0]
        if kind not in allowed:
            raise ParseError(lineno, f"unknown record type {kind!r}")
        fields = {}
        for tok in tokens[1:]:
            key, sep, value = tok.partition("=")
            if not sep:
                raise ParseError(lineno, f"expected key=value, got {tok!r}")
            if key not in _FIELDS[kind]:
                raise ParseError(lineno, f"unknown field {key!r} for {kind}")
            if key in fields:
                raise ParseError(lineno, f"duplicate field {key!r}")
            fields[key] = value
        for key in _FIELDS[kind]:
            if key not in fields and (kind, key) not in _OPTIONAL:
                raise ParseError(lineno, f"{kind} record lacks field {key!r}")
        yield lineno, kind, fields


def _convert(lineno, fn, value, what):
    try:
        return fn(value)
    except (ValueError, KeyError, ZeroDivisionError, TypeError):
        raise ParseError(lineno, f"bad {what} {value!r}") from None


def _rating(value: str) -> ApprovalRating:
    return ApprovalRating[value]


def _weeks(value: str) -> tuple[int, ...]:
    return tuple(int(w) for w in value.split(","))


def read_instance(text: str) -> Instance:
    parts: dict[str, list] = {k: [] for k in _FIELDS if k != "assign"}
    for lineno, kind, f in _records(text, set(parts)):
        if kind == "module":
            rec = CourseModule(f["id"], f.get("name", ""))
        elif kind == "session":
            rec = TeachingSession(
                f["id"], f["module"],
                _convert(lineno, int, f["need"], "need"),
                _convert(lineno, as_number, f["hours"], "hours"),
                _convert(lineno, _weeks, f["weeks"], "weeks"))
        elif kind == "occurrence":
            rec = SessionOccurrence(f["id"], f["session"], _convert(lineno, int, f["week"], "week"))
        elif kind == "ta":
            rec = TeachingAssistant(
                f["id"], f.get("name", ""),
                _convert(lineno, as_number, f["maxweek"], "maxweek"),
                _convert(lineno, as_number, f["maxsem"], "maxsem"))
        elif kind == "approval":
            rec = Approval(f["ta"], f["module"], _convert(lineno, _rating, f["rating"], "rating"))
        elif kind == "unavailable":
            rec = Unavailability(f["ta"], f["occurrence"])
        else:
            rec = Lock(f["occurrence"], f["ta"])
        parts[kind].append(rec)
    return Instance(
        modules=tuple(parts["module"]), sessions=tuple(parts["session"]),
        occurrences=tuple(parts["occurrence"]), tas=tuple(parts["ta"]),
        approvals=tuple(parts["approval"]), unavailabilities=tuple(parts["unavailable"]),
        locks=tuple(parts["lock"]))


def _line(kind: str, **fields) -> str:
    return " ".join([kind] + [f"{k}={shlex.quote(str(v))}" for k, v in fields.items()])


def write_instance(instance: Instance) -> str:
    lines = []
    for m in instance.modules:
        lines.append(_line("module", id=m.id, name=m.name))
    for s in instance.sessions:
        lines.append(_line("session", id=s.id, module=s.module_id, need=s.num_tas_per_session,
                           hours=format_number(s.hours_per_occurrence),
                           weeks=",".join(map(str, s.weeks))))
    for o in instance.occurrences:
        lines.append(_line("occurrence", id=o.id, session=o.session_id, week=o.week))
    for t in instance.tas:
        lines.append(_line("ta", id=t.id, name=t.name,
                           maxweek=format_number(t.max_hours_per_week),
                           maxsem=format_number(t.max_hours_per_semester)))
    for a in instance.approvals:
        lines.append(_line("approval", ta=a.ta_id, module=a.module_id, rating=a.rating.name))
    for u in instance.unavailabilities:
        lines.append(_line("unavailable", ta=u.ta_id, occurrence=u.occurrence_id))
    for lk in instance.locks:
        lines.append(_line("lock", occurrence=lk.occurrence_id, ta=lk.ta_id))
    return "".join(line + "\n" for line in lines)


def read_solution(text: str) -> Solution:
    return Solution(frozenset((f["occurrence"], f["ta"]) for _, _, f in _records(text, {"assign"})))


def write_solution(solution: Solution) -> str:
    return "".join(_line("assign", occurrence=o, ta=t) + "\n" for o, t in solution)
