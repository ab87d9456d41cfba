from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from replan import (Approval, ApprovalRating, CourseModule, Instance, SessionOccurrence,
                    Solution, TeachingAssistant, TeachingSession, Unavailability,
                    eligible_tas, hours_assigned, validate_solution)
from replan.errors import DanglingReference, IntegrityError, UnknownOccurrence, UnknownTa
from replan.model import (SEMESTER, IneligibleAssignment, LockViolated, Lock, Overstaffed,
                          SemesterHoursExceeded, Understaffed, Week, WeeklyHoursExceeded,
                          as_number, format_number)
from conftest import tiny_instance


def two_ta_instance(**extra):
    return Instance(
        modules=(CourseModule("m1"),),
        sessions=(TeachingSession("s1", "m1", 1, 2, (1, 2)),),
        occurrences=(SessionOccurrence("s1-w1", "s1", 1), SessionOccurrence("s1-w2", "s1", 2)),
        tas=(TeachingAssistant("a", "A", 4, 10), TeachingAssistant("b", "B", 4, 10),
             TeachingAssistant("c", "C", 4, 10)),
        approvals=(Approval("a", "m1", "GREEN"), Approval("b", "m1", "AMBER")),
        **extra)


def test_rating_order():
    assert ApprovalRating.GREEN > ApprovalRating.AMBER > ApprovalRating.RED


def test_eligible_two_tas():
    assert eligible_tas(two_ta_instance(), "s1-w1") == ("a", "b")


def test_missing_approval_is_red():
    inst = two_ta_instance()
    assert inst.rating("c", "m1") is ApprovalRating.RED
    assert "c" not in eligible_tas(inst, "s1-w1")


def test_unavailable_green_excluded():
    inst = two_ta_instance(unavailabilities=(Unavailability("a", "s1-w1"),))
    assert eligible_tas(inst, "s1-w1") == ("b",)
    assert eligible_tas(inst, "s1-w2") == ("a", "b")


def test_eligible_unknown_occurrence():
    with pytest.raises(UnknownOccurrence):
        eligible_tas(two_ta_instance(), "nope")


def test_hours_assigned(small):
    assert hours_assigned(small, Solution(), "ta1") == 0
    sol = Solution(frozenset({("m1-s1-w1", "ta1"), ("m2-s1-w1", "ta1"), ("m1-s1-w2", "ta1")}))
    assert hours_assigned(small, sol, "ta1", Week(1)) == 3
    assert hours_assigned(small, sol, "ta1", Week(2)) == 2
    assert hours_assigned(small, sol, "ta1", SEMESTER) == 5
    with pytest.raises(UnknownTa):
        hours_assigned(small, sol, "zz")


def test_hours_additive_over_weeks():
    for seed in range(30):
        inst = tiny_instance(seed)
        sol = Solution(frozenset((o.id, t.id) for o in inst.occurrences for t in inst.tas))
        for t in inst.tas:
            weekly = sum(hours_assigned(inst, sol, t.id, Week(w)) for w in inst.weeks)
            assert weekly == hours_assigned(inst, sol, t.id)


def test_validate_clean_and_understaffed(small):
    good = Solution(frozenset({("m1-s1-w1", "ta1"), ("m1-s1-w2", "ta1"), ("m2-s1-w1", "ta2")}))
    assert validate_solution(small, good) == []
    broken = Solution(good.assignments - {("m2-s1-w1", "ta2")})
    assert validate_solution(small, broken) == [Understaffed("m2-s1-w1", 0, 1)]


def test_validate_unavailable(small):
    import dataclasses
    sol = Solution(frozenset({("m1-s1-w1", "ta1"), ("m1-s1-w2", "ta1"), ("m2-s1-w1", "ta2")}))
    changed = dataclasses.replace(small, unavailabilities=(Unavailability("ta1", "m1-s1-w1"),))
    assert validate_solution(changed, sol) == [IneligibleAssignment("m1-s1-w1", "ta1", "Unavailable")]


def test_validate_every_kind_sorted(small):
    import dataclasses
    inst = dataclasses.replace(small, locks=(Lock("m2-s1-w1", "ta3"),))
    sol = Solution(frozenset({("m1-s1-w1", "ta3"), ("m1-s1-w1", "ta2"), ("m2-s1-w1", "ta3"),
                              ("m2-s1-w1", "ta1")}))
    found = validate_solution(inst, Solution(sol.assignments - {("m2-s1-w1", "ta3")}))
    assert found == [Understaffed("m1-s1-w2", 0, 1), Overstaffed("m1-s1-w1", 2, 1),
                     LockViolated("m2-s1-w1", "ta3")]
    found = validate_solution(inst, sol)
    assert found == [Understaffed("m1-s1-w2", 0, 1), Overstaffed("m1-s1-w1", 2, 1),
                     Overstaffed("m2-s1-w1", 2, 1), WeeklyHoursExceeded("ta3", 1, 3, 2),
                     SemesterHoursExceeded("ta3", 3, 2)]


def test_validate_red_and_lock():
    inst = two_ta_instance(locks=(Lock("s1-w2", "a"),))
    sol = Solution(frozenset({("s1-w1", "c"), ("s1-w2", "b")}))
    assert validate_solution(inst, sol) == [IneligibleAssignment("s1-w1", "c", "Red"),
                                            LockViolated("s1-w2", "a")]


def test_validate_dangling():
    with pytest.raises(DanglingReference):
        validate_solution(two_ta_instance(), Solution(frozenset({("s1-w1", "zz")})))


def test_integrity_errors():
    with pytest.raises(IntegrityError):
        Instance(modules=(), sessions=(TeachingSession("s1", "m9", 1, 1, (1,)),))
    with pytest.raises(IntegrityError):
        # week 2 occurrence missing
        Instance(modules=(CourseModule("m1"),),
                 sessions=(TeachingSession("s1", "m1", 1, 1, (1, 2)),),
                 occurrences=(SessionOccurrence("o1", "s1", 1),))
    with pytest.raises(IntegrityError):
        Instance(modules=(CourseModule("m1"), CourseModule("m1", "other")))


def test_type_invariants():
    with pytest.raises(IntegrityError):
        TeachingSession("s", "m", 0, 1, (1,))
    with pytest.raises(IntegrityError):
        TeachingSession("s", "m", 1, 0, (1,))
    with pytest.raises(IntegrityError):
        TeachingSession("s", "m", 1, 1, ())
    with pytest.raises(IntegrityError):
        TeachingAssistant("t", "", -1, 3)


def test_instance_is_order_independent():
    a = two_ta_instance()
    b = Instance(modules=a.modules, sessions=a.sessions, occurrences=a.occurrences[::-1],
                 tas=a.tas[::-1], approvals=a.approvals[::-1])
    assert a == b


def test_numbers():
    assert as_number("2.5") == Fraction(5, 2)
    assert as_number(4.0) == 4 and isinstance(as_number(4.0), int)
    assert format_number(Fraction(1, 3)) == "1/3"
    assert format_number(Fraction(-5, 4)) == "-1.25"
    with pytest.raises(ValueError):
        as_number(float("inf"))


@given(st.fractions(min_value=-1000, max_value=1000, max_denominator=64))
def test_format_number_roundtrip(x):
    assert as_number(format_number(x)) == x


@given(st.integers(0, 500))
def test_eligible_never_red_or_blocked(seed):
    inst = tiny_instance(seed)
    for occ in inst.occurrences:
        for ta in eligible_tas(inst, occ.id):
            assert inst.occurrence_rating(occ.id, ta) >= ApprovalRating.AMBER
            assert not inst.is_unavailable(ta, occ.id)


def test_validate_is_pure(small):
    sol = Solution(frozenset({("m1-s1-w1", "ta3"), ("m2-s1-w1", "ta3")}))
    assert validate_solution(small, sol) == validate_solution(small, sol)
