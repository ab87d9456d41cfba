import threading

import pytest

from replan import (Approval, CourseModule, Instance, SessionOccurrence, Solution,
                    TeachingAssistant, TeachingSession, apply_changes, parse_changes,
                    validate_solution)
from replan.errors import Cancelled, TooLarge
from replan.oracle import brute_force_min_perturbation, brute_force_optimum
from conftest import tiny_instance


def single(rating="GREEN"):
    return Instance(modules=(CourseModule("m"),),
                    sessions=(TeachingSession("s", "m", 1, 1, (1,)),),
                    occurrences=(SessionOccurrence("o", "s", 1),),
                    tas=(TeachingAssistant("t", "", 1, 1),),
                    approvals=(Approval("t", "m", rating),))


def test_one_slot_one_ta():
    assert brute_force_optimum(single()) == (Solution(frozenset({("o", "t")})), 2)


def test_no_eligible_ta():
    assert brute_force_optimum(single("RED")) is None


def test_small_optimum(small):
    sol, value = brute_force_optimum(small)
    assert sorted(sol) == [("m1-s1-w1", "ta1"), ("m1-s1-w2", "ta1"), ("m2-s1-w1", "ta2")]
    assert value == 6


def test_min_perturbation_vacuous(small):
    original, _ = brute_force_optimum(small)
    assert brute_force_min_perturbation(small, original) == (original, 3)


def test_min_perturbation_scenario1(small):
    original, _ = brute_force_optimum(small)
    changed = apply_changes(small, parse_changes("block ta1 occurrence m1-s1-w1"), original)
    sol, kept = brute_force_min_perturbation(changed, original)
    assert kept == 2
    assert sorted(sol) == [("m1-s1-w1", "ta3"), ("m1-s1-w2", "ta1"), ("m2-s1-w1", "ta2")]


def test_results_are_feasible():
    for seed in range(80):
        inst = tiny_instance(seed)
        found = brute_force_optimum(inst)
        if found is not None:
            assert validate_solution(inst, found[0]) == []


def test_too_large():
    n = 12
    inst = Instance(
        modules=(CourseModule("m"),),
        sessions=(TeachingSession("s", "m", 3, 1, (1, 2, 3, 4)),),
        occurrences=tuple(SessionOccurrence(f"o{w}", "s", w) for w in (1, 2, 3, 4)),
        tas=tuple(TeachingAssistant(f"t{i:02d}", "", 9, 99) for i in range(n)),
        approvals=tuple(Approval(f"t{i:02d}", "m", "GREEN") for i in range(n)))
    with pytest.raises(TooLarge):
        brute_force_optimum(inst)


def test_cancellation():
    n = 6
    inst = Instance(
        modules=(CourseModule("m"),),
        sessions=(TeachingSession("s", "m", 2, 1, (1, 2, 3, 4)),),
        occurrences=tuple(SessionOccurrence(f"o{w}", "s", w) for w in (1, 2, 3, 4)),
        tas=tuple(TeachingAssistant(f"t{i}", "", 9, 99) for i in range(n)),
        approvals=tuple(Approval(f"t{i}", "m", "GREEN") for i in range(n)))
    stop = threading.Event()
    stop.set()
    with pytest.raises(Cancelled):
        brute_force_optimum(inst, cancel=stop)
    assert brute_force_optimum(inst, cancel=threading.Event())[1] == 16
