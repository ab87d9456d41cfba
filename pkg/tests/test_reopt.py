import dataclasses
import random

import pytest
from hypothesis import given, strategies as st

from replan import (Assign, EditScript, Solution, Strategy, Unassign, WeightConfig,
                    apply_changes, diff, parse_changes, reoptimise, reoptimise_all,
                    validate_solution)
from replan.errors import DanglingReference
from replan.model import Lock
from replan.oracle import brute_force_optimum
from replan.reopt import ReoptStatus
from conftest import tiny_instance

ORIGINAL = Solution(frozenset({("m1-s1-w1", "ta1"), ("m1-s1-w2", "ta1"), ("m2-s1-w1", "ta2")}))


def changed(small, text):
    return apply_changes(small, parse_changes(text), ORIGINAL)


def test_scenario1_on_small(small):
    inst = changed(small, "block ta1 occurrence m1-s1-w1")
    results = reoptimise_all(inst, ORIGINAL)
    refill = {("m1-s1-w1", "ta3"), ("m1-s1-w2", "ta1"), ("m2-s1-w1", "ta2")}
    swap = {("m1-s1-w1", "ta2"), ("m1-s1-w2", "ta1"), ("m2-s1-w1", "ta1")}
    assert results[Strategy.BASIC].new_solution.assignments == refill
    assert results[Strategy.SMART].new_solution.assignments == swap
    assert results[Strategy.SET].new_solution.assignments == refill
    assert results[Strategy.FULL].new_solution.assignments == refill
    assert [results[s].kept_count for s in Strategy] == [2, 1, 2, 2]
    assert str(results[Strategy.SMART].edit_script) == (
        "unassign occurrence=m1-s1-w1 ta=ta1\n"
        "unassign occurrence=m2-s1-w1 ta=ta2\n"
        "assign occurrence=m1-s1-w1 ta=ta2\n"
        "assign occurrence=m2-s1-w1 ta=ta1\n")


def test_overload_gating(small):
    inst = changed(small, "set-max-semester-hours ta1 3")
    results = reoptimise_all(inst, ORIGINAL)
    assert results[Strategy.BASIC].status is ReoptStatus.INAPPLICABLE
    assert results[Strategy.BASIC].message == "strategy inapplicable: TaOverload"
    assert results[Strategy.SMART].status is ReoptStatus.INAPPLICABLE
    for s in (Strategy.SET, Strategy.FULL):
        assert results[s].solved and validate_solution(inst, results[s].new_solution) == []


def test_complex_gating(small):
    inst = changed(small, "block ta1 week 2\nblock ta2 week 1")
    results = reoptimise_all(inst, ORIGINAL)
    assert [r.status for r in results.values()] == [ReoptStatus.INAPPLICABLE] * 3 + [
        ReoptStatus.SOLVED]
    assert results[Strategy.FULL].new_solution.assignments == {
        ("m1-s1-w1", "ta1"), ("m1-s1-w2", "ta3"), ("m2-s1-w1", "ta1")}


def test_vacuous_returns_original(small):
    inst = changed(small, "block ta3 occurrence m1-s1-w2")
    for r in reoptimise_all(inst, ORIGINAL).values():
        assert r.solved and r.new_solution == ORIGINAL and len(r.edit_script) == 0
        assert r.kept_count == r.total_count == 3


def test_basic_infeasible_when_no_substitute(small):
    inst = changed(small, "block ta1 occurrence m1-s1-w2\nblock ta3 occurrence m1-s1-w2\n"
                          "block ta2 occurrence m1-s1-w2")
    r = reoptimise(inst, ORIGINAL, "basic")
    assert r.status is ReoptStatus.INFEASIBLE


def test_smart_cannot_fill_empty_seat(small):
    short = Solution(ORIGINAL.assignments - {("m2-s1-w1", "ta2")})
    r = reoptimise(small, short, "smart")
    assert r.status is ReoptStatus.INFEASIBLE
    assert reoptimise(small, short, "basic").new_solution.assignments == ORIGINAL.assignments


def test_ineligible_lock_is_infeasible(small):
    inst = dataclasses.replace(changed(small, "block ta3 week 1"), locks=(Lock("m1-s1-w1", "ta3"),))
    inst = changed(inst, "block ta1 occurrence m1-s1-w1")
    assert reoptimise(inst, ORIGINAL, "full").status is ReoptStatus.INFEASIBLE


def test_lock_respected_by_full(small):
    inst = changed(small, "block ta1 occurrence m1-s1-w1\nlock m1-s1-w2 ta3")
    r = reoptimise(inst, ORIGINAL, "full")
    assert ("m1-s1-w2", "ta3") in r.new_solution
    assert validate_solution(inst, r.new_solution) == []


def test_dangling_solution(small):
    with pytest.raises(DanglingReference):
        reoptimise(small, Solution(frozenset({("m1-s1-w1", "nobody")})), "full")


def test_problem_is_exposed(small):
    r = reoptimise(changed(small, "block ta1 occurrence m1-s1-w1"), ORIGINAL, "basic")
    assert r.problem.labels == ("x_m1-s1-w1_ta2", "x_m1-s1-w1_ta3")


def test_diff_examples():
    a = Solution(frozenset({("o1", "t1"), ("o2", "t2")}))
    assert diff(a, a) == EditScript()
    b = Solution(frozenset({("o1", "t3"), ("o2", "t2")}))
    assert diff(a, b).operations == (Unassign("o1", "t1"), Assign("o1", "t3"))


_pairs = st.frozensets(st.tuples(st.sampled_from("abcd"), st.sampled_from("wxyz")), max_size=10)


@given(_pairs, _pairs)
def test_diff_replays(old, new):
    script = diff(Solution(old), Solution(new))
    assert script.apply(Solution(old)) == Solution(new)
    kinds = [type(op) for op in script]
    assert kinds == sorted(kinds, key=lambda k: k is Assign)


def test_edit_script_rejects_bad_ops():
    with pytest.raises(ValueError):
        EditScript((Unassign("o", "t"),)).apply(Solution())
    with pytest.raises(ValueError):
        EditScript((Assign("o", "t"),)).apply(Solution(frozenset({("o", "t")})))


def _tiny_cases(count):
    """(changed instance, original) pairs: block one assigned pair of an optimum."""
    seed = 0
    while count:
        seed += 1
        inst = tiny_instance(seed)
        found = brute_force_optimum(inst)
        if found is None or not len(found[0]):
            continue
        original = found[0]
        rng = random.Random(seed)
        occ, ta = rng.choice(sorted(original))
        yield apply_changes(inst, parse_changes(f"block {ta} occurrence {occ}")), original
        count -= 1


def test_structural_laws_tiny():
    for inst, original in _tiny_cases(80):
        results = reoptimise_all(inst, original)
        basic, smart, full = (results[s] for s in (Strategy.BASIC, Strategy.SMART, Strategy.FULL))
        if basic.solved:
            assert basic.kept_count == basic.total_count - 1
            assert full.solved and full.kept_count >= basic.kept_count
        if smart.solved:
            assert smart.kept_count == smart.total_count - 2
        for r in results.values():
            if r.solved:
                assert validate_solution(inst, r.new_solution) == []
                assert r.edit_script.apply(original) == r.new_solution


def test_keep_bonus_configurable(small):
    inst = changed(small, "block ta1 occurrence m1-s1-w1")
    # with a negligible keep bonus the full recompute is free to chase approval
    r = reoptimise(inst, ORIGINAL, "full", WeightConfig(keep_bonus=1))
    assert r.solved and r.objective_value >= reoptimise(inst, ORIGINAL, "full").objective_value
