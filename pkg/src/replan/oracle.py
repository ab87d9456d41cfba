"""Brute-force reference solvers for tiny instances.

These enumerate every staffing of every occurrence and share no code with
the encoder or the ILP solver beyond the domain model, so agreement between
the two is meaningful. Both return ``None`` when no feasible solution exists.
"""

from __future__ import annotations

import math
import threading
from itertools import combinations

from .encoder import WeightConfig
from .errors import Cancelled, TooLarge
from .model import Instance, Solution, eligible_tas

LIMIT = 2 ** 20


def _choices(instance: Instance):
    """Per occurrence, every admissible TA subset; locks are enforced here."""
    locked: dict[str, set[str]] = {}
    for lk in instance.locks:
        locked.setdefault(lk.occurrence_id, set()).add(lk.ta_id)
    out = []
    size = 1
    for occ in instance.occurrences:
        eligible = eligible_tas(instance, occ.id)
        need = instance.need(occ.id)
        size *= math.comb(len(eligible), need)
        if size > LIMIT:
            raise TooLarge(f"more than {LIMIT} candidate solutions")
        must = locked.get(occ.id, set())
        out.append((occ, [c for c in combinations(eligible, need) if must <= set(c)]))
    return out


def _enumerate(instance: Instance, cancel: threading.Event | None):
    """Yield every feasible solution as a sorted tuple of pairs."""
    choices = _choices(instance)
    weekly: dict[tuple[str, int], object] = {}
    semester: dict[str, object] = {}
    picked: list[tuple[str, str]] = []
    count = 0

    def rec(i):
        nonlocal count
        count += 1
        if cancel is not None and count % 1024 == 0 and cancel.is_set():
            raise Cancelled("oracle enumeration cancelled")
        if i == len(choices):
            yield tuple(sorted(picked))
            return
        occ, combos = choices[i]
        h = instance.hours(occ.id)
        for combo in combos:
            ok = True
            for ta in combo:
                t = instance.ta(ta)
                if (weekly.get((ta, occ.week), 0) + h > t.max_hours_per_week
                        or semester.get(ta, 0) + h > t.max_hours_per_semester):
                    ok = False
                    break
            if not ok:
                continue
            for ta in combo:
                weekly[ta, occ.week] = weekly.get((ta, occ.week), 0) + h
                semester[ta] = semester.get(ta, 0) + h
                picked.append((occ.id, ta))
            yield from rec(i + 1)
            for ta in combo:
                weekly[ta, occ.week] -= h
                semester[ta] -= h
                picked.pop()

    yield from rec(0)


def _best(instance, key, cancel):
    best_key, best = None, None
    for pairs in _enumerate(instance, cancel):
        k = key(pairs)
        # ties go to the lexicographically smallest assignment list
        if best_key is None or k > best_key or (k == best_key and pairs < best):
            best_key, best = k, pairs
    return best_key, best


def _weight(instance, weights, pairs):
    return sum(weights.weight(instance.occurrence_rating(o, t)) for o, t in pairs)


def brute_force_optimum(instance: Instance, weights: WeightConfig = WeightConfig(),
                        cancel: threading.Event | None = None) -> tuple[Solution, int] | None:
    """Maximum-weight feasible solution and its weight."""
    key, best = _best(instance, lambda p: _weight(instance, weights, p), cancel)
    if best is None:
        return None
    return Solution(frozenset(best)), key


def brute_force_min_perturbation(instance: Instance, original: Solution,
                                 weights: WeightConfig = WeightConfig(),
                                 cancel: threading.Event | None = None
                                 ) -> tuple[Solution, int] | None:
    """Feasible solution keeping the most original pairs, then heaviest; with kept count."""
    keep = original.assignments

    def key(pairs):
        return sum(p in keep for p in pairs), _weight(instance, weights, pairs)

    k, best = _best(instance, key, cancel)
    if best is None:
        return None
    return Solution(frozenset(best)), k[0]
