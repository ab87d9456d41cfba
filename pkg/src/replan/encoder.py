"""Translate an :class:`Instance` into a 0/1 program and back.

One binary variable exists per eligible (occurrence, TA) pair, which is
exactly the match set of the TA-assignment rule: approval at least AMBER and
no unavailability edge.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

from .errors import LockedPairIneligible, StatusNotSolved
from .ilp import IlpProblem, IlpSolution, ProblemBuilder, Relation, Status
from .model import ApprovalRating, Instance, Number, Solution, eligible_tas

Pair = tuple[str, str]


@dataclass(frozen=True)
class WeightConfig:
    green_weight: int = 2
    amber_weight: int = 1
    keep_bonus: int = 1000

    def __post_init__(self):
        if not self.green_weight > self.amber_weight > 0:
            raise ValueError("weights must satisfy green > amber > 0")
        if self.keep_bonus <= 0:
            raise ValueError("keep bonus must be positive")

    def weight(self, rating: ApprovalRating) -> int:
        rating = ApprovalRating(rating)
        if rating is ApprovalRating.GREEN:
            return self.green_weight
        if rating is ApprovalRating.AMBER:
            return self.amber_weight
        return 0


@dataclass(frozen=True)
class VarMap:
    pairs: tuple[Pair, ...]
    weights: tuple[int, ...]

    @cached_property
    def index(self) -> dict[Pair, int]:
        return {p: i for i, p in enumerate(self.pairs)}

    def var(self, pair: Pair) -> int | None:
        return self.index.get(tuple(pair))

    def __len__(self):
        return len(self.pairs)


def pair_label(occurrence_id: str, ta_id: str) -> str:
    return f"x_{occurrence_id}_{ta_id}"


def add_hour_caps(builder: ProblemBuilder, instance: Instance,
                  variables: Iterable[tuple[int, Pair]],
                  fixed: Iterable[Pair] = ()) -> None:
    """Weekly and semester caps; ``fixed`` pairs contribute constant hours."""
    week_terms: dict[tuple[str, int], list] = defaultdict(list)
    sem_terms: dict[str, list] = defaultdict(list)
    for v, (occ, ta) in variables:
        h = instance.hours(occ)
        week_terms[ta, instance.occurrence(occ).week].append((h, v))
        sem_terms[ta].append((h, v))
    week_used: dict[tuple[str, int], Number] = defaultdict(int)
    sem_used: dict[str, Number] = defaultdict(int)
    for occ, ta in fixed:
        h = instance.hours(occ)
        week_used[ta, instance.occurrence(occ).week] += h
        sem_used[ta] += h
    for ta, week in sorted(week_terms):
        cap = instance.ta(ta).max_hours_per_week - week_used[ta, week]
        builder.add_constraint(week_terms[ta, week], Relation.LE, cap, f"week_{ta}_{week}")
    for ta in sorted(sem_terms):
        cap = instance.ta(ta).max_hours_per_semester - sem_used[ta]
        builder.add_constraint(sem_terms[ta], Relation.LE, cap, f"semester_{ta}")


def encode_original(instance: Instance, weights: WeightConfig = WeightConfig()
                    ) -> tuple[IlpProblem, VarMap]:
    builder = ProblemBuilder()
    pairs: list[Pair] = []
    pair_weights: list[int] = []
    by_occ: dict[str, list[int]] = {}
    for occ in instance.occurrences:
        by_occ[occ.id] = []
        for ta in eligible_tas(instance, occ.id):
            w = weights.weight(instance.occurrence_rating(occ.id, ta))
            v = builder.add_var(pair_label(occ.id, ta), w)
            pairs.append((occ.id, ta))
            pair_weights.append(w)
            by_occ[occ.id].append(v)
    for occ in instance.occurrences:
        builder.add_constraint([(1, v) for v in by_occ[occ.id]], Relation.EQ,
                               instance.need(occ.id), f"staff_{occ.id}")
    add_hour_caps(builder, instance, enumerate(pairs))
    varmap = VarMap(tuple(pairs), tuple(pair_weights))
    for lk in instance.locks:
        v = varmap.var((lk.occurrence_id, lk.ta_id))
        if v is None:
            raise LockedPairIneligible(lk.occurrence_id, lk.ta_id)
        builder.add_constraint([(1, v)], Relation.EQ, 1, f"lock_{lk.occurrence_id}_{lk.ta_id}")
    return builder.build(), varmap


def decode(varmap: VarMap, solution: IlpSolution) -> Solution:
    if solution.values is None:
        raise StatusNotSolved(f"no values to decode (status {solution.status.value})")
    if solution.status is Status.INFEASIBLE:
        raise StatusNotSolved("problem is infeasible")
    return Solution(frozenset(p for p, x in zip(varmap.pairs, solution.values) if x))


def solution_weight(instance: Instance, solution: Solution,
                    weights: WeightConfig = WeightConfig()) -> int:
    """Approval objective of ``solution`` (RED pairs contribute nothing)."""
    return sum(weights.weight(instance.occurrence_rating(o, t)) for o, t in solution.assignments)
