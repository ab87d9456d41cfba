"""
Checking the solver against brute force
=======================================

On instances small enough to enumerate, the brute-force oracle gives the
true optimum and the true maximum number of keepable assignments. The ILP
path must agree with both.
"""

import random

import numpy as np

from replan import (Approval, ApprovalRating, CourseModule, Instance, SessionOccurrence,
                    Strategy, TeachingAssistant, TeachingSession, apply_changes, encode_original,
                    parse_changes, reoptimise, solve)
from replan.oracle import brute_force_min_perturbation, brute_force_optimum


def tiny(seed):
    rng = random.Random(seed)
    sessions = [TeachingSession(f"s{i}", rng.choice("ab"), rng.randint(1, 2), rng.randint(1, 3),
                                (1, 2)) for i in range(2)]
    occs = [SessionOccurrence(f"{s.id}-w{w}", s.id, w) for s in sessions for w in s.weeks]
    tas = [TeachingAssistant(f"t{j}", "", rng.randint(1, 5), rng.randint(2, 8)) for j in range(4)]
    approvals = [Approval(t.id, m, rng.choice(list(ApprovalRating))) for t in tas for m in "ab"]
    return Instance(modules=(CourseModule("a"), CourseModule("b")), sessions=tuple(sessions),
                    occurrences=tuple(occs), tas=tuple(tas), approvals=tuple(approvals))


gaps, kept_gaps = [], []
for seed in range(150):
    inst = tiny(seed)
    exact = brute_force_optimum(inst)
    ilp = solve(encode_original(inst)[0])
    if exact is None:
        assert ilp.status.value == "Infeasible"
        continue
    gaps.append(exact[1] - ilp.objective_value)
    original = exact[0]
    occ, ta = sorted(original)[0]
    changed = apply_changes(inst, parse_changes(f"block {ta} occurrence {occ}"), original)
    best = brute_force_min_perturbation(changed, original)
    full = reoptimise(changed, original, Strategy.FULL)
    if best is not None:
        kept_gaps.append(best[1] - full.kept_count)

print(f"{len(gaps)} feasible instances, objective gap max = {np.max(np.abs(gaps))}")
print(f"{len(kept_gaps)} changed instances, kept-count gap max = {np.max(np.abs(kept_gaps))}")
