"""
Modelling an allocation and solving it
======================================

Three TAs, two modules, three session occurrences. We build the instance in
code, look at who may teach what, solve the 0/1 program and print it in LP
format so any external solver can check the result.
"""

from replan import (Approval, CourseModule, Instance, SessionOccurrence, TeachingAssistant,
                    TeachingSession, decode, eligible_tas, encode_original, export_lp, solve,
                    validate_solution, write_instance)

instance = Instance(
    modules=(CourseModule("m1", "Algebra"), CourseModule("m2", "Biology")),
    sessions=(TeachingSession("m1-s1", "m1", 1, 2, (1, 2)),
              TeachingSession("m2-s1", "m2", 1, 1, (1,))),
    occurrences=(SessionOccurrence("m1-s1-w1", "m1-s1", 1),
                 SessionOccurrence("m1-s1-w2", "m1-s1", 2),
                 SessionOccurrence("m2-s1-w1", "m2-s1", 1)),
    tas=(TeachingAssistant("ta1", "Ada", 3, 4),
         TeachingAssistant("ta2", "Ben", 2, 4),
         TeachingAssistant("ta3", "Cy", 2, 2)),
    approvals=(Approval("ta1", "m1", "GREEN"), Approval("ta1", "m2", "GREEN"),
               Approval("ta2", "m1", "AMBER"), Approval("ta2", "m2", "GREEN"),
               Approval("ta3", "m1", "GREEN"), Approval("ta3", "m2", "AMBER")),
)

print(write_instance(instance))

# Eligible means rated AMBER or better and not blocked.
for occ in instance.occurrences:
    print(occ.id, "->", ", ".join(eligible_tas(instance, occ.id)))

# One binary per eligible pair; GREEN weighs 2 and AMBER 1 by default.
problem, varmap = encode_original(instance)
result = solve(problem)
solution = decode(varmap, result)
print("\nstatus:", result.status.value, " objective:", result.objective_value)
for occ, ta in solution:
    print(f"  {occ:10s} {ta}")
print("violations:", validate_solution(instance, solution))

print()
print(export_lp(problem))
