"""
Four ways to repair an allocation
=================================

The same blocked session is repaired by each strategy. Basic plaster refills
the seat, smart plaster swaps two TAs, plaster set re-plans everything the
affected TA does, and full recomputation re-solves the whole problem while
rewarding every assignment it keeps. Each result carries an edit script.
"""

from pathlib import Path

from replan import (apply_changes, parse_changes, read_instance, reoptimise_all,
                    solve_original)

DATA = Path(__file__).resolve().parent.parent / "tests" / "data"
instance = read_instance((DATA / "small.txt").read_text())
original = solve_original(instance)
changed = apply_changes(instance, parse_changes("block ta1 occurrence m1-s1-w1"), original)

for strategy, r in reoptimise_all(changed, original).items():
    print(f"{strategy.title}: {r.status.value}, kept {r.kept_count}/{r.total_count}, "
          f"approval {r.objective_value}")
    print("".join(f"    {line}\n" for line in str(r.edit_script).splitlines()))

# A cap cut is not a seat problem; only the set and full strategies apply.
overload = apply_changes(instance, parse_changes("set-max-semester-hours ta1 3"), original)
for strategy, r in reoptimise_all(overload, original).items():
    print(f"{strategy.value:5s} {r.status.value:22s} {r.message}")
