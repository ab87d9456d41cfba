"""
Describing changes and classifying their impact
===============================================

Changes are plain text commands. Applying them gives a new instance; the
original solution is then checked against it, and the kind of breakage
decides which repair strategies make sense.
"""

from pathlib import Path

from replan import apply_changes, classify_change, parse_changes, read_instance, solve_original

DATA = Path(__file__).resolve().parent.parent / "tests" / "data"
instance = read_instance((DATA / "small.txt").read_text())
original = solve_original(instance)
print("original:", sorted(original))

examples = {
    "nothing assigned there": "block ta3 occurrence m1-s1-w2",
    "one assigned session lost": "block ta1 occurrence m1-s1-w1",
    "fewer semester hours": "set-max-semester-hours ta1 3",
    "two TAs away": "block ta1 week 2\nblock ta2 week 1",
}
for title, text in examples.items():
    changes = parse_changes(text)
    impact = classify_change(apply_changes(instance, changes, original), original)
    print(f"\n{title}:")
    for c in changes:
        print("   ", c)
    print("  ->", impact.classification)
    for v in impact.violations:
        print("    ", v)

# Locking everything before a week turns past assignments into constraints.
locked = apply_changes(instance, parse_changes("lock-before-week 2"), original)
print("\nlocks:", [(lk.occurrence_id, lk.ta_id) for lk in locked.locks])
