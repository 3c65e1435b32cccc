"""Energy bounds for single modes and smeared fields.

Creators and annihilators differ by Pi(m) times the norm, exactly.  The
largest generalized eigenvalue on a level is compared to the analytic bound.
"""
import random

from derivcft.bounds import (SmearedFunction, annihilator_bound_check, bound_grid, creator_bound_check, random_state,
                             smeared_bound_check)

for check in (annihilator_bound_check, creator_bound_check):
    r = check(1, 2, 2)
    print(f"{r.kind:11s} n=1 m=2 N=2: observed {float(r.observed):.6g} bound {r.bound} passed={r.passed}")

reports = bound_grid(3, 8, 8)
print(len(reports), "grid checks, all passed:", all(r.passed for r in reports))

rng = random.Random(1)
worst = 0.0
for _ in range(100):
    r = smeared_bound_check(1, SmearedFunction.random(rng, support=5), random_state(rng, 8), max_level=13)
    worst = max(worst, float(r.observed) / float(r.bound) if r.bound else 0.0)
print(f"smeared bound: worst ratio over 100 draws {worst:.3f}")
