"""Minimal left ideals and invariant measures for a non-invertible action.

Two maps on five points: a 3-cycle on {0, 1, 2} that also drags 3 and 4
into it, and a map collapsing the cycle onto 0 and 1. The enveloping
monoid is small enough to print, and the ten structural clauses can be
checked ideal by ideal.

    python3 demos/ideals_and_measures.py
"""

from semiflows import Semiflow, invariant_measures, minimal_left_ideals, verify_minimal_ideal_structure
from semiflows.audit import profile_space

S = Semiflow(profile_space("metric-cycle", 5), [(1, 2, 0, 0, 1), (0, 1, 0, 1, 0)])
E = S.monoid
print(f"|E| = {len(E)}")
for i, p in enumerate(E):
    print(f"  {i:2} {p.image}")

for I in minimal_left_ideals(E):
    print("minimal left ideal:", sorted(I))

report = verify_minimal_ideal_structure(E)
for clause, res in report.clauses.items():
    print(f"  clause {clause:2}: {'ok' if res.passed else res.witness} ({res.checks} checks)")

# The minimal ideal is the three constants, so {0, 1, 2} is the only minimal
# set. The cycle forces a uniform measure there, which the second map does
# not preserve: this monoid has no invariant measure at all.
P = invariant_measures(S)
print("feasible:", P.feasible, " dimension:", P.dimension)

# Dropping the collapsing map restores one.
T = Semiflow(S.space, [(1, 2, 0, 0, 1)])
Q = invariant_measures(T)
print("cycle alone: unique:", Q.is_unique, " measure:", Q.particular.to_strings())
