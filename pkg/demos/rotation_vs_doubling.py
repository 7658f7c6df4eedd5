"""Rotation and doubling on eight points of a cycle.

Both maps live on the same graded cycle metric (balls of radius 4, 2, 1).
The rotation is an isometry: its orbits never spread nearby points apart,
it carries a unique invariant measure and every point recurs. Doubling
folds the circle onto its even points and pushes any two neighbours apart.

    python3 demos/rotation_vs_doubling.py
"""

from semiflows import invariant_measures, property_vector
from semiflows.dynamics import minimal_subsets
from semiflows.instances import preset

for name in ("rotation", "doubling"):
    S = preset(name).semiflow()
    pv = property_vector(S)
    P = invariant_measures(S)
    print(f"== {name}-8: |E| = {len(S.monoid)}")
    for flag, value in pv.flags().items():
        print(f"  {flag:28} {value}")
    print("  equicontinuity moduli      ", pv.equicontinuous.moduli)
    print("  sensitive at levels        ", list(pv.sensitive.levels))
    print("  minimal sets               ", [sorted(M) for M in minimal_subsets(S)])
    print("  an invariant measure       ", P.particular.to_strings())
    print("  polytope dimension         ", P.dimension)
    print()

# Doubling sends everything into {0} after three steps, so its only invariant
# measure is the point mass at 0 even though the map is far from an isometry.
