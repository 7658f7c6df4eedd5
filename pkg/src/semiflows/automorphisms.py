"""Automorphisms of a finite semiflow: permutations commuting with the action."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import permutations

import numpy as np

from .dynamics import Semiflow, equicontinuity_report
from .transformation import Transformation

__all__ = [
    "AutGroup",
    "automorphism_group",
    "aut_orbit",
    "is_universally_transitive",
    "acts_freely",
    "is_aut_equicontinuous",
]

EXHAUSTIVE_LIMIT = 8


@dataclass(frozen=True)
class AutGroup:
    n: int
    # lexicographically sorted by image
    elements: tuple

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, t) -> bool:
        img = t.image if isinstance(t, Transformation) else tuple(t)
        return Transformation(img) in set(self.elements)

    @cached_property
    def array(self) -> np.ndarray:
        return np.array([a.image for a in self.elements], dtype=np.intp).reshape(-1, self.n)


def _search(n: int, gens: list) -> list:
    """Depth-first over partial bijections; fixing ``a(x) = y`` forces ``a(g x) = g y``."""
    found = []
    a = [-1] * n
    used = [False] * n

    def assign(x, y, trail):
        stack = [(x, y)]
        while stack:
            u, v = stack.pop()
            if a[u] == v:
                continue
            if a[u] != -1 or used[v]:
                return False
            a[u] = v
            used[v] = True
            trail.append(u)
            for g in gens:
                stack.append((g[u], g[v]))
        return True

    def undo(trail):
        for u in trail:
            used[a[u]] = False
            a[u] = -1

    def extend():
        x = next((u for u in range(n) if a[u] == -1), None)
        if x is None:
            found.append(tuple(a))
            return
        for y in range(n):
            if used[y]:
                continue
            trail = []
            if assign(x, y, trail):
                extend()
            undo(trail)

    extend()
    return found


def _exhaustive(n: int, gens: list) -> list:
    return [p for p in permutations(range(n))
            if all(tuple(p[x] for x in g) == tuple(g[x] for x in p) for g in gens)]


def automorphism_group(S: Semiflow, method: str = "search") -> AutGroup:
    """All permutations ``a`` with ``a @ g == g @ a`` for every generator ``g``.

    Commuting with the generators is enough to commute with every monoid
    element. ``method="exhaustive"`` enumerates all ``n!`` permutations
    (only for ``n <= 8``) and serves as a cross-check.
    """
    gens = [g.image for g in dict.fromkeys(S.generators)]
    if method == "search":
        found = _search(S.n, gens)
    elif method == "exhaustive":
        if S.n > EXHAUSTIVE_LIMIT:
            raise ValueError(f"exhaustive search is limited to n <= {EXHAUSTIVE_LIMIT}")
        found = _exhaustive(S.n, gens)
    else:
        raise ValueError(f"unknown method {method!r}")
    return AutGroup(S.n, tuple(Transformation(p) for p in sorted(found)))


def aut_orbit(A: AutGroup, x: int) -> frozenset:
    return frozenset(a(x) for a in A)


def is_universally_transitive(S: Semiflow, A: AutGroup | None = None) -> bool:
    """The automorphism orbit of a point (hence of every point) is the whole space."""
    A = automorphism_group(S) if A is None else A
    return len(aut_orbit(A, 0)) == S.n


def acts_freely(A: AutGroup) -> bool:
    """No automorphism other than the identity fixes a point."""
    ident = tuple(range(A.n))
    return all(a.image == ident or all(a(x) != x for x in range(A.n)) for a in A)


def is_aut_equicontinuous(S: Semiflow, A: AutGroup | None = None) -> bool:
    A = automorphism_group(S) if A is None else A
    return equicontinuity_report(S.space, A.array).equicontinuous
