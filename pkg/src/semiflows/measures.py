"""Invariant probability measures of a finite semiflow, in exact arithmetic.

A measure on ``0..n-1`` is a weight vector. It is invariant under ``t`` when
its push-forward ``P_t mu`` equals ``mu``. Fixing the push-forward of each
generator suffices: ``P_{p @ q} = P_p P_q``, so fixed vectors are shared by
the whole monoid.

The invariant measures form a polytope ``{A mu = b, mu >= 0}``. Equalities are
reduced by Gauss-Jordan elimination over :class:`fractions.Fraction`;
nonnegativity is handled with a dense simplex method using Bland's rule, so
no floating point comparison ever decides a verdict.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .dynamics import Semiflow
from .transformation import Transformation

__all__ = [
    "RationalMeasure",
    "MeasurePolytope",
    "pushforward_matrix",
    "pushforward",
    "invariant_measures",
    "is_uniquely_ergodic",
]

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True)
class RationalMeasure:
    weights: tuple

    def __post_init__(self):
        w = tuple(Fraction(v) for v in self.weights)
        if any(v < 0 for v in w):
            raise ValueError(f"negative weight in {w}")
        if sum(w) != 1:
            raise ValueError(f"weights sum to {sum(w)}, not 1")
        object.__setattr__(self, "weights", w)

    @property
    def n(self) -> int:
        return len(self.weights)

    @property
    def support(self) -> frozenset:
        return frozenset(x for x, v in enumerate(self.weights) if v)

    def to_strings(self) -> list:
        return [f"{v.numerator}/{v.denominator}" for v in self.weights]

    def __getitem__(self, x):
        return self.weights[x]


@dataclass(frozen=True)
class MeasurePolytope:
    feasible: bool
    particular: RationalMeasure | None
    # basis of the directions spanning the polytope's affine hull
    directions: tuple
    is_unique: bool

    @property
    def dimension(self) -> int:
        return len(self.directions) if self.feasible else -1


def pushforward_matrix(t) -> np.ndarray:
    """0/1 matrix with entry ``[y, x] = 1`` iff ``t(x) = y``."""
    img = t.image if isinstance(t, Transformation) else tuple(t)
    n = len(img)
    P = np.zeros((n, n), dtype=np.int64)
    P[list(img), range(n)] = 1
    return P


def pushforward(t, weights: Sequence) -> tuple:
    """``(P_t mu)(y) = sum of mu(x) over t(x) = y``, exactly."""
    img = t.image if isinstance(t, Transformation) else tuple(t)
    out = [ZERO] * len(img)
    for x, y in enumerate(img):
        out[y] += Fraction(weights[x])
    return tuple(out)


def _rref(rows: list, ncols: int) -> tuple:
    """Reduced row echelon form (rows of Fractions, modified in place) and pivot columns."""
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [v * inv for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def _null_space(rows: list, ncols: int) -> list:
    R, pivots = _rref([list(r) for r in rows], ncols)
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [ZERO] * ncols
        v[f] = ONE
        for row, p in zip(R, pivots):
            v[p] = -row[f]
        basis.append(tuple(v))
    return basis


class _Tableau:
    """Dense simplex tableau for ``A x = b, x >= 0`` (rows ``[A | b]``)."""

    def __init__(self, rows: list, basis: list, allowed: int):
        self.rows = rows
        self.basis = basis
        self.allowed = allowed  # only columns < allowed may enter

    def copy(self) -> "_Tableau":
        return _Tableau([list(r) for r in self.rows], list(self.basis), self.allowed)

    def pivot(self, r: int, c: int) -> None:
        rows = self.rows
        inv = 1 / rows[r][c]
        rows[r] = [v * inv for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        self.basis[r] = c

    def maximize(self, cost: Sequence) -> Fraction:
        """Run Bland's rule to optimality; the feasible region here is bounded."""
        rows = self.rows
        while True:
            reduced = [
                sum((cost[b] * row[j] for b, row in zip(self.basis, rows) if row[j]), ZERO) - cost[j]
                for j in range(self.allowed)
            ]
            enter = next((j for j, v in enumerate(reduced) if v < 0), None)
            if enter is None:
                return sum((cost[b] * row[-1] for b, row in zip(self.basis, rows)), ZERO)
            best = None
            for i, row in enumerate(rows):
                if row[enter] > 0:
                    key = (row[-1] / row[enter], self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                raise ArithmeticError("unbounded linear program over a bounded polytope")
            self.pivot(best[1], enter)

    def solution(self, n: int) -> list:
        x = [ZERO] * n
        for b, row in zip(self.basis, self.rows):
            if b < n:
                x[b] = row[-1]
        return x


def _feasible_tableau(A: list, b: list, n: int) -> _Tableau | None:
    """Phase one: a basic feasible tableau over the ``n`` real columns, or None."""
    m = len(A)
    rows = []
    for i in range(m):
        sign = -1 if b[i] < 0 else 1
        art = [ZERO] * m
        art[i] = ONE
        rows.append([sign * v for v in A[i]] + art + [sign * b[i]])
    tab = _Tableau(rows, list(range(n, n + m)), n + m)
    cost = [ZERO] * n + [-ONE] * m
    if tab.maximize(cost) != 0:
        return None
    # drive artificial variables out of the basis; drop redundant rows
    keep = []
    for i in range(m):
        if tab.basis[i] >= n:
            c = next((j for j in range(n) if tab.rows[i][j] != 0), None)
            if c is None:
                continue
            tab.pivot(i, c)
        keep.append(i)
    rows = [tab.rows[i][:n] + [tab.rows[i][-1]] for i in keep]
    return _Tableau(rows, [tab.basis[i] for i in keep], n)


def _equality_system(S: Semiflow) -> tuple:
    n = S.n
    rows = []
    for g in dict.fromkeys(S.generators):
        P = pushforward_matrix(g)
        for y in range(n):
            row = [Fraction(int(P[y, x]) - (x == y)) for x in range(n)]
            if any(row):
                rows.append(row + [ZERO])
    rows.append([ONE] * n + [ONE])
    return _rref(rows, n + 1)


def invariant_measures(S: Semiflow) -> MeasurePolytope:
    """The polytope of measures fixed by every generator's push-forward.

    After eliminating the equalities, one linear program per coordinate finds
    which coordinates can be positive at all. The mean of those maximizers is
    a relative-interior point; around it every direction of the equality
    kernel restricted to the always-zero coordinates is feasible both ways,
    so the polytope is a single point exactly when that kernel is trivial.
    """
    n = S.n
    R, pivots = _equality_system(S)
    if n in pivots:  # a row reads 0 = 1
        return MeasurePolytope(False, None, (), False)
    A = [row[:n] for row in R]
    b = [row[n] for row in R]
    base = _feasible_tableau(A, b, n)
    if base is None:
        return MeasurePolytope(False, None, (), False)
    maximizers = []
    zero = []
    for i in range(n):
        tab = base.copy()
        cost = [ZERO] * n
        cost[i] = ONE
        if tab.maximize(cost) == 0:
            zero.append(i)
        else:
            maximizers.append(tab.solution(n))
    if not maximizers:
        raise ArithmeticError("feasible polytope with every coordinate forced to zero")
    mean = [sum(col, ZERO) / len(maximizers) for col in zip(*maximizers)]
    unit = [[ONE if c == z else ZERO for c in range(n)] for z in zero]
    directions = tuple(_null_space(A + unit, n))
    mu = RationalMeasure(tuple(mean))
    return MeasurePolytope(True, mu, directions, not directions)


def is_uniquely_ergodic(S: Semiflow) -> bool:
    return invariant_measures(S).is_unique
