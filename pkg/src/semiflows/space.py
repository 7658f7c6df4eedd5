"""Finite phase spaces with a nested chain of entourages.

A finite Hausdorff space is discrete, so the topology carries no information;
the uniform structure is what grades closeness. It is stored as a chain
eps_1 >= eps_2 >= ... >= eps_k of reflexive symmetric relations, each an
``n x n`` boolean matrix. Entourage levels are 1-based: level 1 is the
coarsest relation, level k the finest.
"""

from __future__ import annotations

import warnings
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import ValidationError

__all__ = [
    "UniformSpace",
    "DegenerateUniformityWarning",
    "as_rational",
    "from_metric",
    "from_relations",
    "ball",
    "cyclic_metric",
]


class DegenerateUniformityWarning(UserWarning):
    """The finest entourage is the diagonal, so graded properties trivialize."""


def as_rational(value) -> Fraction:
    """Exact conversion; floats are refused to keep arithmetic exact."""
    if isinstance(value, bool) or isinstance(value, float):
        raise TypeError(f"expected an exact rational, got {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValidationError(f"not a rational: {value!r}") from exc
    if isinstance(value, np.integer):
        return Fraction(int(value))
    raise TypeError(f"expected an exact rational, got {value!r}")


class UniformSpace:
    """Points ``0..n-1`` with a nested entourage chain.

    Immutable: the stored matrices are read-only views.
    """

    __slots__ = ("n", "entourages")

    def __init__(self, n: int, entourages, *, warn: bool = True):
        n = int(n)
        if n < 1:
            raise ValidationError("a space needs at least one point")
        mats = np.array(entourages, dtype=bool)
        if mats.ndim != 3 or mats.shape[1:] != (n, n) or mats.shape[0] < 1:
            raise ValidationError(
                f"entourages must have shape (k, {n}, {n}) with k >= 1, got {mats.shape}")
        _check_chain(mats)
        mats.setflags(write=False)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "entourages", mats)
        if warn and n > 1 and self.separated:
            warnings.warn(
                "finest entourage is the diagonal: every finite semiflow is "
                "equicontinuous and non-sensitive on this space",
                DegenerateUniformityWarning, stacklevel=2)

    def __setattr__(self, name, value):
        raise AttributeError("UniformSpace is immutable")

    @property
    def k(self) -> int:
        return self.entourages.shape[0]

    @property
    def separated(self) -> bool:
        """True iff the chain separates points (finest entourage = diagonal).

        Only then is the chain the uniformity of a Hausdorff space, which is
        the standing assumption behind the uniform-structure theorems.
        """
        return bool((self.entourages[-1] == np.eye(self.n, dtype=bool)).all())

    def relation(self, level: int) -> np.ndarray:
        return self.entourages[self._index(level)]

    def ball(self, level: int, x: int) -> frozenset:
        return ball(self, level, x)

    def restrict(self, points: Sequence[int]) -> "UniformSpace":
        """Sub-uniformity on ``points``, relabelled ``0..len(points)-1`` in order."""
        idx = np.asarray(points, dtype=np.intp)
        return UniformSpace(len(idx), self.entourages[:, idx[:, None], idx[None, :]], warn=False)

    def _index(self, level: int) -> int:
        if not isinstance(level, (int, np.integer)) or not 1 <= level <= self.k:
            raise IndexError(f"entourage level must be in 1..{self.k}, got {level!r}")
        return int(level) - 1

    def __eq__(self, other):
        if not isinstance(other, UniformSpace):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.entourages, other.entourages)

    def __hash__(self):
        return hash((self.n, self.entourages.tobytes()))

    def __reduce__(self):
        return (_rebuild, (self.n, np.array(self.entourages)))

    def __repr__(self):
        return f"UniformSpace(n={self.n}, k={self.k})"


def _rebuild(n, entourages):
    return UniformSpace(n, entourages, warn=False)


def _check_chain(mats: np.ndarray) -> None:
    for i, rel in enumerate(mats, start=1):
        if not rel.diagonal().all():
            x = int(np.flatnonzero(~rel.diagonal())[0])
            raise ValidationError(f"entourage {i} is not reflexive at point {x}")
        asym = np.argwhere(rel != rel.T)
        if len(asym):
            x, y = map(int, asym[0])
            raise ValidationError(f"entourage {i} is not symmetric at pair ({x}, {y})")
    for i in range(len(mats) - 1):
        extra = np.argwhere(mats[i + 1] & ~mats[i])
        if len(extra):
            x, y = map(int, extra[0])
            raise ValidationError(
                f"entourage {i + 2} is not contained in entourage {i + 1}: pair ({x}, {y})")


def from_metric(distances, thresholds: Iterable, *, warn: bool = True) -> UniformSpace:
    """Threshold a rational metric: level i relates x, y iff d(x, y) <= thresholds[i-1]."""
    d = [[as_rational(v) for v in row] for row in distances]
    n = len(d)
    if n == 0 or any(len(row) != n for row in d):
        raise ValidationError("distance matrix must be square and non-empty")
    ts = [as_rational(t) for t in thresholds]
    if not ts:
        raise ValidationError("at least one threshold is required")
    for a, b in zip(ts, ts[1:]):
        if not a > b:
            raise ValidationError(f"thresholds must strictly decrease: {a} then {b}")
    if ts[-1] <= 0:
        raise ValidationError("thresholds must be positive")
    for x in range(n):
        if d[x][x] != 0:
            raise ValidationError(f"nonzero self-distance at point {x}")
        for y in range(n):
            if d[x][y] < 0:
                raise ValidationError(f"negative distance between {x} and {y}")
            if d[x][y] != d[y][x]:
                raise ValidationError(f"asymmetric distance between {x} and {y}")
            if x != y and d[x][y] == 0:
                raise ValidationError(
                    f"points {x} and {y} are at distance 0 (pseudometric, not a metric)")
    for x in range(n):
        for y in range(n):
            for z in range(n):
                if d[x][z] > d[x][y] + d[y][z]:
                    raise ValidationError(
                        f"triangle inequality fails for triple ({x}, {y}, {z}): "
                        f"d({x},{z})={d[x][z]} > d({x},{y})+d({y},{z})={d[x][y] + d[y][z]}")
    mats = [[[d[x][y] <= t for y in range(n)] for x in range(n)] for t in ts]
    return UniformSpace(n, mats, warn=warn)


def from_relations(n: int, relations, *, warn: bool = True) -> UniformSpace:
    """Build from pair lists. Pairs are unordered; the diagonal is implicit."""
    mats = np.zeros((len(relations), n, n), dtype=bool)
    for i, pairs in enumerate(relations):
        mats[i][np.diag_indices(n)] = True
        for pair in pairs:
            x, y = pair
            if not (0 <= x < n and 0 <= y < n):
                raise ValidationError(f"entourage {i + 1}: pair ({x}, {y}) out of range")
            mats[i, x, y] = mats[i, y, x] = True
    return UniformSpace(n, mats, warn=warn)


def ball(U: UniformSpace, level: int, x: int) -> frozenset:
    """The set of points related to ``x`` by entourage ``level``."""
    rel = U.entourages[U._index(level)]
    if not 0 <= x < U.n:
        raise IndexError(f"point {x} out of range for n={U.n}")
    return frozenset(int(y) for y in np.flatnonzero(rel[x]))


def cyclic_metric(n: int) -> list[list[int]]:
    return [[min((x - y) % n, (y - x) % n) for y in range(n)] for x in range(n)]
