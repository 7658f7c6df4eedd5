"""Self-maps of a finite set and the monoids they generate.

Composition follows ``(p @ q)(x) = p(q(x))``. A :class:`Monoid` stores its
elements both as :class:`Transformation` objects and as a read-only integer
array (one row per element) for vectorized work.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from functools import cached_property
from itertools import chain, combinations
from operator import itemgetter
from typing import Iterable, Sequence

import numpy as np

from .errors import InconsistencyError

__all__ = [
    "Transformation",
    "Monoid",
    "SurjectivityProfile",
    "compose",
    "identity",
    "constant",
    "rotation",
    "generate_monoid",
    "group_closure",
    "idempotents",
    "is_group",
    "is_abelian",
    "surjectivity_profile",
]

# above this size the all-pairs commutativity sweep is replaced by the
# generator-pair test, which is equivalent for generated monoids
ALL_PAIRS_LIMIT = 1500
PRODUCT_TABLE_LIMIT = 3000


@dataclass(frozen=True, order=True, slots=True)
class Transformation:
    image: tuple

    def __post_init__(self):
        img = tuple(int(v) for v in self.image)
        n = len(img)
        if n == 0:
            raise ValueError("a transformation needs at least one point")
        for x, v in enumerate(img):
            if not 0 <= v < n:
                raise ValueError(f"image[{x}] = {v} is not a point of 0..{n - 1}")
        object.__setattr__(self, "image", img)

    @property
    def n(self) -> int:
        return len(self.image)

    def __call__(self, x: int) -> int:
        return self.image[x]

    def __matmul__(self, other: "Transformation") -> "Transformation":
        return compose(self, other)

    def is_bijective(self) -> bool:
        return len(set(self.image)) == len(self.image)

    def inverse(self) -> "Transformation":
        if not self.is_bijective():
            raise ValueError(f"{self} is not a bijection")
        inv = [0] * self.n
        for x, y in enumerate(self.image):
            inv[y] = x
        return Transformation(tuple(inv))

    def __repr__(self):
        return f"Transformation({list(self.image)})"


def compose(p: Transformation, q: Transformation) -> Transformation:
    """``p after q``: x -> p(q(x))."""
    if p.n != q.n:
        raise ValueError(f"cannot compose maps on {p.n} and {q.n} points")
    return Transformation(tuple(p.image[y] for y in q.image))


def identity(n: int) -> Transformation:
    return Transformation(tuple(range(n)))


def constant(n: int, a: int) -> Transformation:
    return Transformation((a,) * n)


def rotation(n: int, shift: int = 1) -> Transformation:
    return Transformation(tuple((x + shift) % n for x in range(n)))


def _as_map(t, n=None) -> Transformation:
    t = t if isinstance(t, Transformation) else Transformation(tuple(t))
    if n is not None and t.n != n:
        raise ValueError(f"expected a map on {n} points, got one on {t.n}")
    return t


class Monoid:
    """A finite composition-closed set of maps containing the identity.

    ``elements`` keeps discovery order; indices into it are the canonical
    element ids used by every report.
    """

    def __init__(self, n: int, elements: Sequence[tuple], generator_indices: Sequence[int],
                 *, _index: dict | None = None):
        self.n = n
        images = [tuple(int(v) for v in e) for e in elements] if _index is None else list(elements)
        arr = np.fromiter(chain.from_iterable(images), dtype=np.intp,
                          count=len(images) * n).reshape(-1, n)
        if _index is None:
            if arr.size and (arr.min() < 0 or arr.max() >= n):
                raise ValueError(f"element images must lie in 0..{n - 1}")
            _index = {e: i for i, e in enumerate(images)}
            if len(_index) != len(images):
                raise ValueError("duplicate monoid elements")
        arr.setflags(write=False)
        self.array = arr
        self._images = images
        self._index = _index
        self.identity_index = self._index.get(tuple(range(n)))
        if self.identity_index is None:
            raise ValueError("a monoid must contain the identity")
        self.generator_indices = tuple(generator_indices)
        self._table_lock = threading.Lock()
        self._table = None
        if n <= 15:
            self._weights = n ** np.arange(n, dtype=np.int64)
            codes = arr @ self._weights
            self._order = np.argsort(codes, kind="stable")
            self._sorted_codes = codes[self._order]
        else:
            self._weights = None

    @cached_property
    def elements(self) -> tuple:
        return tuple(Transformation(e) for e in self._images)

    def __len__(self):
        return len(self._images)

    def __iter__(self):
        return iter(self.elements)

    def __getitem__(self, i) -> Transformation:
        return Transformation(self._images[i])

    def __contains__(self, t) -> bool:
        return _as_map(t).image in self._index

    def __repr__(self):
        return f"Monoid(n={self.n}, size={len(self)})"

    def __reduce__(self):
        return (Monoid, (self.n, self._images, self.generator_indices))

    @property
    def generators(self) -> tuple:
        return tuple(self[i] for i in self.generator_indices)

    def index(self, t) -> int:
        """Index of ``t``; ValueError if it is not an element."""
        t = _as_map(t)
        try:
            return self._index[t.image]
        except KeyError:
            raise ValueError(f"{t} is not an element of this monoid") from None

    def lookup(self, rows: np.ndarray) -> np.ndarray:
        """Element indices of the maps in ``rows`` (last axis = image); -1 if absent."""
        rows = np.asarray(rows)
        if self._weights is None:
            flat = rows.reshape(-1, self.n)
            out = np.array([self._index.get(tuple(r), -1) for r in flat.tolist()], dtype=np.intp)
            return out.reshape(rows.shape[:-1])
        codes = rows @ self._weights
        pos = np.searchsorted(self._sorted_codes, codes)
        pos = np.minimum(pos, len(self._sorted_codes) - 1)
        hit = self._sorted_codes[pos] == codes
        return np.where(hit, self._order[pos], -1)

    def product(self, i: int, j: int) -> int:
        """Index of ``elements[i] @ elements[j]``."""
        return self._index[tuple(self.array[i][self.array[j]].tolist())]

    @property
    def product_table(self) -> np.ndarray:
        """``table[i, j]`` = index of ``elements[i] @ elements[j]``; built once, lazily."""
        if self._table is None:
            with self._table_lock:
                if self._table is None:
                    self._table = self._build_table()
        return self._table

    def _build_table(self) -> np.ndarray:
        m = len(self)
        A = self.array
        table = np.empty((m, m), dtype=np.intp)
        step = max(1, 200_000 // max(1, m * self.n))
        for lo in range(0, m, step):
            # A[lo:hi][:, A][i, j] is the image row of elements[lo+i] @ elements[j]
            table[lo:lo + step] = self.lookup(A[lo:lo + step][:, A])
        if (table < 0).any():
            raise InconsistencyError("monoid is not closed under composition")
        table.setflags(write=False)
        return table

    @cached_property
    def ranks(self) -> np.ndarray:
        s = np.sort(self.array, axis=1)
        return 1 + (np.diff(s, axis=1) != 0).sum(axis=1)

    @cached_property
    def bijective(self) -> np.ndarray:
        return self.ranks == self.n


def generate_monoid(n: int, generators: Iterable) -> Monoid:
    """Breadth-first closure of ``{id} + generators`` under left multiplication.

    Elements are indexed in discovery order: identity, then the generators in
    input order, then products ``g @ p`` for queued ``p`` and generators ``g``
    in input order.
    """
    gens = [_as_map(g, n).image for g in generators]
    if not gens:
        raise ValueError("at least one generator is required")
    ident = tuple(range(n))
    seen = {ident: 0}
    order = [ident]
    gen_idx = []
    for g in gens:
        if g not in seen:
            seen[g] = len(order)
            order.append(g)
        gen_idx.append(seen[g])
    if n == 1:
        return Monoid(n, order, gen_idx, _index=seen)
    distinct = list(dict.fromkeys(gens))
    i = 0
    while i < len(order):
        getter = itemgetter(*order[i])
        for g in distinct:
            c = getter(g)  # (g @ p)(x) = g(p(x))
            if c not in seen:
                seen[c] = len(order)
                order.append(c)
        i += 1
    return Monoid(n, order, gen_idx, _index=seen)


def group_closure(n: int, generators: Iterable) -> Monoid:
    """The permutation group generated by bijective maps."""
    gens = [_as_map(g, n) for g in generators]
    if not gens:
        raise ValueError("at least one generator is required")
    for g in gens:
        if not g.is_bijective():
            raise ValueError(f"{g} is not a bijection")
    return generate_monoid(n, gens + [g.inverse() for g in gens])


def idempotents(E: Monoid) -> frozenset:
    """All ``u`` with ``u @ u == u``."""
    A = E.array
    sq = np.take_along_axis(A, A, axis=1)
    return frozenset(E[int(i)] for i in np.flatnonzero((sq == A).all(axis=1)))


def is_group(E: Monoid) -> bool:
    """Every element is a bijection whose inverse is also an element."""
    if not E.bijective.all():
        return False
    inv = np.argsort(E.array, axis=1)
    return bool((E.lookup(inv) >= 0).all())


def _generators_commute(E: Monoid) -> bool:
    A = E.array
    gens = sorted(set(E.generator_indices))
    for i, j in combinations(gens, 2):
        if not np.array_equal(A[i][A[j]], A[j][A[i]]):
            return False
    return True


def _all_pairs_commute(E: Monoid) -> bool:
    A = E.array
    m = len(E)
    step = max(1, 100_000 // max(1, m * E.n))
    for lo in range(0, m, step):
        blk = A[lo:lo + step]
        if not (blk[:, A] == A[:, blk].transpose(1, 0, 2)).all():
            return False
    return True


def is_abelian(E: Monoid) -> bool:
    """``p @ q == q @ p`` for all elements.

    All pairs are checked up to ``ALL_PAIRS_LIMIT`` elements; beyond that the
    generator pairs decide it (the monoid is generated by them).
    """
    if len(E) <= ALL_PAIRS_LIMIT:
        return _all_pairs_commute(E)
    return _generators_commute(E)


@dataclass(frozen=True)
class SurjectivityProfile:
    all_generators_surjective: bool
    all_elements_surjective: bool
    all_elements_bijective: bool
    note: str = ("on a finite set a self-map is surjective iff it is bijective, "
                 "so the element-level flags coincide")


def surjectivity_profile(E: Monoid) -> SurjectivityProfile:
    gens = all(E.bijective[i] for i in E.generator_indices)
    elems = bool(E.bijective.all())
    return SurjectivityProfile(bool(gens), elems, elems)
