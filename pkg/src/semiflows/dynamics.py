"""Dynamical predicates for a finite semiflow.

A :class:`Semiflow` pairs a :class:`~semiflows.space.UniformSpace` with the
monoid generated by its acting maps. Quantifiers over the acting semigroup
range over every monoid element; neighbourhoods are singletons (the topology
is discrete); the modulus delta in graded notions ranges over the supplied
entourage chain only.
"""

from __future__ import annotations

import weakref
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from .errors import InconsistencyError
from .ideals import minimal_left_ideals
from .space import UniformSpace
from .transformation import Monoid, Transformation, generate_monoid, is_group

__all__ = [
    "Semiflow",
    "EquicontinuityReport",
    "SensitivityReport",
    "UapReport",
    "TransitivityProfile",
    "WapResult",
    "PropertyVector",
    "orbit",
    "minimal_subsets",
    "is_almost_periodic_point",
    "is_pointwise_almost_periodic",
    "is_minimal",
    "syndetic",
    "proximal_relation",
    "is_distal",
    "equi_points",
    "equicontinuity_report",
    "is_equicontinuous",
    "uap_report",
    "is_uap",
    "sensitivity_report",
    "is_sensitive",
    "transitivity_profile",
    "is_wap",
    "property_vector",
    "restrict",
]

SYNDETIC_TABLE_LIMIT = 400

WAP_NOTE = ("finite discrete phase space: every self-map is continuous, "
            "hence every finite semiflow is weakly almost periodic")


class Semiflow:
    """Maps ``generators`` acting on ``space``; ``monoid`` is their enveloping monoid."""

    def __init__(self, space: UniformSpace, generators: Sequence):
        gens = tuple(g if isinstance(g, Transformation) else Transformation(tuple(g))
                     for g in generators)
        for g in gens:
            if g.n != space.n:
                raise ValueError(f"generator {g} acts on {g.n} points, space has {space.n}")
        self.space = space
        self.generators = gens

    @cached_property
    def monoid(self) -> Monoid:
        return generate_monoid(self.n, self.generators)

    @property
    def n(self) -> int:
        return self.space.n

    def __reduce__(self):
        return (Semiflow, (self.space, self.generators))

    def __repr__(self):
        return f"Semiflow(n={self.n}, generators={len(self.generators)}, |E|={len(self.monoid)})"

    @cached_property
    def orbits(self) -> tuple:
        A = self.monoid.array
        return tuple(frozenset(A[:, x].tolist()) for x in range(self.n))


_IDEAL_CACHE: "weakref.WeakKeyDictionary[Monoid, list]" = weakref.WeakKeyDictionary()


def _ideals(E: Monoid) -> list:
    try:
        return _IDEAL_CACHE[E]
    except KeyError:
        ideals = _IDEAL_CACHE[E] = minimal_left_ideals(E)
        return ideals


def orbit(S: Semiflow, x: int) -> frozenset:
    """``{p(x) : p in E}``; on a discrete space this is also the orbit closure."""
    if not 0 <= x < S.n:
        raise IndexError(f"point {x} out of range")
    return S.orbits[x]


def minimal_subsets(S: Semiflow) -> list:
    """Orbits that are the orbit of each of their points, ordered by least point."""
    found = {}
    for M in S.orbits:
        if M not in found and all(S.orbits[y] == M for y in M):
            found[M] = min(M)
    return sorted(found, key=min)


def is_minimal(S: Semiflow) -> bool:
    return all(len(O) == S.n for O in S.orbits)


def syndetic(E: Monoid, A, method: str = "auto") -> bool:
    """Whether ``E p`` meets ``A`` for every ``p`` in ``E``.

    ``A`` is a collection of element indices. For finite ``E`` the compact
    set ``K`` of the general definition can be taken to be ``E`` itself. The
    ``"ideals"`` method uses the equivalent test that every minimal left ideal
    meets ``A`` (each ``E p`` contains one, and ``E p = I`` for ``p`` in ``I``).
    """
    mask = np.zeros(len(E), dtype=bool)
    idx = np.fromiter((int(a) for a in A), dtype=np.intp)
    if len(idx) and (idx.min() < 0 or idx.max() >= len(E)):
        raise ValueError("A is not a subset of the monoid")
    mask[idx] = True
    if method == "auto":
        method = "definition" if len(E) <= SYNDETIC_TABLE_LIMIT else "ideals"
    if method == "definition":
        # column p of the table is E p
        return bool(mask[E.product_table].any(axis=0).all())
    if method == "ideals":
        return all(mask[list(I)].any() for I in _ideals(E))
    raise ValueError(f"unknown method {method!r}")


def _returns(S: Semiflow, x: int, y: int) -> np.ndarray:
    return np.flatnonzero(S.monoid.array[:, x] == y)


def is_almost_periodic_point(S: Semiflow, x: int) -> bool:
    """Return times to ``{x}`` are syndetic; cross-checked against orbit minimality."""
    by_returns = syndetic(S.monoid, _returns(S, x, x))
    O = orbit(S, x)
    by_orbit = all(S.orbits[y] == O for y in O)
    if by_returns != by_orbit:
        raise InconsistencyError(
            f"point {x}: syndetic return times {by_returns} but minimal orbit {by_orbit}")
    return by_returns


def is_pointwise_almost_periodic(S: Semiflow) -> bool:
    return all(is_almost_periodic_point(S, x) for x in range(S.n))


def proximal_relation(S: Semiflow) -> frozenset:
    """Pairs ``(x, y)`` merged by some element of the monoid."""
    A = S.monoid.array
    merged = np.zeros((S.n, S.n), dtype=bool)
    for lo in range(0, len(A), _chunk(S.n)):
        blk = A[lo:lo + _chunk(S.n)]
        merged |= (blk[:, :, None] == blk[:, None, :]).any(axis=0)
    return frozenset((int(x), int(y)) for x, y in np.argwhere(merged))


def is_distal(S: Semiflow) -> bool:
    """Proximal relation is the diagonal; cross-checked against ``E`` being a group."""
    by_pairs = all(x == y for x, y in proximal_relation(S))
    by_group = is_group(S.monoid)
    if by_pairs != by_group:
        raise InconsistencyError(f"distal by pairs {by_pairs} but group {by_group}")
    return by_pairs


def _chunk(n: int) -> int:
    return max(1, 2_000_000 // (n * n))


def _stable_pairs(maps: np.ndarray, rel: np.ndarray) -> np.ndarray:
    """``ok[x, y]``: every map sends ``(x, y)`` into ``rel``."""
    n = rel.shape[0]
    ok = np.ones((n, n), dtype=bool)
    step = _chunk(n)
    for lo in range(0, len(maps), step):
        blk = maps[lo:lo + step]
        ok &= rel[blk[:, :, None], blk[:, None, :]].all(axis=0)
    return ok


def equi_points(S: Semiflow, level: int) -> frozenset:
    """Points with some delta-ball mapped eps-close to the image, uniformly over ``E``."""
    U = S.space
    eps = U.relation(level)
    ok = _stable_pairs(S.monoid.array, eps)
    good = np.zeros(U.n, dtype=bool)
    for delta in U.entourages:
        good |= (ok | ~delta).all(axis=1)
    return frozenset(np.flatnonzero(good).tolist())


@dataclass(frozen=True)
class EquicontinuityReport:
    equicontinuous: bool
    # moduli[i-1]: coarsest delta level that works for eps level i, or None
    moduli: tuple
    # failing eps level -> (x, y, element index) breaking the finest delta
    witnesses: dict


def equicontinuity_report(space: UniformSpace, maps: np.ndarray) -> EquicontinuityReport:
    """Uniform modulus test for an arbitrary family of maps (rows of ``maps``)."""
    maps = np.asarray(maps)
    moduli = []
    witnesses = {}
    for i, eps in enumerate(space.entourages, start=1):
        ok = _stable_pairs(maps, eps)
        mod = next((j for j, delta in enumerate(space.entourages, start=1)
                    if (ok | ~delta).all()), None)
        moduli.append(mod)
        if mod is None:
            x, y = map(int, np.argwhere(space.entourages[-1] & ~ok)[0])
            p = int(np.flatnonzero(~eps[maps[:, x], maps[:, y]])[0])
            witnesses[i] = (x, y, p)
    return EquicontinuityReport(all(m is not None for m in moduli), tuple(moduli), witnesses)


def is_equicontinuous(S: Semiflow) -> bool:
    return equicontinuity_report(S.space, S.monoid.array).equicontinuous


@dataclass(frozen=True)
class SensitivityReport:
    sensitive: bool
    # eps levels at which every point and every delta admit an escaping pair
    levels: tuple


def sensitivity_report(S: Semiflow) -> SensitivityReport:
    """Direct quantifier sweep, cross-checked against empty ``equi_points``."""
    U = S.space
    A = S.monoid.array
    levels = []
    for i, eps in enumerate(U.entourages, start=1):
        escapes = np.zeros((U.n, U.n), dtype=bool)  # some p sends (x, y) outside eps
        for lo in range(0, len(A), _chunk(U.n)):
            blk = A[lo:lo + _chunk(U.n)]
            escapes |= (~eps[blk[:, :, None], blk[:, None, :]]).any(axis=0)
        if all((escapes & delta).any(axis=1).all() for delta in U.entourages):
            levels.append(i)
    empty = [i for i in range(1, U.k + 1) if not equi_points(S, i)]
    if levels != empty:
        raise InconsistencyError(
            f"sensitive at levels {levels} but empty equicontinuity sets at {empty}")
    return SensitivityReport(bool(levels), tuple(levels))


def is_sensitive(S: Semiflow) -> bool:
    return sensitivity_report(S).sensitive


@dataclass(frozen=True)
class UapReport:
    uap: bool
    # per eps level: the maximal eps-small set of elements is syndetic
    syndetic_levels: tuple
    equicontinuous_and_surjective: bool
    separated: bool

    @property
    def routes_agree(self) -> bool:
        return self.uap == self.equicontinuous_and_surjective


def uap_report(S: Semiflow) -> UapReport:
    U = S.space
    A = S.monoid.array
    pts = np.arange(U.n)
    levels = tuple(
        syndetic(S.monoid, np.flatnonzero(eps[pts, A].all(axis=1)))
        for eps in U.entourages
    )
    other = is_equicontinuous(S) and bool(S.monoid.bijective.all())
    return UapReport(all(levels), levels, other, U.separated)


def is_uap(S: Semiflow) -> bool:
    """Uniform almost periodicity by the syndetic definition.

    On a separated space this must equal "equicontinuous and every element
    surjective"; a disagreement there raises. On a chain that does not
    separate points the two notions genuinely differ and the definitional
    verdict is returned (see :func:`uap_report` for both).
    """
    r = uap_report(S)
    if r.separated and not r.routes_agree:
        raise InconsistencyError(
            f"syndetic route says {r.uap}, equicontinuity route says "
            f"{r.equicontinuous_and_surjective}")
    return r.uap


@dataclass(frozen=True)
class TransitivityProfile:
    topologically_transitive: bool
    point_transitive: bool
    syndetically_transitive: bool
    transitive_points: frozenset


def transitivity_profile(S: Semiflow) -> TransitivityProfile:
    n = S.n
    trans = frozenset(x for x in range(n) if len(S.orbits[x]) == n)
    topo = len(trans) == n  # singleton U, V: every y is reached from every x
    synd = all(syndetic(S.monoid, _returns(S, x, y)) for x in range(n) for y in range(n))
    if (synd and not topo) or (topo and not trans):
        raise InconsistencyError(
            f"transitivity implications broken: syndetic={synd}, topological={topo}, "
            f"transitive points={sorted(trans)}")
    return TransitivityProfile(topo, bool(trans), synd, trans)


@dataclass(frozen=True)
class WapResult:
    value: bool
    note: str
    function_orbit: tuple | None = None


def is_wap(S: Semiflow, f: Sequence | None = None) -> WapResult:
    """Always true on a finite space; optionally lists ``{f o p : p in E}``."""
    orbit_f = None
    if f is not None:
        if len(f) != S.n:
            raise ValueError(f"f must have {S.n} values")
        vals = list(f)
        orbit_f = tuple(sorted({tuple(vals[y] for y in p) for p in S.monoid.array.tolist()}))
    return WapResult(True, WAP_NOTE, orbit_f)


@dataclass(frozen=True)
class PropertyVector:
    pointwise_almost_periodic: bool
    minimal: bool
    topologically_transitive: bool
    point_transitive: bool
    syndetically_transitive: bool
    distal: bool
    equicontinuous: EquicontinuityReport
    uniformly_almost_periodic: UapReport
    sensitive: SensitivityReport
    weakly_almost_periodic: WapResult

    def flags(self) -> dict:
        return {
            "pointwise_almost_periodic": self.pointwise_almost_periodic,
            "minimal": self.minimal,
            "topologically_transitive": self.topologically_transitive,
            "point_transitive": self.point_transitive,
            "syndetically_transitive": self.syndetically_transitive,
            "distal": self.distal,
            "equicontinuous": self.equicontinuous.equicontinuous,
            "uniformly_almost_periodic": self.uniformly_almost_periodic.uap,
            "sensitive": self.sensitive.sensitive,
            "weakly_almost_periodic": self.weakly_almost_periodic.value,
        }


def property_vector(S: Semiflow) -> PropertyVector:
    tp = transitivity_profile(S)
    is_uap(S)  # raises on a route disagreement over a separated space
    return PropertyVector(
        pointwise_almost_periodic=is_pointwise_almost_periodic(S),
        minimal=is_minimal(S),
        topologically_transitive=tp.topologically_transitive,
        point_transitive=tp.point_transitive,
        syndetically_transitive=tp.syndetically_transitive,
        distal=is_distal(S),
        equicontinuous=equicontinuity_report(S.space, S.monoid.array),
        uniformly_almost_periodic=uap_report(S),
        sensitive=sensitivity_report(S),
        weakly_almost_periodic=is_wap(S),
    )


def restrict(S: Semiflow, points) -> Semiflow:
    """Sub-semiflow on an invariant set, relabelled in increasing point order."""
    pts = sorted(points)
    pos = {x: i for i, x in enumerate(pts)}
    gens = []
    for g in S.generators:
        try:
            gens.append(tuple(pos[g(x)] for x in pts))
        except KeyError:
            raise ValueError(f"{sorted(points)} is not invariant under {g}") from None
    return Semiflow(S.space.restrict(pts), gens)
