"""Left-ideal structure of a finite transformation monoid.

Element sets are returned as frozensets or sorted tuples of element indices
of the monoid.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InconsistencyError
from .transformation import Monoid

__all__ = [
    "LeftIdealReport",
    "ClauseResult",
    "IdealStructureReport",
    "principal_left_ideal",
    "minimal_left_ideals",
    "left_ideal_report",
    "verify_minimal_ideal_structure",
]


def _element_index(E: Monoid, p) -> int:
    if isinstance(p, (int, np.integer)):
        if not 0 <= p < len(E):
            raise ValueError(f"element index {p} out of range")
        return int(p)
    return E.index(p)


def principal_left_ideal(E: Monoid, p) -> frozenset:
    """``E p = {q @ p : q in E}``; ``p`` may be an index or a Transformation."""
    i = _element_index(E, p)
    A = E.array
    return frozenset(E.lookup(A[:, A[i]]).tolist())


def _kernel_labels(rows: np.ndarray) -> np.ndarray:
    # label[x] = first point with the same image as x
    eq = rows[:, :, None] == rows[:, None, :]
    return eq.argmax(axis=2)


def minimal_left_ideals(E: Monoid) -> list:
    """Every minimal left ideal, as sorted index tuples ordered by first element.

    The minimal ideal of a finite transformation monoid is the set of
    minimal-rank elements; inside it, ``Ep`` collects exactly the elements
    sharing the kernel of ``p``. One principal ideal is formed per kernel and
    checked against that kernel class.
    """
    A = E.array
    ranks = E.ranks
    kernel_elems = np.flatnonzero(ranks == ranks.min())
    labels = _kernel_labels(A[kernel_elems])
    classes: dict[bytes, list[int]] = {}
    for i, lab in zip(kernel_elems.tolist(), labels):
        classes.setdefault(lab.tobytes(), []).append(i)
    ideals = []
    for members in classes.values():
        ideal = tuple(sorted(principal_left_ideal(E, members[0])))
        if ideal != tuple(members):
            raise InconsistencyError(
                f"principal ideal of element {members[0]} differs from its kernel class")
        ideals.append(ideal)
    return sorted(ideals)


@dataclass(frozen=True)
class LeftIdealReport:
    minimal_left_ideals: list
    idempotents_per_ideal: list
    # per ideal: {idempotent u: sorted tuple u I}
    group_components: list


def _left_mult(E: Monoid, u: int, ideal) -> tuple:
    A = E.array
    return tuple(sorted(set(E.lookup(A[u][A[list(ideal)]]).tolist())))


def _idempotent_indices(E: Monoid, idx) -> list:
    A = E.array
    rows = A[list(idx)]
    sq = np.take_along_axis(rows, rows, axis=1)
    return [i for i, ok in zip(idx, (sq == rows).all(axis=1)) if ok]


def left_ideal_report(E: Monoid) -> LeftIdealReport:
    ideals = minimal_left_ideals(E)
    J = [_idempotent_indices(E, I) for I in ideals]
    comps = [{u: _left_mult(E, u, I) for u in Ju} for I, Ju in zip(ideals, J)]
    return LeftIdealReport(ideals, J, comps)


@dataclass
class ClauseResult:
    passed: bool = True
    checks: int = 0
    witness: dict | None = None

    def fail(self, **witness):
        if self.passed:
            self.passed = False
            self.witness = witness


CLAUSES = {
    1: "I p = I for every p in I",
    2: "p u = p for every idempotent u of I and p in I",
    3: "u p = u with u idempotent in I, p in I forces p idempotent",
    4: "u I is a group with neutral element u",
    5: "each p in I has exactly one idempotent u of I with u p = p",
    6: "for idempotents u, v of I and p in u I some r in I has r p = v and p r = u",
    7: "I is the union of the groups u I",
    8: "distinct idempotents give disjoint groups u I",
    9: "q p = r p with q, r in I and p in E forces q = r",
    10: "each idempotent u of I has exactly one idempotent v of I' with u v = v, v u = u",
}


@dataclass
class IdealStructureReport:
    clauses: dict = field(default_factory=lambda: {c: ClauseResult() for c in CLAUSES})
    ideals: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.clauses.values())

    def failures(self) -> dict:
        return {c: r.witness for c, r in self.clauses.items() if not r.passed}


def verify_minimal_ideal_structure(E: Monoid) -> IdealStructureReport:
    """Check the ten structural clauses on every (pair of) minimal left ideal(s).

    Every clause is a theorem about finite semigroups, so a failure points at
    a bug in the monoid or ideal computations, never at the input.
    """
    report = IdealStructureReport()
    cl = report.clauses
    A = E.array
    m = len(E)
    ideals = minimal_left_ideals(E)
    report.ideals = ideals
    Js = []
    for I in ideals:
        Iset = set(I)
        I_arr = np.array(I)
        rows = A[I_arr]
        # prod[a, b] = index of I[a] @ I[b]
        prod = E.lookup(rows[:, rows])
        J = [I[a] for a in range(len(I)) if prod[a, a] == I[a]]
        Js.append(J)
        Jset = set(J)
        if not J:
            cl[2].fail(ideal=I, reason="no idempotent in a minimal left ideal")
            continue
        pos = {e: a for a, e in enumerate(I)}
        # (1)
        for b, p in enumerate(I):
            cl[1].checks += 1
            if set(prod[:, b].tolist()) != Iset:
                cl[1].fail(ideal=I, p=p)
        # (2)
        for u in J:
            for a, p in enumerate(I):
                cl[2].checks += 1
                if prod[a, pos[u]] != p:
                    cl[2].fail(u=u, p=p)
        # (3)
        for u in J:
            for b, p in enumerate(I):
                cl[3].checks += 1
                if prod[pos[u], b] == u and p not in Jset:
                    cl[3].fail(u=u, p=p)
        # (4)
        groups = {}
        for u in J:
            pu = pos[u]
            G = sorted(set(prod[pu, :].tolist()))
            groups[u] = G
            cl[4].checks += 1
            outside = [g for g in G if g not in pos]
            if outside:
                cl[4].fail(u=u, element=outside[0], reason="u I leaves I")
                continue
            gp = np.array([pos[g] for g in G])
            Garr = np.array(G)
            sub = prod[np.ix_(gp, gp)]
            if not ((prod[pu, gp] == Garr) & (prod[gp, pu] == Garr)).all():
                bad = int(np.flatnonzero((prod[pu, gp] != Garr) | (prod[gp, pu] != Garr))[0])
                cl[4].fail(u=u, element=G[bad], reason="u is not neutral")
            if not np.isin(sub, Garr).all():
                a, b = map(int, np.argwhere(~np.isin(sub, Garr))[0])
                cl[4].fail(u=u, pair=(G[a], G[b]), reason="not closed")
            has_inv = ((sub == u) & (sub.T == u)).any(axis=1)
            if not has_inv.all():
                cl[4].fail(u=u, element=G[int(np.flatnonzero(~has_inv)[0])], reason="no inverse")
        # (5)
        Jpos = np.array([pos[u] for u in J])
        hits = prod[Jpos, :] == np.array(I)[None, :]  # [u, p]: u p = p
        cl[5].checks += len(I)
        counts = hits.sum(axis=0)
        if (counts != 1).any():
            b = int(np.flatnonzero(counts != 1)[0])
            cl[5].fail(p=I[b], idempotents=[J[a] for a in np.flatnonzero(hits[:, b])])
        # (6)
        for u in J:
            Gpos = np.array([pos[p] for p in groups[u] if p in pos], dtype=np.intp)
            for v in J:
                cl[6].checks += len(Gpos)
                # ok[c, k]: r = I[c] satisfies r p = v and p r = u for p = I[Gpos[k]]
                ok = (prod[:, Gpos] == v) & (prod[Gpos, :].T == u)
                found = ok.any(axis=0)
                if not found.all():
                    cl[6].fail(u=u, v=v, p=I[int(Gpos[np.flatnonzero(~found)[0]])])
        # (7)
        cl[7].checks += 1
        union = set().union(*(set(g) for g in groups.values()))
        if union != Iset:
            cl[7].fail(ideal=I, missing=sorted(Iset - union), extra=sorted(union - Iset))
        # (8)
        for u in J:
            for v in J:
                if u < v:
                    cl[8].checks += 1
                    common = set(groups[u]) & set(groups[v])
                    if common:
                        cl[8].fail(u=u, v=v, common=sorted(common))
        # (9): right multiplication by any p in E is injective on I
        step = max(1, 200_000 // max(1, len(I) * E.n))
        for lo in range(0, m, step):
            right = E.lookup(rows[:, A[lo:lo + step]])  # [a, j] = I[a] @ E[lo + j]
            s = np.sort(right, axis=0)
            dup = (s[1:] == s[:-1]).any(axis=0) if len(I) > 1 else np.zeros(right.shape[1], bool)
            cl[9].checks += right.shape[1]
            if dup.any():
                j = int(np.flatnonzero(dup)[0])
                col = right[:, j].tolist()
                a = next(x for x in range(len(col)) if col.count(col[x]) > 1)
                b = next(x for x in range(a + 1, len(col)) if col[x] == col[a])
                cl[9].fail(p=lo + j, q=I[a], r=I[b])
    # (10)
    for I, J in zip(ideals, Js):
        for I2, J2 in zip(ideals, Js):
            for u in J:
                cl[10].checks += 1
                hits = [v for v in J2 if E.product(u, v) == v and E.product(v, u) == u]
                if len(hits) != 1:
                    cl[10].fail(u=u, ideal=I2, matches=hits)
    return report
