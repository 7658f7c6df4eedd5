import itertools
import random

import numpy as np
import pytest

from semiflows.dynamics import (
    Semiflow,
    equi_points,
    equicontinuity_report,
    is_almost_periodic_point,
    is_distal,
    is_equicontinuous,
    is_minimal,
    is_sensitive,
    is_uap,
    is_wap,
    minimal_subsets,
    orbit,
    property_vector,
    proximal_relation,
    restrict,
    sensitivity_report,
    syndetic,
    transitivity_profile,
    uap_report,
)
from semiflows.errors import InconsistencyError
from semiflows.transformation import generate_monoid

import oracles
from conftest import coarse, cycle_space, rot, two_level


def c3():
    return Semiflow(coarse(3), [rot(3)])


def identity_only(n):
    return Semiflow(coarse(n), [tuple(range(n))])


def test_orbit():
    assert orbit(c3(), 0) == {0, 1, 2}
    assert orbit(identity_only(4), 2) == {2}
    assert orbit(Semiflow(coarse(2), [(0, 0)]), 1) == {0, 1}
    with pytest.raises(IndexError):
        orbit(c3(), 3)


def test_minimal_subsets():
    assert minimal_subsets(c3()) == [frozenset({0, 1, 2})]
    assert minimal_subsets(Semiflow(coarse(2), [(0, 0)])) == [frozenset({0})]
    assert minimal_subsets(identity_only(3)) == [frozenset({x}) for x in range(3)]
    assert minimal_subsets(Semiflow(coarse(2), [(0, 0), (1, 1)])) == [frozenset({0, 1})]


def test_almost_periodic_points(id_c0):
    assert all(is_almost_periodic_point(c3(), x) for x in range(3))
    assert is_almost_periodic_point(id_c0, 0)
    assert not is_almost_periodic_point(id_c0, 1)


def test_syndetic():
    E = generate_monoid(2, [(0, 0)])
    c0 = E.index((0, 0))
    assert syndetic(E, range(len(E)))
    assert syndetic(E, [c0])
    G = generate_monoid(3, [rot(3)])
    assert syndetic(G, [G.index(rot(3))])
    assert not syndetic(G, [])
    with pytest.raises(ValueError):
        syndetic(G, [5])
    with pytest.raises(ValueError):
        syndetic(G, [0], method="bogus")


def test_syndetic_methods_agree_with_oracle():
    rng = random.Random(3)
    for _ in range(200):
        n = rng.randint(2, 4)
        gens = [tuple(rng.randrange(n) for _ in range(n)) for _ in range(2)]
        E = generate_monoid(n, gens)
        idx = [i for i in range(len(E)) if rng.random() < 0.2]
        want = oracles.syndetic({e.image for e in E}, {E[i].image for i in idx})
        assert syndetic(E, idx, "definition") == want
        assert syndetic(E, idx, "ideals") == want


def test_proximal_and_distal(id_c0):
    assert proximal_relation(c3()) == {(x, x) for x in range(3)}
    assert proximal_relation(id_c0) == {(0, 0), (0, 1), (1, 0), (1, 1)}
    assert proximal_relation(identity_only(3)) == {(x, x) for x in range(3)}
    assert is_distal(c3())
    assert not is_distal(id_c0)
    assert is_distal(Semiflow(coarse(4), [(1, 0, 2, 3), (0, 2, 3, 1)]))


def test_equi_points_rotation_and_doubling(rotation8, doubling8):
    for i in (1, 2, 3):
        assert equi_points(rotation8, i) == frozenset(range(8))
        assert equi_points(identity_only(8), 1) == frozenset(range(8))
    assert equi_points(doubling8, 1) == frozenset(range(8))
    assert equi_points(doubling8, 2) == frozenset()
    assert equi_points(doubling8, 3) == frozenset()
    with pytest.raises(IndexError):
        equi_points(rotation8, 4)


def test_equicontinuity(rotation8, doubling8):
    assert is_equicontinuous(rotation8)
    assert not is_equicontinuous(doubling8)
    rep = equicontinuity_report(doubling8.space, doubling8.monoid.array)
    assert rep.moduli == (1, None, None)
    x, y, p = rep.witnesses[3]
    eps = doubling8.space.relation(3)
    A = doubling8.monoid.array
    assert doubling8.space.relation(3)[x, y] and not eps[A[p, x], A[p, y]]
    S8 = Semiflow(cycle_space(8), [rot(8), (1, 0, 2, 3, 4, 5, 6, 7)])
    assert len(S8.monoid) == 40320
    assert not is_equicontinuous(S8)


def test_sensitivity(rotation8, doubling8):
    assert is_sensitive(doubling8)
    assert sensitivity_report(doubling8).levels == (2, 3)
    assert not is_sensitive(rotation8)
    assert not is_sensitive(Semiflow(cycle_space(8), [tuple(range(8))]))


def test_uap(rotation8, doubling8, id_c0):
    assert is_uap(rotation8)
    assert not is_uap(doubling8)
    assert not is_uap(id_c0)
    r = uap_report(id_c0)
    assert r.separated and r.routes_agree and not r.equicontinuous_and_surjective


def test_uap_on_chain_not_separating_points():
    # the definitional and the equicontinuity routes part ways here
    S = Semiflow(coarse(2), [(0, 0)])
    r = uap_report(S)
    assert r.uap and not r.equicontinuous_and_surjective and not r.separated
    assert is_uap(S)
    assert oracles.uap({(0, 1), (0, 0)}, [{(0, 0), (0, 1), (1, 0), (1, 1)}], 2)


def test_uap_disagreement_on_separated_space_raises(monkeypatch):
    import semiflows.dynamics as mod
    S = Semiflow(two_level(2), [(1, 0)])
    monkeypatch.setattr(mod, "is_equicontinuous", lambda S: False)
    with pytest.raises(InconsistencyError):
        mod.is_uap(S)


def test_distal_route_disagreement_raises(monkeypatch):
    import semiflows.dynamics as mod
    monkeypatch.setattr(mod, "is_group", lambda E: False)
    with pytest.raises(InconsistencyError):
        mod.is_distal(c3())


def test_transitivity():
    tp = transitivity_profile(c3())
    assert tp.topologically_transitive and tp.point_transitive and tp.syndetically_transitive
    assert tp.transitive_points == {0, 1, 2}
    tp = transitivity_profile(identity_only(2))
    assert not (tp.topologically_transitive or tp.point_transitive or tp.syndetically_transitive)
    assert tp.transitive_points == frozenset()
    tp = transitivity_profile(Semiflow(coarse(2), [(0, 0)]))
    assert tp.point_transitive and not tp.topologically_transitive
    assert tp.transitive_points == {1}


def test_wap():
    r = is_wap(c3(), f=[1, 0, 0])
    assert r.value and "every finite semiflow is weakly almost periodic" in r.note
    assert set(r.function_orbit) == {(1, 0, 0), (0, 0, 1), (0, 1, 0)}
    assert is_wap(c3(), f=[5, 5, 5]).function_orbit == ((5, 5, 5),)
    with pytest.raises(ValueError):
        is_wap(c3(), f=[1, 2])


def test_property_vector(rotation8):
    pv = property_vector(rotation8)
    flags = pv.flags()
    assert flags == {
        "pointwise_almost_periodic": True, "minimal": True, "topologically_transitive": True,
        "point_transitive": True, "syndetically_transitive": True, "distal": True,
        "equicontinuous": True, "uniformly_almost_periodic": True, "sensitive": False,
        "weakly_almost_periodic": True,
    }


def test_restrict():
    S = Semiflow(coarse(4), [(1, 0, 0, 2)])
    sub = restrict(S, {0, 1})
    assert sub.n == 2 and sub.generators[0].image == (1, 0)
    assert is_minimal(sub)
    with pytest.raises(ValueError):
        restrict(S, {0, 2})


def _rels(U):
    return [{(x, y) for x, y in zip(*np.nonzero(r))} for r in U.entourages]


def test_all_predicates_match_oracles_small():
    rng = random.Random(11)
    chains = [coarse, two_level, lambda n: cycle_space(n, (2, 1))]
    for n in (1, 2, 3):
        maps = list(itertools.product(range(n), repeat=n))
        for gens in itertools.product(maps, repeat=2):
            if rng.random() > 0.4:
                continue
            E = oracles.closure(n, gens)
            for make in chains:
                S = Semiflow(make(n), gens)
                rels = _rels(S.space)
                assert is_equicontinuous(S) == oracles.equicontinuous(list(E), rels)
                assert is_sensitive(S) == oracles.sensitive(list(E), rels, n)
                assert uap_report(S).uap == oracles.uap(E, rels, n)
                assert is_distal(S) == oracles.is_group(E, n)
                assert proximal_relation(S) == oracles.proximal(E, n)
                for i, eps in enumerate(rels, start=1):
                    assert equi_points(S, i) == oracles.equi_points(list(E), rels, eps, n)
                for x in range(n):
                    assert is_almost_periodic_point(S, x) == oracles.almost_periodic(E, x)
