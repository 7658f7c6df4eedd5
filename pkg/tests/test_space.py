import pickle
import warnings
from fractions import Fraction

import numpy as np
import pytest

from semiflows.errors import ValidationError
from semiflows.space import (
    DegenerateUniformityWarning,
    UniformSpace,
    as_rational,
    ball,
    cyclic_metric,
    from_metric,
    from_relations,
)

import oracles


def test_cycle_balls_match_oracle():
    U = from_metric(cyclic_metric(4), [2, 1])
    rels = oracles.cycle_relations(4, [2, 1])
    for level in (1, 2):
        for x in range(4):
            assert ball(U, level, x) == oracles.ball(rels[level - 1], x)
    assert ball(U, 2, 0) == {0, 1, 3}
    assert U.relation(1).sum() == 16


def test_levels_are_one_based():
    U = from_metric(cyclic_metric(4), [2, 1])
    with pytest.raises(IndexError):
        U.relation(0)
    with pytest.raises(IndexError):
        U.ball(3, 0)
    with pytest.raises(IndexError):
        U.ball(1, 4)


def test_separated_warns():
    with pytest.warns(DegenerateUniformityWarning):
        UniformSpace(2, [np.ones((2, 2)), np.eye(2)])
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        assert not from_metric(cyclic_metric(8), [4, 2, 1]).separated
        UniformSpace(1, [np.eye(1)])


@pytest.mark.parametrize("mats, msg", [
    ([[[1, 0], [0, 0]]], "not reflexive"),
    ([[[1, 1], [0, 1]]], "not symmetric"),
    ([np.eye(2), np.ones((2, 2))], "not contained"),
])
def test_chain_validation(mats, msg):
    with pytest.raises(ValidationError, match=msg):
        UniformSpace(2, mats, warn=False)


def test_metric_validation():
    with pytest.raises(ValidationError, match="triangle inequality fails for triple \\(0, 1, 2\\)"):
        from_metric([[0, 1, 5], [1, 0, 1], [5, 1, 0]], [1])
    with pytest.raises(ValidationError, match="pseudometric"):
        from_metric([[0, 0], [0, 0]], [1])
    with pytest.raises(ValidationError, match="asymmetric"):
        from_metric([[0, 1], [2, 0]], [1])
    with pytest.raises(ValidationError, match="strictly decrease"):
        from_metric(cyclic_metric(3), [1, 1])
    with pytest.raises(ValidationError, match="positive"):
        from_metric(cyclic_metric(3), [1, 0])


def test_rationals_are_exact():
    assert as_rational("3/6") == Fraction(1, 2)
    with pytest.raises(TypeError):
        as_rational(0.5)
    U = from_metric([[0, "1/3"], ["1/3", 0]], ["1/2", "1/4"], warn=False)
    assert U.separated and U.k == 2


def test_relations_are_unordered():
    U = from_relations(3, [[(0, 1), (2, 1)], [(1, 0)]], warn=False)
    assert U.relation(1)[1, 2] and U.relation(1)[2, 1]
    assert ball(U, 2, 0) == {0, 1}


def test_immutable_and_picklable():
    U = from_metric(cyclic_metric(5), [2, 1])
    with pytest.raises(AttributeError):
        U.n = 3
    with pytest.raises(ValueError):
        U.entourages[0, 0, 1] = False
    assert pickle.loads(pickle.dumps(U)) == U


def test_restrict_relabels():
    U = from_metric(cyclic_metric(6), [3, 1])
    V = U.restrict([0, 1, 5])
    assert V.n == 3
    assert ball(V, 2, 0) == {0, 1, 2}
