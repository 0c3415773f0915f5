import pytest

from kmdecomp.character import (character_weights, freudenthal_character, greedy_decompose, levi_decompose,
                                tensor_character, weyl_dimension)
from kmdecomp.errors import FiniteTypeOnly


def test_adjoint_zero_weight(A2):
    ch = freudenthal_character(A2, (1, 1))
    assert character_weights(A2, (1, 1), ch)[(0, 0)] == 2
    assert ch[(0, 0)] == 1


def test_rank_one_string(SL2):
    assert character_weights(SL2, (3,), freudenthal_character(SL2, (3,))) == {(3,): 1, (1,): 1, (-1,): 1, (-3,): 1}


@pytest.mark.parametrize("lam", [(0, 0), (1, 0), (1, 1), (2, 1), (3, 2), (2, 2)])
def test_weyl_dimension_matches(A2, lam):
    assert sum(freudenthal_character(A2, lam).values()) == weyl_dimension(A2, lam)


def test_weyl_dimension_values(A2):
    assert weyl_dimension(A2, (2, 1)) == 15
    assert weyl_dimension(A2, (2, 2)) == 27


def test_depth_truncation(A2):
    full = freudenthal_character(A2, (2, 1))
    part = freudenthal_character(A2, (2, 1), depth=2)
    assert part == {k: v for k, v in full.items() if sum(k) <= 2}


def test_greedy_dimension_conservation(A2):
    lams = [(1, 1), (1, 0), (0, 1)]
    top = (2, 2)
    dec = greedy_decompose(A2, top, tensor_character(A2, lams))
    from kmdecomp.cartan import wt
    total = sum(m * weyl_dimension(A2, wt(A2, [top], nu)) for nu, m in dec.items())
    assert total == 8 * 3 * 3


def test_levi_characters_sum(A2):
    rows = levi_decompose(A2, [(1, 1)], [0])
    assert sum(m * (mu[0] + 1) for (mu, _, _), m in rows.items()) == 8


def test_infinite_type_rejected(AFF):
    with pytest.raises(FiniteTypeOnly):
        freudenthal_character(AFF, (1, 0))
