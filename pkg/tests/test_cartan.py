import json

import pytest
from hypothesis import given, strategies as st

from kmdecomp.cartan import (CartanDatum, dominance_diff, load_cartan, parse_weight, positive_roots,
                             validate, wt, wt_levi)
from kmdecomp.errors import (BadDiagonal, CartanError, NonSymmetric, PositiveOffDiagonal,
                             SearchBoundExceeded, UnknownLevi)


def test_validate_accepts_textbook_matrices():
    assert validate(CartanDatum.from_matrix([[2, -1], [-1, 2]])).rank == 2
    assert validate(CartanDatum.from_matrix([[2, -2], [-2, 2]])).rank == 2


@pytest.mark.parametrize("gcm, err", [
    ([[2, -1], [-2, 2]], NonSymmetric),
    ([[3, -1], [-1, 2]], BadDiagonal),
    ([[2, 1], [1, 2]], PositiveOffDiagonal),
])
def test_validate_rejects(gcm, err):
    with pytest.raises(err):
        CartanDatum.from_matrix(gcm)


def test_json_roundtrip(A2):
    text = json.dumps(A2.to_json())
    back = CartanDatum.from_json(text)
    assert back == A2 and back.levis == A2.levis
    sample = '{"labels":["1","2"],"gcm":[[2,-1],[-1,2]],"levis":{"L1":["1"]}}'
    assert CartanDatum.from_json(sample).levi("L1") == (0,)


def test_load_cartan_fallback():
    assert load_cartan("a2.json").rank == 2
    with pytest.raises(FileNotFoundError):
        load_cartan("no-such-datum.json")


def test_wt_examples(SL2, A2):
    assert wt(SL2, [(2,)], (1,)) == (0,)
    assert wt(A2, [(1, 0)], (1, 1)) == (0, -1)
    assert wt(A2, [(1, 0), (0, 1)], (0, 0)) == (1, 1)


def test_wt_levi_examples(A2):
    assert wt_levi(A2, [0], [(1, 0)], (1, 1)) == (0,)
    assert wt_levi(A2, [0, 1], [(1, 0)], (1, 1)) == wt(A2, [(1, 0)], (1, 1))
    # nu supported off J: lambda_j plus the framing contribution
    assert wt_levi(A2, [0], [(1, 0)], (0, 3)) == (1 + 3,)
    with pytest.raises(UnknownLevi):
        wt_levi(A2, "L9", [(1, 0)], (0, 0))


@given(st.sampled_from(["sl2", "a2", "affine-a1"]), st.data())
def test_wt_levi_identity(name, data):
    datum = load_cartan(name)
    lam = tuple(data.draw(st.integers(0, 3)) for _ in datum.indices)
    nu = tuple(data.draw(st.integers(0, 5)) for _ in datum.indices)
    J = data.draw(st.sets(st.sampled_from(list(datum.indices))))
    full = wt(datum, [lam], nu)
    assert wt_levi(datum, sorted(J), [lam], nu) == tuple(full[j] for j in sorted(J))


def test_dominance_examples(SL2, A2):
    assert dominance_diff(A2, (1, 1), (1, 1)) == (0, 0)
    assert dominance_diff(SL2, (2,), (0,)) == (1,)
    assert dominance_diff(A2, (1, 1), (0, 0)) == (1, 1)
    assert dominance_diff(A2, (0, 0), (1, 1)) is None
    assert dominance_diff(A2, (1, 0), (0, 0)) is None


def test_dominance_singular_needs_bound(AFF):
    with pytest.raises(SearchBoundExceeded):
        dominance_diff(AFF, (2, 0), (0, 2))
    assert dominance_diff(AFF, (2, 0), (0, 2), bound=4) == (1, 0)


@given(st.tuples(st.integers(-4, 4), st.integers(-4, 4)), st.tuples(st.integers(-4, 4), st.integers(-4, 4)))
def test_dominance_is_antisymmetric(a, b):
    from kmdecomp.cartan import a2

    d = a2()
    if dominance_diff(d, a, b) is not None and dominance_diff(d, b, a) is not None:
        assert a == b
    nu = dominance_diff(d, a, b)
    if nu is not None:
        assert tuple(x + y for x, y in zip(b, d.root_to_weight(nu))) == a


def test_positive_roots(SL2, A2, AFF):
    assert positive_roots(SL2) == [(1,)]
    assert sorted(positive_roots(A2)) == [(0, 1), (1, 0), (1, 1)]
    assert sorted(positive_roots(AFF, 3)) == sorted([(1, 0), (0, 1), (1, 1), (2, 1), (1, 2)])


def test_parse_weight(A2):
    assert parse_weight("1,0") == (1, 0)
    with pytest.raises(CartanError):
        parse_weight("1,x")
    with pytest.raises(CartanError):
        parse_weight("1", A2)


def test_finite_type_flags(SL2, A2, AFF):
    assert SL2.finite_type and A2.finite_type and not AFF.finite_type
    assert not AFF.nonsingular
    assert AFF.levi("L0") == (0,)
