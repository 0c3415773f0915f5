import pytest

from kmdecomp.cartan import CartanDatum
from kmdecomp.crystal import (canonical_form, check_axioms, generate, highest_weight_elements,
                              is_highest_weight, levi_restrict, tensor, tensor_graph, to_dot)
from kmdecomp.errors import DatumMismatch, IncompleteSlice, NotDominant
from kmdecomp.paths import generate_path_crystal


def b_of(datum, lam, depth=8):
    return generate_path_crystal(datum, lam, depth).nodes


def test_signature_rule_examples(SL2):
    b0, b1 = b_of(SL2, (1,))
    hw = tensor(b0, b0)
    assert hw.epsilon(0) == 0 and hw.weight == (2,)
    x = tensor(b0, b1)
    assert x.epsilon(0) == 0 and x.weight == (0,)
    # max(eps(b1), eps(b0) - <h, wt(b1)>) = max(1, 0 + 1) = 1
    y = tensor(b1, b0)
    assert y.epsilon(0) == 1 and y.phi(0) == 1


def test_tensor_routing_binary_rule(SL2):
    b0, b1 = b_of(SL2, (1,))
    # f acts on the left factor iff phi(b1) > eps(b2)
    assert tensor(b0, b0).f(0).key == tensor(b1, b0).key
    assert tensor(b1, b0).f(0).key == tensor(b1, b1).key
    assert tensor(b0, b1).f(0) is None


def test_tensor_datum_mismatch(SL2, A2):
    with pytest.raises(DatumMismatch):
        tensor(b_of(SL2, (1,))[0], b_of(A2, (1, 0))[0])


def test_generate_examples(SL2, A2):
    g = generate(SL2, (1,), 4)
    assert len(g.nodes) == 2 and len(g.edges) == 1
    g = generate(A2, (1, 0), 4)
    assert len(g.nodes) == 3
    assert [i for _, i, _ in g.edges] == [0, 1]
    assert len(generate(A2, (2, 1), 0).nodes) == 1
    with pytest.raises(NotDominant):
        generate(A2, (1, -1), 3)


def test_highest_weight_elements(SL2):
    g1 = generate(SL2, (1,), 4)
    tg = tensor_graph(g1, g1)
    (top,) = highest_weight_elements(tg, mu=(2,))
    assert top.key == tensor(g1.nodes[0], g1.nodes[0]).key
    (mid,) = highest_weight_elements(tg, mu=(0,))
    assert mid.key == tensor(g1.nodes[0], g1.nodes[1]).key
    assert highest_weight_elements(tg, mu=(4,)) == []


def test_incomplete_slice(AFF):
    g = generate(AFF, (1, 0), 2)
    assert not g.saturated
    with pytest.raises(IncompleteSlice):
        highest_weight_elements(g, nu=(3, 3))
    with pytest.raises(IncompleteSlice):
        tensor_graph(g, g, depth=5)


def test_levi_restrict(A2):
    g = generate(A2, (1, 0), 4)
    r = levi_restrict(g, [0])
    hw = [b.weight for b in r.nodes if is_highest_weight(b, r.index_set)]
    assert hw == [(1, 0), (0, -1)]
    assert levi_restrict(g, [0, 1]).edges == g.edges
    empty = levi_restrict(g, [])
    assert all(is_highest_weight(b, empty.index_set) for b in empty.nodes)


CORPUS = [("sl2", (n,), 8) for n in range(5)] + [
    ("a2", lam, 10) for lam in [(1, 0), (0, 1), (1, 1), (2, 0), (2, 1)]
] + [("affine-a1", (1, 0), 5), ("affine-a1", (0, 1), 5), ("affine-a1", (1, 1), 4)]


@pytest.mark.parametrize("name, lam, depth", CORPUS)
def test_axioms_on_corpus(name, lam, depth):
    from kmdecomp.cartan import load_cartan

    g = generate(load_cartan(name), lam, depth)
    assert check_axioms(g) == []


def test_axioms_kronecker(KRONECKER):
    g = generate(KRONECKER, (1, 0), 4)
    assert check_axioms(g) == []
    tg = tensor_graph(g, g, depth=4)
    assert check_axioms(tg) == []


@pytest.mark.parametrize("name, lam", [("sl2", (1,)), ("a2", (1, 0)), ("a2", (0, 1))])
def test_tensor_associativity(name, lam):
    from kmdecomp.cartan import load_cartan

    datum = load_cartan(name)
    g = generate(datum, lam, 6)
    left = tensor_graph(tensor_graph(g, g), g)
    right = tensor_graph(g, tensor_graph(g, g))
    assert canonical_form(left) == canonical_form(right)
    assert canonical_form(left)[1] == 0


def test_hw_count_bracket_and_order_independent(A2):
    g1, g2 = generate(A2, (1, 0), 6), generate(A2, (1, 1), 6)
    def counts(tg):
        out = {}
        for b in tg.nodes:
            if is_highest_weight(b, A2.indices):
                out[b.weight] = out.get(b.weight, 0) + 1
        return out
    assert counts(tensor_graph(g1, g2)) == counts(tensor_graph(g2, g1))


def test_dot_export(A2):
    dot = to_dot(generate(A2, (1, 0), 4))
    assert dot.count("[label=\"(") == 3
    assert '-> n1 [label="1"]' in dot
