from collections import Counter

import pytest

from kmdecomp.cartan import CartanDatum
from kmdecomp.errors import DepthTooSmall, NotUnitriangular, RankUnsupported, WeightOutOfRange
from kmdecomp.laurent import RONE, RZERO, LaurentPoly, as_rational
from kmdecomp.quantum.canonical import (_topo_order, based_irreducible, canonical_basis_tensor,
                                        change_of_basis_determinants, classify_filtration, is_unit,
                                        psi_involution, psi_matrix, psi_squared_is_identity, basis_report)
from kmdecomp.quantum.modules import IrreducibleModule, MonomialWord, TensorModule, vscale
from kmdecomp.quantum.relations import check_bar, check_relations
from kmdecomp.quantum.theta import compute_theta, theta_preserves_lattice, theta_residuals


def vp(k):
    return as_rational(LaurentPoly.monomial(k))


# -- modules --------------------------------------------------------------------

def test_weight_dims(SL2, A2):
    assert IrreducibleModule(SL2, (2,)).weight_dims() == {(2,): 1, (0,): 1, (-2,): 1}
    m = IrreducibleModule(A2, (1, 1))
    assert m.dim == 8 and m.weight_dims()[(0, 0)] == 2


def test_radical_kills_f_squared(SL2):
    m = IrreducibleModule(SL2, (1,))
    assert m.word_vector((0, 0)) == {}
    assert m.dim == 2


def test_simple_actions(SL2):
    m = IrreducibleModule(SL2, (1,))
    v = {0: RONE}
    assert m.E(0, m.F(0, v)) == v
    assert m.K((1,), v) == {0: vp(1)}
    assert m.act(MonomialWord.E((0, 1)), m.act(MonomialWord.F((0, 1)), v)) == v


def test_serre_relation_a2(A2):
    m = IrreducibleModule(A2, (1, 1))
    for k in range(m.dim):
        v = {k: RONE}
        x = m.F_power(0, 2, m.F(1, v))
        y = m.F(0, m.F(1, m.F(0, v)))
        z = m.F(1, m.F_power(0, 2, v))
        total = dict(x)
        for vec, c in ((y, -RONE), (z, RONE)):
            for key, val in vec.items():
                total[key] = total.get(key, RZERO) + c * val
        assert not any(total.values())


@pytest.mark.parametrize("lam", [(0,), (1,), (2,), (3,), (4,)])
def test_relations_sl2(SL2, lam):
    m = IrreducibleModule(SL2, lam)
    assert check_relations(m) == []
    assert check_bar(m) == []


@pytest.mark.parametrize("lam", [(1, 0), (0, 1), (1, 1), (2, 0)])
def test_relations_a2(A2, lam):
    m = IrreducibleModule(A2, lam)
    assert check_relations(m) == []
    assert check_bar(m) == []


def test_relations_tensor_and_truncated(A2, AFF):
    t = TensorModule(IrreducibleModule(A2, (1, 0)), IrreducibleModule(A2, (0, 1)))
    assert check_relations(t) == []
    assert check_relations(IrreducibleModule(AFF, (1, 0), 4)) == []


def test_module_errors(A2, AFF):
    with pytest.raises(RankUnsupported):
        IrreducibleModule(CartanDatum.from_matrix([[2, -1, 0], [-1, 2, -1], [0, -1, 2]]), (1, 0, 0))
    with pytest.raises(DepthTooSmall):
        IrreducibleModule(AFF, (1, 0))
    m = IrreducibleModule(AFF, (1, 0), 2)
    assert not m.complete
    edge = next(k for k, nu in enumerate(m.nus) if sum(nu) == 2)
    with pytest.raises(WeightOutOfRange):
        for i in (0, 1):
            m.F(i, {edge: RONE})


def test_canonical_monomials_a2(A2):
    for lam in [(1, 1), (2, 2), (2, 0)]:
        m = IrreducibleModule(A2, lam)
        assert len(m.canonical_monomials()) == m.dim


# -- Theta -----------------------------------------------------------------------

def test_theta_low_degrees(SL2):
    th = compute_theta(SL2, 4)
    assert th.terms[(0,)] == [((), (), RONE)]
    # regression value for the degree-one coefficient
    assert th.coefficient((1,), (0,), (0,)) == vp(-1) - vp(1)


@pytest.mark.parametrize("lam1, lam2", [((1,), (1,)), ((2,), (3,))])
def test_theta_residuals_sl2(SL2, lam1, lam2):
    th = compute_theta(SL2, 6)
    assert theta_residuals(th, IrreducibleModule(SL2, lam1), IrreducibleModule(SL2, lam2)) == []


def test_theta_residuals_a2(A2):
    th = compute_theta(A2, 4)
    m = IrreducibleModule(A2, (1, 1))
    assert theta_residuals(th, m, IrreducibleModule(A2, (1, 0))) == []


def test_theta_preserves_lattice(SL2, A2):
    for datum, lam in ((SL2, (1,)), (A2, (1, 0))):
        m = IrreducibleModule(datum, lam)
        basis = based_irreducible(m).elements
        assert theta_preserves_lattice(compute_theta(datum, 4), m, m, basis, basis)


# -- Psi and canonical bases -----------------------------------------------------------

def test_psi_properties(SL2):
    b = based_irreducible(IrreducibleModule(SL2, (1,)))
    t = TensorModule(b.module, b.module)
    top = t.pair_index[(0, 0)]
    assert psi_involution(b, b, {top: RONE}, tensor=t) == {top: RONE}
    cols = psi_matrix(b, b)
    assert psi_squared_is_identity(cols)
    for k in range(t.dim):
        f = vp(2) + vp(-1) * 3
        x = {k: f}
        lhs = psi_involution(b, b, x, tensor=t)
        rhs = vscale(psi_involution(b, b, {k: RONE}, tensor=t), f.bar())
        assert lhs == rhs
        assert psi_involution(b, b, psi_involution(b, b, x, tensor=t), tensor=t) == x


def test_canonical_sl2_pair(SL2):
    based = canonical_basis_tensor(SL2, [(1,), (1,)])
    assert len(based) == 4
    flat = [based.flat_coords(x) for x in based.elements]
    assert flat[0] == {(0, 0): RONE}
    for lead, coeffs, vec in zip(based.leading, flat, based.elements):
        assert coeffs[lead] == RONE
        assert based.psi(vec) == vec
        for key, c in coeffs.items():
            if key != lead:
                p = c.to_laurent()
                assert p.degree() < 0
    classes, ranks = classify_filtration(based)
    assert Counter(classes) == {(2,): 3, (0,): 1}
    assert ranks[(0,)] == (4, 4) and ranks[(2,)] == (3, 3)
    assert all(is_unit(d) for d in change_of_basis_determinants(based).values())


def test_canonical_triple_bracketing(SL2):
    def flat_set(b):
        return sorted(sorted((k, str(v)) for k, v in b.flat_coords(x).items()) for x in b.elements)
    left = canonical_basis_tensor(SL2, [(1,), (1,), (1,)], "left")
    right = canonical_basis_tensor(SL2, [(1,), (1,), (1,)], "right")
    assert len(left) == 8
    assert flat_set(left) == flat_set(right)


def test_canonical_a2_classes_match_decomposition(A2):
    from kmdecomp.character import weyl_dimension
    from kmdecomp.decomp import decompose

    based = canonical_basis_tensor(A2, [(1, 1), (1, 0)])
    classes, ranks = classify_filtration(based)
    expected = {mu: m * weyl_dimension(A2, mu) for mu, m in decompose(A2, [(1, 1), (1, 0)]).as_dict().items()}
    assert dict(Counter(classes)) == expected
    assert all(r == d for r, d in ranks.values())
    # top pure tensor is always in the top class
    top = based.leading.index((0, 0))
    assert classes[top] == (2, 1)


def test_report_shape(SL2):
    based = canonical_basis_tensor(SL2, [(1,), (2,)])
    classes, _ = classify_filtration(based)
    rep = basis_report(based, classes)
    assert rep[0] == {"leading": [0, 0], "coeffs": {"0,0": "1"}, "class": "(3)"}


def test_topological_order_detects_cycles():
    a = {(0,): {(0,): RONE, (1,): vp(-1)}, (1,): {(1,): RONE, (0,): vp(-1)}}
    with pytest.raises(NotUnitriangular):
        _topo_order(a, key=lambda n: n)
    with pytest.raises(NotUnitriangular):
        _topo_order({(0,): {(0,): vp(1)}}, key=lambda n: n)
