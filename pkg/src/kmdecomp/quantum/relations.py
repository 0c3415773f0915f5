"""Defining relations of U checked as exact identities on a built module."""

from __future__ import annotations

import itertools

from ..errors import WeightOutOfRange
from ..laurent import RONE, LaurentPoly, as_rational, qfactorial
from .modules import IrreducibleModule, WeightModule, vadd, vbar, vscale

__all__ = ["check_relations", "check_bar"]


def _sub(a, b):
    out = dict(a)
    vadd(out, b, -RONE)
    return out


def _vp(k):
    return as_rational(LaurentPoly.monomial(k))


def _apply(module, ops, vec):
    """Apply a sequence of operators (rightmost first); None if the truncation is left."""
    try:
        for op in reversed(ops):
            vec = op(vec)
        return vec
    except WeightOutOfRange:
        return None


def check_relations(module: WeightModule) -> list[str]:
    """Failures of relations (a)-(f), the divided-power law and the integrability
    relation on the highest-weight vector.

    Vectors where an operator leaves a truncated module are skipped.
    """
    datum = module.datum
    r = datum.rank
    bad: list[str] = []
    units = [tuple(s if j == i else 0 for j in range(r)) for i in range(r) for s in (1, -1)]
    Ks = [(0,) * r] + units
    E = lambda i: (lambda x: module.E(i, x))
    F = lambda i: (lambda x: module.F(i, x))
    K = lambda mu: (lambda x: module.K(mu, x))
    Ep = lambda i, p: (lambda x: module.E_power(i, p, x) if p else x)
    Fp = lambda i, p: (lambda x: module.F_power(i, p, x) if p else x)
    denom = RONE / (_vp(1) - _vp(-1))

    def pairing(nu, i):
        return sum(n * datum.a(j, i) for j, n in enumerate(nu))

    for k in range(module.dim):
        v = {k: RONE}
        # (a)
        if module.K((0,) * r, v) != v:
            bad.append(f"(a) K_0 != 1 on e_{k}")
        for a, b in itertools.product(Ks, Ks):
            ab = tuple(x + y for x, y in zip(a, b))
            if module.K(a, module.K(b, v)) != module.K(ab, v):
                bad.append(f"(a) K_{a} K_{b} != K_{ab} on e_{k}")
        for i in range(r):
            for nu in units:
                # (b), (c)
                lhs = _apply(module, [K(nu), E(i)], v)
                rhs = _apply(module, [E(i), K(nu)], v)
                if lhs is not None and rhs is not None and lhs != vscale(rhs, _vp(pairing(nu, i))):
                    bad.append(f"(b) fails for K_{nu}, E_{i} on e_{k}")
                lhs = _apply(module, [K(nu), F(i)], v)
                rhs = _apply(module, [F(i), K(nu)], v)
                if lhs is not None and rhs is not None and lhs != vscale(rhs, _vp(-pairing(nu, i))):
                    bad.append(f"(c) fails for K_{nu}, F_{i} on e_{k}")
            for j in range(r):
                # (d)
                ef = _apply(module, [E(i), F(j)], v)
                fe = _apply(module, [F(j), E(i)], v)
                if ef is None or fe is None:
                    continue
                lhs = _sub(ef, fe)
                rhs = {}
                if i == j:
                    ki = tuple(1 if t == i else 0 for t in range(r))
                    kmi = tuple(-x for x in ki)
                    rhs = vscale(_sub(module.K(ki, v), module.K(kmi, v)), denom)
                if lhs != rhs:
                    bad.append(f"(d) fails for E_{i} F_{j} on e_{k}")
                if i == j:
                    continue
                # (e), (f)
                n = 1 - datum.a(i, j)
                se, sf, ok = {}, {}, True
                for p in range(n + 1):
                    q = n - p
                    xe = _apply(module, [Ep(i, p), E(j), Ep(i, q)], v)
                    xf = _apply(module, [Fp(i, p), F(j), Fp(i, q)], v)
                    if xe is None or xf is None:
                        ok = False
                        break
                    vadd(se, xe, RONE if p % 2 == 0 else -RONE)
                    vadd(sf, xf, RONE if p % 2 == 0 else -RONE)
                if ok and se:
                    bad.append(f"(e) Serre relation fails for ({i},{j}) on e_{k}")
                if ok and sf:
                    bad.append(f"(f) Serre relation fails for ({i},{j}) on e_{k}")
        # divided powers: [p]! F_i^(p) = F_i^p
        for i in range(r):
            for p in range(1, 4):
                plain = _apply(module, [F(i)] * p, v)
                div = _apply(module, [Fp(i, p)], v)
                if plain is None or div is None:
                    continue
                if vscale(div, as_rational(qfactorial(p))) != plain:
                    bad.append(f"divided power F_{i}^({p}) fails on e_{k}")
                plain = _apply(module, [E(i)] * p, v)
                div = _apply(module, [Ep(i, p)], v)
                if plain is not None and div is not None and vscale(div, as_rational(qfactorial(p))) != plain:
                    bad.append(f"divided power E_{i}^({p}) fails on e_{k}")
    if isinstance(module, IrreducibleModule):
        # F_i^(<h_i, lambda> + 1) kills the highest-weight vector
        for i in range(r):
            n = module.lam[i] + 1
            if _apply(module, [F(i)] * n, {0: RONE}):
                bad.append(f"F_{i}^{n} v_lambda != 0")
    return bad


def check_bar(module: IrreducibleModule, max_len: int = 3) -> list[str]:
    """bar^2 = 1, bar(v) = v, and bar(F_w v) = F_w v for every index word of length <= max_len."""
    bad = []
    for k in range(module.dim):
        x = {k: _vp(1) + _vp(-3)}
        if vbar(vbar(x)) != x:
            bad.append(f"bar^2 != 1 on e_{k}")
    if vbar({0: RONE}) != {0: RONE}:
        bad.append("bar moves the highest-weight vector")
    for n in range(1, max_len + 1):
        for w in itertools.product(range(module.datum.rank), repeat=n):
            try:
                vec = module.word_vector(w)
            except WeightOutOfRange:
                continue
            if vbar(vec) != vec:
                bad.append(f"bar(F_{w} v) != F_{w} v")
    return bad
