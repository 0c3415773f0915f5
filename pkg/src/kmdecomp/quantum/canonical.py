"""Canonical bases of tensor products and their filtration classes.

For based modules (M, B) and (M', B') the involution on M (x) M' is
``Psi(m (x) m') = Theta(psi_M(m) (x) psi_M'(m'))``; for M = L(lambda) the
involution psi_M is the coordinatewise bar; for a tensor it is its own Psi.  Writing
``Psi(b_j) = sum_i A_ij b_i`` on pure tensors b_i of B (x) B', the canonical
element attached to b_k is ``sum_i p_i b_i`` with ``p_k = 1``,
``p_i in v^-1 Z[v^-1]`` otherwise, solved by the triangular recursion

    p_i - bar(p_i) = sum_{j after i} A_ij bar(p_j).

The processing order is a topological order of the support of A, with
ties broken by height of nu and then by index; A must be unitriangular in
that order, and this is checked rather than assumed.
"""

from __future__ import annotations

import heapq
import json
from dataclasses import dataclass, field
from typing import Sequence

from ..cartan import CartanDatum, dominance_diff, height
from ..errors import (DepthTooSmall, FiniteTypeOnly, KMDecompError, LatticeViolation,
                      NotUnitriangular)
from ..laurent import RONE, RZERO, LaurentPoly, RationalFn, as_rational, in_lattice_A, render
from ..linalg import determinant, inverse, kernel, rank
from .modules import IrreducibleModule, TensorModule, WeightModule, vadd, vbar
from .theta import ThetaExpansion, apply_theta, compute_theta

__all__ = [
    "LatticeCoords",
    "BasedModule",
    "based_irreducible",
    "tensor_based",
    "canonical_basis_tensor",
    "psi_matrix",
    "psi_involution",
    "classify_filtration",
    "filtration_subspaces",
    "basis_report",
    "theta_for",
    "change_of_basis_determinants",
    "is_unit",
]


class LatticeCoords:
    """Coordinates with respect to a weight-homogeneous basis given as vectors."""

    def __init__(self, module: WeightModule, basis: Sequence[dict]):
        self.module = module
        self.basis = list(basis)
        self._by_nu: dict = {}
        for j, vec in enumerate(self.basis):
            nu = module.nus[next(iter(vec))]
            self._by_nu.setdefault(nu, []).append(j)
        self._inv = {}
        for nu, js in self._by_nu.items():
            idx = module.block(nu)
            q = [[self.basis[j].get(k, RZERO) for j in js] for k in idx]
            if len(js) != len(idx):
                raise KMDecompError(f"basis has {len(js)} vectors in a {len(idx)}-dimensional space")
            self._inv[nu] = inverse(q)
        self._cache: dict = {}

    def of_basis_vector(self, k: int) -> dict:
        """Coordinates of the module basis vector e_k."""
        hit = self._cache.get(k)
        if hit is not None:
            return hit
        nu = self.module.nus[k]
        js = self._by_nu[nu]
        col = self.module.block(nu).index(k)
        inv = self._inv[nu]
        out = {j: inv[r][col] for r, j in enumerate(js) if inv[r][col]}
        self._cache[k] = out
        return out

    def coords(self, vec: dict) -> dict:
        out: dict = {}
        for k, c in vec.items():
            vadd(out, self.of_basis_vector(k), c)
        return out

    def pair_coords(self, other: "LatticeCoords", vec: dict) -> dict:
        """Coordinates of a pair-indexed vector in the pure tensors of the two bases."""
        out: dict = {}
        for (p, q), c in vec.items():
            for a, x in self.of_basis_vector(p).items():
                for b, y in other.of_basis_vector(q).items():
                    vadd(out, {(a, b): c * x * y})
        return out


@dataclass
class BasedModule:
    """A module with a distinguished bar-invariant basis and its involution.

    ``psi_basis(k)`` returns psi applied to the module basis vector e_k;
    ``leading[j]`` is the flat tuple of leaf indices of element j's leading
    pure tensor.
    """

    module: WeightModule
    elements: list
    leading: list
    psi_cols: list | None = None  # None means psi = coordinatewise bar
    p_coeffs: list | None = None  # per element: {(a, b): p} over factor pure tensors
    factors: tuple = ()
    coordinates: LatticeCoords = field(init=False)

    def __post_init__(self):
        self.coordinates = LatticeCoords(self.module, self.elements)

    def psi(self, vec: dict) -> dict:
        if self.psi_cols is None:
            return vbar(vec)
        out: dict = {}
        for k, c in vec.items():
            vadd(out, self.psi_cols[k], c.bar())
        return out

    def flat_coords(self, vec: dict) -> dict:
        """Coordinates in pure tensors of the leaf canonical bases, keyed by flat tuples."""
        if not self.factors:
            return {(j,): c for j, c in self.coordinates.coords(vec).items()}
        b1, b2 = self.factors
        mod = self.module
        out: dict = {}
        for k, c in vec.items():
            p, q = mod.pairs[k]
            for s, x in b1.flat_coords({p: RONE}).items():
                for t, y in b2.flat_coords({q: RONE}).items():
                    vadd(out, {s + t: c * x * y})
        return out

    def __len__(self):
        return len(self.elements)


def based_irreducible(module: IrreducibleModule) -> BasedModule:
    elems = [vec for _, vec in module.canonical_monomials()]
    return BasedModule(module, elems, [(j,) for j in range(len(elems))])


def theta_for(m1: WeightModule, m2: WeightModule, depth: int | None = None) -> ThetaExpansion:
    """Theta truncated where it stops acting: the smaller of the two weight spreads."""
    if not (m1.complete and m2.complete):
        raise DepthTooSmall("Psi needs both factors in full")
    need = min(m1.max_height(), m2.max_height())
    if depth is None:
        depth = need
    elif depth < need:
        raise DepthTooSmall(f"Theta depth {depth} < weight spread {need}")
    return compute_theta(m1.datum, depth)


def _psi_pairs(b1: BasedModule, b2: BasedModule, theta: ThetaExpansion, pairvec: dict) -> dict:
    """Theta (psi_1 (x) psi_2) applied to a pair-indexed vector."""
    pre: dict = {}
    for (p, q), c in pairvec.items():
        cb = c.bar()
        for p2, a in b1.psi({p: RONE}).items():
            for q2, b in b2.psi({q: RONE}).items():
                vadd(pre, {(p2, q2): a * b * cb})
    return apply_theta(theta, b1.module, b2.module, pre)


def _to_pairs(t: TensorModule, vec: dict) -> dict:
    return {t.pairs[k]: c for k, c in vec.items()}


def _from_pairs(t: TensorModule, vec: dict) -> dict:
    return {t.pair_index[pq]: c for pq, c in vec.items()}


def psi_involution(b1: BasedModule, b2: BasedModule, vec: dict, theta: ThetaExpansion | None = None,
                   tensor: TensorModule | None = None) -> dict:
    """Psi on M1 (x) M2, for a vector in TensorModule coordinates."""
    t = tensor or TensorModule(b1.module, b2.module)
    theta = theta or theta_for(b1.module, b2.module)
    return _from_pairs(t, _psi_pairs(b1, b2, theta, _to_pairs(t, vec)))


def psi_matrix(b1: BasedModule, b2: BasedModule, theta: ThetaExpansion | None = None) -> dict:
    """A with Psi(b_j) = sum_i A_ij b_i on pure tensors, as {j: {i: A_ij}}; i, j pairs (a, b)."""
    theta = theta or theta_for(b1.module, b2.module)
    cols = {}
    for a, x in enumerate(b1.elements):
        for b, y in enumerate(b2.elements):
            pv = {}
            for p, s in x.items():
                for q, u in y.items():
                    vadd(pv, {(p, q): s * u})
            img = _psi_pairs(b1, b2, theta, pv)
            cols[(a, b)] = b1.coordinates.pair_coords(b2.coordinates, img)
    return cols


def psi_squared_is_identity(cols: dict) -> bool:
    """A bar(A) = I."""
    for j, col in cols.items():
        # (A bar(A))_{ij} = sum_m A_im bar(A_mj)
        acc: dict = {}
        for m, c in col.items():
            for i, x in cols[m].items():
                vadd(acc, {i: x * c.bar()})
        if acc != {j: RONE}:
            return False
    return True


def _topo_order(cols: dict, key) -> list:
    """Order in which A is upper unitriangular; NotUnitriangular on a cycle."""
    nodes = list(cols)
    succ = {n: set() for n in nodes}
    indeg = {n: 0 for n in nodes}
    for j, col in cols.items():
        if col.get(j) != RONE:
            raise NotUnitriangular(f"Psi matrix diagonal entry at {j} is {col.get(j, RZERO)}, not 1")
        for i in col:
            if i != j and j not in succ[i]:
                succ[i].add(j)  # i must come before j
                indeg[j] += 1
    heap = [(key(n), n) for n in nodes if indeg[n] == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        _, n = heapq.heappop(heap)
        order.append(n)
        for m in succ[n]:
            indeg[m] -= 1
            if indeg[m] == 0:
                heapq.heappush(heap, (key(m), m))
    if len(order) != len(nodes):
        raise NotUnitriangular("support of the Psi matrix contains a cycle")
    return order


def _negative_part(p: LaurentPoly) -> LaurentPoly:
    return LaurentPoly({e: c for e, c in p.items() if e < 0})


def tensor_based(b1: BasedModule, b2: BasedModule, depth: int | None = None) -> BasedModule:
    """The based module (M1 (x) M2, B1 <> B2)."""
    m1, m2 = b1.module, b2.module
    theta = theta_for(m1, m2, depth)
    t = TensorModule(m1, m2)
    cols = psi_matrix(b1, b2, theta)
    if not psi_squared_is_identity(cols):
        raise KMDecompError("Psi is not an involution on the pure tensors")

    def key(ab):
        a, b = ab
        nu = tuple(x + y for x, y in zip(m1.nus[next(iter(b1.elements[a]))],
                                          m2.nus[next(iter(b2.elements[b]))]))
        return (height(nu), nu, ab)

    order = _topo_order(cols, key)
    pos = {n: k for k, n in enumerate(order)}
    rows: dict = {}
    for j, col in cols.items():
        for i, c in col.items():
            rows.setdefault(i, {})[j] = c
    elements, leading, pcs = [], [], []
    for k in order:
        p = {k: RONE}
        for i in reversed(order[:pos[k]]):
            r = RZERO
            for j, c in rows.get(i, {}).items():
                if j in p and pos[j] > pos[i]:
                    r = r + c * p[j].bar()
            if not r:
                continue
            if not r.is_laurent():
                raise LatticeViolation(f"correction at {i} for {k} is not a Laurent polynomial: {r}")
            rl = r.to_laurent()
            if rl.bar() != -rl:
                raise LatticeViolation(f"correction at {i} for {k} is not anti-invariant: {rl}")
            neg = _negative_part(rl)
            if neg:
                p[i] = as_rational(neg)
        vec: dict = {}
        for (a, b), c in p.items():
            for pp, s in b1.elements[a].items():
                for qq, u in b2.elements[b].items():
                    vadd(vec, {t.pair_index[(pp, qq)]: c * s * u})
        for (a, b), c in p.items():
            if (a, b) != k and not in_lattice_A(c, strict=True):
                raise LatticeViolation(f"coefficient {c} escapes v^-1 Z[v^-1]")
        elements.append(vec)
        leading.append(b1.leading[k[0]] + b2.leading[k[1]])
        pcs.append(p)
    psi_cols = [_from_pairs(t, _psi_pairs(b1, b2, theta, {t.pairs[k]: RONE})) for k in range(t.dim)]
    out = BasedModule(t, elements, leading, psi_cols=psi_cols, p_coeffs=pcs, factors=(b1, b2))
    for vec in elements:
        if out.psi(vec) != vec:
            raise KMDecompError("computed canonical element is not Psi-fixed")
    return out


def canonical_basis_tensor(datum: CartanDatum, lambdas, bracketing: str = "left",
                           depth: int | None = None) -> BasedModule:
    """B(lambda^1) <> ... <> B(lambda^N), folding two factors at a time.

    ``bracketing='left'`` builds ((L1 L2) L3 ...), ``'right'`` builds
    (L1 (L2 (L3 ...))).
    """
    mods = [based_irreducible(IrreducibleModule(datum, lam)) for lam in lambdas]
    if len(mods) == 1:
        return mods[0]
    if bracketing == "left":
        out = mods[0]
        for b in mods[1:]:
            out = tensor_based(out, b, depth)
        return out
    if bracketing != "right":
        raise ValueError("bracketing must be 'left' or 'right'")
    out = mods[-1]
    for b in reversed(mods[:-1]):
        out = tensor_based(b, out, depth)
    return out


# -- filtration -------------------------------------------------------------------

def _dense(module, vec, nu):
    return [vec.get(k, RZERO) for k in module.block(nu)]


def _sparse(module, dense, nu):
    return {k: c for k, c in zip(module.block(nu), dense) if c}


def highest_weight_vectors(module: WeightModule) -> dict:
    """nu -> basis (as vectors) of the joint kernel of all E_i in that weight space."""
    out = {}
    r = module.datum.rank
    for nu in module.spaces():
        rows = []
        for i in range(r):
            down = tuple(n - (1 if j == i else 0) for j, n in enumerate(nu))
            if min(down) < 0 or not module.block(down):
                continue
            rows.extend(module.block_matrix(lambda x, i=i: module.E(i, x), nu, down))
        dim = len(module.block(nu))
        if rows:
            ker = kernel(rows, dim)
        else:
            ker = [[RONE if a == b else RZERO for a in range(dim)] for b in range(dim)]
        if ker:
            out[nu] = [_sparse(module, v, nu) for v in ker]
    return out


def _generate(module: WeightModule, seeds: list) -> dict:
    """Submodule generated by highest-weight seeds: nu -> independent dense vectors."""
    span: dict = {}
    queue = list(seeds)
    r = module.datum.rank
    while queue:
        vec = queue.pop()
        if not vec:
            continue
        nu = module.nus[next(iter(vec))]
        cur = span.setdefault(nu, [])
        d = _dense(module, vec, nu)
        if rank(cur + [d]) == len(cur):
            continue
        cur.append(d)
        for i in range(r):
            queue.append(module.F(i, vec))
    return span


def filtration_subspaces(module: WeightModule) -> dict:
    """hw weight mu' -> spans of the submodule generated by hw vectors of weight mu'."""
    hw = highest_weight_vectors(module)
    out = {}
    for nu, vecs in hw.items():
        mu = module.weight_of(nu)
        out[mu] = _generate(module, vecs)
    return out


def _ge(datum, a, b) -> bool:
    return dominance_diff(datum, a, b) is not None


def _span_at(parts, nu):
    rows = []
    for sp in parts:
        rows.extend(sp.get(nu, []))
    return rows


def classify_filtration(based: BasedModule) -> list:
    """Filtration class of each canonical element: the maximal dominant mu with b in M[>=mu].

    Also returns, per candidate mu, ``(rank of B cap M[>=mu], dim M[>=mu])``.
    """
    module = based.module
    datum = module.datum
    if not datum.finite_type:
        raise FiniteTypeOnly("filtration classes need a finite-type datum")
    if not module.complete:
        raise DepthTooSmall("filtration classes need the full module")
    gens = filtration_subspaces(module)
    candidates = sorted({module.weight_of(nu) for nu in module.blocks
                         if datum.is_dominant(module.weight_of(nu))})
    ge_parts = {mu: [sp for mu2, sp in gens.items() if _ge(datum, mu2, mu)] for mu in candidates}

    def member(vec, mu):
        nu = module.nus[next(iter(vec))]
        rows = _span_at(ge_parts[mu], nu)
        if not rows:
            return False
        return rank(rows + [_dense(module, vec, nu)]) == rank(rows)

    classes = []
    for vec in based.elements:
        inside = [mu for mu in candidates if member(vec, mu)]
        maximal = [mu for mu in inside if not any(m2 != mu and _ge(datum, m2, mu) for m2 in inside)]
        if len(maximal) != 1:
            raise KMDecompError(f"no unique maximal filtration weight (candidates {maximal})")
        classes.append(maximal[0])
    ranks = {}
    for mu in candidates:
        members = [vec for vec in based.elements if member(vec, mu)]
        dim_sub = sum(rank(_span_at(ge_parts[mu], nu)) for nu in module.blocks)
        by_nu: dict = {}
        for vec in members:
            nu = module.nus[next(iter(vec))]
            by_nu.setdefault(nu, []).append(_dense(module, vec, nu))
        rk = sum(rank(rows) for rows in by_nu.values())
        ranks[mu] = (rk, dim_sub)
    return classes, ranks


def _fmt(w):
    return "(" + ",".join(str(x) for x in w) + ")"


def basis_report(based: BasedModule, classes: list | None = None) -> list:
    """JSON-ready [{leading, coeffs, class}] with coefficients over leaf pure tensors."""
    out = []
    for j, vec in enumerate(based.elements):
        coeffs = based.flat_coords(vec)
        entry = {
            "leading": list(based.leading[j]),
            "coeffs": {",".join(str(x) for x in key): render(c.to_laurent()) if c.is_laurent() else str(c)
                       for key, c in sorted(coeffs.items())},
        }
        if classes is not None:
            entry["class"] = _fmt(classes[j])
        out.append(entry)
    return out


def change_of_basis_determinants(based: BasedModule) -> dict:
    """nu -> det of the p-matrix from pure tensors to canonical elements in that weight space."""
    if based.p_coeffs is None:
        return {}
    b1, b2 = based.factors
    groups: dict = {}
    for k, p in enumerate(based.p_coeffs):
        nu = based.module.nus[next(iter(based.elements[k]))]
        groups.setdefault(nu, []).append(p)
    out = {}
    for nu, ps in groups.items():
        keys = sorted({ab for p in ps for ab in p})
        if len(keys) != len(ps):
            raise KMDecompError(f"canonical elements at nu={nu} do not match the pure tensors")
        out[nu] = determinant([[p.get(ab, RZERO) for ab in keys] for p in ps])
    return out


def is_unit(c: RationalFn) -> bool:
    """True for +-v^k."""
    if not c.is_laurent():
        return False
    p = c.to_laurent()
    return len(p.items()) == 1 and abs(next(iter(p.items()))[1]) == 1
