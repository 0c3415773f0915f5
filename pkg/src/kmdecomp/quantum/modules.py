"""Exact weight modules of U_v(g) at rank <= 2.

Conventions used throughout the algebraic layer:

* ``K_mu`` (mu in the root lattice) acts on weight w by ``v^{sum_j mu_j w_j}``;
* coproduct ``D(E_i) = E_i (x) K_i + 1 (x) E_i`` and
  ``D(F_i) = F_i (x) 1 + K_{-i} (x) F_i``;
* the bar involution fixes E_i, F_i, inverts K_mu and sends v to v^-1.

``L(lambda)`` is the Verma module modulo the radical of its contravariant
form, with ``<F_i x, y> = <x, E_i y>`` and ``<v, v> = 1``.  Basis vectors are
words ``F_{j1} ... F_{jm} v`` (stored as the tuple ``(j1, ..., jm)``), so the
basis is bar-invariant and the module bar involution acts on coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from ..cartan import CartanDatum, DimVector, Weight, dim_vectors, height, wt
from ..errors import (DepthTooSmall, KMDecompError, NotDominant, RankUnsupported,
                      WeightOutOfRange)
from ..laurent import RONE, RZERO, LaurentPoly, RationalFn, as_rational, qfactorial, qint
from ..linalg import inverse, mat_vec, rank, row_space_basis

__all__ = [
    "MonomialWord",
    "WeightModule",
    "IrreducibleModule",
    "TensorModule",
    "Vector",
    "vadd",
    "vscale",
    "vbar",
    "is_zero_vector",
]

Vector = dict  # basis index -> RationalFn, zero entries absent


def vadd(acc: dict, vec: dict, scale=RONE) -> dict:
    for k, c in vec.items():
        t = acc.get(k, RZERO) + c * scale
        if t:
            acc[k] = t
        else:
            acc.pop(k, None)
    return acc


def vscale(vec: dict, c) -> dict:
    c = as_rational(c)
    if not c:
        return {}
    return {k: x * c for k, x in vec.items()}


def vbar(vec: dict) -> dict:
    return {k: x.bar() for k, x in vec.items()}


def is_zero_vector(vec: dict) -> bool:
    return not any(vec.values())


def _vpow(k: int) -> RationalFn:
    return as_rational(LaurentPoly.monomial(k))


@dataclass(frozen=True)
class MonomialWord:
    """A product of divided powers, written left to right (rightmost acts first).

    ``letters`` holds ``(kind, i, power)`` with ``kind`` in ``{"E", "F"}``.
    """

    letters: tuple

    @classmethod
    def F(cls, *pairs) -> "MonomialWord":
        return cls(tuple(("F", i, a) for i, a in pairs))

    @classmethod
    def E(cls, *pairs) -> "MonomialWord":
        return cls(tuple(("E", i, a) for i, a in pairs))

    def __post_init__(self):
        for kind, i, a in self.letters:
            if kind not in ("E", "F") or a < 1:
                raise ValueError(f"bad monomial letter {(kind, i, a)}")

    def root_change(self, rank: int) -> DimVector:
        """Change in nu (drop) caused by the word: F adds, E subtracts."""
        out = [0] * rank
        for kind, i, a in self.letters:
            out[i] += a if kind == "F" else -a
        return tuple(out)

    def __str__(self):
        parts = []
        for kind, i, a in self.letters:
            parts.append(f"{kind}{i + 1}" + (f"^({a})" if a > 1 else ""))
        return "".join(parts) or "1"


class WeightModule:
    """A weight module with a finite basis indexed 0..dim-1.

    Subclasses fill ``nus`` (drop of each basis vector below ``top``),
    ``labels`` and the sparse operator columns ``_E[i][k]``/``_F[i][k]``;
    a ``None`` column marks an action leaving the truncated range.
    """

    datum: CartanDatum
    top: Weight
    nus: list
    labels: list
    depth: int | None
    complete: bool

    def _index(self):
        self.blocks: dict = {}
        for k, nu in enumerate(self.nus):
            self.blocks.setdefault(nu, []).append(k)
        self._pos = {}
        for nu, idx in self.blocks.items():
            for p, k in enumerate(idx):
                self._pos[k] = p

    # -- size and grading -----------------------------------------------------
    @property
    def dim(self) -> int:
        return len(self.nus)

    def spaces(self) -> list:
        return sorted(self.blocks, key=lambda nu: (height(nu), nu))

    def block(self, nu) -> list[int]:
        return self.blocks.get(tuple(nu), [])

    def weight_of(self, nu) -> Weight:
        return wt(self.datum, [self.top], nu)

    def weight(self, k: int) -> Weight:
        return self.weight_of(self.nus[k])

    def max_height(self) -> int:
        return max(height(nu) for nu in self.nus)

    def weight_dims(self) -> dict:
        return {self.weight_of(nu): len(idx) for nu, idx in sorted(self.blocks.items())}

    # -- action ---------------------------------------------------------------
    def _col(self, table, i, k, what):
        col = table[i][k]
        if col is None:
            raise WeightOutOfRange(f"{what}_{i} on basis vector {k} leaves the truncated module")
        return col

    def E(self, i: int, vec: dict) -> dict:
        out: dict = {}
        for k, c in vec.items():
            vadd(out, self._col(self._E, i, k, "E"), c)
        return out

    def F(self, i: int, vec: dict) -> dict:
        out: dict = {}
        for k, c in vec.items():
            vadd(out, self._col(self._F, i, k, "F"), c)
        return out

    def K(self, mu: Sequence[int], vec: dict) -> dict:
        """K_mu for mu in the root lattice (e.g. unit vectors for K_i)."""
        out = {}
        for k, c in vec.items():
            w = self.weight(k)
            out[k] = c * _vpow(sum(m * x for m, x in zip(mu, w)))
        return out

    def E_power(self, i: int, r: int, vec: dict) -> dict:
        """Divided power E_i^(r)."""
        for _ in range(r):
            vec = self.E(i, vec)
        return vscale(vec, RONE / as_rational(qfactorial(r)))

    def F_power(self, i: int, r: int, vec: dict) -> dict:
        for _ in range(r):
            vec = self.F(i, vec)
        return vscale(vec, RONE / as_rational(qfactorial(r)))

    def act(self, word: "MonomialWord | tuple", vec: dict) -> dict:
        """Apply a monomial word, or ``("K", mu)`` for a Cartan element."""
        if isinstance(word, tuple) and word and word[0] == "K":
            return self.K(word[1], vec)
        for kind, i, a in reversed(word.letters):
            vec = self.E_power(i, a, vec) if kind == "E" else self.F_power(i, a, vec)
        return vec

    def e_word(self, word: Sequence[int], vec: dict) -> dict:
        """E_{w1} ... E_{wm} applied to vec (rightmost first)."""
        for i in reversed(word):
            vec = self.E(i, vec)
            if not vec:
                break
        return vec

    def f_word(self, word: Sequence[int], vec: dict) -> dict:
        for i in reversed(word):
            vec = self.F(i, vec)
            if not vec:
                break
        return vec

    def basis_vector(self, k: int) -> dict:
        return {k: RONE}

    def bar(self, vec: dict) -> dict:
        """Coordinatewise bar (the basis is made of bar-invariant vectors)."""
        return vbar(vec)

    # -- dense blocks for checks ----------------------------------------------
    def block_matrix(self, op, src_nu, tgt_nu) -> list[list[RationalFn]]:
        """Matrix of a linear map ``op(vec) -> vec`` from one weight space to another."""
        src = self.block(src_nu)
        tgt = self.block(tgt_nu)
        pos = {k: p for p, k in enumerate(tgt)}
        m = [[RZERO] * len(src) for _ in tgt]
        for c, k in enumerate(src):
            for j, x in op({k: RONE}).items():
                if j not in pos:
                    raise KMDecompError(f"operator output left the target weight space at {j}")
                m[pos[j]][c] = x
        return m

    def has_F(self, i: int, k: int) -> bool:
        return self._F[i][k] is not None


@lru_cache(maxsize=64)
def _gram_factory(datum: CartanDatum, lam: Weight):
    a = datum.gcm

    @lru_cache(maxsize=None)
    def gram(u: tuple, w: tuple) -> LaurentPoly:
        """<F_u v, F_w v> by peeling the first letter of u onto w."""
        if not u:
            return LaurentPoly(1) if not w else LaurentPoly(0)
        i = u[0]
        total = LaurentPoly(0)
        # E_i F_{w1}...F_{wm} v = sum_k [lam_i - sum_{l>k} a_{i,w_l}] F_{w without k} v
        tail = 0
        for k in range(len(w) - 1, -1, -1):
            if w[k] == i:
                c = lam[i] - tail
                if c:
                    g = gram(u[1:], w[:k] + w[k + 1:])
                    if g:
                        total = total + qint(c) * g
            tail += a[i][w[k]]
        return total

    return gram


class IrreducibleModule(WeightModule):
    """L(lambda) from the Verma module modulo the contravariant radical.

    With ``depth`` given, only weight spaces with height(nu) <= depth are
    built; F out of the top layer then raises WeightOutOfRange.
    """

    MAX_RANK = 2

    def __init__(self, datum: CartanDatum, lam: Sequence[int], depth: int | None = None):
        if datum.rank > self.MAX_RANK:
            raise RankUnsupported(f"the algebraic layer is limited to rank <= {self.MAX_RANK}")
        lam = tuple(int(x) for x in lam)
        if len(lam) != datum.rank:
            raise ValueError(f"weight {lam} has wrong arity for rank {datum.rank}")
        if not datum.is_dominant(lam):
            raise NotDominant(f"{lam} is not dominant")
        if depth is None and not datum.finite_type:
            raise DepthTooSmall("an infinite-dimensional module needs an explicit depth")
        if depth is not None and depth < 0:
            raise DepthTooSmall("depth must be non-negative")
        self.datum = datum
        self.lam = lam
        self.top = lam
        self._gram = _gram_factory(datum, lam)
        zero = (0,) * datum.rank
        self.words: dict = {zero: [()]}
        self._ginv: dict = {zero: [[RONE]]}
        h = 0
        complete = True
        while True:
            h += 1
            if depth is not None and h > depth:
                # decide whether anything lives above the cut
                complete = not self._layer_nonzero(h)
                break
            if not self._build_layer(h):
                break
        self.depth = depth
        self.complete = complete
        self.nus, self.labels = [], []
        self._word_index = {}
        for nu in sorted(self.words, key=lambda n: (height(n), n)):
            for w in self.words[nu]:
                self._word_index[(nu, w)] = len(self.nus)
                self.nus.append(nu)
                self.labels.append((w,))
        self._index()
        self._build_tables()

    # -- construction --------------------------------------------------------
    def _candidates(self, nu):
        out = []
        for i in range(self.datum.rank):
            if nu[i] == 0:
                continue
            prev = tuple(n - (1 if j == i else 0) for j, n in enumerate(nu))
            for w in self.words.get(prev, []):
                out.append((i,) + w)
        return out

    def _layer_nonzero(self, h) -> bool:
        for nu in dim_vectors(self.datum.rank, h):
            if height(nu) != h:
                continue
            cands = self._candidates(nu)
            if any(self._gram(w, w) for w in cands):
                return True
            if cands and rank([[self._gram(a, b) for b in cands] for a in cands]):
                return True
        return False

    def _build_layer(self, h) -> bool:
        found = False
        for nu in dim_vectors(self.datum.rank, h):
            if height(nu) != h:
                continue
            cands = self._candidates(nu)
            if not cands:
                continue
            g = [[as_rational(self._gram(a, b)) for b in cands] for a in cands]
            chosen = row_space_basis(g)
            if not chosen:
                continue
            basis = [cands[k] for k in chosen]
            self.words[nu] = basis
            self._ginv[nu] = inverse([[g[a][b] for b in chosen] for a in chosen])
            found = True
        return found

    def coords(self, nu, pairing: Sequence) -> dict:
        """Vector at nu whose form against the basis words is ``pairing``."""
        nu = tuple(nu)
        c = mat_vec(self._ginv[nu], [as_rational(x) for x in pairing])
        return {self._word_index[(nu, w)]: x for w, x in zip(self.words[nu], c) if x}

    def word_vector(self, word: Sequence[int]) -> dict:
        """Coordinates of F_{word} v (zero if the word's weight space is empty)."""
        word = tuple(word)
        nu = [0] * self.datum.rank
        for i in word:
            nu[i] += 1
        nu = tuple(nu)
        if nu not in self.words:
            if self.depth is not None and height(nu) > self.depth and not self.complete:
                raise WeightOutOfRange(f"F-word {word} leaves the truncated module")
            return {}
        return self.coords(nu, [self._gram(b, word) for b in self.words[nu]])

    def _shift(self, nu, i, d):
        return tuple(n + (d if j == i else 0) for j, n in enumerate(nu))

    def _build_tables(self):
        r = self.datum.rank
        self._E = [[None] * self.dim for _ in range(r)]
        self._F = [[None] * self.dim for _ in range(r)]
        for k, nu in enumerate(self.nus):
            (w,) = self.labels[k]
            for i in range(r):
                up = self._shift(nu, i, +1)
                if up in self.words:
                    self._F[i][k] = self.coords(up, [self._gram(b, (i,) + w) for b in self.words[up]])
                elif self.depth is None or height(up) <= self.depth or self.complete:
                    self._F[i][k] = {}
                down = self._shift(nu, i, -1)
                if nu[i] and down in self.words:
                    self._E[i][k] = self.coords(down, [self._gram((i,) + b, w) for b in self.words[down]])
                else:
                    self._E[i][k] = {}

    # -- divided powers from the form ----------------------------------------
    def F_power(self, i: int, r: int, vec: dict) -> dict:
        """F_i^(r) from coordinates of the words i^r w, not from repeated F_i."""
        out: dict = {}
        scale = RONE / as_rational(qfactorial(r))
        for k, c in vec.items():
            (w,) = self.labels[k]
            vadd(out, self.word_vector((i,) * r + w), c * scale)
        return out

    def E_power(self, i: int, r: int, vec: dict) -> dict:
        out: dict = {}
        scale = RONE / as_rational(qfactorial(r))
        for k, c in vec.items():
            nu = self.nus[k]
            (w,) = self.labels[k]
            if nu[i] < r:
                continue
            down = self._shift(nu, i, -r)
            if down not in self.words:
                continue
            col = self.coords(down, [self._gram((i,) * r + b, w) for b in self.words[down]])
            vadd(out, col, c * scale)
        return out

    # -- canonical basis of L(lambda) -----------------------------------------
    def canonical_monomials(self) -> list[tuple[str, dict]]:
        """(label, vector) for the canonical basis, from the rank <= 2 monomial data.

        sl2: F^(k) v.  A2: F_i^(a) F_j^(b) F_i^(c) v with b >= a + c for both
        orders (i, j); equal vectors are merged and zeros dropped.  The data
        is validated here: the result must be an independent spanning set of
        every weight space, and bar-invariant.
        """
        datum = self.datum
        if not self.complete:
            raise DepthTooSmall("canonical basis needs the full module")
        if datum.rank == 1:
            fams = [(k,) for k in range(self.max_height() + 1)]
            out = []
            for (k,) in fams:
                vec = self.F_power(0, k, {0: RONE}) if k else {0: RONE}
                if vec:
                    out.append((f"F1^({k})" if k else "1", vec))
            self._validate_canonical(out)
            return out
        if [list(r) for r in datum.gcm] != [[2, -1], [-1, 2]]:
            raise RankUnsupported("canonical monomial data is available for sl2 and A2 only")
        out = []
        seen = set()
        for nu in self.spaces():
            for i, j in ((0, 1), (1, 0)):
                b = nu[j]
                for a in range(nu[i] + 1):
                    c = nu[i] - a
                    if b < a + c:
                        continue
                    vec = {0: RONE}
                    vec = self._fpow(i, c, vec)
                    vec = self._fpow(j, b, vec)
                    vec = self._fpow(i, a, vec)
                    if not vec:
                        continue
                    key = tuple(sorted(vec.items()))
                    if key in seen:
                        continue
                    seen.add(key)
                    lab = "".join(f"F{x + 1}^({p})" for x, p in ((i, a), (j, b), (i, c)) if p) or "1"
                    out.append((lab, vec))
        self._validate_canonical(out)
        return out

    def _fpow(self, i, r, vec):
        return self.F_power(i, r, vec) if r else vec

    def _validate_canonical(self, elems):
        by_nu: dict = {}
        for lab, vec in elems:
            nus = {self.nus[k] for k in vec}
            if len(nus) != 1:
                raise KMDecompError(f"canonical element {lab} is not weight-homogeneous")
            if vbar(vec) != vec:
                raise KMDecompError(f"canonical element {lab} is not bar-invariant")
            by_nu.setdefault(nus.pop(), []).append(vec)
        for nu, idx in self.blocks.items():
            vecs = by_nu.get(nu, [])
            m = [[v.get(k, RZERO) for k in idx] for v in vecs]
            if len(vecs) != len(idx) or rank(m) != len(idx):
                raise KMDecompError(f"canonical monomials do not form a basis at nu={nu}")


class TensorModule(WeightModule):
    """M1 (x) M2 under D(E_i) = E_i (x) K_i + 1 (x) E_i, D(F_i) = F_i (x) 1 + K_{-i} (x) F_i.

    Basis vectors are pairs (p, q); labels are flattened tuples so that both
    bracketings of a triple product carry the same labels.
    """

    def __init__(self, m1: WeightModule, m2: WeightModule):
        if m1.datum != m2.datum:
            from ..errors import DatumMismatch

            raise DatumMismatch("tensor factors live over different Cartan data")
        self.datum = m1.datum
        self.m1, self.m2 = m1, m2
        self.top = tuple(a + b for a, b in zip(m1.top, m2.top))
        self.complete = m1.complete and m2.complete
        self.depth = None if self.complete else min(
            d for d in (m1.depth, m2.depth) if d is not None)
        pairs = [(p, q) for p in range(m1.dim) for q in range(m2.dim)]
        pairs.sort(key=lambda pq: (height(m1.nus[pq[0]]) + height(m2.nus[pq[1]]),
                                   tuple(a + b for a, b in zip(m1.nus[pq[0]], m2.nus[pq[1]])), pq))
        self.pairs = pairs
        self.pair_index = {pq: k for k, pq in enumerate(pairs)}
        self.nus = [tuple(a + b for a, b in zip(m1.nus[p], m2.nus[q])) for p, q in pairs]
        self.labels = [m1.labels[p] + m2.labels[q] for p, q in pairs]
        self._index()
        r = self.datum.rank
        self._E = [[None] * self.dim for _ in range(r)]
        self._F = [[None] * self.dim for _ in range(r)]
        for k, (p, q) in enumerate(pairs):
            w1, w2 = m1.weight(p), m2.weight(q)
            for i in range(r):
                col: dict = {}
                for p2, c in m1._E[i][p].items():
                    vadd(col, {self.pair_index[(p2, q)]: c * _vpow(w2[i])})
                for q2, c in m2._E[i][q].items():
                    vadd(col, {self.pair_index[(p, q2)]: c})
                self._E[i][k] = col
                f1, f2 = m1._F[i][p], m2._F[i][q]
                if f1 is None or f2 is None:
                    continue
                col = {}
                for p2, c in f1.items():
                    vadd(col, {self.pair_index[(p2, q)]: c})
                for q2, c in f2.items():
                    vadd(col, {self.pair_index[(p, q2)]: c * _vpow(-w1[i])})
                self._F[i][k] = col

    def pure(self, x: dict, y: dict) -> dict:
        """x (x) y for vectors of the two factors."""
        out = {}
        for p, a in x.items():
            for q, b in y.items():
                t = a * b
                if t:
                    out[self.pair_index[(p, q)]] = t
        return out

    def flat_factors(self) -> list:
        """Leaf modules from left to right."""
        out = []
        for m in (self.m1, self.m2):
            out.extend(m.flat_factors() if isinstance(m, TensorModule) else [m])
        return out

    def flat_index(self, k: int) -> tuple:
        """Leaf basis indices of basis vector k."""
        p, q = self.pairs[k]
        a = self.m1.flat_index(p) if isinstance(self.m1, TensorModule) else (p,)
        b = self.m2.flat_index(q) if isinstance(self.m2, TensorModule) else (q,)
        return a + b


def tensor_modules(mods: Iterable[WeightModule], bracketing: str = "left") -> WeightModule:
    """Fold modules into a tensor product, ((M1 M2) M3) for 'left', (M1 (M2 M3)) for 'right'."""
    mods = list(mods)
    if bracketing == "left":
        out = mods[0]
        for m in mods[1:]:
            out = TensorModule(out, m)
        return out
    out = mods[-1]
    for m in reversed(mods[:-1]):
        out = TensorModule(m, out)
    return out
