"""Symmetric generalized Cartan matrices, weight/root lattices and Levi data.

Weights are integer tuples in fundamental-weight coordinates; root-lattice
elements ("dimension vectors") are integer tuples in simple-root coordinates.
The simple root alpha_i has fundamental coordinates given by column i of the
GCM, so a drop nu from a weight lambda lands at ``lambda - C nu``.
"""

from __future__ import annotations

import itertools
import json
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .errors import (
    BadDiagonal,
    CartanError,
    NonSymmetric,
    PositiveOffDiagonal,
    SearchBoundExceeded,
    UnknownLevi,
)

Weight = tuple[int, ...]
DimVector = tuple[int, ...]
LeviWeight = tuple[int, ...]

__all__ = [
    "CartanDatum",
    "Weight",
    "DimVector",
    "LeviWeight",
    "validate",
    "wt",
    "wt_levi",
    "dominance_diff",
    "positive_roots",
    "height",
    "load_cartan",
    "sl2",
    "a2",
    "affine_a1",
    "cartan_type",
]


@dataclass(frozen=True, eq=False)
class CartanDatum:
    labels: tuple[str, ...]
    gcm: tuple[tuple[int, ...], ...]
    levis: Mapping[str, tuple[str, ...]] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(str(x) for x in self.labels))
        object.__setattr__(self, "gcm", tuple(tuple(int(x) for x in row) for row in self.gcm))
        object.__setattr__(self, "levis", {str(k): tuple(str(x) for x in v) for k, v in dict(self.levis).items()})
        validate(self)

    @classmethod
    def from_matrix(cls, gcm, labels=None, levis=None) -> "CartanDatum":
        if labels is None:
            labels = [str(i + 1) for i in range(len(gcm))]
        return cls(tuple(labels), tuple(map(tuple, gcm)), levis or {})

    @classmethod
    def from_json(cls, data: Mapping | str) -> "CartanDatum":
        if isinstance(data, str):
            data = json.loads(data)
        return cls.from_matrix(data["gcm"], data.get("labels"), data.get("levis"))

    def to_json(self) -> dict:
        return {"labels": list(self.labels), "gcm": [list(r) for r in self.gcm],
                "levis": {k: list(v) for k, v in self.levis.items()}}

    # equality/hash by matrix and labels only; the Levi registry is metadata
    def __eq__(self, other):
        if not isinstance(other, CartanDatum):
            return NotImplemented
        return self.labels == other.labels and self.gcm == other.gcm

    def __hash__(self):
        return hash((self.labels, self.gcm))

    def __repr__(self):
        return f"CartanDatum({list(self.labels)}, {[list(r) for r in self.gcm]})"

    @property
    def rank(self) -> int:
        return len(self.labels)

    @property
    def indices(self) -> range:
        return range(self.rank)

    def index(self, label) -> int:
        """Vertex index; strings are labels, plain ints are already indices."""
        if isinstance(label, int) and not isinstance(label, bool):
            if 0 <= label < self.rank:
                return label
            raise UnknownLevi(f"vertex index {label} out of range")
        try:
            return self.labels.index(str(label))
        except ValueError:
            raise UnknownLevi(f"unknown vertex label {label!r}") from None

    def a(self, i: int, j: int) -> int:
        return self.gcm[i][j]

    def simple_root(self, i: int) -> Weight:
        """alpha_i in fundamental coordinates (column i of C)."""
        return tuple(self.gcm[j][i] for j in self.indices)

    def root_to_weight(self, nu: Sequence[int]) -> Weight:
        """C nu: the weight of sum nu_i alpha_i."""
        return tuple(sum(self.gcm[j][i] * nu[i] for i in self.indices) for j in self.indices)

    def root_form(self, a: Sequence[int], b: Sequence[int]) -> int:
        """Symmetric form on the root lattice: (a, b) = a^T C b."""
        return sum(a[i] * self.gcm[i][j] * b[j] for i in self.indices for j in self.indices if a[i] and b[j])

    @staticmethod
    def pair_weight_root(mu: Sequence[int], beta: Sequence[int]) -> int:
        """(mu, beta) for a weight mu and a root-lattice element beta."""
        return sum(x * y for x, y in zip(mu, beta))

    def rho(self) -> Weight:
        return (1,) * self.rank

    def zero(self) -> tuple[int, ...]:
        return (0,) * self.rank

    def is_dominant(self, mu: Sequence[int]) -> bool:
        return all(x >= 0 for x in mu)

    def unit(self, i: int) -> DimVector:
        return tuple(1 if k == i else 0 for k in self.indices)

    @cached_property
    def finite_type(self) -> bool:
        """C positive definite (all leading principal minors > 0)."""
        n = self.rank
        m = [[Fraction(x) for x in row] for row in self.gcm]
        for k in range(n):
            piv = m[k][k]
            if piv <= 0:
                return False
            for i in range(k + 1, n):
                f = m[i][k] / piv
                for j in range(k, n):
                    m[i][j] -= f * m[k][j]
        return True

    @cached_property
    def nonsingular(self) -> bool:
        return _det([[Fraction(x) for x in row] for row in self.gcm]) != 0

    def quiver_edges(self) -> list[tuple[int, int]]:
        """Unoriented edges i--j with multiplicity -a_ij (i < j)."""
        out = []
        for i in self.indices:
            for j in range(i + 1, self.rank):
                out.extend([(i, j)] * (-self.gcm[i][j]))
        return out

    # -- Levi subsets ---------------------------------------------------------
    def levi(self, spec) -> tuple[int, ...]:
        """Resolve a Levi subset to sorted vertex indices.

        ``spec`` is a registry name, or an iterable of labels (str) and/or
        indices (int).
        """
        if isinstance(spec, str):
            if spec in self.levis:
                return tuple(sorted(self.index(x) for x in self.levis[spec]))
            raise UnknownLevi(f"unknown Levi subset {spec!r}")
        return tuple(sorted({self.index(x) for x in spec}))

    def sub_datum(self, J: Sequence[int]) -> "CartanDatum":
        J = tuple(J)
        return CartanDatum(tuple(self.labels[j] for j in J), tuple(tuple(self.gcm[a][b] for b in J) for a in J))


def _det(m: list[list[Fraction]]) -> Fraction:
    n = len(m)
    m = [list(r) for r in m]
    det = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if m[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            m[c], m[p] = m[p], m[c]
            det = -det
        det *= m[c][c]
        for i in range(c + 1, n):
            f = m[i][c] / m[c][c]
            for j in range(c, n):
                m[i][j] -= f * m[c][j]
    return det


def validate(datum: CartanDatum) -> CartanDatum:
    gcm, labels = datum.gcm, datum.labels
    n = len(labels)
    if len(gcm) != n or any(len(row) != n for row in gcm):
        raise CartanError(f"GCM must be a square {n}x{n} matrix matching the labels")
    if len(set(labels)) != n:
        raise CartanError("vertex labels must be distinct")
    for i in range(n):
        if gcm[i][i] != 2:
            raise BadDiagonal(f"a_{{{labels[i]}{labels[i]}}} = {gcm[i][i]}, expected 2")
    for i in range(n):
        for j in range(n):
            if i != j and gcm[i][j] != gcm[j][i]:
                raise NonSymmetric(f"a_{{{labels[i]}{labels[j]}}} != a_{{{labels[j]}{labels[i]}}}")
    for i in range(n):
        for j in range(n):
            if i != j and gcm[i][j] > 0:
                raise PositiveOffDiagonal(f"a_{{{labels[i]}{labels[j]}}} = {gcm[i][j]} > 0")
    for name, members in datum.levis.items():
        for x in members:
            if x not in labels:
                raise UnknownLevi(f"Levi {name!r} names unknown vertex {x!r}")
    return datum


def height(nu: Iterable[int]) -> int:
    return sum(nu)


def wt(datum: CartanDatum, lambdas: Sequence[Sequence[int]], nu: Sequence[int]) -> Weight:
    """sum_l lambda^l - sum_i nu_i alpha_i in fundamental coordinates."""
    top = [sum(lam[j] for lam in lambdas) for j in datum.indices]
    drop = datum.root_to_weight(nu)
    return tuple(t - d for t, d in zip(top, drop))


def wt_levi(datum: CartanDatum, J, lambdas: Sequence[Sequence[int]], nu: Sequence[int]) -> LeviWeight:
    """The l_J-weight of nu, with the vertices outside J read as framing."""
    J = datum.levi(J)
    Jset = set(J)
    out = []
    for j in J:
        x = sum(lam[j] for lam in lambdas)
        for h, k in datum.quiver_edges():
            # every edge touching j with the other end outside J frames j
            if h == j and k not in Jset:
                x += nu[k]
            elif k == j and h not in Jset:
                x += nu[h]
        x -= sum(datum.gcm[jj][j] * nu[jj] for jj in J)
        out.append(x)
    full = wt(datum, lambdas, nu)
    check = tuple(full[j] for j in J)
    if tuple(out) != check:  # pragma: no cover - provable identity
        raise AssertionError(f"wt_J {tuple(out)} disagrees with <h_j, wt> {check}")
    return tuple(out)


def _solve_rational(datum: CartanDatum, d: Sequence[int]):
    """One rational solution of C x = d and a basis of ker C, by elimination."""
    n = datum.rank
    rows = [[Fraction(datum.gcm[i][j]) for j in range(n)] + [Fraction(d[i])] for i in range(n)]
    piv = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, n) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(n):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        piv.append(c)
        r += 1
    if any(row[n] != 0 for row in rows[r:]):
        return None, []
    x = [Fraction(0)] * n
    for k, c in enumerate(piv):
        x[c] = rows[k][n]
    free = [c for c in range(n) if c not in piv]
    kern = []
    for f in free:
        vec = [Fraction(0)] * n
        vec[f] = Fraction(1)
        for k, c in enumerate(piv):
            vec[c] = -rows[k][f]
        kern.append(vec)
    return x, kern


def dominance_diff(datum: CartanDatum, mu_prime: Sequence[int], mu: Sequence[int],
                   bound: int | None = None) -> DimVector | None:
    """nu in N^I with C nu = mu' - mu (so mu' >= mu), or None.

    For singular C the solution set is a coset of ker C; a solution of
    minimal height with sum(nu) <= bound is searched, and
    SearchBoundExceeded is raised when rational solutions exist but none is
    found within the bound.
    """
    d = [a - b for a, b in zip(mu_prime, mu)]
    x, kern = _solve_rational(datum, d)
    if x is None:
        return None
    if not kern:
        if all(t.denominator == 1 and t >= 0 for t in x):
            return tuple(int(t) for t in x)
        return None
    if bound is None:
        raise SearchBoundExceeded("singular Cartan matrix requires a search bound")
    for h in range(bound + 1):
        for nu in _compositions(h, datum.rank):
            if list(datum.root_to_weight(nu)) == d:
                return nu
    raise SearchBoundExceeded(f"no non-negative solution of height <= {bound}")


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def dim_vectors(rank: int, max_height: int):
    """All nu in N^rank with height <= max_height, by height then reverse-lex."""
    for h in range(max_height + 1):
        yield from _compositions(h, rank)


def _reflect(datum: CartanDatum, beta: Sequence[int], i: int) -> DimVector:
    c = sum(datum.gcm[i][j] * beta[j] for j in datum.indices)
    out = list(beta)
    out[i] -= c
    return tuple(out)


def _connected(datum: CartanDatum, support: set[int]) -> bool:
    if not support:
        return False
    start = next(iter(support))
    seen = {start}
    stack = [start]
    while stack:
        i = stack.pop()
        for j in support:
            if j not in seen and datum.gcm[i][j] != 0:
                seen.add(j)
                stack.append(j)
    return seen == support


def positive_roots(datum: CartanDatum, height_bound: int | None = None) -> list[DimVector]:
    """Positive roots in simple-root coordinates, sorted by height.

    Real roots are the simple-reflection closure of the simple roots.  For
    non-finite type, imaginary roots are the height-increasing reflection
    closure of the fundamental set {beta : connected support, (beta, alpha_i)
    <= 0 for all i}; everything is cut at ``height_bound``.
    """
    finite = datum.finite_type
    if height_bound is None:
        if not finite:
            raise SearchBoundExceeded("height_bound is required outside finite type")
        height_bound = 10**9
    roots: set[DimVector] = set()
    frontier = [datum.unit(i) for i in datum.indices]
    roots.update(frontier)
    while frontier:
        nxt = []
        for beta in frontier:
            for i in datum.indices:
                g = _reflect(datum, beta, i)
                if all(x >= 0 for x in g) and any(g) and g not in roots and sum(g) <= height_bound:
                    roots.add(g)
                    nxt.append(g)
        frontier = nxt
    if not finite:
        imag: set[DimVector] = set()
        for nu in dim_vectors(datum.rank, height_bound):
            if not any(nu):
                continue
            supp = {i for i, x in enumerate(nu) if x}
            if not _connected(datum, supp):
                continue
            if all(sum(datum.gcm[i][j] * nu[j] for j in datum.indices) <= 0 for i in datum.indices):
                imag.add(nu)
        frontier = list(imag)
        while frontier:
            nxt = []
            for beta in frontier:
                for i in datum.indices:
                    g = _reflect(datum, beta, i)
                    if sum(g) > sum(beta) and sum(g) <= height_bound and g not in imag:
                        imag.add(g)
                        nxt.append(g)
            frontier = nxt
        bad = [b for b in imag if datum.root_form(b, b) > 0]
        if bad:  # pragma: no cover - imaginary roots have non-positive norm
            warnings.warn(f"imaginary root candidates with positive norm: {bad}")
        roots |= imag
    return sorted(roots, key=lambda b: (sum(b), tuple(-x for x in b)))


def cartan_type(datum: CartanDatum) -> str:
    if datum.finite_type:
        return "finite"
    if not datum.nonsingular:
        # symmetric, indecomposable, positive semidefinite corank one => affine
        return "affine-or-singular"
    return "indefinite"


# -- standard data ------------------------------------------------------------


def sl2() -> CartanDatum:
    return CartanDatum(("1",), ((2,),), {})


def a2() -> CartanDatum:
    return CartanDatum(("1", "2"), ((2, -1), (-1, 2)), {"L1": ("1",), "L2": ("2",)})


def affine_a1() -> CartanDatum:
    """Kronecker datum [[2,-2],[-2,2]]; label 0 is the affine node."""
    return CartanDatum(("0", "1"), ((2, -2), (-2, 2)), {"L0": ("0",), "L1": ("1",)})


BUILTIN = {"sl2": sl2, "a1": sl2, "a2": a2, "affine-a1": affine_a1, "kronecker": affine_a1}


def load_cartan(source) -> CartanDatum:
    """Load a Cartan file (JSON), or a builtin name such as ``a2``."""
    if isinstance(source, CartanDatum):
        return source
    p = Path(source)
    if p.exists():
        return CartanDatum.from_json(p.read_text(encoding="utf-8"))
    # a missing "a2.json" falls back to the builtin of the same stem
    for key in (str(source).lower(), p.stem.lower()):
        if key in BUILTIN:
            return BUILTIN[key]()
    raise FileNotFoundError(f"Cartan file {source!r} not found")


def parse_weight(text: str, datum: CartanDatum | None = None) -> Weight:
    """'1,0' -> (1, 0)."""
    parts = [p for p in text.replace(" ", "").split(",") if p != ""]
    try:
        w = tuple(int(p) for p in parts)
    except ValueError:
        raise CartanError(f"cannot parse weight {text!r}") from None
    if datum is not None and len(w) != datum.rank:
        raise CartanError(f"weight {text!r} has arity {len(w)}, datum has rank {datum.rank}")
    return w
