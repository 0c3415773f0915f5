"""Weight characters of finite-type irreducibles (Freudenthal) and greedy splitting.

Characters are keyed by the drop ``nu`` (simple-root coordinates) below the
top weight.  Working in root coordinates keeps every quantity an integer:
with mu = lambda - C nu the Freudenthal left side

    (lambda+rho, lambda+rho) - (mu+rho, mu+rho) = 2 (lambda+rho, nu) - nu^T C nu

and ``(mu + k alpha, alpha) = (lambda, alpha) - nu^T C alpha + k (alpha, alpha)``.
"""

from __future__ import annotations

from collections import defaultdict
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .cartan import CartanDatum, DimVector, Weight, dim_vectors, height, positive_roots, wt
from .errors import FiniteTypeOnly, NotDominant

__all__ = [
    "freudenthal_character",
    "weyl_dimension",
    "character_weights",
    "tensor_character",
    "greedy_decompose",
    "levi_decompose",
]


def _require_finite(datum: CartanDatum):
    if not datum.finite_type:
        raise FiniteTypeOnly("the character oracle needs a finite-type Cartan datum")


def _form(datum: CartanDatum, a: Sequence[int], b: Sequence[int]) -> int:
    return datum.root_form(a, b)


@lru_cache(maxsize=512)
def _freudenthal(datum: CartanDatum, lam: Weight) -> tuple:
    roots = positive_roots(datum)
    rank = datum.rank
    lam_rho = tuple(x + 1 for x in lam)
    mult: dict[DimVector, int] = {(0,) * rank: 1}
    h = 0
    while True:
        h += 1
        layer_nonzero = False
        for nu in dim_vectors(rank, h):
            if height(nu) != h:
                continue
            lhs = 2 * sum(a * n for a, n in zip(lam_rho, nu)) - _form(datum, nu, nu)
            if lhs == 0:
                continue
            rhs = 0
            for alpha in roots:
                a_norm = _form(datum, alpha, alpha)
                base = sum(l * a for l, a in zip(lam, alpha)) - _form(datum, nu, alpha)
                k = 1
                while True:
                    prev = tuple(n - k * a for n, a in zip(nu, alpha))
                    if min(prev) < 0:
                        break
                    m = mult.get(prev)
                    if m:
                        rhs += (base + k * a_norm) * m
                    k += 1
            rhs *= 2
            if rhs % lhs:
                raise ArithmeticError(f"Freudenthal quotient not integral at nu={nu}")
            val = rhs // lhs
            if val:
                mult[nu] = val
                layer_nonzero = True
        if not layer_nonzero:
            break
    return tuple(sorted(mult.items(), key=lambda kv: (height(kv[0]), kv[0])))


def freudenthal_character(datum: CartanDatum, lam: Sequence[int], depth: int | None = None) -> dict[DimVector, int]:
    """Weight multiplicities of L(lambda), keyed by nu; truncated to height <= depth."""
    _require_finite(datum)
    lam = tuple(int(x) for x in lam)
    if not datum.is_dominant(lam):
        raise NotDominant(f"{lam} is not dominant")
    items = _freudenthal(datum, lam)
    return {nu: m for nu, m in items if depth is None or height(nu) <= depth}


def weyl_dimension(datum: CartanDatum, lam: Sequence[int]) -> int:
    """prod over positive roots of (lambda+rho, alpha)/(rho, alpha)."""
    _require_finite(datum)
    num = Fraction(1)
    for alpha in positive_roots(datum):
        num *= Fraction(sum((l + 1) * a for l, a in zip(lam, alpha)), sum(alpha))
    assert num.denominator == 1
    return int(num)


def character_weights(datum: CartanDatum, lam: Sequence[int], char: dict) -> dict[Weight, int]:
    return {wt(datum, [lam], nu): m for nu, m in char.items()}


def tensor_character(datum: CartanDatum, lambdas: Sequence[Sequence[int]]) -> dict[DimVector, int]:
    """Character of the tensor product keyed by total drop nu."""
    _require_finite(datum)
    out = {(0,) * datum.rank: 1}
    for lam in lambdas:
        ch = freudenthal_character(datum, lam)
        nxt: dict = defaultdict(int)
        for a, m in out.items():
            for b, n in ch.items():
                nxt[tuple(x + y for x, y in zip(a, b))] += m * n
        out = dict(nxt)
    return out


def greedy_decompose(datum: CartanDatum, top: Sequence[int], char: dict[DimVector, int]) -> dict[DimVector, int]:
    """Split a character (keyed by nu below ``top``) into irreducibles.

    Repeatedly take a minimal-height nu with positive residual; such a weight
    is dominance-maximal among the residual support, so it must be dominant.
    """
    _require_finite(datum)
    residual = {k: v for k, v in char.items() if v}
    out: dict[DimVector, int] = {}
    while residual:
        nu = min(residual, key=lambda k: (height(k), k))
        m = residual[nu]
        if m < 0:
            raise ArithmeticError(f"negative residual {m} at nu={nu}")
        mu = wt(datum, [top], nu)
        if not datum.is_dominant(mu):
            raise ArithmeticError(f"greedy step hit non-dominant weight {mu}")
        out[nu] = m
        for d, k in freudenthal_character(datum, mu).items():
            key = tuple(a + b for a, b in zip(nu, d))
            val = residual.get(key, 0) - m * k
            if val:
                residual[key] = val
            else:
                residual.pop(key, None)
    return out


def levi_decompose(datum: CartanDatum, lambdas: Sequence[Sequence[int]], J) -> dict[tuple, int]:
    """Restriction multiplicities from characters, keyed by (mu_J, sector, nu).

    Each sector pr_{I\\J}(nu) = const is a finite-dimensional module of the
    Levi, decomposed greedily with the J sub-datum's characters.
    """
    _require_finite(datum)
    J = datum.levi(J)
    off = [k for k in datum.indices if k not in J]
    top = tuple(sum(col) for col in zip(*lambdas))
    char = tensor_character(datum, lambdas)
    sub = datum.sub_datum(J) if J else None
    sectors: dict = defaultdict(dict)
    for nu, m in char.items():
        sectors[tuple(nu[k] for k in off)][nu] = m
    out: dict[tuple, int] = {}
    for sector, part in sectors.items():
        residual = dict(part)
        while residual:
            nu = min(residual, key=lambda k: (height(k), k))
            m = residual[nu]
            full = wt(datum, [top], nu)
            mu_j = tuple(full[j] for j in J)
            if m < 0 or any(x < 0 for x in mu_j):
                raise ArithmeticError(f"Levi greedy step failed at nu={nu}")
            out[(mu_j, sector, nu)] = m
            if J:
                inner = freudenthal_character(sub, mu_j)
            else:
                inner = {(): 1}
            for d, k in inner.items():
                key = list(nu)
                for j, dj in zip(J, d):
                    key[j] += dj
                key = tuple(key)
                val = residual.get(key, 0) - m * k
                if val:
                    residual[key] = val
                else:
                    residual.pop(key, None)
    return out
