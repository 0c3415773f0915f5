"""Exact arithmetic in Z[v, v^-1] and its fraction field Q(v).

``LaurentPoly`` stores a sparse map exponent -> nonzero integer.  ``RationalFn``
keeps a numerator/denominator pair reduced by a gcd over Z[v], so equality of
rational functions is structural equality of the normalized pair.

Dense helpers (``_p*``) work on plain coefficient lists of ordinary
polynomials, index = exponent, and are shared by the normalizer and exact
division.
"""

from __future__ import annotations

import math
import re
from functools import lru_cache
from typing import Iterable, Mapping, Union

from .errors import DomainError

__all__ = [
    "LaurentPoly",
    "RationalFn",
    "V",
    "ZERO",
    "ONE",
    "qint",
    "qfactorial",
    "qbinom",
    "qbinom_by_division",
    "bar",
    "in_lattice_A",
    "as_rational",
]


# ---------------------------------------------------------------------------
# dense polynomial helpers over Z


def _ptrim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmul(a: list[int], b: list[int]) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] += x * y
    return out


def _pcontent(a: list[int]) -> int:
    g = 0
    for x in a:
        g = math.gcd(g, x)
        if g == 1:
            break
    return g


def _pdivexact(a: list[int], b: list[int]) -> list[int] | None:
    """Quotient a/b in Z[v], or None when b does not divide a."""
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    if not a:
        return []
    a = list(a)
    db, lb = len(b) - 1, b[-1]
    if len(a) - 1 < db:
        return None
    q = [0] * (len(a) - db)
    for k in range(len(a) - 1, db - 1, -1):
        c = a[k]
        if c == 0:
            continue
        qc, r = divmod(c, lb)
        if r:
            return None
        q[k - db] = qc
        for j in range(db + 1):
            a[k - db + j] -= qc * b[j]
    if any(a[:db]):
        return None
    return q


def _pprem(a: list[int], b: list[int]) -> list[int]:
    """Pseudo-remainder of a by b (lc(b)^k a = q b + r)."""
    a = list(a)
    db, lb = len(b) - 1, b[-1]
    while len(a) - 1 >= db and a:
        k = len(a) - 1 - db
        la = a[-1]
        a = [x * lb for x in a]
        for j in range(db + 1):
            a[k + j] -= la * b[j]
        _ptrim(a)
    return a


def _pprimitive(a: list[int]) -> list[int]:
    c = _pcontent(a)
    if c in (0, 1):
        return a
    return [x // c for x in a]


def _pgcd(a: list[int], b: list[int]) -> list[int]:
    """gcd in Z[v] with positive leading coefficient (primitive PRS)."""
    if not a:
        out = list(b)
    elif not b:
        out = list(a)
    else:
        c = math.gcd(_pcontent(a), _pcontent(b))
        x, y = _pprimitive(list(a)), _pprimitive(list(b))
        if len(x) < len(y):
            x, y = y, x
        while y:
            r = _pprem(x, y)
            x, y = y, _pprimitive(r) if r else []
        out = [c * t for t in _pprimitive(x)]
    if out and out[-1] < 0:
        out = [-t for t in out]
    return out


# ---------------------------------------------------------------------------


class LaurentPoly:
    """Element of Z[v, v^-1]; immutable, hashable, canonical."""

    __slots__ = ("_c", "_hash")

    def __init__(self, coeffs: Union[Mapping[int, int], int, None] = None):
        if coeffs is None:
            c = {}
        elif isinstance(coeffs, int):
            c = {0: coeffs} if coeffs else {}
        else:
            c = {int(e): int(x) for e, x in coeffs.items() if x}
        self._c = c
        self._hash = None

    @classmethod
    def _raw(cls, c: dict[int, int]) -> "LaurentPoly":
        p = cls.__new__(cls)
        p._c = c
        p._hash = None
        return p

    @classmethod
    def monomial(cls, exp: int, coeff: int = 1) -> "LaurentPoly":
        return cls._raw({exp: coeff} if coeff else {})

    @classmethod
    def from_dense(cls, low: int, coeffs: Iterable[int]) -> "LaurentPoly":
        return cls._raw({low + k: x for k, x in enumerate(coeffs) if x})

    def to_dense(self) -> tuple[int, list[int]]:
        """(low exponent, coefficient list); (0, []) for zero."""
        if not self._c:
            return 0, []
        lo, hi = min(self._c), max(self._c)
        out = [0] * (hi - lo + 1)
        for e, x in self._c.items():
            out[e - lo] = x
        return lo, out

    # -- inspection -------------------------------------------------------
    def items(self):
        return sorted(self._c.items())

    def coeff(self, exp: int) -> int:
        return self._c.get(exp, 0)

    @property
    def coeffs(self) -> dict[int, int]:
        return dict(self._c)

    def is_zero(self) -> bool:
        return not self._c

    def __bool__(self) -> bool:
        return bool(self._c)

    def degree(self) -> int:
        if not self._c:
            raise DomainError("degree of zero polynomial")
        return max(self._c)

    def low_degree(self) -> int:
        if not self._c:
            raise DomainError("low degree of zero polynomial")
        return min(self._c)

    def is_constant(self) -> bool:
        return not self._c or (len(self._c) == 1 and 0 in self._c)

    def is_monomial(self) -> bool:
        return len(self._c) == 1

    def is_unit(self) -> bool:
        """Units of Z[v, v^-1] are exactly +-v^k."""
        return len(self._c) == 1 and abs(next(iter(self._c.values()))) == 1

    def evaluate(self, x):
        return sum(c * x**e for e, c in self._c.items())

    # -- ring operations ---------------------------------------------------
    def __add__(self, other):
        if isinstance(other, int):
            other = LaurentPoly(other)
        elif not isinstance(other, LaurentPoly):
            return NotImplemented
        if not other._c:
            return self
        if not self._c:
            return other
        c = dict(self._c)
        for e, x in other._c.items():
            y = c.get(e, 0) + x
            if y:
                c[e] = y
            else:
                c.pop(e, None)
        return LaurentPoly._raw(c)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._raw({e: -x for e, x in self._c.items()})

    def __sub__(self, other):
        if isinstance(other, int):
            other = LaurentPoly(other)
        elif not isinstance(other, LaurentPoly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        if isinstance(other, int):
            return LaurentPoly(other) - self
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, int):
            if not other:
                return ZERO
            return LaurentPoly._raw({e: x * other for e, x in self._c.items()})
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        a, b = self._c, other._c
        if not a or not b:
            return ZERO
        if len(a) < len(b):
            a, b = b, a
        c: dict[int, int] = {}
        for e2, y in b.items():
            for e1, x in a.items():
                e = e1 + e2
                c[e] = c.get(e, 0) + x * y
        return LaurentPoly._raw({e: x for e, x in c.items() if x})

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            if not self.is_monomial():
                raise DomainError("negative power of a non-monomial Laurent polynomial")
            (e, x), = self._c.items()
            if abs(x) != 1:
                raise DomainError("negative power of a non-unit monomial")
            return LaurentPoly._raw({e * n: x ** (-n)})
        out = ONE
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __truediv__(self, other):
        return RationalFn(self, other)

    def __rtruediv__(self, other):
        return RationalFn(other, self)

    def exact_div(self, other: "LaurentPoly | int") -> "LaurentPoly":
        """Quotient in Z[v, v^-1]; DomainError if other does not divide self."""
        q = self.try_div(other)
        if q is None:
            raise DomainError(f"{other} does not divide {self} in Z[v,v^-1]")
        return q

    def try_div(self, other: "LaurentPoly | int") -> "LaurentPoly | None":
        if isinstance(other, int):
            other = LaurentPoly(other)
        if not other._c:
            raise ZeroDivisionError("division by zero Laurent polynomial")
        if not self._c:
            return ZERO
        la, a = self.to_dense()
        lb, b = other.to_dense()
        q = _pdivexact(a, b)
        if q is None:
            return None
        return LaurentPoly.from_dense(la - lb, q)

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by v^k."""
        return LaurentPoly._raw({e + k: x for e, x in self._c.items()})

    def bar(self) -> "LaurentPoly":
        return LaurentPoly._raw({-e: x for e, x in self._c.items()})

    # -- comparison --------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, LaurentPoly):
            return self._c == other._c
        if isinstance(other, int):
            return self._c == ({0: other} if other else {})
        if isinstance(other, RationalFn):
            return other == self
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            if self.is_constant():
                self._hash = hash(self._c.get(0, 0))
            else:
                self._hash = hash(frozenset(self._c.items()))
        return self._hash

    # -- text --------------------------------------------------------------
    def __str__(self):
        return render(self)

    def __repr__(self):
        return f"LaurentPoly({render(self)!r})"

    @classmethod
    def parse(cls, text: str) -> "LaurentPoly":
        return parse(text)


ZERO = LaurentPoly._raw({})
ONE = LaurentPoly._raw({0: 1})
V = LaurentPoly._raw({1: 1})


def render(p: LaurentPoly) -> str:
    """Descending-exponent rendering, e.g. ``v^2 + 3 - 2v^-1``."""
    if not p._c:
        return "0"
    parts = []
    for k, (e, c) in enumerate(sorted(p._c.items(), reverse=True)):
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if e == 0:
            body = str(a)
        else:
            mono = "v" if e == 1 else f"v^{e}"
            body = mono if a == 1 else f"{a}{mono}"
        if k == 0:
            parts.append(("-" if sign == "-" else "") + body)
        else:
            parts.append(f" {sign} {body}")
    return "".join(parts)


_TERM = re.compile(r"\s*([+-])?\s*(\d+)?\s*(v(?:\^(-?\d+))?)?\s*")


def parse(text: str) -> LaurentPoly:
    """Inverse of :func:`render`."""
    s = text.strip()
    if s == "0":
        return ZERO
    c: dict[int, int] = {}
    pos = 0
    while pos < len(s):
        m = _TERM.match(s, pos)
        if not m or m.end() == pos or (m.group(2) is None and m.group(3) is None):
            raise DomainError(f"cannot parse Laurent polynomial {text!r}")
        sign = -1 if m.group(1) == "-" else 1
        coef = int(m.group(2)) if m.group(2) else 1
        if m.group(3):
            exp = int(m.group(4)) if m.group(4) is not None else 1
        else:
            exp = 0
        c[exp] = c.get(exp, 0) + sign * coef
        pos = m.end()
    return LaurentPoly(c)


# ---------------------------------------------------------------------------


class RationalFn:
    """Element of Q(v) as a reduced quotient of Laurent polynomials.

    The denominator is a polynomial in v with nonzero constant term and
    positive leading coefficient; numerator and denominator are coprime in
    Z[v] (integer content included).
    """

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num, den=1, _normalized: bool = False):
        if isinstance(num, RationalFn) or isinstance(den, RationalFn):
            a, b = as_rational(num), as_rational(den)
            num, den = a.num * b.den, a.den * b.num
        if isinstance(num, int):
            num = LaurentPoly(num)
        if isinstance(den, int):
            den = LaurentPoly(den)
        if not den:
            raise ZeroDivisionError("RationalFn with zero denominator")
        self._hash = None
        if _normalized:
            self.num, self.den = num, den
            return
        self.num, self.den = _normalize(num, den)

    @classmethod
    def _make(cls, num: LaurentPoly, den: LaurentPoly) -> "RationalFn":
        r = cls.__new__(cls)
        r.num, r.den, r._hash = num, den, None
        return r

    # -- inspection ---------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.num

    def __bool__(self):
        return bool(self.num)

    def is_laurent(self) -> bool:
        return self.den == ONE

    def to_laurent(self) -> LaurentPoly:
        if not self.is_laurent():
            raise DomainError(f"{self} is not a Laurent polynomial")
        return self.num

    # -- field operations -----------------------------------------------------
    def __add__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        if not other.num:
            return self
        if not self.num:
            return other
        if self.den == ONE and other.den == ONE:
            return RationalFn._make(self.num + other.num, ONE)
        if self.den == other.den:
            return RationalFn(self.num + other.num, self.den)
        return RationalFn(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFn._make(-self.num, self.den)

    def __sub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        if not self.num or not other.num:
            return RZERO
        if self.den == ONE and other.den == ONE:
            return RationalFn._make(self.num * other.num, ONE)
        return RationalFn(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> "RationalFn":
        if not self.num:
            raise ZeroDivisionError("inverse of zero in Q(v)")
        return RationalFn(self.den, self.num)

    def __truediv__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        if not other.num:
            raise ZeroDivisionError("division by zero in Q(v)")
        if other.den == ONE and self.den == ONE:
            q = self.num.try_div(other.num)
            if q is not None:
                return RationalFn._make(q, ONE)
        return RationalFn(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return other / self

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = RONE
        for _ in range(n):
            out = out * self
        return out

    def bar(self) -> "RationalFn":
        return RationalFn(self.num.bar(), self.den.bar())

    # -- comparison -----------------------------------------------------------
    def __eq__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.num) if self.den == ONE else hash((self.num, self.den))
        return self._hash

    def __str__(self):
        if self.den == ONE:
            return render(self.num)
        return f"({render(self.num)})/({render(self.den)})"

    def __repr__(self):
        return f"RationalFn({self})"


def _coerce(x) -> RationalFn | None:
    if isinstance(x, RationalFn):
        return x
    if isinstance(x, LaurentPoly):
        return RationalFn._make(x, ONE)
    if isinstance(x, int):
        return RationalFn._make(LaurentPoly(x), ONE)
    return None


def as_rational(x) -> RationalFn:
    r = _coerce(x)
    if r is None:
        raise TypeError(f"cannot interpret {x!r} as an element of Q(v)")
    return r


def _normalize(num: LaurentPoly, den: LaurentPoly) -> tuple[LaurentPoly, LaurentPoly]:
    if not num:
        return ZERO, ONE
    lo_d, d = den.to_dense()
    lo_n, n = num.to_dense()
    shift = lo_n - lo_d  # num/den = v^shift * n(v)/d(v), n(0), d(0) != 0
    if len(d) == 1:
        c = d[0]
        g = math.gcd(_pcontent(n), c)
        if c < 0:
            g = -g
        return LaurentPoly.from_dense(shift, [x // g for x in n]), ONE if abs(c) == abs(g) else LaurentPoly(c // g)
    g = _pgcd(n, d)
    if len(g) > 1 or g[0] != 1:
        n = _pdivexact(n, g)
        d = _pdivexact(d, g)
    if d[-1] < 0:
        n = [-x for x in n]
        d = [-x for x in d]
    return LaurentPoly.from_dense(shift, n), LaurentPoly.from_dense(0, d)


RZERO = RationalFn._make(ZERO, ONE)
RONE = RationalFn._make(ONE, ONE)


# ---------------------------------------------------------------------------
# quantum integers


@lru_cache(maxsize=None)
def qint(n: int) -> LaurentPoly:
    """[n] = (v^n - v^-n)/(v - v^-1); [0] = 0, [-n] = -[n]."""
    if n == 0:
        return ZERO
    if n < 0:
        return -qint(-n)
    return LaurentPoly._raw({e: 1 for e in range(-(n - 1), n, 2)})


@lru_cache(maxsize=None)
def qfactorial(n: int) -> LaurentPoly:
    if n < 0:
        raise DomainError("quantum factorial of a negative integer")
    out = ONE
    for s in range(1, n + 1):
        out = out * qint(s)
    return out


@lru_cache(maxsize=None)
def qbinom(n: int, k: int) -> LaurentPoly:
    """Balanced Gaussian binomial, by [n,k] = v^k [n-1,k] + v^-(n-k) [n-1,k-1]."""
    if not (0 <= k <= n):
        raise DomainError(f"qbinom requires 0 <= k <= n, got n={n}, k={k}")
    if k == 0 or k == n:
        return ONE
    return qbinom(n - 1, k).shift(k) + qbinom(n - 1, k - 1).shift(-(n - k))


def qbinom_by_division(n: int, k: int) -> LaurentPoly:
    """[n]!/([k]![n-k]!) by exact division; used to cross-check :func:`qbinom`."""
    if not (0 <= k <= n):
        raise DomainError(f"qbinom requires 0 <= k <= n, got n={n}, k={k}")
    return qfactorial(n).exact_div(qfactorial(k) * qfactorial(n - k))


def bar(p):
    """The ring involution v -> v^-1 on LaurentPoly or RationalFn."""
    if isinstance(p, int):
        return p
    return p.bar()


def in_lattice_A(p, strict: bool = False) -> bool:
    """Membership in Z[v^-1] (strict=False) or v^-1 Z[v^-1] (strict=True)."""
    if isinstance(p, RationalFn):
        if not p.is_laurent():
            return False
        p = p.num
    elif isinstance(p, int):
        p = LaurentPoly(p)
    if not p:
        return True
    top = p.degree()
    return top < 0 if strict else top <= 0
