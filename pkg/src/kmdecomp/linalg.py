"""Exact linear algebra over Q(v).

Elimination is fraction-free: rows are cleared of denominators, reduced with
Bareiss' exact-division update inside Z[v, v^-1], and only back-substitution
works in the fraction field.  Matrices are plain lists of rows; ``ExactMatrix``
wraps them when a value type is more convenient.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .errors import DomainError, Inconsistent
from .laurent import (
    ONE,
    RONE,
    RZERO,
    LaurentPoly,
    RationalFn,
    _pdivexact,
    _pgcd,
    as_rational,
)

Matrix = list[list[RationalFn]]

__all__ = [
    "ExactMatrix",
    "Solution",
    "zeros",
    "identity",
    "mat_mul",
    "mat_vec",
    "mat_add",
    "mat_sub",
    "mat_scale",
    "transpose",
    "kron",
    "is_zero_matrix",
    "rank",
    "solve_exact",
    "solve_matrix",
    "inverse",
    "kernel",
    "determinant",
    "row_space_basis",
]


def zeros(rows: int, cols: int) -> Matrix:
    return [[RZERO] * cols for _ in range(rows)]


def identity(n: int) -> Matrix:
    out = zeros(n, n)
    for i in range(n):
        out[i][i] = RONE
    return out


def _r(x) -> RationalFn:
    return x if isinstance(x, RationalFn) else as_rational(x)


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    if not a:
        return []
    inner = len(b)
    cols = len(b[0]) if b else 0
    out = zeros(len(a), cols)
    for i, row in enumerate(a):
        acc = out[i]
        for k in range(inner):
            x = row[k]
            if not x:
                continue
            bk = b[k]
            for j in range(cols):
                y = bk[j]
                if y:
                    acc[j] = acc[j] + x * y
    return out


def mat_vec(a: Matrix, x: Sequence[RationalFn]) -> list[RationalFn]:
    out = []
    for row in a:
        s = RZERO
        for y, z in zip(row, x):
            if y and z:
                s = s + y * z
        out.append(s)
    return out


def mat_add(a: Matrix, b: Matrix) -> Matrix:
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_sub(a: Matrix, b: Matrix) -> Matrix:
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_scale(a: Matrix, c) -> Matrix:
    c = _r(c)
    return [[x * c for x in row] for row in a]


def transpose(a: Matrix, cols: int | None = None) -> Matrix:
    if not a:
        return [[] for _ in range(cols or 0)]
    return [list(col) for col in zip(*a)]


def kron(a: Matrix, b: Matrix) -> Matrix:
    """Kronecker product; row index (i, k) -> i * rows(b) + k."""
    rb = len(b)
    cb = len(b[0]) if b else 0
    ca = len(a[0]) if a else 0
    out = zeros(len(a) * rb, ca * cb)
    for i, ra in enumerate(a):
        for j, x in enumerate(ra):
            if not x:
                continue
            for k, rowb in enumerate(b):
                target = out[i * rb + k]
                for l, y in enumerate(rowb):
                    if y:
                        target[j * cb + l] = x * y
    return out


def is_zero_matrix(a: Matrix) -> bool:
    return all(not x for row in a for x in row)


# ---------------------------------------------------------------------------
# fraction-free elimination


def _laurent_lcm(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    # denominators are normalized polynomials with nonzero constant term
    _, da = a.to_dense()
    _, db = b.to_dense()
    g = _pgcd(da, db)
    return LaurentPoly.from_dense(0, _pdivexact(da, g)) * b


def _clear_row(row: Sequence[RationalFn]) -> list[LaurentPoly]:
    den = ONE
    for x in row:
        if x and x.den != ONE and x.den != den:
            den = _laurent_lcm(den, x.den)
    if den == ONE:
        return [x.num for x in row]
    return [(x.num * den.exact_div(x.den)) if x else x.num for x in row]


def _size(p: LaurentPoly) -> int:
    return len(p._c)


def _bareiss(rows: list[list[LaurentPoly]], ncoef: int) -> list[tuple[int, int]]:
    """In-place fraction-free row echelon on the first ``ncoef`` columns.

    Returns the pivot positions (row, column).  Entries stay in Z[v, v^-1]
    because every update divides exactly by the previous pivot.
    """
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    prev = ONE
    r = 0
    pivots = []
    for c in range(ncoef):
        if r >= nrows:
            break
        best = None
        for i in range(r, nrows):
            x = rows[i][c]
            if x and (best is None or _size(x) < _size(rows[best][c])):
                best = i
        if best is None:
            continue
        rows[r], rows[best] = rows[best], rows[r]
        piv = rows[r][c]
        prow = rows[r]
        for i in range(r + 1, nrows):
            row = rows[i]
            a = row[c]
            if a:
                for j in range(c + 1, ncols):
                    t = piv * row[j] - a * prow[j]
                    row[j] = t.exact_div(prev) if prev != ONE and t else t
            elif prev != ONE:
                for j in range(c + 1, ncols):
                    t = piv * row[j]
                    row[j] = t.exact_div(prev) if t else t
            else:
                for j in range(c + 1, ncols):
                    if row[j]:
                        row[j] = piv * row[j]
            row[c] = LaurentPoly(0)
        prev = piv
        pivots.append((r, c))
        r += 1
    return pivots


@dataclass
class Solution:
    """Particular solution plus a kernel basis of M x = rhs."""

    particular: list[RationalFn]
    kernel: list[list[RationalFn]] = field(default_factory=list)
    rank: int = 0

    @property
    def unique(self) -> bool:
        return not self.kernel


def _backsolve(rows, pivots, ncoef, rhs_col, free_values):
    x = [RZERO] * ncoef
    for c, val in free_values.items():
        x[c] = val
    for r, c in reversed(pivots):
        row = rows[r]
        s = as_rational(row[rhs_col]) if rhs_col is not None else RZERO
        for j in range(c + 1, ncoef):
            if row[j] and x[j]:
                s = s - x[j] * row[j]
        x[c] = s / row[c] if s else RZERO
    return x


def solve_exact(m: Matrix, rhs: Sequence) -> Solution:
    """Solve m x = rhs exactly; raises Inconsistent when no solution exists."""
    m = m.matrix if isinstance(m, ExactMatrix) else m
    n = len(m[0]) if m else 0
    aug = [_clear_row([_r(x) for x in row] + [_r(b)]) for row, b in zip(m, rhs)]
    if len(aug) != len(m):
        raise DomainError("rhs length does not match row count")
    pivots = _bareiss(aug, n)
    rk = len(pivots)
    for row in aug[rk:]:
        if row[n]:
            raise Inconsistent("linear system is inconsistent")
    pivot_cols = {c for _, c in pivots}
    free = [c for c in range(n) if c not in pivot_cols]
    part = _backsolve(aug, pivots, n, n, {})
    kern = []
    for f in free:
        vals = {c: RZERO for c in free}
        vals[f] = RONE
        kern.append(_backsolve(aug, pivots, n, None, vals))
    return Solution(part, kern, rk)


def solve_matrix(m: Matrix, b: Matrix) -> Matrix:
    """Unique X with m X = b (several right-hand sides at once)."""
    n = len(m[0]) if m else 0
    k = len(b[0]) if b else 0
    aug = [_clear_row([_r(x) for x in row] + [_r(y) for y in rb]) for row, rb in zip(m, b)]
    pivots = _bareiss(aug, n)
    if len(pivots) < n:
        raise DomainError("solve_matrix requires full column rank")
    for row in aug[len(pivots):]:
        if any(row[n:]):
            raise Inconsistent("linear system is inconsistent")
    cols = [_backsolve(aug, pivots, n, n + j, {}) for j in range(k)]
    return [[cols[j][i] for j in range(k)] for i in range(n)]


def inverse(m: Matrix) -> Matrix:
    n = len(m)
    if n == 0:
        return []
    return solve_matrix(m, identity(n))


def rank(m: Matrix) -> int:
    m = m.matrix if isinstance(m, ExactMatrix) else m
    if not m or not m[0]:
        return 0
    rows = [_clear_row([_r(x) for x in row]) for row in m]
    return len(_bareiss(rows, len(rows[0])))


def kernel(m: Matrix, ncols: int | None = None) -> list[list[RationalFn]]:
    """Basis of {x : m x = 0}."""
    m = m.matrix if isinstance(m, ExactMatrix) else m
    n = len(m[0]) if m else (ncols or 0)
    if not m:
        return [[RONE if i == j else RZERO for i in range(n)] for j in range(n)]
    return solve_exact(m, [RZERO] * len(m)).kernel


def determinant(m: Matrix) -> RationalFn:
    n = len(m)
    if n == 0:
        return RONE
    rows = [[_r(x) for x in row] for row in m]
    scale = RONE
    cleared = []
    for row in rows:
        c = _clear_row(row)
        # c = den * row, so det(row-scaled) = den * det
        nz = next((x for x, y in zip(row, c) if x), None)
        if nz is not None:
            k = next(y for x, y in zip(row, c) if x)
            scale = scale * (as_rational(k) / nz)
        cleared.append(c)
    work = [list(r) for r in cleared]
    sign = 1
    # Bareiss on a square matrix: last pivot is the determinant
    prev = ONE
    for c in range(n):
        p = next((i for i in range(c, n) if work[i][c]), None)
        if p is None:
            return RZERO
        if p != c:
            work[c], work[p] = work[p], work[c]
            sign = -sign
        piv = work[c][c]
        for i in range(c + 1, n):
            for j in range(c + 1, n):
                t = piv * work[i][j] - work[i][c] * work[c][j]
                work[i][j] = t.exact_div(prev) if prev != ONE and t else t
            work[i][c] = LaurentPoly(0)
        prev = piv
    return as_rational(work[n - 1][n - 1] * sign) / scale


def row_space_basis(rows: Sequence[Sequence[RationalFn]]) -> list[int]:
    """Indices of a greedy maximal independent subset of ``rows`` (in order)."""
    chosen: list[int] = []
    echelon: list[list[RationalFn]] = []
    pivcols: list[int] = []
    for idx, row in enumerate(rows):
        r = [_r(x) for x in row]
        for e, pc in zip(echelon, pivcols):
            if r[pc]:
                f = r[pc]
                r = [x - f * y if y else x for x, y in zip(r, e)]
        pc = next((j for j, x in enumerate(r) if x), None)
        if pc is None:
            continue
        inv = r[pc].inverse()
        r = [x * inv if x else x for x in r]
        # keep previous echelon rows reduced in the new pivot column
        for k, e in enumerate(echelon):
            if e[pc]:
                f = e[pc]
                echelon[k] = [x - f * y if y else x for x, y in zip(e, r)]
        echelon.append(r)
        pivcols.append(pc)
        chosen.append(idx)
    return chosen


class ExactMatrix:
    """Rectangular matrix of RationalFn entries with value semantics."""

    __slots__ = ("matrix",)

    def __init__(self, rows):
        rows = [[_r(x) for x in row] for row in rows]
        if rows and any(len(r) != len(rows[0]) for r in rows):
            raise DomainError("ExactMatrix rows must have equal length")
        self.matrix = rows

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.matrix), (len(self.matrix[0]) if self.matrix else 0)

    def __getitem__(self, ij):
        i, j = ij
        return self.matrix[i][j]

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        return ExactMatrix(mat_mul(self.matrix, other.matrix))

    def __add__(self, other):
        return ExactMatrix(mat_add(self.matrix, other.matrix))

    def __sub__(self, other):
        return ExactMatrix(mat_sub(self.matrix, other.matrix))

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.matrix == other.matrix

    def __repr__(self):
        body = "; ".join(", ".join(str(x) for x in row) for row in self.matrix)
        return f"ExactMatrix([{body}])"

    def rank(self) -> int:
        return rank(self.matrix)

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix(transpose(self.matrix))

    def bar(self) -> "ExactMatrix":
        return ExactMatrix([[x.bar() for x in row] for row in self.matrix])
