"""Littelmann paths: piecewise-linear paths with exact rational breakpoints.

A path is stored by its breakpoints ``(t_k, pi(t_k))`` with ``t_0 = 0`` and
``pi(0) = 0``; coordinates are fundamental-weight coordinates, so the
function ``h_i(t) = <pi(t), h_i>`` is just coordinate ``i``.  Because paths
are linear between breakpoints, extrema of ``h_i`` sit at breakpoints.
"""

from __future__ import annotations

from collections import defaultdict
from fractions import Fraction
from typing import Sequence

from .cartan import CartanDatum, Weight, height, wt, wt_levi
from .crystal import CrystalGraph, generate_from
from .errors import IncompleteSlice, NotDominant

__all__ = [
    "PLPath",
    "straight_path",
    "concatenate",
    "generate_path_crystal",
    "littelmann_decompose",
    "littelmann_restrict",
]

_ONE = Fraction(1)
_ZERO = Fraction(0)


def _canonical(times, points):
    """Drop zero-length segments and merge collinear neighbours."""
    ts = [times[0]]
    ps = [points[0]]
    for t, p in zip(times[1:], points[1:]):
        if t == ts[-1]:
            continue
        ts.append(t)
        ps.append(p)
    # second pass: merge collinear (same velocity) consecutive segments
    out_t = [ts[0]]
    out_p = [ps[0]]
    prev_vel = None
    for k in range(1, len(ts)):
        dt = ts[k] - out_t[-1]
        vel = tuple((a - b) / dt for a, b in zip(ps[k], out_p[-1]))
        if prev_vel is not None and vel == prev_vel:
            out_t[-1] = ts[k]
            out_p[-1] = ps[k]
        else:
            out_t.append(ts[k])
            out_p.append(ps[k])
            prev_vel = vel
    return tuple(out_t), tuple(out_p)


class PLPath:
    """A canonical piecewise-linear path; ``nu`` records the drop from the seed."""

    __slots__ = ("datum", "times", "points", "nu", "key", "_ops")

    def __init__(self, datum: CartanDatum, times, points, nu=None):
        times = tuple(Fraction(t) for t in times)
        points = tuple(tuple(Fraction(x) for x in p) for p in points)
        if not times or times[0] != 0 or times[-1] != 1:
            raise ValueError("path times must run from 0 to 1")
        if any(x != 0 for x in points[0]):
            raise ValueError("paths start at the origin")
        if any(b < a for a, b in zip(times, times[1:])):
            raise ValueError("path times must be non-decreasing")
        self.datum = datum
        self.times, self.points = _canonical(times, points)
        self.nu = tuple(nu) if nu is not None else (0,) * datum.rank
        self.key = ("P", self.times, self.points, self.nu)
        self._ops = {}

    @property
    def endpoint(self) -> tuple[Fraction, ...]:
        return self.points[-1]

    @property
    def weight(self) -> Weight:
        end = self.points[-1]
        if any(x.denominator != 1 for x in end):
            raise ValueError("path endpoint is not integral")
        return tuple(int(x) for x in end)

    def values(self, i: int) -> list[Fraction]:
        return [p[i] for p in self.points]

    def min_value(self, i: int) -> Fraction:
        return min(p[i] for p in self.points)

    def epsilon(self, i: int) -> int:
        return int(-self.min_value(i))

    def phi(self, i: int) -> int:
        h = self.values(i)
        return int(h[-1] - min(h))

    def is_dominant_after(self, shift: Sequence[int], J=None) -> bool:
        """``shift + pi(t)`` has non-negative J-coordinates for all t."""
        idx = range(self.datum.rank) if J is None else J
        return all(s_i + p[i] >= 0 for p in self.points for i, s_i in ((i, shift[i]) for i in idx))

    def f(self, i: int):
        if ("f", i) in self._ops:
            return self._ops[("f", i)]
        res = self._f(i)
        self._ops[("f", i)] = res
        return res

    def e(self, i: int):
        if ("e", i) in self._ops:
            return self._ops[("e", i)]
        res = self._e(i)
        self._ops[("e", i)] = res
        return res

    def _f(self, i: int):
        h = self.values(i)
        m = min(h)
        if h[-1] - m < 1:
            return None
        alpha = self.datum.simple_root(i)
        times, pts = self.times, self.points
        k0 = max(k for k, x in enumerate(h) if x == m)
        new_t = list(times[:k0 + 1])
        new_p = list(pts[:k0 + 1])
        k = k0
        while h[k + 1] < m + 1:
            k += 1
            p = pts[k]
            c = p[i] - m
            new_t.append(times[k])
            new_p.append(tuple(x - c * a for x, a in zip(p, alpha)))
        # crossing on segment k -> k+1
        s = (m + 1 - h[k]) / (h[k + 1] - h[k])
        t1 = times[k] + s * (times[k + 1] - times[k])
        p1 = tuple(a + s * (b - a) for a, b in zip(pts[k], pts[k + 1]))
        new_t.append(t1)
        new_p.append(tuple(x - a for x, a in zip(p1, alpha)))
        for kk in range(k + 1, len(times)):
            new_t.append(times[kk])
            new_p.append(tuple(x - a for x, a in zip(pts[kk], alpha)))
        nu = tuple(n + (1 if j == i else 0) for j, n in enumerate(self.nu))
        return PLPath(self.datum, new_t, new_p, nu)

    def _e(self, i: int):
        h = self.values(i)
        m = min(h)
        if m > -1:
            return None
        alpha = self.datum.simple_root(i)
        times, pts = self.times, self.points
        k1 = min(k for k, x in enumerate(h) if x == m)
        # t0: last time before t1 with h = m + 1; find segment k -> k+1 with h[k] >= m+1
        k = k1 - 1
        while h[k] < m + 1:
            k -= 1
        s = (m + 1 - h[k]) / (h[k + 1] - h[k])
        t0 = times[k] + s * (times[k + 1] - times[k])
        p0 = tuple(a + s * (b - a) for a, b in zip(pts[k], pts[k + 1]))
        new_t = list(times[:k + 1]) + [t0]
        new_p = list(pts[:k + 1]) + [p0]
        base = m + 1
        for kk in range(k + 1, k1 + 1):
            p = pts[kk]
            c = p[i] - base
            new_t.append(times[kk])
            new_p.append(tuple(x - c * a for x, a in zip(p, alpha)))
        for kk in range(k1 + 1, len(times)):
            new_t.append(times[kk])
            new_p.append(tuple(x + a for x, a in zip(pts[kk], alpha)))
        nu = tuple(n - (1 if j == i else 0) for j, n in enumerate(self.nu))
        return PLPath(self.datum, new_t, new_p, nu)

    def to_json(self) -> list:
        return [[t.numerator, t.denominator, [[x.numerator, x.denominator] for x in p]]
                for t, p in zip(self.times, self.points)]

    @classmethod
    def from_json(cls, datum: CartanDatum, data, nu=None) -> "PLPath":
        times = [Fraction(a, b) for a, b, _ in data]
        points = [[Fraction(x, y) for x, y in coords] for _, _, coords in data]
        return cls(datum, times, points, nu)

    def __eq__(self, other):
        return isinstance(other, PLPath) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        segs = ", ".join(f"{t}:{'(' + ','.join(str(x) for x in p) + ')'}"
                         for t, p in zip(self.times[1:], self.points[1:]))
        return f"PLPath[{segs}]"


def straight_path(datum: CartanDatum, lam: Sequence[int]) -> PLPath:
    """t -> t*lambda."""
    return PLPath(datum, [_ZERO, _ONE], [(0,) * datum.rank, tuple(lam)])


def concatenate(p1: PLPath, p2: PLPath) -> PLPath:
    """p1 * p2 traversed at double speed; nu adds."""
    half = Fraction(1, 2)
    end = p1.points[-1]
    times = [t * half for t in p1.times] + [half + t * half for t in p2.times[1:]]
    points = list(p1.points) + [tuple(a + b for a, b in zip(end, q)) for q in p2.points[1:]]
    nu = tuple(a + b for a, b in zip(p1.nu, p2.nu))
    return PLPath(p1.datum, times, points, nu)


def generate_path_crystal(datum: CartanDatum, lam: Sequence[int], depth: int) -> CrystalGraph:
    """B(lambda) as the f-closure of the straight path, up to ``depth`` steps."""
    lam = tuple(int(x) for x in lam)
    if len(lam) != datum.rank:
        raise ValueError(f"weight {lam} has wrong arity for rank {datum.rank}")
    if not datum.is_dominant(lam):
        raise NotDominant(f"{lam} is not dominant")
    if depth < 0:
        raise ValueError("depth must be non-negative")
    return generate_from(straight_path(datum, lam), depth, model="path")


def _check_dominant(datum, lambdas):
    out = []
    for lam in lambdas:
        lam = tuple(int(x) for x in lam)
        if len(lam) != datum.rank:
            raise ValueError(f"weight {lam} has wrong arity for rank {datum.rank}")
        if not datum.is_dominant(lam):
            raise NotDominant(f"{lam} is not dominant")
        out.append(lam)
    return out


def littelmann_decompose(datum: CartanDatum, lambdas: Sequence[Sequence[int]], depth: int):
    """Decomposition multiplicities from the path rule, iterated over factors.

    Returns ``(counts, complete)`` where ``counts`` maps nu (drop from the
    total top weight) to m_{wt(nu)}.  Every entry with ``height(nu) <= depth``
    is exact; ``complete`` says the full table was obtained.
    """
    lambdas = _check_dominant(datum, lambdas)
    zero = (0,) * datum.rank
    current = {zero: 1}
    top = lambdas[0]
    complete = True
    first = generate_path_crystal(datum, lambdas[0], depth)
    used = first.max_height() if first.saturated else None
    for lam in lambdas[1:]:
        g = generate_path_crystal(datum, lam, depth)
        if not g.saturated:
            complete = False
        elif used is not None:
            used += g.max_height()
        nxt: dict = defaultdict(int)
        for nu_a, mult in current.items():
            mu_a = wt(datum, [top], nu_a)
            budget = depth - height(nu_a)
            for pi in g.nodes:
                if height(pi.nu) > budget:
                    continue
                if pi.is_dominant_after(mu_a):
                    nxt[tuple(a + b for a, b in zip(nu_a, pi.nu))] += mult
        current = dict(nxt)
        top = tuple(a + b for a, b in zip(top, lam))
    if not first.saturated or (used is not None and used > depth) or not complete:
        complete = False
    return current, complete


def littelmann_restrict(datum: CartanDatum, lambdas: Sequence[Sequence[int]], J, depth: int):
    """Restriction multiplicities from J-dominant concatenated paths.

    Returns ``(counts, complete)`` with ``counts`` keyed by
    ``(mu_J, sector, nu)``: the Levi weight, ``pr_{I\\J}(nu)`` and the full
    drop.  Entries with ``height(nu) <= depth`` are exact.
    """
    lambdas = _check_dominant(datum, lambdas)
    J = datum.levi(J)
    off = [k for k in datum.indices if k not in J]
    graphs = [generate_path_crystal(datum, lam, depth) for lam in lambdas]
    by_h = []
    for g in graphs:
        lv = defaultdict(list)
        for p in g.nodes:
            lv[height(p.nu)].append(p)
        by_h.append(lv)
    counts: dict = defaultdict(int)

    def rec(k, budget, shift, nu):
        if k == len(graphs):
            mu_j = wt_levi(datum, J, lambdas, nu)
            counts[(mu_j, tuple(nu[i] for i in off), nu)] += 1
            return
        for hgt in sorted(by_h[k]):
            if hgt > budget:
                break
            for p in by_h[k][hgt]:
                if not p.is_dominant_after(shift, J):
                    continue
                rec(k + 1, budget - hgt, tuple(a + b for a, b in zip(shift, p.weight)),
                    tuple(a + b for a, b in zip(nu, p.nu)))

    rec(0, depth, (0,) * datum.rank, (0,) * datum.rank)
    complete = all(g.saturated for g in graphs) and sum(g.max_height() for g in graphs) <= depth
    return dict(counts), complete


def require_complete(nu, depth, complete):
    if not complete and height(nu) > depth:
        raise IncompleteSlice(f"nu={nu} beyond depth {depth}")
