"""The quasi-R-matrix, degree by degree.

With the coproduct of :mod:`.modules`, Theta = sum_nu Theta_nu with
Theta_nu in U+_nu (x) U-_nu, Theta_0 = 1 (x) 1, and
``D(u) Theta = Theta Dbar(u)`` where ``Dbar(E_i) = E_i (x) K_{-i} + 1 (x) E_i``
and ``Dbar(F_i) = F_i (x) 1 + K_i (x) F_i``.  In degree nu the F_i identity is

    [F_i (x) 1, Theta_nu] + (K_{-i} (x) F_i) Theta_{nu-i} - Theta_{nu-i} (K_i (x) F_i) = 0

and the E_i identity is

    [1 (x) E_i, Theta_nu] + (E_i (x) K_i) Theta_{nu-i} - Theta_{nu-i} (E_i (x) K_{-i}) = 0.

Theta_nu is solved from the F identities alone, evaluated on a probe module
P = L(lambda_p) with lambda_p large enough that U-_nu embeds; the E
identities are then an independent check.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from ..cartan import CartanDatum, dim_vectors, height
from ..errors import Inconsistent, RankUnsupported, SingularSystem
from ..laurent import RONE, RZERO, LaurentPoly, RationalFn, as_rational, in_lattice_A
from ..linalg import inverse, mat_mul, row_space_basis, transpose
from .modules import IrreducibleModule, WeightModule, vadd

__all__ = ["ThetaExpansion", "compute_theta", "apply_theta", "theta_residuals"]


def _vpow(k: int) -> RationalFn:
    return as_rational(LaurentPoly.monomial(k))


@dataclass
class ThetaExpansion:
    """Theta truncated at height(nu) <= depth.

    ``terms[nu]`` lists ``(x, y, c)``: the summand ``c E_x (x) F_y`` with
    ``x``, ``y`` index words (E_x = E_{x1} ... E_{xm}).
    """

    datum: CartanDatum
    depth: int
    terms: dict = field(default_factory=dict)

    def degrees(self):
        return sorted(self.terms, key=lambda nu: (height(nu), nu))

    def coefficient(self, nu, x, y) -> RationalFn:
        for a, b, c in self.terms.get(tuple(nu), []):
            if a == tuple(x) and b == tuple(y):
                return c
        return RZERO

    def to_json(self) -> dict:
        return {
            "depth": self.depth,
            "terms": [
                {"nu": list(nu), "E": [i + 1 for i in x], "F": [i + 1 for i in y], "coeff": str(c)}
                for nu in self.degrees() for x, y, c in self.terms[nu]
            ],
        }


def _word_content(word, rank):
    nu = [0] * rank
    for i in word:
        nu[i] += 1
    return tuple(nu)


def apply_theta_degree(theta: ThetaExpansion, nu, m1: WeightModule, m2: WeightModule, vec: dict) -> dict:
    """Theta_nu applied to a vector on pairs {(p, q): coeff}."""
    out: dict = {}
    terms = theta.terms.get(tuple(nu))
    if not terms:
        return out
    for (p, q), c in vec.items():
        for x, y, t in terms:
            ex = m1.e_word(x, {p: RONE})
            if not ex:
                continue
            fy = m2.f_word(y, {q: RONE})
            if not fy:
                continue
            s = c * t
            for p2, a in ex.items():
                for q2, b in fy.items():
                    vadd(out, {(p2, q2): s * a * b})
    return out


def apply_theta(theta: ThetaExpansion, m1: WeightModule, m2: WeightModule, vec: dict) -> dict:
    """Full truncated Theta on pair-indexed vectors."""
    out: dict = {}
    for nu in theta.degrees():
        vadd(out, apply_theta_degree(theta, nu, m1, m2, vec))
    return out


# -- pair-vector helpers --------------------------------------------------------

def _left(m, op, vec):
    out: dict = {}
    for (p, q), c in vec.items():
        for p2, a in op(m, p).items():
            vadd(out, {(p2, q): c * a})
    return out


def _right(m, op, vec):
    out: dict = {}
    for (p, q), c in vec.items():
        for q2, b in op(m, q).items():
            vadd(out, {(p, q2): c * b})
    return out


def _op_F(i):
    return lambda m, k: m.F(i, {k: RONE})


def _op_E(i):
    return lambda m, k: m.E(i, {k: RONE})


def _op_K(i, sign):
    def op(m, k):
        return {k: _vpow(sign * m.weight(k)[i])}
    return op


def _sub(a: dict, b: dict) -> dict:
    out = dict(a)
    vadd(out, b, -RONE)
    return out


def _unit(rank, i):
    return tuple(1 if j == i else 0 for j in range(rank))


def f_identity(theta, nu, i, m1, m2, vec) -> dict:
    """Left side of the degree-nu F_i identity applied to vec."""
    prev = tuple(n - u for n, u in zip(nu, _unit(len(nu), i)))
    t_nu = lambda x: apply_theta_degree(theta, nu, m1, m2, x)
    out = _sub(_left(m1, _op_F(i), t_nu(vec)), t_nu(_left(m1, _op_F(i), vec)))
    if min(prev) >= 0:
        t_prev = lambda x: apply_theta_degree(theta, prev, m1, m2, x)
        a = _left(m1, _op_K(i, -1), _right(m2, _op_F(i), t_prev(vec)))
        b = t_prev(_left(m1, _op_K(i, +1), _right(m2, _op_F(i), vec)))
        vadd(out, _sub(a, b))
    return out


def e_identity(theta, nu, i, m1, m2, vec) -> dict:
    prev = tuple(n - u for n, u in zip(nu, _unit(len(nu), i)))
    t_nu = lambda x: apply_theta_degree(theta, nu, m1, m2, x)
    out = _sub(_right(m2, _op_E(i), t_nu(vec)), t_nu(_right(m2, _op_E(i), vec)))
    if min(prev) >= 0:
        t_prev = lambda x: apply_theta_degree(theta, prev, m1, m2, x)
        a = _left(m1, _op_E(i), _right(m2, _op_K(i, +1), t_prev(vec)))
        b = t_prev(_left(m1, _op_E(i), _right(m2, _op_K(i, -1), vec)))
        vadd(out, _sub(a, b))
    return out


# -- solving ---------------------------------------------------------------------

@lru_cache(maxsize=16)
def compute_theta(datum: CartanDatum, depth: int) -> ThetaExpansion:
    """Theta_nu for every nu with height(nu) <= depth."""
    if datum.rank > IrreducibleModule.MAX_RANK:
        raise RankUnsupported("Theta is computed at rank <= 2 only")
    rank = datum.rank
    zero = (0,) * rank
    theta = ThetaExpansion(datum, depth, {zero: [((), (), RONE)]})
    if depth == 0:
        return theta
    probe = IrreducibleModule(datum, (depth,) * rank, depth)
    v0 = probe.block(zero)[0]
    for h in range(1, depth + 1):
        for nu in dim_vectors(rank, h):
            if height(nu) != h:
                continue
            theta.terms[nu] = _solve_degree(theta, probe, v0, nu)
            if not theta.terms[nu]:
                del theta.terms[nu]
    return theta


def _solve_degree(theta, probe, v0, nu):
    """Theta_nu = sum c_xy E_x (x) F_y from the F identities on w (x) v0.

    Writing S[(i, w)][x] = (E_x F_i w)_{v0} and Y[q][y] = (F_y v0)_q, the
    unknown part of the identity is ``-S C Y^T``, so C = S^+ R (Y^T)^-1 with
    R the known part; S is checked to have full column rank and the solution
    is checked against every row.
    """
    rank_ = probe.datum.rank
    words = probe.words.get(nu, [])
    if not words:
        return []
    d = len(words)
    target = probe.block(nu)
    tpos = {k: r for r, k in enumerate(target)}
    ymat = [[RZERO] * d for _ in target]
    for b, y in enumerate(words):
        for q, c in probe.f_word(y, {v0: RONE}).items():
            ymat[tpos[q]][b] = c
    srows: list[list[RationalFn]] = []
    rrows: list[list[RationalFn]] = []
    for i in range(rank_):
        if nu[i] == 0:
            continue
        for w in probe.block(tuple(n - u for n, u in zip(nu, _unit(rank_, i)))):
            fw = probe.F(i, {w: RONE})
            srows.append([probe.e_word(x, fw).get(v0, RZERO) for x in words])
            known = f_identity(theta, nu, i, probe, probe, {(w, v0): RONE})
            vec = [RZERO] * len(target)
            for (p, q), c in known.items():
                if p != v0 or q not in tpos:
                    raise SingularSystem(f"probe identity left the expected block at nu={nu}")
                vec[tpos[q]] = c
            rrows.append(vec)
    chosen = row_space_basis(srows)
    if len(chosen) < d:
        raise SingularSystem(f"Theta_{nu} is not determined by the probe (rank {len(chosen)} < {d})")
    try:
        s_inv = inverse([srows[k] for k in chosen])
        yt_inv = inverse(transpose(ymat))
    except (Inconsistent, ZeroDivisionError, ValueError) as exc:
        raise SingularSystem(f"degenerate probe system at nu={nu}") from exc
    cmat = mat_mul(mat_mul(s_inv, [rrows[k] for k in chosen]), yt_inv)
    check = mat_mul(mat_mul(srows, cmat), transpose(ymat))
    if check != rrows:
        raise SingularSystem(f"no Theta_{nu} satisfies the F identities")
    return [(x, y, cmat[a][b]) for a, x in enumerate(words) for b, y in enumerate(words) if cmat[a][b]]


def theta_residuals(theta: ThetaExpansion, m1: WeightModule, m2: WeightModule) -> list[str]:
    """Nonzero residuals of both identities on every basis pair; empty list = pass."""
    bad = []
    rank = theta.datum.rank
    degrees = [nu for h in range(1, theta.depth + 1)
               for nu in dim_vectors(rank, h) if height(nu) == h]
    for nu in degrees:
        for i in range(rank):
            for p in range(m1.dim):
                for q in range(m2.dim):
                    if not m1.has_F(i, p) or not m2.has_F(i, q):
                        continue
                    vec = {(p, q): RONE}
                    if any(f_identity(theta, nu, i, m1, m2, vec).values()):
                        bad.append(f"F_{i} identity fails in degree {nu} on ({p},{q})")
                    if any(e_identity(theta, nu, i, m1, m2, vec).values()):
                        bad.append(f"E_{i} identity fails in degree {nu} on ({p},{q})")
    return bad


def theta_preserves_lattice(theta: ThetaExpansion, m1, m2, basis1, basis2) -> bool:
    """Theta maps b (x) b' into the A-span of the pure tensors of the two bases.

    ``basis*`` are lists of vectors (the lattice bases); coordinates of the
    image are found by solving in each factor separately.
    """
    from .canonical import LatticeCoords

    c1, c2 = LatticeCoords(m1, basis1), LatticeCoords(m2, basis2)
    for a, x in enumerate(basis1):
        for b, y in enumerate(basis2):
            vec = {}
            for p, s in x.items():
                for q, t in y.items():
                    vadd(vec, {(p, q): s * t})
            img = apply_theta(theta, m1, m2, vec)
            for coeff in c1.pair_coords(c2, img).values():
                if not coeff.is_laurent():
                    return False
    return True
