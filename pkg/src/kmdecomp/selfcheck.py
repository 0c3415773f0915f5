"""The invariant corpus behind ``kmdecomp self-check``.

Every check is a zero-argument callable returning a list of failure
messages; an empty list is a pass.  Depths are pinned so that runs are
reproducible and finish in well under a minute.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable

from .cartan import a2, affine_a1, sl2
from .crystal import canonical_form, check_axioms, tensor_graph
from .decomp import decompose, format_weight
from .errors import KMDecompError
from .paths import generate_path_crystal

__all__ = ["Check", "CheckResult", "default_corpus", "run_corpus"]


@dataclass
class Check:
    name: str
    run: Callable[[], list]
    exact: bool = True  # False: the check involves lower-bound rows


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float
    exact: bool


def _axioms(datum, lam, depth):
    return lambda: check_axioms(generate_path_crystal(datum, lam, depth))


def _assoc(datum, lams, depth):
    def run():
        g = [generate_path_crystal(datum, lam, depth) for lam in lams]
        left = tensor_graph(tensor_graph(g[0], g[1], depth=depth), g[2], depth=depth)
        right = tensor_graph(g[0], tensor_graph(g[1], g[2], depth=depth), depth=depth)
        flat = tensor_graph(*g, depth=depth)
        forms = {canonical_form(x) for x in (left, right, flat)}
        return [] if len(forms) == 1 else ["tensor bracketings give non-isomorphic crystals"]
    return run


def _engines(datum, lams, depth, expected=None):
    def run():
        try:
            table = decompose(datum, lams, depth, "all")
        except KMDecompError as exc:
            return [str(exc)]
        if expected is not None and table.as_dict() != expected:
            return [f"got {table.as_dict()}, expected {expected}"]
        return []
    return run


def _affine_rows():
    table = decompose(affine_a1(), [(1, 0), (1, 0)], 6, "all")
    bad = []
    if table.multiplicity((2, 0), nu=(0, 0)) != 1:
        bad.append("m_{2 Lambda_0} != 1")
    return bad


def _relations(datum, lam):
    def run():
        from .quantum.modules import IrreducibleModule
        from .quantum.relations import check_bar, check_relations

        m = IrreducibleModule(datum, lam)
        return check_relations(m) + check_bar(m)
    return run


def _theta(datum, depth, lam1, lam2):
    def run():
        from .quantum.modules import IrreducibleModule
        from .quantum.theta import compute_theta, theta_residuals

        return theta_residuals(compute_theta(datum, depth), IrreducibleModule(datum, lam1),
                               IrreducibleModule(datum, lam2))
    return run


def _canonical_sl2():
    from collections import Counter

    from .quantum.canonical import canonical_basis_tensor, classify_filtration

    basis = canonical_basis_tensor(sl2(), [(1,), (1,)])
    classes, _ = classify_filtration(basis)
    got = dict(Counter(classes))
    return [] if got == {(2,): 3, (0,): 1} else [f"filtration classes {got}"]


def default_corpus() -> list[Check]:
    s, a, aff = sl2(), a2(), affine_a1()
    checks = []
    for n in range(5):
        checks.append(Check(f"axioms sl2 L({n})", _axioms(s, (n,), 8)))
    for lam in [(1, 0), (0, 1), (1, 1), (2, 0), (2, 1)]:
        checks.append(Check(f"axioms A2 L{format_weight(lam)}", _axioms(a, lam, 10)))
    checks.append(Check("axioms affine A1 L(Lambda_0) depth 4", _axioms(aff, (1, 0), 4), exact=False))
    checks.append(Check("axioms affine A1 L(Lambda_1) depth 4", _axioms(aff, (0, 1), 4), exact=False))
    checks.append(Check("associativity A2 (1,0)^3", _assoc(a, [(1, 0)] * 3, 6)))
    checks.append(Check("associativity affine A1 Lambda_0^3 depth 3", _assoc(aff, [(1, 0)] * 3, 3), exact=False))
    checks.append(Check("engines sl2 L(2) x L(3)", _engines(s, [(2,), (3,)], 12, {(5,): 1, (3,): 1, (1,): 1})))
    checks.append(Check("engines A2 (1,1) x (1,1)", _engines(
        a, [(1, 1), (1, 1)], 12, {(2, 2): 1, (3, 0): 1, (0, 3): 1, (1, 1): 2, (0, 0): 1})))
    checks.append(Check("engines affine A1 Lambda_0 x Lambda_0 depth 6", _affine_rows, exact=False))
    for lam in [(1,), (2,), (3,)]:
        checks.append(Check(f"relations sl2 L{format_weight(lam)}", _relations(s, lam)))
    for lam in [(1, 0), (1, 1)]:
        checks.append(Check(f"relations A2 L{format_weight(lam)}", _relations(a, lam)))
    checks.append(Check("theta sl2 depth 3 on L(1) x L(2)", _theta(s, 3, (1,), (2,))))
    checks.append(Check("theta A2 depth 2 on L(1,0) x L(0,1)", _theta(a, 2, (1, 0), (0, 1))))
    checks.append(Check("canonical basis sl2 L(1) x L(1)", _canonical_sl2))
    return checks


def run_corpus(checks: list[Check] | None = None) -> list[CheckResult]:
    out = []
    for chk in checks if checks is not None else default_corpus():
        t0 = time.perf_counter()
        try:
            fails = chk.run()
        except KMDecompError as exc:
            fails = [f"{type(exc).__name__}: {exc}"]
        dt = time.perf_counter() - t0
        out.append(CheckResult(chk.name, not fails, "; ".join(map(str, fails[:3])), dt, chk.exact))
    return out
