"""Abstract crystals: tensor products, bounded generation, Levi restriction.

A crystal element is any object exposing

* ``datum``, ``weight`` (fundamental coordinates), ``nu`` (drop from the top
  weight of its crystal, simple-root coordinates) and a hashable ``key``;
* ``epsilon(i)``, ``phi(i)`` and the partial operators ``e(i)``, ``f(i)``
  returning an element or ``None``.

``PLPath`` (Littelmann paths) and ``TensorElement`` are the two models here.

Tensor convention (Kashiwara): for ``b1 (x) b2``,
``eps_i = max(eps_i(b1), eps_i(b2) - <h_i, wt b1>)`` and ``f_i`` acts on
``b1`` iff ``phi_i(b1) > eps_i(b2)``.  The N-fold rule is the usual
signature rule: factor k contributes ``-^eps +^phi``, adjacent ``+-`` pairs
cancel, ``f`` hits the leftmost surviving ``+`` and ``e`` the rightmost
surviving ``-``.  Multiplicities do not depend on the factor order; the
engines take factors in the order given.
"""

from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .cartan import CartanDatum, DimVector, Weight, dominance_diff, height
from .errors import DatumMismatch, IncompleteSlice, NotDominant

__all__ = [
    "TensorElement",
    "tensor",
    "CrystalGraph",
    "generate",
    "generate_from",
    "tensor_graph",
    "highest_weight_elements",
    "levi_restrict",
    "check_axioms",
    "canonical_form",
    "to_dot",
    "is_highest_weight",
]


def _add(a, b):
    return tuple(x + y for x, y in zip(a, b))


class TensorElement:
    """b_1 (x) ... (x) b_N under the Kashiwara signature rule."""

    __slots__ = ("factors", "datum", "weight", "nu", "key", "_sig")

    def __init__(self, factors: Sequence):
        factors = tuple(factors)
        if not factors:
            raise ValueError("tensor of zero factors")
        datum = factors[0].datum
        for b in factors[1:]:
            if b.datum != datum:
                raise DatumMismatch("tensor factors live over different Cartan data")
        self.factors = factors
        self.datum = datum
        w = factors[0].weight
        n = factors[0].nu
        for b in factors[1:]:
            w = _add(w, b.weight)
            n = _add(n, b.nu)
        self.weight = w
        self.nu = n
        self.key = ("T",) + tuple(b.key for b in factors)
        self._sig = {}

    def _signature(self, i: int):
        s = self._sig.get(i)
        if s is not None:
            return s
        plus: list[list[int]] = []  # [factor index, surviving + count]
        minus = 0
        last_minus = None
        for k, b in enumerate(self.factors):
            m = b.epsilon(i)
            while m and plus:
                top = plus[-1]
                c = min(top[1], m)
                top[1] -= c
                m -= c
                if top[1] == 0:
                    plus.pop()
            if m:
                minus += m
                last_minus = k
            p = b.phi(i)
            if p:
                plus.append([k, p])
        phi = sum(c for _, c in plus)
        s = (minus, phi, plus[0][0] if plus else None, last_minus)
        self._sig[i] = s
        return s

    def epsilon(self, i: int) -> int:
        return self._signature(i)[0]

    def phi(self, i: int) -> int:
        return self._signature(i)[1]

    def f(self, i: int):
        k = self._signature(i)[2]
        if k is None:
            return None
        g = self.factors[k].f(i)
        if g is None:  # pragma: no cover - phi > 0 guarantees f is defined
            return None
        return TensorElement(self.factors[:k] + (g,) + self.factors[k + 1:])

    def e(self, i: int):
        k = self._signature(i)[3]
        if k is None:
            return None
        g = self.factors[k].e(i)
        if g is None:  # pragma: no cover
            return None
        return TensorElement(self.factors[:k] + (g,) + self.factors[k + 1:])

    def __eq__(self, other):
        return isinstance(other, TensorElement) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return " (x) ".join(repr(b) for b in self.factors)


def tensor(b1, b2) -> TensorElement:
    """Binary tensor product b1 (x) b2 (nested, so brackets are preserved)."""
    return TensorElement((b1, b2))


def is_highest_weight(b, index_set: Iterable[int]) -> bool:
    return all(b.epsilon(i) == 0 for i in index_set)


@dataclass
class CrystalGraph:
    """A finite piece of a crystal: nodes in deterministic order plus f-edges.

    ``top`` is the weight every ``nu`` is measured from.  Slices with
    ``height(nu) <= depth`` are complete; when ``saturated`` the whole crystal
    was generated and every slice is complete.
    """

    datum: CartanDatum
    top: Weight
    nodes: list
    edges: list[tuple[int, int, int]]
    depth: int
    saturated: bool
    index_set: tuple[int, ...] = None
    model: str = "path"
    _index: dict = field(default=None, repr=False)
    _succ: dict = field(default=None, repr=False)

    def __post_init__(self):
        if self.index_set is None:
            self.index_set = tuple(self.datum.indices)
        self._index = {b.key: k for k, b in enumerate(self.nodes)}
        self._succ = {(s, i): t for s, i, t in self.edges}

    def __len__(self):
        return len(self.nodes)

    def lookup(self, b) -> int | None:
        return self._index.get(b.key)

    def f_edge(self, node: int, i: int) -> int | None:
        return self._succ.get((node, i))

    def complete(self, nu: Sequence[int]) -> bool:
        return self.saturated or height(nu) <= self.depth

    def nodes_at(self, nu: Sequence[int]) -> list:
        nu = tuple(nu)
        return [b for b in self.nodes if b.nu == nu]

    def weight_multiset(self) -> dict[tuple, int]:
        out: dict[tuple, int] = defaultdict(int)
        for b in self.nodes:
            out[(b.weight, b.nu)] += 1
        return dict(out)

    def max_height(self) -> int:
        return max((height(b.nu) for b in self.nodes), default=0)


def generate_from(seed, depth: int, model: str = "path") -> CrystalGraph:
    """f-closure of ``seed`` up to ``depth`` applications (BFS, dedup by key)."""
    datum = seed.datum
    nodes = [seed]
    index = {seed.key: 0}
    edges = []
    frontier = [0]
    saturated = True
    for level in range(depth + 1):
        nxt = []
        for k in frontier:
            b = nodes[k]
            for i in datum.indices:
                c = b.f(i)
                if c is None:
                    continue
                if level == depth:
                    saturated = False
                    continue
                t = index.get(c.key)
                if t is None:
                    t = len(nodes)
                    index[c.key] = t
                    nodes.append(c)
                    nxt.append(t)
                edges.append((k, i, t))
        frontier = nxt
        if not frontier:
            break
    top = tuple(w + d for w, d in zip(seed.weight, datum.root_to_weight(seed.nu)))
    return CrystalGraph(datum, top, nodes, sorted(edges), depth, saturated, model=model)


def generate(datum: CartanDatum, lam: Sequence[int], depth: int, model: str = "path") -> CrystalGraph:
    """B(lambda) up to ``depth`` in the requested model."""
    lam = tuple(lam)
    if not datum.is_dominant(lam):
        raise NotDominant(f"{lam} is not dominant")
    if model != "path":
        raise ValueError(f"unknown crystal model {model!r}")
    from .paths import straight_path

    return generate_from(straight_path(datum, lam), depth, model="path")


def _by_height(graph: CrystalGraph) -> dict[int, list]:
    out: dict[int, list] = defaultdict(list)
    for b in graph.nodes:
        out[height(b.nu)].append(b)
    return out


def tensor_graph(*graphs: CrystalGraph, depth: int | None = None, with_edges: bool = True) -> CrystalGraph:
    """All tuples (b_1, ..., b_N) with total height <= depth, plus f-edges.

    Tensor crystals are not connected, so nodes are enumerated from the
    product of the factor balls rather than by closure from hw (x) ... (x) hw.
    """
    if not graphs:
        raise ValueError("tensor_graph needs at least one factor")
    datum = graphs[0].datum
    for g in graphs[1:]:
        if g.datum != datum:
            raise DatumMismatch("factor crystals live over different Cartan data")
    if depth is None:
        depth = min(g.depth for g in graphs) if not all(g.saturated for g in graphs) else sum(
            g.max_height() for g in graphs)
    levels = [_by_height(g) for g in graphs]
    for g in graphs:
        if not g.saturated and g.depth < depth:
            raise IncompleteSlice(f"factor generated to depth {g.depth} < requested {depth}")

    nodes = []

    def rec(k, budget, prefix):
        if k == len(graphs):
            nodes.append(TensorElement(prefix))
            return
        for h in sorted(levels[k]):
            if h > budget:
                break
            for b in levels[k][h]:
                rec(k + 1, budget - h, prefix + (b,))

    rec(0, depth, ())
    nodes.sort(key=lambda b: (height(b.nu), b.nu))
    index = {b.key: k for k, b in enumerate(nodes)}
    edges = []
    if with_edges:
        for k, b in enumerate(nodes):
            for i in datum.indices:
                c = b.f(i)
                if c is None:
                    continue
                t = index.get(c.key)
                if t is not None:
                    edges.append((k, i, t))
    top = tuple(sum(g.top[j] for g in graphs) for j in datum.indices)
    saturated = all(g.saturated for g in graphs) and sum(g.max_height() for g in graphs) <= depth
    return CrystalGraph(datum, top, nodes, edges, depth, saturated, model="tensor")


def levi_restrict(graph: CrystalGraph, J) -> CrystalGraph:
    """Same nodes, only the f_j edges with j in J; hw detection then uses J only."""
    J = graph.datum.levi(J)
    edges = [(s, i, t) for s, i, t in graph.edges if i in J]
    return CrystalGraph(graph.datum, graph.top, list(graph.nodes), edges, graph.depth,
                        graph.saturated, index_set=J, model=graph.model)


def _nu_of_weight(graph: CrystalGraph, mu: Sequence[int]) -> DimVector | None:
    datum = graph.datum
    if not datum.nonsingular:
        raise IncompleteSlice("weight slices of a singular datum need an explicit nu")
    return dominance_diff(datum, graph.top, mu)


def highest_weight_elements(graph: CrystalGraph, mu: Sequence[int] | None = None,
                            nu: Sequence[int] | None = None) -> list:
    """Elements with eps_i = 0 for every i in the graph's index set, at one slice."""
    if nu is None:
        if mu is None:
            raise ValueError("give mu or nu")
        nu = _nu_of_weight(graph, mu)
        if nu is None:
            return []
    nu = tuple(nu)
    if not graph.complete(nu):
        raise IncompleteSlice(f"slice nu={nu} lies beyond generation depth {graph.depth}")
    return [b for b in graph.nodes if b.nu == nu and is_highest_weight(b, graph.index_set)]


def check_axioms(graph: CrystalGraph, cascade: int = 6) -> list[str]:
    """Crystal axiom violations (empty list = all hold)."""
    datum = graph.datum
    bad = []
    for k, b in enumerate(graph.nodes):
        for i in graph.index_set:
            eps, phi = b.epsilon(i), b.phi(i)
            if phi - eps != b.weight[i]:
                bad.append(f"node {k}: phi-eps != <h_{i}, wt> ({phi}-{eps} vs {b.weight[i]})")
            if eps < 0 or phi < 0:
                bad.append(f"node {k}: negative eps/phi")
            c = b.f(i)
            if (c is None) != (phi == 0):
                bad.append(f"node {k}: f_{i} defined iff phi>0 violated")
            if c is not None:
                if c.e(i) is None or c.e(i).key != b.key:
                    bad.append(f"node {k}: e_{i} f_{i} != id")
                if c.weight != tuple(w - a for w, a in zip(b.weight, datum.simple_root(i))):
                    bad.append(f"node {k}: wt(f_{i} b) != wt(b) - alpha_{i}")
            d = b.e(i)
            if (d is None) != (eps == 0):
                bad.append(f"node {k}: e_{i} defined iff eps>0 violated")
            if d is not None and (d.f(i) is None or d.f(i).key != b.key):
                bad.append(f"node {k}: f_{i} e_{i} != id")
            # eps = max{k : e^k b defined}, phi likewise with f
            for op, val, name in ((b.e, eps, "e"), (b.f, phi, "f")):
                x, steps = b, 0
                while steps <= min(val, cascade):
                    y = x.e(i) if name == "e" else x.f(i)
                    if y is None:
                        break
                    x, steps = y, steps + 1
                expect = min(val, cascade + 1)
                if steps != expect and not (val > cascade and steps == cascade + 1):
                    bad.append(f"node {k}: {name}_{i} cascade length {steps}, expected {val}")
    for s, i, t in graph.edges:
        src, tgt = graph.nodes[s], graph.nodes[t]
        if tgt.weight != tuple(w - a for w, a in zip(src.weight, datum.simple_root(i))):
            bad.append(f"edge {s}->{t}: weight law")
        back = tgt.e(i)
        if back is None or back.key != src.key:
            bad.append(f"edge {s}->{t}: e_{i} does not invert the edge")
    return bad


def canonical_form(graph: CrystalGraph):
    """Isomorphism invariant of an edge-labelled weighted crystal graph.

    Each component is relabelled by BFS from its highest-weight node, taking
    f_i in index order; the form is the sorted tuple of relabelled components.
    Any isomorphism commutes with f_i and fixes weights, so isomorphic graphs
    get equal forms.
    """
    seen = set()
    comps = []
    for k, b in enumerate(graph.nodes):
        if not is_highest_weight(b, graph.index_set):
            continue
        order = {k: 0}
        queue = deque([k])
        labels = []
        local_edges = []
        while queue:
            u = queue.popleft()
            labels.append((graph.nodes[u].weight, graph.nodes[u].nu))
            for i in graph.index_set:
                t = graph.f_edge(u, i)
                if t is None:
                    continue
                if t not in order:
                    order[t] = len(order)
                    queue.append(t)
                local_edges.append((order[u], i, order[t]))
        seen.update(order)
        comps.append((tuple(labels), tuple(sorted(local_edges))))
    orphans = len(graph.nodes) - len(seen)
    return tuple(sorted(comps)), orphans


def _fmt_weight(w) -> str:
    return "(" + ",".join(str(x) for x in w) + ")"


def to_dot(graph: CrystalGraph, name: str = "crystal") -> str:
    lines = [f"digraph {name} {{"]
    for k, b in enumerate(graph.nodes):
        lines.append(f'  n{k} [label="{_fmt_weight(b.weight)}"];')
    for s, i, t in graph.edges:
        lines.append(f'  n{s} -> n{t} [label="{graph.datum.labels[i]}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
