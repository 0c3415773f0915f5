"""Decomposition, restriction, coinvariants and filtration ranks.

Three engines, chosen per call:

* ``crystal``: highest-weight elements of the Kashiwara tensor crystal;
* ``path``: the Littelmann dominance rule on concatenated paths;
* ``character``: Freudenthal characters plus greedy splitting (finite type).

``engine="all"`` runs every applicable engine and insists on identical
results over the rows all of them cover.
"""

from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Sequence

from .cartan import CartanDatum, Weight, dominance_diff, height, wt, wt_levi
from .character import (freudenthal_character, greedy_decompose, levi_decompose,
                        tensor_character)
from .crystal import is_highest_weight, tensor_graph
from .errors import EngineDisagreement, FiniteTypeOnly, IncompleteSlice, NotDominant
from .paths import generate_path_crystal, littelmann_decompose, littelmann_restrict

__all__ = [
    "Row",
    "MultiplicityTable",
    "decompose",
    "restrict",
    "coinvariants_dim",
    "filtration_ranks",
    "ENGINES",
    "format_weight",
]

ENGINES = ("crystal", "path", "character")


def format_weight(w: Sequence[int]) -> str:
    return "(" + ",".join(str(x) for x in w) + ")"


@dataclass(frozen=True)
class Row:
    weight: Weight  # mu, or mu_J for restriction rows
    multiplicity: int
    exact: bool
    nu: tuple | None = None  # drop from the top weight (None if not unique)
    sector: tuple | None = None  # pr_{I\J}(nu) for restriction rows

    def sort_key(self):
        if self.sector is not None:
            return (sum(self.sector), self.sector, self.weight)
        return (height(self.nu), self.nu)


@dataclass
class MultiplicityTable:
    kind: str  # "decompose" or "restrict"
    datum: CartanDatum
    lambdas: tuple
    depth: int
    engine: str
    rows: list[Row]
    complete: bool
    levi: tuple | None = None
    engines_run: tuple = field(default_factory=tuple)

    def __post_init__(self):
        self.rows = sorted(self.rows, key=Row.sort_key)

    def as_dict(self) -> dict:
        """mu -> multiplicity (decomposition) or mu_J -> total (restriction).

        For a singular Cartan matrix distinct drops nu can share a weight in
        fundamental coordinates (they differ by imaginary roots), so
        decomposition keys become ``(mu, nu)``.
        """
        if self.kind == "restrict":
            return {w: m for w, (m, _) in self.totals().items()}
        if not self.datum.nonsingular:
            return {(r.weight, r.nu): r.multiplicity for r in self.rows}
        return {r.weight: r.multiplicity for r in self.rows}

    def by_nu(self) -> dict:
        return {r.nu: r.multiplicity for r in self.rows}

    def sector_dict(self) -> dict:
        return {(r.weight, r.sector): r.multiplicity for r in self.rows}

    def totals(self) -> dict:
        """Restriction totals per mu_J: (count, exact).

        A total is exact only when every sector that could contribute has
        been generated, i.e. the whole table is complete.
        """
        out: dict = defaultdict(int)
        for r in self.rows:
            out[r.weight] += r.multiplicity
        return {w: (m, self.complete) for w, m in sorted(out.items())}

    def multiplicity(self, mu, nu=None) -> int:
        if nu is not None:
            return self.by_nu().get(tuple(nu), 0)
        mu = tuple(mu)
        return sum(r.multiplicity for r in self.rows if r.weight == mu)

    @property
    def all_exact(self) -> bool:
        if self.kind == "restrict":
            return all(r.exact for r in self.rows) and self.complete
        return all(r.exact for r in self.rows)

    def to_tsv(self) -> str:
        lines = []
        if self.kind == "restrict":
            lines.append("mu_J\tsector\tmultiplicity\tstatus\tengine")
            for r in self.rows:
                m = str(r.multiplicity) if r.exact else f"≥{r.multiplicity}"
                lines.append(f"{format_weight(r.weight)}\t{format_weight(r.sector)}\t{m}\t"
                             f"{'exact' if r.exact else 'lower-bound'}\t{self.engine}")
        else:
            # a singular datum needs nu to tell rows of equal weight apart
            show_nu = not self.datum.nonsingular
            lines.append("mu\tmultiplicity\tstatus\tengine" + ("\tnu" if show_nu else ""))
            for r in self.rows:
                m = str(r.multiplicity) if r.exact else f"≥{r.multiplicity}"
                extra = f"\t{format_weight(r.nu)}" if show_nu else ""
                lines.append(f"{format_weight(r.weight)}\t{m}\t"
                             f"{'exact' if r.exact else 'lower-bound'}\t{self.engine}{extra}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        rows = []
        for r in self.rows:
            d = {"mu": list(r.weight), "multiplicity": r.multiplicity,
                 "exact": r.exact}
            if r.nu is not None:
                d["nu"] = list(r.nu)
            if r.sector is not None:
                d["sector"] = list(r.sector)
            rows.append(d)
        out = {
            "kind": self.kind,
            "datum": self.datum.to_json(),
            "datum_hash": datum_hash(self.datum),
            "lambdas": [list(l) for l in self.lambdas],
            "depth": self.depth,
            "engine": self.engine,
            "engines": list(self.engines_run),
            "complete": self.complete,
            "rows": rows,
        }
        if self.kind == "restrict":
            out["levi"] = [self.datum.labels[j] for j in self.levi]
            out["totals"] = [{"mu": list(w), "multiplicity": m, "exact": e}
                             for w, (m, e) in self.totals().items()]
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, data: dict) -> "MultiplicityTable":
        datum = CartanDatum.from_json(data["datum"])
        opt = lambda r, k: tuple(r[k]) if k in r else None
        rows = [Row(tuple(r["mu"]), r["multiplicity"], r["exact"], nu=opt(r, "nu"), sector=opt(r, "sector"))
                for r in data["rows"]]
        levi = tuple(datum.index(x) for x in data["levi"]) if "levi" in data else None
        return cls(data["kind"], datum, tuple(tuple(l) for l in data["lambdas"]), data["depth"],
                   data["engine"], rows, data["complete"], levi=levi, engines_run=tuple(data["engines"]))


def datum_hash(datum: CartanDatum) -> str:
    import hashlib

    return hashlib.sha256(json.dumps(datum.gcm).encode()).hexdigest()[:16]


def _prepare(datum: CartanDatum, lambdas):
    out = []
    if not lambdas:
        raise ValueError("at least one weight is required")
    for lam in lambdas:
        lam = tuple(int(x) for x in lam)
        if len(lam) != datum.rank:
            raise ValueError(f"weight {format_weight(lam)} has arity {len(lam)}, datum has rank {datum.rank}")
        if not datum.is_dominant(lam):
            raise NotDominant(f"{format_weight(lam)} is not dominant")
        out.append(lam)
    return tuple(out)


def _factor_graphs(datum, lambdas, depth):
    return [generate_path_crystal(datum, lam, depth) for lam in lambdas]


def _complete(graphs, depth) -> bool:
    return all(g.saturated for g in graphs) and sum(g.max_height() for g in graphs) <= depth


# -- decomposition engines: each returns ({nu: m}, complete) -----------------

def _decompose_crystal(datum, lambdas, depth):
    graphs = _factor_graphs(datum, lambdas, depth)
    tg = tensor_graph(*graphs, depth=depth, with_edges=False)
    counts: dict = defaultdict(int)
    for b in tg.nodes:
        if is_highest_weight(b, datum.indices):
            counts[b.nu] += 1
    return dict(counts), _complete(graphs, depth)


def _decompose_path(datum, lambdas, depth):
    return littelmann_decompose(datum, lambdas, depth)


def _decompose_character(datum, lambdas, depth):
    if not datum.finite_type:
        raise FiniteTypeOnly("character engine needs finite type")
    top = tuple(sum(c) for c in zip(*lambdas))
    return greedy_decompose(datum, top, tensor_character(datum, lambdas)), True


_DECOMPOSERS = {"crystal": _decompose_crystal, "path": _decompose_path,
                "character": _decompose_character}


def _compare(results: dict, depth: int, key_height) -> dict:
    """Diffs over keys every engine covers (key height <= depth, or complete)."""
    diffs = {}
    keys = set()
    for counts, _ in results.values():
        keys.update(counts)
    for k in sorted(keys, key=lambda k: (key_height(k), k)):
        vals = {}
        for name, (counts, complete) in results.items():
            if complete or key_height(k) <= depth:
                vals[name] = counts.get(k, 0)
        if len(set(vals.values())) > 1:
            diffs[k] = vals
    return diffs


def _engines_for(datum, engine):
    if engine == "all":
        return [e for e in ENGINES if e != "character" or datum.finite_type]
    if engine not in ENGINES:
        raise ValueError(f"unknown engine {engine!r}")
    return [engine]


def decompose(datum: CartanDatum, lambdas, depth: int = 12, engine: str = "crystal") -> MultiplicityTable:
    """m_mu for L(lambda^1) (x) ... (x) L(lambda^N)."""
    lambdas = _prepare(datum, lambdas)
    if depth < 0:
        raise ValueError("depth must be non-negative")
    names = _engines_for(datum, engine)
    results = {n: _DECOMPOSERS[n](datum, lambdas, depth) for n in names}
    if len(results) > 1:
        diffs = _compare(results, depth, height)
        if diffs:
            raise EngineDisagreement(
                f"engines disagree at {len(diffs)} weight(s)",
                {wt(datum, lambdas, k): v for k, v in diffs.items()})
    # the character engine, when it ran, covers every weight
    primary = names[0]
    counts, complete = results[primary]
    if "character" in results:
        counts, complete = results["character"]
    rows = [Row(wt(datum, lambdas, nu), m, complete or height(nu) <= depth, nu=nu)
            for nu, m in counts.items() if m]
    return MultiplicityTable("decompose", datum, lambdas, depth, engine, rows, complete,
                             engines_run=tuple(names))


# -- restriction -------------------------------------------------------------

def _restrict_crystal(datum, lambdas, J, depth):
    graphs = _factor_graphs(datum, lambdas, depth)
    tg = tensor_graph(*graphs, depth=depth, with_edges=False)
    off = [k for k in datum.indices if k not in J]
    counts: dict = defaultdict(int)
    for b in tg.nodes:
        if is_highest_weight(b, J):
            mu_j = wt_levi(datum, J, lambdas, b.nu)
            counts[(mu_j, tuple(b.nu[k] for k in off), b.nu)] += 1
    return dict(counts), _complete(graphs, depth)


def _restrict_path(datum, lambdas, J, depth):
    return littelmann_restrict(datum, lambdas, J, depth)


def _restrict_character(datum, lambdas, J, depth):
    if not datum.finite_type:
        raise FiniteTypeOnly("character engine needs finite type")
    return levi_decompose(datum, lambdas, J), True


_RESTRICTERS = {"crystal": _restrict_crystal, "path": _restrict_path,
                "character": _restrict_character}


def restrict(datum: CartanDatum, lambdas, J, depth: int = 12, engine: str = "crystal") -> MultiplicityTable:
    """Multiplicities of Levi irreducibles L_J(mu_J) per sector pr_{I\\J}(nu)."""
    lambdas = _prepare(datum, lambdas)
    J = datum.levi(J)
    names = _engines_for(datum, engine)
    results = {n: _RESTRICTERS[n](datum, lambdas, J, depth) for n in names}
    if len(results) > 1:
        diffs = _compare(results, depth, lambda k: height(k[2]))
        if diffs:
            raise EngineDisagreement(
                f"engines disagree at {len(diffs)} restriction slot(s)",
                {(k[0], k[1]): v for k, v in diffs.items()})
    counts, complete = results[names[0]]
    if not complete:
        counts = {k: v for k, v in counts.items() if height(k[2]) <= depth}
    # nu is determined by (mu_J, sector) iff C_JJ is nonsingular
    levi_nonsingular = not J or datum.sub_datum(J).nonsingular
    grouped: dict = defaultdict(lambda: [0, True, []])
    for (mu_j, sector, nu), m in counts.items():
        slot = grouped[(mu_j, sector)]
        slot[0] += m
        slot[2].append(nu)
        if not (complete or levi_nonsingular):
            slot[1] = False
    rows = []
    for (mu_j, sector), (m, exact, nus) in grouped.items():
        if m:
            rows.append(Row(mu_j, m, exact, nu=nus[0] if len(nus) == 1 else None, sector=sector))
    return MultiplicityTable("restrict", datum, lambdas, depth, engine, rows, complete,
                             levi=J, engines_run=tuple(names))


def coinvariants_dim(datum: CartanDatum, lambdas, depth: int = 12, engine: str = "crystal"):
    """(m_0, exact): multiplicity of the trivial module."""
    lambdas = _prepare(datum, lambdas)
    top = tuple(sum(c) for c in zip(*lambdas))
    zero = (0,) * datum.rank
    if datum.nonsingular:
        nu = dominance_diff(datum, top, zero)
        if nu is None:
            return 0, True
        if height(nu) > depth and not datum.finite_type:
            raise IncompleteSlice(f"the weight-zero slice (nu={nu}) lies beyond depth {depth}")
        table = decompose(datum, lambdas, max(depth, height(nu)), engine)
        return table.multiplicity(zero), True
    table = decompose(datum, lambdas, depth, engine)
    return table.multiplicity(zero), table.complete


def filtration_ranks(datum: CartanDatum, lambdas, mu, depth: int = 12):
    """(dim M[>=mu], dim M[>mu]) per weight slice, from m_mu' and characters."""
    if not datum.finite_type:
        raise FiniteTypeOnly("filtration ranks need the finite-type character oracle")
    lambdas = _prepare(datum, lambdas)
    mu = tuple(mu)
    table = decompose(datum, lambdas, depth, "character")
    ge: dict = defaultdict(int)
    gt: dict = defaultdict(int)
    for r in table.rows:
        d = dominance_diff(datum, r.weight, mu)
        if d is None:
            continue
        for nu, k in freudenthal_character(datum, r.weight).items():
            w = wt(datum, [r.weight], nu)
            ge[w] += r.multiplicity * k
            if any(d):
                gt[w] += r.multiplicity * k
    return dict(ge), dict(gt)
