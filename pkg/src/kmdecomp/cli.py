"""Command-line entry point.

Exit codes: 0 ok, 1 other computation error, 2 engines disagree,
3 incomplete slice (always for engine errors, and for lower-bound rows
under ``--strict``), 64 usage error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from . import __version__
from .cache import Cache, cache_key, resolve_cache_dir
from .cartan import CartanDatum, load_cartan, parse_weight
from .decomp import MultiplicityTable, coinvariants_dim, decompose, format_weight, restrict
from .errors import (CartanError, DatumMismatch, EngineDisagreement, IncompleteSlice, KMDecompError,
                     NotDominant, UnknownLevi)

EXIT_OK, EXIT_ERROR, EXIT_DISAGREE, EXIT_INCOMPLETE, EXIT_USAGE = 0, 1, 2, 3, 64

log = logging.getLogger("kmdecomp")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _common(p: argparse.ArgumentParser, weights=True):
    p.add_argument("--cartan", metavar="PATH",
                   help="Cartan JSON file or builtin name (sl2, a2, affine-a1); "
                        "inferred from weight arity (1: sl2, 2: a2) when omitted")
    if weights:
        p.add_argument("--weights", nargs="+", metavar="W", required=True,
                       help="tensor factors as comma lists, e.g. 1,0 0,1")
    p.add_argument("--depth", type=int, default=12, help="height cutoff below the top weight (default 12)")
    p.add_argument("--cache", metavar="DIR", help="cache directory (KMDECOMP_CACHE overrides)")
    p.add_argument("--strict", action="store_true", help="exit 3 if any row is only a lower bound")
    p.add_argument("-v", "--verbose", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="kmdecomp", description="Tensor product decompositions of Kac-Moody highest-weight modules.")
    p.add_argument("--version", action="version", version=f"kmdecomp {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    d = sub.add_parser("decompose", help="multiplicities m_mu of a tensor product")
    _common(d)
    d.add_argument("--engine", default="crystal", choices=["crystal", "path", "character", "all"])
    d.add_argument("--format", default="tsv", choices=["tsv", "json"])

    r = sub.add_parser("restrict", help="restriction to a Levi subalgebra")
    _common(r)
    r.add_argument("--levi", required=True, help="Levi name from the Cartan file, or comma-separated labels")
    r.add_argument("--engine", default="crystal", choices=["crystal", "path", "character", "all"])
    r.add_argument("--format", default="tsv", choices=["tsv", "json"])

    c = sub.add_parser("coinvariants", help="dimension of the coinvariant space")
    _common(c)
    c.add_argument("--engine", default="crystal", choices=["crystal", "path", "character", "all"])
    c.add_argument("--format", default="tsv", choices=["tsv", "json"])

    cb = sub.add_parser("canonical-basis", help="canonical basis of a tensor product (rank <= 2, finite type)")
    _common(cb)
    cb.add_argument("--bracketing", default="left", choices=["left", "right"])
    cb.add_argument("--format", default="json", choices=["json", "tsv"])

    g = sub.add_parser("crystal-graph", help="export the crystal graph of L(lambda)")
    _common(g, weights=False)
    g.add_argument("--lambda", dest="lam", required=True, metavar="W", help="highest weight, e.g. 1,0")
    g.add_argument("--format", default="dot", choices=["dot", "json", "tsv"])

    s = sub.add_parser("self-check", help="run the invariant corpus")
    s.add_argument("--cache", metavar="DIR")
    s.add_argument("--strict", action="store_true", help="exit 3 if the corpus contains lower-bound rows")
    s.add_argument("-v", "--verbose", action="store_true")
    return p


# -- helpers -------------------------------------------------------------------

def _datum(args, arity: int | None) -> CartanDatum:
    if args.cartan:
        try:
            return load_cartan(args.cartan)
        except FileNotFoundError as exc:
            raise UsageError(str(exc)) from None
        except (json.JSONDecodeError, KeyError) as exc:
            raise UsageError(f"cannot read Cartan file {args.cartan!r}: {exc}") from None
    if arity == 1:
        return load_cartan("sl2")
    if arity == 2:
        log.info("no --cartan given; assuming a2 from weight arity")
        return load_cartan("a2")
    raise UsageError("--cartan is required for this weight arity")


def _weights(args):
    texts = args.weights
    try:
        raw = [parse_weight(t) for t in texts]
    except CartanError as exc:
        raise UsageError(str(exc)) from None
    arities = {len(w) for w in raw}
    if len(arities) != 1:
        raise UsageError("weights have mismatched arity")
    datum = _datum(args, arities.pop())
    for w in raw:
        if len(w) != datum.rank:
            raise UsageError(f"weight {format_weight(w)} has arity {len(w)}, datum has rank {datum.rank}")
    return datum, raw


def _levi(datum: CartanDatum, spec: str):
    try:
        return datum.levi(spec)
    except UnknownLevi:
        pass
    try:
        return datum.levi([x for x in spec.split(",") if x])
    except (KeyError, ValueError, IndexError):
        raise UsageError(f"unknown Levi subset {spec!r}") from None


def _cache(args):
    root = resolve_cache_dir(getattr(args, "cache", None))
    return Cache(root) if root else None


def _table(args, kind, datum, lambdas, J=None):
    def compute():
        if kind == "restrict":
            return restrict(datum, lambdas, J, args.depth, args.engine)
        return decompose(datum, lambdas, args.depth, args.engine)

    cache = _cache(args)
    if cache is None:
        return compute()
    key = cache_key(datum, kind, args.engine, lambdas, args.depth, list(J) if J is not None else None)
    return cache.fetch(key, compute, lambda t: t.to_json(), MultiplicityTable.from_json)


def _emit(text: str):
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _strict_exit(args, exact: bool) -> int:
    if args.strict and not exact:
        print("kmdecomp: lower-bound rows present (strict mode)", file=sys.stderr)
        return EXIT_INCOMPLETE
    return EXIT_OK


# -- commands ------------------------------------------------------------------

def cmd_decompose(args) -> int:
    datum, lambdas = _weights(args)
    table = _table(args, "decompose", datum, lambdas)
    _emit(table.to_tsv() if args.format == "tsv" else json.dumps(table.to_json(), indent=2, sort_keys=True))
    # a truncated infinite decomposition is incomplete even if every printed row is exact
    return _strict_exit(args, table.all_exact and table.complete)


def cmd_restrict(args) -> int:
    datum, lambdas = _weights(args)
    J = _levi(datum, args.levi)
    table = _table(args, "restrict", datum, lambdas, J)
    _emit(table.to_tsv() if args.format == "tsv" else json.dumps(table.to_json(), indent=2, sort_keys=True))
    return _strict_exit(args, table.all_exact)


def cmd_coinvariants(args) -> int:
    datum, lambdas = _weights(args)
    dim, exact = coinvariants_dim(datum, lambdas, args.depth, args.engine)
    if args.format == "json":
        _emit(json.dumps({"dimension": dim, "exact": exact}))
    else:
        _emit(str(dim) if exact else f"≥{dim}")
    return _strict_exit(args, exact)


def cmd_canonical_basis(args) -> int:
    from .quantum.canonical import basis_report, canonical_basis_tensor, classify_filtration

    datum, lambdas = _weights(args)
    based = canonical_basis_tensor(datum, lambdas, args.bracketing)
    classes, _ = classify_filtration(based)
    report = basis_report(based, classes)
    if args.format == "json":
        _emit(json.dumps(report, indent=2))
    else:
        lines = ["leading\tclass\tcoeffs"]
        for e in report:
            coeffs = " ".join(f"[{k}]:{c}" for k, c in e["coeffs"].items())
            lines.append(f"{','.join(map(str, e['leading']))}\t{e['class']}\t{coeffs}")
        _emit("\n".join(lines))
    return EXIT_OK


def cmd_crystal_graph(args) -> int:
    from .crystal import to_dot
    from .paths import generate_path_crystal

    try:
        lam = parse_weight(args.lam)
    except CartanError as exc:
        raise UsageError(str(exc)) from None
    datum = _datum(args, len(lam))
    if len(lam) != datum.rank:
        raise UsageError(f"weight {format_weight(lam)} has arity {len(lam)}, datum has rank {datum.rank}")
    graph = generate_path_crystal(datum, lam, args.depth)
    if args.format == "dot":
        _emit(to_dot(graph))
    elif args.format == "json":
        _emit(json.dumps({
            "nodes": [{"weight": list(b.weight), "nu": list(b.nu)} for b in graph.nodes],
            "edges": [[s, datum.labels[i], t] for s, i, t in graph.edges],
            "saturated": graph.saturated,
        }, indent=2))
    else:
        lines = ["node\tweight\tnu"] + [f"{k}\t{format_weight(b.weight)}\t{format_weight(b.nu)}"
                                        for k, b in enumerate(graph.nodes)]
        _emit("\n".join(lines))
    return _strict_exit(args, graph.saturated)


def cmd_self_check(args) -> int:
    from .selfcheck import Check, default_corpus, run_corpus

    checks = default_corpus()
    cache = _cache(args)
    if cache is not None:
        checks.append(Check("cache transparency", lambda: _cache_roundtrip(cache)))
    results = run_corpus(checks)
    width = max(len(r.name) for r in results)
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        tag = "" if r.exact else "  [lower-bound rows]"
        line = f"{status}  {r.name.ljust(width)}  {r.seconds:6.2f}s{tag}"
        if not r.passed:
            line += f"  {r.detail}"
        print(line)
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    if failed:
        return EXIT_ERROR
    if args.strict and any(not r.exact for r in results):
        print("kmdecomp: corpus contains lower-bound rows (strict mode)", file=sys.stderr)
        return EXIT_INCOMPLETE
    return EXIT_OK


def _cache_roundtrip(cache: Cache) -> list:
    from .cartan import a2

    datum, lams, depth = a2(), ((1, 1), (1, 1)), 12
    fresh = decompose(datum, lams, depth, "crystal")
    key = cache_key(datum, "decompose", "crystal", lams, depth)
    first = cache.fetch(key, lambda: fresh, lambda t: t.to_json(), MultiplicityTable.from_json)
    second = cache.fetch(key, lambda: fresh, lambda t: t.to_json(), MultiplicityTable.from_json)
    if not (fresh.dumps() == first.dumps() == second.dumps()):
        return ["cached table differs from a fresh computation"]
    return []


COMMANDS = {
    "decompose": cmd_decompose,
    "restrict": cmd_restrict,
    "coinvariants": cmd_coinvariants,
    "canonical-basis": cmd_canonical_basis,
    "crystal-graph": cmd_crystal_graph,
    "self-check": cmd_self_check,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="kmdecomp: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"kmdecomp: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except EngineDisagreement as exc:
        print(f"kmdecomp: {exc}", file=sys.stderr)
        for k, v in sorted(exc.diffs.items()):
            print(f"  {k}: {v}", file=sys.stderr)
        return EXIT_DISAGREE
    except IncompleteSlice as exc:
        print(f"kmdecomp: incomplete slice: {exc}", file=sys.stderr)
        return EXIT_INCOMPLETE
    except (CartanError, NotDominant, DatumMismatch, UnknownLevi) as exc:
        print(f"kmdecomp: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except KMDecompError as exc:
        print(f"kmdecomp: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
