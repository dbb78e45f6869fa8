"""Command-line front end.

Exit status: 0 on success, 2 on a parse or usage error, 3 when a search hits
its vertex ceiling or time budget, 4 when a verification finds a contradiction.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import exactla, families
from .forcing import (
    DEFAULT_CEILING,
    WITNESS_FAMILIES,
    BudgetExhausted,
    FillState,
    SearchCeilingExceeded,
    closure_with_chronology,
    lower_bound_terms,
    witness_set,
    zf_exact,
    zf_lower_bounds,
)
from .graphs import Graph, SpecParseError, build_circulant, parse_graph, parse_spec

EXIT_OK, EXIT_PARSE, EXIT_CEILING, EXIT_CONTRADICTION = 0, 2, 3, 4


class UsageError(ValueError):
    pass


def load_graph(target: str) -> tuple[Graph, bool]:
    """Graph from a spec expression or an edge-list file; flag says circulant."""
    if os.path.isfile(target):
        with open(target) as fh:
            return Graph.from_edgelist(fh.read()), False
    try:
        return build_circulant(parse_spec(target)), True
    except SpecParseError:
        pass
    return parse_graph(target), False


def parse_vertex_set(text: str) -> list[int]:
    text = text.strip().strip("{}")
    if not text:
        return []
    try:
        return [int(x) for x in text.replace(",", " ").split()]
    except ValueError:
        raise UsageError(f"bad vertex list {text!r}") from None


def witness_matrix(name: str):
    """Matrix for a ``--witness`` name: c9, k4:<n>, k6:<n> or hankel:<n>."""
    kind, _, arg = name.partition(":")
    if kind == "c9" and not arg:
        return exactla.witness_c913()
    if kind in ("k4", "k6", "hankel") and arg.isdigit():
        n = int(arg)
        if kind == "k4":
            return exactla.witness_k4(n)
        if kind == "k6":
            return exactla.witness_k6(n)
        return exactla.hankel(n)[0]
    raise UsageError(f"unknown witness {name!r}; expected c9, k4:<n>, k6:<n> or hankel:<n>")


def emit(obj, args, table: str | None = None):
    text = table if args.table and table is not None else json.dumps(obj, indent=2) + "\n"
    if getattr(args, "output", None):
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def fmt_set(vs) -> str:
    return "{" + ", ".join(map(str, vs)) + "}"


# --- verbs --------------------------------------------------------------------

def cmd_gen(args):
    G, _ = load_graph(args.target)
    text = G.to_dot() if args.format == "dot" else G.to_edgelist()
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_closure(args):
    G, _ = load_graph(args.target)
    F = FillState.of(G.order, parse_vertex_set(args.set))
    final, chrono = closure_with_chronology(G, F)
    print(f"closure = {fmt_set(final.vertices)}")
    for u, v in chrono:
        print(f"{u} -> {v}")
    print("forcing set" if final.complete else f"not forcing ({G.order - len(final)} unfilled)")
    return EXIT_OK


def cmd_zf(args):
    G, circ = load_graph(args.target)
    z, F = zf_exact(G, transitive=circ, ceiling=args.ceiling, budget_seconds=args.budget_seconds)
    print(f"Z = {z}")
    print(f"witness = {fmt_set(F.vertices)}")
    return EXIT_OK


def cmd_bounds(args):
    G, circ = load_graph(args.target)
    report = {"graph": args.target, "order": G.order, "lower_bound": zf_lower_bounds(G)}
    if G.is_connected():
        report["terms"] = lower_bound_terms(G)
    if circ:
        preds = families.predict(parse_spec(args.target))
        lo, hi = families.combined_interval(preds)
        report["interval"] = [lo, hi]
    rows = [("quantity", "value")] + [(k, v) for k, v in report.items() if k != "graph"]
    emit(report, args, families.format_table(rows))
    return EXIT_OK


def cmd_rank(args):
    if args.witness:
        M = witness_matrix(args.witness)
    elif args.target:
        with open(args.target) as fh:
            M = exactla.ExactMatrix.from_text(fh.read())
    else:
        raise UsageError("rank needs --witness or a matrix file")
    r = exactla.rank(M)
    print(f"rank = {r}, nullity = {M.shape[0] - r}")
    return EXIT_OK


def cmd_witness(args):
    if args.witness:
        M = witness_matrix(args.witness)
        text = M.to_text()
        if args.output:
            with open(args.output, "w") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
        return EXIT_OK
    if not args.family or args.n is None:
        raise UsageError("witness needs --witness, or --family with --n")
    F = witness_set(args.family, args.n, args.m, circulant=args.circulant)
    print(f"size = {len(F)}")
    print(f"witness = {fmt_set(F.vertices)}")
    return EXIT_OK


def cmd_predict(args):
    spec = parse_spec(args.target)
    preds = families.predict(spec)
    lo, hi = families.combined_interval(preds)
    rows = [("family", "claim", "multiplier", "basis")]
    rows += [(p.family, p.claim, p.multiplier or "-", p.citation) for p in preds]
    table = f"{spec}: {lo} <= Z <= {hi}\n" + families.format_table(rows)
    emit({"spec": str(spec), "interval": [lo, hi], "predictions": [p.to_dict() for p in preds]},
         args, table)
    return EXIT_OK


def cmd_verify(args):
    spec = parse_spec(args.target)
    rep = families.verify(spec, args.budget_seconds, ceiling=args.ceiling)
    emit(rep.to_dict(), args, rep.to_table())
    if not rep.ok:
        return EXIT_CONTRADICTION
    return EXIT_OK if rep.complete else EXIT_CEILING


def cmd_sweep(args):
    rep = families.sweep(args.max_n, args.budget_seconds, min_n=args.min_n, ceiling=args.ceiling)
    emit(rep.to_dict(), args, rep.to_table())
    print(f"swept {len(rep.reports)} graphs in {rep.seconds:.2f}s", file=sys.stderr)
    if rep.contradicted:
        return EXIT_CONTRADICTION
    return EXIT_OK if all(r.complete for r in rep.reports) else EXIT_CEILING


COMMANDS = {
    "gen": cmd_gen, "closure": cmd_closure, "zf": cmd_zf, "bounds": cmd_bounds,
    "rank": cmd_rank, "witness": cmd_witness, "predict": cmd_predict,
    "verify": cmd_verify, "sweep": cmd_sweep,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="circzf", description="Zero forcing and maximum nullity of circulant graphs.")
    sub = p.add_subparsers(dest="verb", required=True, metavar="verb")

    def add(name, help, target=True, optional_target=False):
        sp = sub.add_parser(name, help=help)
        if target:
            sp.add_argument("target", nargs="?" if optional_target else None,
                            help="spec such as C12(1,6), K4 torus C4, or a file")
        sp.add_argument("--table", action="store_true", help="aligned text instead of JSON")
        sp.add_argument("-o", "--output", help="write the result to a file")
        return sp

    add("gen", "emit a graph").add_argument("--format", choices=("edgelist", "dot"), default="edgelist")
    add("closure", "run the filling rule from a set").add_argument(
        "--set", required=True, help="initially filled vertices, e.g. 0,1,2")
    for name, help in (("zf", "exact zero forcing number"), ("verify", "check every prediction"),
                       ("sweep", "verify all connected circulants up to --max-n")):
        sp = add(name, help, target=name != "sweep")
        sp.add_argument("--budget-seconds", type=float, default=None)
        sp.add_argument("--ceiling", type=int, default=DEFAULT_CEILING,
                        help="largest component the search will attempt")
        if name == "sweep":
            sp.add_argument("--max-n", type=int, required=True)
            sp.add_argument("--min-n", type=int, default=2)
    add("bounds", "lower bounds and predicted interval")
    add("rank", "exact rank and nullity", optional_target=True).add_argument("--witness")
    sp = add("witness", "print a witness matrix or forcing set", target=False)
    sp.add_argument("--witness")
    sp.add_argument("--family", choices=WITNESS_FAMILIES)
    sp.add_argument("--n", type=int)
    sp.add_argument("--m", type=int)
    sp.add_argument("--circulant", action="store_true", help="label the set on the circulant")
    add("predict", "closed-form predictions for a circulant")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_PARSE
    try:
        return COMMANDS[args.verb](args)
    except (SpecParseError, UsageError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except (SearchCeilingExceeded, BudgetExhausted) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CEILING
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
