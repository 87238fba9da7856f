"""Command-line interface.

Subcommands: compute, spec, classify, search-potts, search-u, decompose.
Results go to stdout, diagnostics to stderr; exit code 2 flags usage errors,
3 graph6 parse errors, 4 budget refusals.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import graphs as gr
from .errors import BudgetError, DuplicateGraphError, Graph6Error
from .homopoly import hom_poly, hom_poly_q2_subsets, hom_poly_via_complement
from .pipeline import (
    classify,
    default_stages,
    search_potts_pairs,
    search_u_classes,
)
from .polyring import Polynomial
from .specialize import (
    SpecializationResult,
    chromatic_deletion_contraction,
    chromatic_from_counts,
    colour_count,
    hardcore_from_p2,
    hardcore_partition,
    independence_polynomial,
    ising_direct,
    ising_from_p2,
    matching_polynomial,
    potts_direct,
    potts_from_hom,
    vdw_bruteforce,
    vdw_polynomial,
)
from .subsetpolys import (
    random_cluster,
    random_cluster_oracle,
    strong_u_polynomial,
    strong_u_polynomial_oracle,
    u_polynomial,
    u_polynomial_oracle,
)
from .treewidth import best_side, dp_hom_poly, exact_treewidth

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_BUDGET = 4


def _add_graph_inputs(ap: argparse.ArgumentParser) -> None:
    ap.add_argument("graphs", nargs="*", help="graph6 records")
    ap.add_argument("--file", help="newline-delimited graph6 file")
    ap.add_argument("--enumerate", type=int, dest="enumerate_n", metavar="N",
                    help="all non-isomorphic graphs on N <= 7 vertices")


def _collect_graphs(args) -> list[gr.Graph]:
    out: list[gr.Graph] = []
    for record in args.graphs:
        out.append(gr.parse_graph6(record))
    if args.file:
        out.extend(gr.read_graph6_file(args.file))
    if args.enumerate_n is not None:
        out.extend(gr.enumerate_graphs(args.enumerate_n))
    if not out:
        raise UsageError("no input graphs; pass graph6 records, --file, or --enumerate")
    return out


class UsageError(Exception):
    pass


def _threads(args) -> int:
    if args.threads is not None:
        if args.threads < 1:
            raise UsageError("--threads must be positive")
        return args.threads
    return os.cpu_count() or 1


def _emit(poly: Polynomial, as_json: bool, kind: str | None = None) -> None:
    if as_json:
        payload = poly.to_json_dict()
        if kind is not None:
            payload["kind"] = kind
        sys.stdout.write(json.dumps(payload, separators=(",", ":")) + "\n")
    else:
        sys.stdout.write(poly.canonical_text() + "\n")


def _cmd_compute(args) -> int:
    for g in _collect_graphs(args):
        if args.method == "brute":
            poly = hom_poly(g, args.q)
        elif args.method == "complement":
            poly = hom_poly_via_complement(g, args.q)
        else:
            poly = best_side(g, args.q)
        _emit(poly, args.json)
    return EXIT_OK


_SPEC_KINDS = ("ising", "chromatic", "matching", "independence", "hardcore", "vdw", "u", "su", "rc")


def _spec_pair(g: gr.Graph, kind: str):
    """(result, oracle) for one specialization; the oracle is an independent route."""
    if kind == "ising":
        return ising_direct(g), lambda: ising_from_p2(hom_poly_q2_subsets(g))
    if kind == "chromatic":
        def chrom_oracle():
            if g.n < 2:
                return chromatic_deletion_contraction(g)
            counts = [colour_count(g, k) for k in range(1, g.n)]
            return chromatic_from_counts(g, counts)
        return chromatic_deletion_contraction(g), chrom_oracle
    if kind == "matching":
        def match_oracle():
            if g.m == 0:
                return matching_polynomial(g)
            return independence_polynomial(gr.line_graph(g))
        return matching_polynomial(g), match_oracle
    if kind == "independence":
        def indep_oracle():
            p2 = hom_poly_q2_subsets(g)
            return hardcore_from_p2(p2).substitute({"h": 0})
        return independence_polynomial(g), indep_oracle
    if kind == "hardcore":
        return hardcore_partition(g), lambda: hardcore_from_p2(hom_poly_q2_subsets(g))
    if kind == "vdw":
        return vdw_polynomial(g), lambda: vdw_bruteforce(g)
    if kind == "u":
        return u_polynomial(g), lambda: u_polynomial_oracle(g)
    if kind == "su":
        return strong_u_polynomial(g), lambda: strong_u_polynomial_oracle(g)
    if kind == "rc":
        return random_cluster(g), lambda: random_cluster_oracle(g)
    raise UsageError(f"unknown specialization kind {kind!r}")


def _cmd_spec(args) -> int:
    kind = args.kind
    potts_q = None
    if kind.startswith("potts:"):
        try:
            potts_q = int(kind.split(":", 1)[1])
        except ValueError:
            raise UsageError(f"bad Potts order in {kind!r}")
        if potts_q < 2:
            raise UsageError("Potts order must be at least 2")
    elif kind not in _SPEC_KINDS:
        raise UsageError(
            f"--kind must be potts:<q> or one of {', '.join(_SPEC_KINDS)}"
        )
    for g in _collect_graphs(args):
        if potts_q is not None:
            poly = potts_direct(g, potts_q)
            oracle = lambda: potts_from_hom(hom_poly(g, potts_q))
        else:
            poly, oracle = _spec_pair(g, kind)
        if args.check:
            expected = oracle()
            if expected != poly:
                sys.stderr.write(
                    "oracle mismatch:\n"
                    f"  direct: {poly.canonical_text()}\n"
                    f"  oracle: {expected.canonical_text()}\n"
                )
                return EXIT_MISMATCH
        _emit(poly, args.json, kind=kind)
    return EXIT_OK


def _cmd_classify(args) -> int:
    graphs = _collect_graphs(args)
    if args.n is not None:
        for g in graphs:
            if g.n != args.n:
                raise UsageError(f"--n {args.n} but an input graph has {g.n} vertices")
    stages = default_stages(args.q)
    classes, report = classify(
        graphs,
        stages,
        n=args.n,
        q=args.q,
        threads=_threads(args),
        out_dir=args.out,
        resume=args.resume,
        progress=lambda msg: sys.stderr.write(msg + "\n"),
    )
    sys.stdout.write(report.to_text())
    for name, secs in report.elapsed.items():
        sys.stderr.write(f"timing {name}: {secs:.2f}s\n")
    return EXIT_OK


def _cmd_search_potts(args) -> int:
    graphs = _collect_graphs(args)
    pairs = search_potts_pairs(
        graphs,
        q_hi=args.q_hi,
        q_lo=args.q_lo,
        threads=_threads(args),
        progress=lambda msg: sys.stderr.write(msg + "\n"),
    )
    for a, b in pairs:
        sys.stdout.write(f"PAIR {a} {b}\n")
    sys.stdout.write(
        f"pairs with equal potts:{args.q_hi} and distinct potts:{args.q_lo}: {len(pairs)}\n"
    )
    return EXIT_OK


def _cmd_search_u(args) -> int:
    graphs = _collect_graphs(args)
    reports = search_u_classes(
        graphs,
        threads=_threads(args),
        progress=lambda msg: sys.stderr.write(msg + "\n"),
    )
    for rec in reports:
        flags = []
        flags.append("p2=same" if rec.shares_p2 else "p2=diff")
        flags.append("p3=same" if rec.shares_p3 else "p3=diff")
        flags.append("su=same" if rec.shares_strong_u else "su=diff")
        sys.stdout.write("CLASS " + " ".join(rec.members) + " | " + " ".join(flags) + "\n")
    sys.stdout.write(f"non-trivial u-polynomial classes: {len(reports)}\n")
    return EXIT_OK


def _cmd_decompose(args) -> int:
    for g in _collect_graphs(args):
        width, td = exact_treewidth(g)
        sys.stdout.write(f"c graph {gr.write_graph6(g)} treewidth {width}\n")
        sys.stdout.write(td.to_pace_text(g.n) + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="graphpoly", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", help="order-q homomorphism polynomial")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--method", choices=("brute", "complement", "treewidth"), default="brute")
    p.add_argument("--json", action="store_true")
    p.add_argument("--threads", type=int, default=None)
    _add_graph_inputs(p)
    p.set_defaults(fn=_cmd_compute)

    p = sub.add_parser("spec", help="named specialization of a graph polynomial")
    p.add_argument("--kind", required=True,
                   help="ising | potts:<q> | chromatic | matching | independence | "
                        "hardcore | vdw | u | su | rc")
    p.add_argument("--check", action="store_true", help="verify against the independent oracle")
    p.add_argument("--json", action="store_true")
    p.add_argument("--threads", type=int, default=None)
    _add_graph_inputs(p)
    p.set_defaults(fn=_cmd_spec)

    p = sub.add_parser("classify", help="staged P_q equivalence classification")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--q", type=int, required=True, choices=(2, 3, 4))
    p.add_argument("--out", default=None, help="directory for report + class store")
    p.add_argument("--resume", action="store_true")
    p.add_argument("--threads", type=int, default=None)
    _add_graph_inputs(p)
    p.set_defaults(fn=_cmd_classify)

    p = sub.add_parser("search-potts", help="equal high-order, distinct low-order Potts pairs")
    p.add_argument("--q-hi", type=int, default=3)
    p.add_argument("--q-lo", type=int, default=2)
    p.add_argument("--threads", type=int, default=None)
    _add_graph_inputs(p)
    p.set_defaults(fn=_cmd_search_potts)

    p = sub.add_parser("search-u", help="equal U-polynomial classes with cross checks")
    p.add_argument("--threads", type=int, default=None)
    _add_graph_inputs(p)
    p.set_defaults(fn=_cmd_search_u)

    p = sub.add_parser("decompose", help="treewidth and a tree decomposition")
    p.add_argument("--threads", type=int, default=None)
    _add_graph_inputs(p)
    p.set_defaults(fn=_cmd_decompose)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except UsageError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except Graph6Error as exc:
        sys.stderr.write(f"graph6 parse error: {exc}\n")
        return EXIT_PARSE
    except BudgetError as exc:
        sys.stderr.write(f"budget refused: {exc}\n")
        return EXIT_BUDGET
    except DuplicateGraphError as exc:
        sys.stderr.write(f"duplicate input: {exc}\n")
        return EXIT_USAGE
    except OSError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
