"""Command-line front end.

Exit codes: 0 success, 1 malformed input, 2 graph not negative definite,
3 reach target unreachable.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence, TextIO

from . import graph as gr
from .classes import classify_graph, degree, named, parse_class, predicates
from .deform import (
    MarkedClass,
    adjacency_dag,
    constant_moves,
    lowering_moves,
    lowering_moves_from,
    parse_class_or_marked,
    reach,
)
from .errors import EllipsingError, NotNegativeDefiniteError
from .hj import (
    artin_dims,
    cq_multiplicity,
    ell_invariant,
    hj_expand,
    parse_chain_list,
    parse_fraction,
    recognize_wahl,
    wahl_chains,
)
from .quotients import mu3_checks, mu3_fixtures, z2_cusp_graphs

EXIT_OK, EXIT_INPUT, EXIT_NOT_ND, EXIT_UNREACHABLE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="ellipsing", description="Resolution graphs of minimally elliptic singularities.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def chains_opts(sp):
        sp.add_argument("--chains", default="", help="chain catalog, e.g. '[4];[5,2]'")
        sp.add_argument("--wahl-max-n", type=int, default=0,
                        help="add every Wahl chain with n up to this value to the catalog")

    sp = sub.add_parser("classify", help="classify a graph file")
    sp.add_argument("graph")
    sp.add_argument("--json", action="store_true")

    sp = sub.add_parser("cycle", help="fundamental cycle data of a graph file")
    sp.add_argument("graph")
    sp.add_argument("--json", action="store_true")

    sp = sub.add_parser("hj", help="continued fraction data for n/q")
    sp.add_argument("fraction")
    sp.add_argument("--json", action="store_true")

    sp = sub.add_parser("moves", help="applicable adjacency moves")
    sp.add_argument("expr")
    chains_opts(sp)
    sp.add_argument("--json", action="store_true")

    sp = sub.add_parser("reach", help="shortest adjacency path")
    sp.add_argument("source")
    sp.add_argument("target")
    sp.add_argument("--max-steps", type=int, required=True)
    chains_opts(sp)
    sp.add_argument("--json", action="store_true")

    sp = sub.add_parser("dag", help="materialize the adjacency graph")
    sp.add_argument("--max-degree", type=int, required=True)
    sp.add_argument("--max-length", type=int, required=True)
    chains_opts(sp)
    sp.add_argument("--dot", required=True, metavar="FILE")
    sp.add_argument("--json", dest="json_file", metavar="FILE")

    sp = sub.add_parser("quotient", help="group quotient constructions")
    sp.add_argument("kind", choices=["z2"])
    sp.add_argument("--cusp", required=True, help="comma-separated e1,e2,...")
    sp.add_argument("--json", action="store_true")

    sp = sub.add_parser("fixtures", help="built-in verification tables")
    sp.add_argument("name", choices=["mu3"])
    sp.add_argument("--json", action="store_true")
    return p


def _catalog(args):
    chains = parse_chain_list(args.chains)
    if args.wahl_max_n:
        chains += wahl_chains(args.wahl_max_n)
    return chains


def _graph_report(g: gr.DualGraph) -> dict:
    c = classify_graph(g)
    z = gr.fundamental_cycle(g)
    report = {
        "negative_definite": True,
        "class": str(c),
        "graph_degree": -gr.self_intersection(g, z),
        "minimally_elliptic": gr.is_minimally_elliptic(g),
        "degree": None,
        "predicates": None,
    }
    if c.is_elliptic:
        report["degree"] = degree(c)
        report["predicates"] = predicates(c).to_dict()
    return report


def cmd_classify(args, out):
    g = gr.read_graph(args.graph)
    if not gr.is_negative_definite(g.matrix):
        raise NotNegativeDefiniteError(f"{args.graph}: intersection form is not negative definite")
    rep = _graph_report(g)
    if args.json:
        print(_dump(rep), file=out)
        return EXIT_OK
    print(f"class: {rep['class']}", file=out)
    print("negative definite: yes", file=out)
    print(f"minimally elliptic: {'yes' if rep['minimally_elliptic'] else 'no'}", file=out)
    print(f"-Z.Z (graph): {rep['graph_degree']}", file=out)
    if rep["degree"] is not None:
        print(f"degree (formula): {rep['degree']}", file=out)
        for k, v in rep["predicates"].items():
            print(f"  {k}: {v}", file=out)
    return EXIT_OK


def cmd_cycle(args, out):
    g = gr.read_graph(args.graph)
    z = gr.fundamental_cycle(g)
    rep = {
        "vertices": [v.name for v in g.vertices],
        "fundamental_cycle": list(z),
        "self_intersection": gr.self_intersection(g, z),
        "chi": gr.chi(g, z),
        "singular_points": gr.singular_point_count(g),
    }
    if args.json:
        print(_dump(rep), file=out)
        return EXIT_OK
    print("Z = " + " + ".join(f"{c}*{n}" for c, n in zip(z, rep["vertices"])), file=out)
    print(f"Z.Z = {rep['self_intersection']}", file=out)
    print(f"chi(Z) = {rep['chi']}", file=out)
    print(f"singular points of E: {rep['singular_points']}", file=out)
    return EXIT_OK


def cmd_hj(args, out):
    n, q = parse_fraction(args.fraction)
    e = hj_expand(n, q)
    m, embdim = cq_multiplicity(e)
    w = recognize_wahl(e)
    rep = {
        "fraction": f"{n}/{q}",
        "expansion": list(e),
        "multiplicity": m,
        "embedding_dimension": embdim,
        "ell": ell_invariant(e),
        "wahl": None if w is None else {"n": w.n, "q": w.q},
        "artin": None,
    }
    if m == 4:
        t, a, na = artin_dims(e)
        rep["artin"] = {"t": t, "artin": a, "non_artin": na}
    if args.json:
        print(_dump(rep), file=out)
        return EXIT_OK
    print(f"{n}/{q} = {e}", file=out)
    print(f"multiplicity m = {m}, embedding dimension = {embdim}", file=out)
    print(f"ell = {rep['ell']}", file=out)
    print("Wahl: " + ("no" if w is None else f"n={w.n}, q={w.q}"), file=out)
    if rep["artin"]:
        a = rep["artin"]
        print(f"t = {a['t']}, Artin component dim {a['artin']}, non-Artin dim {a['non_artin']}", file=out)
    return EXIT_OK


def cmd_moves(args, out):
    expr = parse_class_or_marked(args.expr)
    if isinstance(expr, MarkedClass):
        moves = lowering_moves(expr)
    else:
        moves = constant_moves(expr) + lowering_moves_from(expr, _catalog(args))
    if args.json:
        print(_dump([mv.to_dict() for mv in moves]), file=out)
        return EXIT_OK
    if not moves:
        print("no moves", file=out)
    for mv in moves:
        print(mv, file=out)
    return EXIT_OK


def cmd_reach(args, out):
    src, tgt = named(parse_class(args.source)), named(parse_class(args.target))
    path = reach(src, tgt, args.max_steps, _catalog(args))
    if args.json:
        print(_dump(None if path is None else [mv.to_dict() for mv in path]), file=out)
    elif path is None:
        print("none", file=out)
    else:
        print(" -> ".join([str(src)] + [str(mv.target) for mv in path]), file=out)
        for mv in path:
            print(f"  {mv}", file=out)
    return EXIT_UNREACHABLE if path is None else EXIT_OK


def cmd_dag(args, out):
    dag = adjacency_dag(args.max_degree, args.max_length, _catalog(args))
    with open(args.dot, "w", encoding="utf-8") as fh:
        fh.write(dag.to_dot())
    if args.json_file:
        with open(args.json_file, "w", encoding="utf-8") as fh:
            fh.write(dag.to_json())
    print(f"{len(dag.nodes)} classes, {len(dag.edges)} moves, acyclic: {dag.is_acyclic()}", file=out)
    return EXIT_OK


def cmd_quotient(args, out):
    try:
        e = [int(x) for x in args.cusp.split(",")]
    except ValueError:
        raise UsageError(f"--cusp expects comma-separated integers, got {args.cusp!r}") from None
    cover, quotient = z2_cusp_graphs(e)
    rep = {"cover": _graph_report(cover), "quotient": _graph_report(quotient)}
    if args.json:
        rep["cover"]["graph"] = gr.format_graph(cover)
        rep["quotient"]["graph"] = gr.format_graph(quotient)
        print(_dump(rep), file=out)
        return EXIT_OK
    for label, g in (("cover", cover), ("quotient", quotient)):
        r = rep[label]
        print(f"# {label}: {r['class']}, -Z.Z = {r['graph_degree']}, "
              f"minimally elliptic: {'yes' if r['minimally_elliptic'] else 'no'}", file=out)
        print(gr.format_graph(g), file=out)
    return EXIT_OK


def cmd_fixtures(args, out):
    checks = mu3_checks()
    fixtures = mu3_fixtures() if all(ok for _, ok in checks) else []
    if args.json:
        print(_dump({
            "fixtures": [f.to_dict() for f in fixtures],
            "checks": [{"check": name, "passed": ok} for name, ok in checks],
        }), file=out)
    else:
        for f in fixtures:
            print(f"{f.group}: {f.cover} [{f.cover_equation.equation()}, T1={f.t1_cover}]"
                  f"  /mu3 =  {f.quotient} [{f.quotient_equation.equation()}, T1={f.t1_quotient}]", file=out)
        for name, ok in checks:
            print(f"{'PASS' if ok else 'FAIL'}  {name}", file=out)
    return EXIT_OK if fixtures else EXIT_INPUT


COMMANDS = {
    "classify": cmd_classify,
    "cycle": cmd_cycle,
    "hj": cmd_hj,
    "moves": cmd_moves,
    "reach": cmd_reach,
    "dag": cmd_dag,
    "quotient": cmd_quotient,
    "fixtures": cmd_fixtures,
}


def run(argv: Optional[Sequence[str]] = None, stdout: TextIO = None, stderr: TextIO = None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return COMMANDS[args.command](args, stdout)
    except NotNegativeDefiniteError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_NOT_ND
    except (UsageError, EllipsingError, ValueError, OSError) as exc:
        print(f"error: {str(exc).splitlines()[0] if str(exc) else type(exc).__name__}", file=stderr)
        return EXIT_INPUT


def main() -> None:
    sys.exit(run())
