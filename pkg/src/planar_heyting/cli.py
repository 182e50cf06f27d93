"""Command-line front end.

Exit status: 0 on success, 1 on a domain or input error (one line on
stderr), 2 on a usage error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Sequence

from . import cube, nucleus, poly, topos
from .errors import ZhaError
from .formats import dump_psh, parse_2cg, parse_psh, tokenized
from .lattice_core import Zha, fmt_elem, full_grid, parse_elem, pile, zha_from_2cg
from .render import RenderConfig, render_2cg, render_path_table, render_zha
from .slashing import (
    Rejection,
    all_slashings,
    parse_operator_table,
    parse_slashing,
    questions_from_slashing,
    recognize_slash_operator,
    slashing_from_questions,
)


def _read(path: str) -> str:
    return Path(path).read_text()


def _graph(path: str):
    return parse_2cg(_read(path))


def _host(args) -> Zha:
    if getattr(args, "graph", None):
        return zha_from_2cg(_graph(args.graph))
    if getattr(args, "grid", None):
        return full_grid(*args.grid)
    raise ZhaError("give a host with --grid L R or --2cg FILE")


def _config(args) -> RenderConfig:
    return RenderConfig(style=args.format, show_cuts=not getattr(args, "no_cuts", False))


# zha


def cmd_zha_from_2cg(args, out) -> None:
    g = _graph(args.file)
    h = zha_from_2cg(g)
    cfg = _config(args)
    if args.slashing:
        s = parse_slashing(args.slashing, h)
    elif g.questions:
        s = slashing_from_questions(g, h)
    else:
        s = None
    if cfg.style == "ascii":
        out.write(render_2cg(g, cfg))
        out.write("\n")
    out.write(render_zha(h, s, cfg))
    if s is not None and cfg.style == "ascii":
        out.write(f"\nS = {s} = {s.slashed()}\n")


def cmd_zha_grid(args, out) -> None:
    h = full_grid(args.l, args.r)
    s = parse_slashing(args.slashing, h) if args.slashing else None
    out.write(render_zha(h, s, _config(args)))


# slash


def cmd_slash_path(args, out) -> None:
    g = _graph(args.file)
    path = [parse_elem(t) for t in args.path]
    out.write(render_path_table(g, path, _config(args)))


def cmd_slash_questions(args, out) -> None:
    g = _graph(args.file)
    h = zha_from_2cg(g)
    if args.slashing:
        q = questions_from_slashing(g, parse_slashing(args.slashing, h))
        out.write("questions " + " ".join(sorted(q, key=lambda t: (t[0], int(t[1:])))) + "\n")
    else:
        s = slashing_from_questions(g, h)
        out.write(f"{s}\n{s.slashed()}\n")


def cmd_slash_recognize(args, out) -> None:
    h = _host(args)
    t = parse_operator_table(_read(args.table), h)
    res = recognize_slash_operator(t)
    out.write(f"not a slash-operator: {res}\n" if isinstance(res, Rejection) else f"slash-operator: {res}\n")


# jop


def cmd_jop_check(args, out) -> None:
    h = _host(args)
    t = parse_operator_table(_read(args.table), h)
    _verdict(nucleus.check_j123(t), out)


def cmd_jop_enumerate(args, out) -> None:
    h = _host(args)
    ops = nucleus.enumerate_j_operators(h, max_size=args.max_size)
    slashings = {s.operator(): s for s in all_slashings(h)}
    out.write(f"{len(ops)} J-operators\n")
    for t in sorted(ops, key=lambda t: t.values):
        s = slashings.get(t)
        out.write(f"{s if s else '(not a slashing)'}\n")


def _verdict(v, out) -> None:
    out.write("J-operator: yes\n" if v.ok else f"J-operator: no ({v.first_failure()})\n")


# poly


def cmd_poly_check(args, out) -> None:
    e = poly.parse_poly(args.expr)
    _verdict(poly.is_polynomial_j(e, _host(args)), out)


def cmd_poly_table(args, out) -> None:
    h = _host(args)
    t = poly.tabulate(poly.parse_poly(args.expr), h)
    if args.format == "tsv":
        out.write("".join(f"{fmt_elem(x)}\t{fmt_elem(y)}\n" for x, y in t.items()))
    else:
        out.write(f"{t}\n")


def cmd_poly_of_slashing(args, out) -> None:
    h = _host(args)
    out.write(f"{poly.slashing_to_polynomial(parse_slashing(args.slashing, h))}\n")


# cube


def cmd_cube_report(args, out) -> None:
    c = args.connective
    classes, hasse = cube.simplified_cube(c)
    rel = cube.theorem_preorder(c)
    tsv = args.format == "tsv"
    out.write(f"connective: {c}\n")
    out.write("classes: " + " ".join("{" + ",".join(map(str, k)) + "}" for k in classes) + "\n")
    for a, b in hasse:
        out.write(f"edge: {{{','.join(map(str, classes[a]))}}} <= {{{','.join(map(str, classes[b]))}}}\n")
    sep = cube.separating_valuation_search(c, args.bound, args.seed)
    out.write(f"separating model: {sep if sep else 'none within bound'}\n")
    for i in cube.NODES:
        for j in cube.NODES:
            if (i, j) in rel:
                continue
            m = cube.countermodel_search(c, i, j, args.bound, args.seed)
            label = f"{i}\t{j}\t{m}" if tsv else f"not {i} <= {j}: {m if m else 'no countermodel within bound'}"
            out.write(label + "\n")


# topos


def _graph_poset(args):
    g = _graph(args.file)
    return g, topos.poset_from_2cg(g)


def cmd_topos_omega(args, out) -> None:
    g, P = _graph_poset(args)
    om = topos.omega(P)
    for p in P.points:
        vals = " ".join(topos.fmt_open(r, g) for r in om.sets[p])
        out.write(f"{p}: {vals}\n")
    out.write("Sub(1): " + " ".join(fmt_elem(x) for x in topos.sub1_as_zha(g)) + "\n")


def _local(g, P):
    h = zha_from_2cg(g)
    J = topos.opens_operator(g, slashing_from_questions(g, h).operator())
    return J, topos.local_operator(P, J)


def cmd_topos_j(args, out) -> None:
    g, P = _graph_poset(args)
    _, j = _local(g, P)
    for p in P.points:
        pairs = [f"{topos.fmt_open(r, g)}->{topos.fmt_open(j(p, r), g)}" for r in j.source.sets[p]]
        out.write(f"{p}: " + " ".join(pairs) + "\n")


def cmd_topos_closure(args, out) -> None:
    g, P = _graph_poset(args)
    J, j = _local(g, P)
    sub_u, of_u = pile(g, *parse_elem(args.sub)), pile(g, *parse_elem(args.of))
    for u in (sub_u, of_u):
        if not P.is_open(u):
            raise ZhaError(f"{topos.fmt_open(u, g)} is not an open set of the graph")
    if not sub_u <= of_u:
        raise ZhaError(f"{args.sub} is not below {args.of}")
    host = topos.subterminal(P, of_u).as_presheaf()
    b = topos.Subfunctor(host, {p: host.sets[p] if p in sub_u else () for p in P.points})
    cl = topos.closure(b, j, j.source)
    got = frozenset(p for p in P.points if cl.parts[p])
    out.write(f"closure of {args.sub} in {args.of}: {topos.fmt_open(got, g)}\n")


def cmd_topos_sheafify(args, out) -> None:
    g, P = _graph_poset(args)
    c = parse_psh(_read(args.psh), P)
    keep = [p for p in P.points if p not in g.questions]
    s = topos.kan_sheafify(P, keep, c, g.questions)
    out.write(dump_psh(tokenized(s.sheaf)))


# parser


def _add_host(p: argparse.ArgumentParser) -> None:
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--grid", nargs=2, type=int, metavar=("L", "R"), help="full grid [00, LR]")
    g.add_argument("--2cg", dest="graph", metavar="FILE", help="ZHA of a .2cg file")


def _add_format(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=["ascii", "tsv"], default="ascii")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="planar-heyting", description="Planar Heyting algebras, slashings and J-operators.")
    sub = ap.add_subparsers(dest="command", required=True)

    zha = sub.add_parser("zha").add_subparsers(dest="action", required=True)
    p = zha.add_parser("from-2cg", help="draw a graph and its ZHA")
    p.add_argument("file")
    p.add_argument("--slashing")
    p.add_argument("--no-cuts", action="store_true")
    _add_format(p)
    p.set_defaults(func=cmd_zha_from_2cg)
    p = zha.add_parser("grid", help="draw the full grid [00, LR]")
    p.add_argument("l", type=int)
    p.add_argument("r", type=int)
    p.add_argument("--slashing")
    p.add_argument("--no-cuts", action="store_true")
    _add_format(p)
    p.set_defaults(func=cmd_zha_grid)

    sl = sub.add_parser("slash").add_subparsers(dest="action", required=True)
    p = sl.add_parser("path", help="question-mark table along a unit-step path")
    p.add_argument("file")
    p.add_argument("path", nargs="+")
    _add_format(p)
    p.set_defaults(func=cmd_slash_path)
    p = sl.add_parser("questions", help="slashing of the file's questions, or questions of --slashing")
    p.add_argument("file")
    p.add_argument("--slashing")
    p.set_defaults(func=cmd_slash_questions)
    p = sl.add_parser("recognize", help="decide whether an operator table is a slash-operator")
    p.add_argument("table")
    _add_host(p)
    p.set_defaults(func=cmd_slash_recognize)

    jop = sub.add_parser("jop").add_subparsers(dest="action", required=True)
    p = jop.add_parser("check", help="test J1-J3 on an operator table")
    p.add_argument("table")
    _add_host(p)
    p.set_defaults(func=cmd_jop_check)
    p = jop.add_parser("enumerate", help="all J-operators of a host")
    _add_host(p)
    p.add_argument("--max-size", type=int, default=16)
    p.set_defaults(func=cmd_jop_enumerate)

    po = sub.add_parser("poly").add_subparsers(dest="action", required=True)
    p = po.add_parser("check", help="is a polynomial a J-operator")
    p.add_argument("expr")
    _add_host(p)
    p.set_defaults(func=cmd_poly_check)
    p = po.add_parser("table", help="tabulate a polynomial")
    p.add_argument("expr")
    _add_host(p)
    _add_format(p)
    p.set_defaults(func=cmd_poly_table)
    p = po.add_parser("of-slashing", help="a polynomial whose table is the slash-operator")
    p.add_argument("slashing")
    _add_host(p)
    p.set_defaults(func=cmd_poly_of_slashing)

    cu = sub.add_parser("cube").add_subparsers(dest="action", required=True)
    p = cu.add_parser("report", help="classes, Hasse edges and countermodels of a cube")
    p.add_argument("--connective", choices=list(cube.CONNECTIVES), required=True)
    p.add_argument("--bound", type=int, default=3, help="search ZHAs with l, r <= BOUND")
    p.add_argument("--seed", type=int, default=None, help="shuffle slashings and valuations")
    _add_format(p)
    p.set_defaults(func=cmd_cube_report)

    to = sub.add_parser("topos").add_subparsers(dest="action", required=True)
    p = to.add_parser("omega", help="the truth-value presheaf of a graph")
    p.add_argument("file")
    p.set_defaults(func=cmd_topos_omega)
    p = to.add_parser("j", help="local operator from the file's question marks")
    p.add_argument("file")
    p.set_defaults(func=cmd_topos_j)
    p = to.add_parser("closure", help="closure of the subterminal --sub inside --of")
    p.add_argument("file")
    p.add_argument("--sub", required=True)
    p.add_argument("--of", required=True)
    p.set_defaults(func=cmd_topos_closure)
    p = to.add_parser("sheafify", help="Kan-extension sheafification of a .psh presheaf")
    p.add_argument("file")
    p.add_argument("psh")
    p.set_defaults(func=cmd_topos_sheafify)
    return ap


def main(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        args.func(args, out)
    except (ZhaError, ValueError, OSError) as exc:
        err.write(f"error: {exc}\n")
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
