"""ASCII drawings of ZHAs, two-column graphs and question-mark path tables.

Human-facing output writes left points as ``4_`` and right points as
``.5``; the ``tsv`` style keeps the machine tokens ``L4`` and ``R5``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Sequence

from .errors import DomainError, InputError
from .lattice_core import Elem, TwoColumnGraph, Zha, digit, fmt_elem, pile, zha_from_2cg
from .slashing import Slashing, q_equiv, slashing_from_questions


@dataclass(frozen=True)
class RenderConfig:
    style: Literal["ascii", "tsv"] = "ascii"
    show_cuts: bool = True
    show_questions: bool = True


def human_point(token: str) -> str:
    """``L4 -> 4_`` and ``R5 -> .5``."""
    side, n = token[0], digit(int(token[1:]))
    return f"{n}_" if side == "L" else f".{n}"


def _finish(rows: list[list[str]]) -> str:
    lines = ["".join(r).rstrip() for r in rows]
    while lines and not lines[-1]:
        lines.pop()
    while lines and not lines[0]:
        lines.pop(0)
    indent = min((len(s) - len(s.lstrip()) for s in lines if s), default=0)
    return "\n".join(s[indent:] for s in lines) + "\n"


def render_zha(zha: Zha, slashing: Slashing | None = None, config: RenderConfig = RenderConfig()) -> str:
    """Lozenge drawing: ``ab`` sits at column ``b - a`` and height ``a + b``.

    With a slashing, every covering edge that crosses a cut gets a glyph on
    the half-row between its ends: ``/`` when the step raises the left digit,
    ``\\`` when it raises the right digit.
    """
    if slashing is not None and slashing.host != zha:
        raise DomainError("slashing is not hosted on this ZHA")
    if config.style == "tsv":
        out = ["elem\tregion_top"]
        for x in zha:
            top = slashing.top(x) if slashing else x
            out.append(f"{fmt_elem(x)}\t{fmt_elem(top)}")
        return "\n".join(out) + "\n"
    w = max(len(fmt_elem(x)) for x in zha)
    step = w + 2
    height = zha.l + zha.r
    rows = [[" "] * (step * (zha.l + zha.r + 2) + w) for _ in range(2 * height + 1)]

    def col(x: Elem) -> int:
        return (step // 2) * (x[1] - x[0] + zha.l)

    def row(x: Elem) -> int:
        return 2 * (height - x[0] - x[1])

    for x in zha:
        text = fmt_elem(x).rjust(w)
        c = col(x)
        rows[row(x)][c : c + w] = list(text)
    if slashing is not None and config.show_cuts:
        for x in zha:
            a, b = x
            up_left, up_right = (a + 1, b), (a, b + 1)
            if up_left in zha and not slashing.equiv(x, up_left):
                rows[row(x) - 1][col(x) - 1] = "/"
            if up_right in zha and not slashing.equiv(x, up_right):
                rows[row(x) - 1][col(x) + w] = "\\"
    return _finish(rows)


def render_2cg(graph: TwoColumnGraph, config: RenderConfig = RenderConfig()) -> str:
    """Two columns, top point first, with the cross arrows listed underneath."""
    if config.style == "tsv":
        from .formats import dump_2cg

        return dump_2cg(graph)
    q = graph.questions if config.show_questions else frozenset()

    def cell(tok: str | None) -> str:
        if tok is None:
            return ""
        return human_point(tok) + ("?" if tok in q else "")

    lines = []
    for k in range(max(graph.left, graph.right), 0, -1):
        lft = cell(f"L{k}" if k <= graph.left else None)
        rgt = cell(f"R{k}" if k <= graph.right else None)
        lines.append(f"{lft:<6}{rgt}".rstrip())
    for s, d in sorted(graph.arrows):
        lines.append(f"{human_point(s)} -> {human_point(d)}")
    return "\n".join(lines) + "\n"


def _fragment(side: str, lo: int, hi: int, same: bool) -> str:
    if side == "L":
        return f"{digit(hi)}{digit(lo)}" if same else f"{digit(hi)}/{digit(lo)}"
    return f"{digit(lo)}{digit(hi)}" if same else f"{digit(lo)}\\{digit(hi)}"


@dataclass(frozen=True)
class PathRow:
    lower: Elem
    upper: Elem
    point: str
    in_q: bool
    q_same: bool
    side: str
    lo: int
    hi: int
    picc_same: bool

    @property
    def fragment(self) -> str:
        return _fragment(self.side, self.lo, self.hi, self.picc_same)


def path_rows(graph: TwoColumnGraph, path: Sequence[Elem], host: Zha | None = None) -> list[PathRow]:
    host = host or zha_from_2cg(graph)
    if len(path) < 2:
        raise InputError("a path needs at least two elements")
    for x in path:
        if x not in host:
            raise InputError(f"{fmt_elem(x)} is not an element of the ZHA")
    s = slashing_from_questions(graph, host)
    out = []
    for x, y in zip(path, path[1:]):
        if y == (x[0] + 1, x[1]):
            side, lo, hi, picc = "L", x[0], y[0], s.left
        elif y == (x[0], x[1] + 1):
            side, lo, hi, picc = "R", x[1], y[1], s.right
        else:
            raise InputError(f"{fmt_elem(x)} -> {fmt_elem(y)} is not a unit step")
        (point,) = pile(graph, *y) - pile(graph, *x)
        out.append(
            PathRow(x, y, point, point in graph.questions, q_equiv(graph, x, y), side, lo, hi, picc.same(lo, hi))
        )
    return out


def render_path_table(
    graph: TwoColumnGraph, path: Sequence[Elem], config: RenderConfig = RenderConfig()
) -> str:
    """One row per step, topmost step first.

    Columns: the point added by the step, whether it carries a question mark,
    the verdict of ``~_Q`` on the step, the verdict of the relevant picc, and
    the short-form slashing fragment.
    """
    rows = path_rows(graph, path)[::-1]
    if config.style == "tsv":
        out = ["lower\tupper\tpoint\tin_Q\tsim_Q\tside\tsim_picc\tfragment"]
        for r in rows:
            out.append(
                "\t".join(
                    [fmt_elem(r.lower), fmt_elem(r.upper), r.point, str(r.in_q).lower(),
                     str(r.q_same).lower(), r.side, str(r.picc_same).lower(), r.fragment]
                )
            )
        return "\n".join(out) + "\n"
    table = []
    for r in rows:
        hp = human_point(r.point)
        u, lo = fmt_elem(r.upper), fmt_elem(r.lower)
        table.append(
            [
                f"pile({u}) - pile({lo}) = {{{hp}}}",
                f"{hp} in Q" if r.in_q else f"{hp} not in Q",
                f"{lo} ~_Q {u}" if r.q_same else f"{lo} !~_Q {u}",
                f"{digit(r.lo)} {'~' if r.picc_same else '!~'}_{r.side} {digit(r.hi)}",
                r.fragment,
            ]
        )
    widths = [max(len(row[k]) for row in table) for k in range(5)]
    return "\n".join("   ".join(c.ljust(wd) for c, wd in zip(row, widths)).rstrip() for row in table) + "\n"
