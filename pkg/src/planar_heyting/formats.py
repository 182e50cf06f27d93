"""Line-oriented text formats: ``.2cg`` graphs and ``.psh`` presheaves.

``.2cg``::

    # comment
    left 4
    right 6
    arrow L1 R1
    questions L2 L3 R1

``.psh`` (point names refer to the poset the file is read against)::

    point L1: a b
    point L2: c
    map L2 -> L1: c->a

Element tokens in ``.psh`` are any non-blank strings without ``,``, ``:``
or ``->``.  Blank lines and ``#`` comments are ignored everywhere.
"""

from __future__ import annotations

from typing import Iterator

from .errors import DomainError, ParseError, RangeError
from .lattice_core import TwoColumnGraph, parse_point
from .topos import FinitePoset, Presheaf


def _lines(text: str) -> Iterator[tuple[int, str]]:
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def _point_key(token: str) -> tuple[str, int]:
    return parse_point(token)


def parse_2cg(text: str) -> TwoColumnGraph:
    left = right = None
    arrows: list[tuple[str, str, int]] = []
    questions: list[tuple[str, int]] = []
    for lineno, line in _lines(text):
        word, *rest = line.split()
        if word in ("left", "right"):
            if len(rest) != 1 or not rest[0].isdigit():
                raise ParseError(f"'{word}' takes one non-negative integer", lineno)
            if (left if word == "left" else right) is not None:
                raise ParseError(f"duplicate '{word}' line", lineno)
            if word == "left":
                left = int(rest[0])
            else:
                right = int(rest[0])
        elif word == "arrow":
            if len(rest) != 2:
                raise ParseError("'arrow' takes two point tokens", lineno)
            for tok in rest:
                try:
                    _point_key(tok)
                except ValueError as exc:
                    raise ParseError(str(exc), lineno) from None
            arrows.append((rest[0], rest[1], lineno))
        elif word == "questions":
            for tok in rest:
                try:
                    _point_key(tok)
                except ValueError as exc:
                    raise ParseError(str(exc), lineno) from None
                questions.append((tok, lineno))
        else:
            raise ParseError(f"unknown directive {word!r}", lineno)
    if left is None or right is None:
        raise ParseError("both 'left' and 'right' are required")
    pts = {f"L{a}" for a in range(1, left + 1)} | {f"R{b}" for b in range(1, right + 1)}
    for src, dst, lineno in arrows:
        for p in (src, dst):
            if p not in pts:
                raise ParseError(f"point {p} is outside the columns", lineno)
        if src[0] == dst[0]:
            raise ParseError(f"arrow {src} -> {dst} stays inside one column", lineno)
    for tok, lineno in questions:
        if tok not in pts:
            raise ParseError(f"question mark on {tok}, which is outside the columns", lineno)
    try:
        return TwoColumnGraph(
            left, right, frozenset((s, d) for s, d, _ in arrows), frozenset(t for t, _ in questions)
        )
    except (DomainError, RangeError) as exc:
        raise ParseError(str(exc)) from None


def dump_2cg(graph: TwoColumnGraph) -> str:
    out = [f"left {graph.left}", f"right {graph.right}"]
    out += [f"arrow {s} {d}" for s, d in sorted(graph.arrows, key=lambda a: (_point_key(a[0]), _point_key(a[1])))]
    if graph.questions:
        out.append("questions " + " ".join(sorted(graph.questions, key=_point_key)))
    return "\n".join(out) + "\n"


def parse_psh(text: str, poset: FinitePoset) -> Presheaf:
    sets: dict[str, tuple[str, ...]] = {}
    maps: dict[tuple[str, str], dict[str, str]] = {}
    for lineno, line in _lines(text):
        word, _, rest = line.partition(" ")
        head, colon, body = rest.partition(":")
        if not colon:
            raise ParseError("expected ':' after the point or arrow", lineno)
        if word == "point":
            p = head.strip()
            if p not in poset.down_sets:
                raise ParseError(f"unknown point {p!r}", lineno)
            if p in sets:
                raise ParseError(f"duplicate point {p}", lineno)
            elems = tuple(body.split())
            if len(set(elems)) != len(elems):
                raise ParseError(f"repeated element at {p}", lineno)
            sets[p] = elems
        elif word == "map":
            src, arrow, dst = head.partition("->")
            src, dst = src.strip(), dst.strip()
            if not arrow or not src or not dst:
                raise ParseError("expected 'map <p> -> <q>:'", lineno)
            if (src, dst) in maps:
                raise ParseError(f"duplicate map {src} -> {dst}", lineno)
            m: dict[str, str] = {}
            for pair in filter(None, (s.strip() for s in body.split(","))):
                x, arrow, y = pair.partition("->")
                if not arrow or not x.strip() or not y.strip():
                    raise ParseError(f"bad map entry {pair!r}", lineno)
                m[x.strip()] = y.strip()
            maps[src, dst] = m
        else:
            raise ParseError(f"unknown directive {word!r}", lineno)
    for p in poset.points:
        sets.setdefault(p, ())
    for edge in poset.covers:
        maps.setdefault(edge, {})
    extra = set(maps) - set(poset.covers)
    if extra:
        src, dst = sorted(extra)[0]
        raise ParseError(f"{src} -> {dst} is not a covering arrow of the poset")
    try:
        return Presheaf(poset, sets, maps)
    except DomainError as exc:
        raise ParseError(str(exc)) from None


def dump_psh(c: Presheaf) -> str:
    P = c.poset
    out = [f"point {p}: " + " ".join(map(str, c.sets[p])) for p in P.points]
    for p, q in P.covers:
        m = c.maps[p, q]
        out.append(f"map {p} -> {q}: " + ", ".join(f"{x}->{m[x]}" for x in c.sets[p]))
    return "\n".join(line.rstrip() for line in out) + "\n"


def family_token(fam) -> str:
    """A compact token for an element of a Kan extension: ``{L1=a;R2=*}``."""
    return "{" + ";".join(f"{a}={x}" for a, x in fam) + "}"


def tokenized(c: Presheaf) -> Presheaf:
    """Replace every element by its ``str`` (families by ``family_token``) so it dumps cleanly."""

    def tok(x) -> str:
        return family_token(x) if isinstance(x, tuple) else str(x)

    P = c.poset
    sets = {p: tuple(tok(x) for x in c.sets[p]) for p in P.points}
    maps = {(p, q): {tok(x): tok(y) for x, y in c.maps[p, q].items()} for p, q in P.covers}
    return Presheaf(P, sets, maps)
