"""Two-column graphs and the planar Heyting algebras (ZHAs) they generate.

A two-column graph has points ``L1..Ll`` and ``R1..Rr``.  Inside each column
every point implies the one below it (``La -> L(a-1)``); explicit arrows join
the two columns.  A set of points is *open* when it is closed under every
arrow: ``p in U`` and ``p -> q`` force ``q in U``.  Open sets are piles, so the
topology is a set of digit pairs ``(a, b)`` ordered componentwise.

Elements are plain ``(a, b)`` tuples throughout the package.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Iterable, Iterator, Sequence

from .errors import DomainError, RangeError, ShapeError

Elem = tuple[int, int]

_POINT_RE = re.compile(r"^([LR])([1-9][0-9]*)$")


def parse_point(token: str) -> tuple[str, int]:
    m = _POINT_RE.match(token)
    if not m:
        raise ValueError(f"not a point token: {token!r}")
    return m.group(1), int(m.group(2))


def digit(n: int) -> str:
    return str(n) if n < 10 else f"[{n}]"


def fmt_elem(x: Elem) -> str:
    """``(2, 3) -> '23'``; components above 9 use the bracket form ``[10]``."""
    return digit(x[0]) + digit(x[1])


_ELEM_RE = re.compile(r"^(\d|\[\d+\])(\d|\[\d+\])$")


def parse_elem(text: str) -> Elem:
    m = _ELEM_RE.match(text.strip())
    if not m:
        raise ValueError(f"not a digit pair: {text!r}")
    a, b = (int(g.strip("[]")) for g in m.groups())
    return a, b


@dataclass(frozen=True)
class TwoColumnGraph:
    left: int
    right: int
    arrows: frozenset[tuple[str, str]] = frozenset()
    questions: frozenset[str] = frozenset()

    def __post_init__(self) -> None:
        if self.left < 0 or self.right < 0:
            raise RangeError("column heights must be non-negative")
        object.__setattr__(self, "arrows", frozenset(self.arrows))
        object.__setattr__(self, "questions", frozenset(self.questions))
        pts = set(self.points)
        for src, dst in self.arrows:
            for p in (src, dst):
                if p not in pts:
                    raise DomainError(f"arrow endpoint {p} is not a point of the graph")
            if src[0] == dst[0]:
                raise DomainError(f"arrow {src} -> {dst} stays inside one column")
        bad = self.questions - pts
        if bad:
            raise DomainError(f"question marks on non-points: {sorted(bad)}")

    @property
    def points(self) -> tuple[str, ...]:
        return tuple(f"L{a}" for a in range(1, self.left + 1)) + tuple(
            f"R{b}" for b in range(1, self.right + 1)
        )

    def column_arrows(self) -> list[tuple[str, str]]:
        out = [(f"L{a}", f"L{a - 1}") for a in range(2, self.left + 1)]
        out += [(f"R{b}", f"R{b - 1}") for b in range(2, self.right + 1)]
        return out

    def all_arrows(self) -> list[tuple[str, str]]:
        return self.column_arrows() + sorted(self.arrows)

    def with_questions(self, questions: Iterable[str]) -> TwoColumnGraph:
        return TwoColumnGraph(self.left, self.right, self.arrows, frozenset(questions))


def pile(graph: TwoColumnGraph, a: int, b: int) -> frozenset[str]:
    """The bottom ``a`` left points together with the bottom ``b`` right points."""
    if not (0 <= a <= graph.left and 0 <= b <= graph.right):
        raise RangeError(f"pile({a},{b}) outside 0..{graph.left} x 0..{graph.right}")
    return frozenset([f"L{i}" for i in range(1, a + 1)] + [f"R{j}" for j in range(1, b + 1)])


def is_open(graph: TwoColumnGraph, s: Iterable[str]) -> bool:
    s = frozenset(s)
    return all(q in s for p, q in graph.all_arrows() if p in s)


def pile_coords(s: Iterable[str]) -> Elem | None:
    """Inverse of ``pile``: the digit pair of ``s`` or None if ``s`` is not a pile."""
    s = frozenset(s)
    a = sum(1 for p in s if p[0] == "L")
    b = sum(1 for p in s if p[0] == "R")
    expected = {f"L{i}" for i in range(1, a + 1)} | {f"R{j}" for j in range(1, b + 1)}
    return (a, b) if s == expected else None


@dataclass(frozen=True)
class Zha:
    """A finite set of digit pairs closed under componentwise min and max.

    The Heyting structure is the one of the open-set lattice: meet and join are
    componentwise, implication is the largest ``x`` with ``x & u <= w``.
    """

    l: int
    r: int
    elements: tuple[Elem, ...]
    index: dict[Elem, int] = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        elems = tuple(sorted(set(self.elements)))
        object.__setattr__(self, "elements", elems)
        object.__setattr__(self, "index", {x: i for i, x in enumerate(elems)})
        if (0, 0) not in self.index or (self.l, self.r) not in self.index:
            raise ShapeError("a ZHA must contain 00 and its top lr")
        outside = [x for x in elems if not (0 <= x[0] <= self.l and 0 <= x[1] <= self.r)]
        if outside:
            raise ShapeError(f"{fmt_elem(outside[0])} lies outside [00, {fmt_elem((self.l, self.r))}]")
        for x, y in product(elems, repeat=2):
            lo = (min(x[0], y[0]), min(x[1], y[1]))
            hi = (max(x[0], y[0]), max(x[1], y[1]))
            if lo not in self.index or hi not in self.index:
                raise ShapeError(f"not closed under min/max at {fmt_elem(x)}, {fmt_elem(y)}")

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[Elem]:
        return iter(self.elements)

    def __contains__(self, x: object) -> bool:
        return x in self.index

    def __repr__(self) -> str:
        return f"Zha(top={fmt_elem(self.top)}, size={len(self)})"

    def _check(self, *xs: Elem) -> None:
        for x in xs:
            if x not in self.index:
                raise DomainError(f"{x!r} is not an element of {self!r}")

    @property
    def top(self) -> Elem:
        return (self.l, self.r)

    @property
    def bottom(self) -> Elem:
        return (0, 0)

    def leq(self, x: Elem, y: Elem) -> bool:
        self._check(x, y)
        return x[0] <= y[0] and x[1] <= y[1]

    def meet(self, x: Elem, y: Elem) -> Elem:
        self._check(x, y)
        return (min(x[0], y[0]), min(x[1], y[1]))

    def join(self, x: Elem, y: Elem) -> Elem:
        self._check(x, y)
        return (max(x[0], y[0]), max(x[1], y[1]))

    @cached_property
    def imp_table(self) -> dict[tuple[Elem, Elem], Elem]:
        table = {}
        for u, w in product(self.elements, repeat=2):
            below = [
                x for x in self.elements
                if min(x[0], u[0]) <= w[0] and min(x[1], u[1]) <= w[1]
            ]
            best = (max(x[0] for x in below), max(x[1] for x in below))
            # the candidates are closed under join, so their componentwise max is one of them
            assert best in self.index
            table[u, w] = best
        return table

    def imp(self, u: Elem, w: Elem) -> Elem:
        self._check(u, w)
        return self.imp_table[u, w]

    def neg(self, u: Elem) -> Elem:
        return self.imp(u, self.bottom)

    def iff(self, u: Elem, w: Elem) -> Elem:
        return self.meet(self.imp(u, w), self.imp(w, u))

    def join_all(self, xs: Iterable[Elem]) -> Elem:
        out = self.bottom
        for x in xs:
            out = self.join(out, x)
        return out

    def meet_all(self, xs: Iterable[Elem]) -> Elem:
        out = self.top
        for x in xs:
            out = self.meet(out, x)
        return out

    # index-level tables for the enumeration-heavy callers

    @cached_property
    def up_masks(self) -> tuple[int, ...]:
        """Bit ``j`` of ``up_masks[i]`` is set when ``elements[i] <= elements[j]``."""
        els = self.elements
        return tuple(
            sum(1 << j for j, y in enumerate(els) if x[0] <= y[0] and x[1] <= y[1]) for x in els
        )

    @cached_property
    def down_masks(self) -> tuple[int, ...]:
        els = self.elements
        return tuple(
            sum(1 << j for j, y in enumerate(els) if y[0] <= x[0] and y[1] <= x[1]) for x in els
        )

    @cached_property
    def meet_idx(self) -> tuple[tuple[int, ...], ...]:
        ix, els = self.index, self.elements
        return tuple(tuple(ix[min(x[0], y[0]), min(x[1], y[1])] for y in els) for x in els)

    @cached_property
    def join_idx(self) -> tuple[tuple[int, ...], ...]:
        ix, els = self.index, self.elements
        return tuple(tuple(ix[max(x[0], y[0]), max(x[1], y[1])] for y in els) for x in els)

    def interval(self, lo: Elem, hi: Elem) -> list[Elem]:
        return [x for x in self.elements if self.leq(lo, x) and self.leq(x, hi)]

    def covers(self) -> list[tuple[Elem, Elem]]:
        """Unit steps ``(x, y)`` with ``y`` one step northwest or northeast of ``x``."""
        out = []
        for a, b in self.elements:
            for nxt in ((a + 1, b), (a, b + 1)):
                if nxt in self.index:
                    out.append(((a, b), nxt))
        return out

    def diamonds(self) -> list[tuple[Elem, Elem, Elem, Elem]]:
        """Unit squares ``(bottom, left, right, top)`` lying entirely inside the ZHA."""
        out = []
        for a, b in self.elements:
            sq = ((a, b), (a + 1, b), (a, b + 1), (a + 1, b + 1))
            if all(p in self.index for p in sq):
                out.append(sq)
        return out


def full_grid(l: int, r: int) -> Zha:
    """The ZHA ``[00, lr]`` of an arrowless graph."""
    return Zha(l, r, tuple(product(range(l + 1), range(r + 1))))


def zha_from_2cg(graph: TwoColumnGraph) -> Zha:
    elems = [
        (a, b)
        for a, b in product(range(graph.left + 1), range(graph.right + 1))
        if is_open(graph, pile(graph, a, b))
    ]
    return Zha(graph.left, graph.right, tuple(elems))


def heyting(zha: Zha) -> Zha:
    """The Heyting structure lives on the Zha object itself; kept as a named entry point."""
    return zha


def open_sets(graph: TwoColumnGraph) -> list[frozenset[str]]:
    """Every open set of the order topology, by brute force over all subsets."""
    pts = graph.points
    out = []
    for bits in range(1 << len(pts)):
        s = frozenset(p for i, p in enumerate(pts) if bits >> i & 1)
        if is_open(graph, s):
            out.append(s)
    return out


def cross_arrows(left: int, right: int) -> list[tuple[str, str]]:
    """All possible inter-column arrows of a graph with the given heights."""
    ls = [f"L{a}" for a in range(1, left + 1)]
    rs = [f"R{b}" for b in range(1, right + 1)]
    return [(x, y) for x in ls for y in rs] + [(y, x) for x in ls for y in rs]


def canonical_2cg(lo: Sequence[int], hi: Sequence[int]) -> TwoColumnGraph:
    """A graph whose ZHA is ``{(a, b) | lo[a] <= b <= hi[a]}``.

    ``lo`` and ``hi`` are non-decreasing, ``lo[0] == 0`` and ``hi[-1]`` is the
    right height.  Arrows ``La -> R(lo[a])`` raise the lower wall and arrows
    ``Rb -> La`` lower the upper one.
    """
    left, right = len(lo) - 1, hi[-1]
    arrows = set()
    for a in range(1, left + 1):
        if lo[a] > lo[a - 1]:
            arrows.add((f"L{a}", f"R{lo[a]}"))
    for b in range(1, right + 1):
        a = min(i for i in range(left + 1) if hi[i] >= b)
        if a > 0 and (b == 1 or min(i for i in range(left + 1) if hi[i] >= b - 1) < a):
            arrows.add((f"R{b}", f"L{a}"))
    return TwoColumnGraph(left, right, frozenset(arrows))


def _walls(left: int, right: int) -> Iterator[tuple[tuple[int, ...], tuple[int, ...]]]:
    def monotone(n: int, top: int, first: int | None, last: int | None):
        def rec(prefix):
            if len(prefix) == n:
                if last is None or prefix[-1] == last:
                    yield tuple(prefix)
                return
            start = prefix[-1] if prefix else 0
            for v in range(start, top + 1):
                if not prefix and first is not None and v != first:
                    continue
                yield from rec(prefix + [v])
        return rec([])

    for lo in monotone(left + 1, right, 0, None):
        for hi in monotone(left + 1, right, None, right):
            if all(lo[a] <= hi[a] for a in range(left + 1)) and all(
                lo[a + 1] <= hi[a] for a in range(left)
            ):
                yield lo, hi


def acyclic_2cgs(left: int, right: int) -> list[TwoColumnGraph]:
    """One canonical acyclic graph per ZHA shape with top ``lr``."""
    return [canonical_2cg(lo, hi) for lo, hi in _walls(left, right)]


def all_zhas(max_l: int, max_r: int | None = None) -> list[Zha]:
    """Every acyclic-graph ZHA with ``l <= max_l`` and ``r <= max_r``.

    Ordered by size, then top, then element list; this is the host order of
    every bounded model search in the package.
    """
    max_r = max_l if max_r is None else max_r
    out = [
        zha_from_2cg(g)
        for l, r in product(range(max_l + 1), range(max_r + 1))
        for g in acyclic_2cgs(l, r)
    ]
    return sorted(out, key=lambda z: (len(z), z.top, z.elements))
