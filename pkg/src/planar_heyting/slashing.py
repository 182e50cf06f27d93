"""Piccs, slashings, question marks and slash-operators.

A picc on ``{0..n}`` is stored by its cut positions: cut ``i`` separates
``i-1`` from ``i``.  A slashing is a pair of piccs, one per digit of the host
ZHA; two elements are equivalent when both digits are.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations, product
from typing import Callable, Iterable, Iterator, Literal

from .errors import DomainError, ParseError, RangeError, ShapeError
from .lattice_core import Elem, TwoColumnGraph, Zha, digit, fmt_elem, parse_elem, pile, zha_from_2cg


@dataclass(frozen=True)
class Picc:
    n: int
    cuts: frozenset[int] = frozenset()

    def __post_init__(self) -> None:
        object.__setattr__(self, "cuts", frozenset(self.cuts))
        if self.n < 0:
            raise RangeError("picc size must be non-negative")
        bad = [c for c in self.cuts if not 1 <= c <= self.n]
        if bad:
            raise RangeError(f"cut positions {sorted(bad)} outside 1..{self.n}")

    @classmethod
    def identity(cls, n: int) -> Picc:
        return cls(n, frozenset(range(1, n + 1)))

    @classmethod
    def trivial(cls, n: int) -> Picc:
        return cls(n)

    def _check(self, a: int) -> None:
        if not 0 <= a <= self.n:
            raise RangeError(f"{a} outside 0..{self.n}")

    def classes(self) -> list[list[int]]:
        out = [[0]]
        for a in range(1, self.n + 1):
            if a in self.cuts:
                out.append([a])
            else:
                out[-1].append(a)
        return out

    def cls(self, a: int) -> list[int]:
        self._check(a)
        lo = a
        while lo > 0 and lo not in self.cuts:
            lo -= 1
        hi = a
        while hi < self.n and hi + 1 not in self.cuts:
            hi += 1
        return list(range(lo, hi + 1))

    def top(self, a: int) -> int:
        return self.cls(a)[-1]

    def same(self, a: int, b: int) -> bool:
        self._check(a)
        self._check(b)
        lo, hi = min(a, b), max(a, b)
        return not any(lo < c <= hi for c in self.cuts)

    def __str__(self) -> str:
        return "|".join("".join(digit(a) for a in c) for c in self.classes())

    def slashed(self, glyph: str, reverse: bool = False) -> str:
        """Render with ``/`` or ``\\`` glyphs; ``reverse`` lists digits high to low."""
        classes = self.classes()
        if reverse:
            return glyph.join("".join(digit(a) for a in reversed(c)) for c in reversed(classes))
        return glyph.join("".join(digit(a) for a in c) for c in classes)


picc_top = Picc.top

_PICC_TOKEN = re.compile(r"\[\d+\]|\d|\|")


def parse_picc(text: str) -> Picc:
    """Parse the bar notation ``0|123|45``; digits above 9 are written ``[10]``."""
    text = text.strip()
    pos = 0
    digits: list[int] = []
    cuts: set[int] = set()
    pending_bar = False
    for m in _PICC_TOKEN.finditer(text):
        if m.start() != pos:
            raise ParseError(f"unexpected text {text[pos:m.start()]!r} in picc {text!r}")
        pos = m.end()
        tok = m.group()
        if tok == "|":
            if not digits or pending_bar:
                raise ParseError(f"misplaced '|' in picc {text!r}")
            pending_bar = True
            continue
        value = int(tok.strip("[]"))
        if value != len(digits):
            raise ParseError(f"picc {text!r} must list 0..n in order; got {value} at position {len(digits)}")
        if pending_bar:
            cuts.add(value)
            pending_bar = False
        digits.append(value)
    if pos != len(text) or not digits or pending_bar:
        raise ParseError(f"malformed picc {text!r}")
    return Picc(len(digits) - 1, frozenset(cuts))


def all_piccs(n: int) -> Iterator[Picc]:
    positions = range(1, n + 1)
    for k in range(n + 1):
        for cs in combinations(positions, k):
            yield Picc(n, frozenset(cs))


@dataclass(frozen=True)
class Slashing:
    left: Picc
    right: Picc
    host: Zha

    def __post_init__(self) -> None:
        if self.left.n != self.host.l or self.right.n != self.host.r:
            raise ShapeError(
                f"picc sizes ({self.left.n}, {self.right.n}) do not match host top {fmt_elem(self.host.top)}"
            )

    def equiv(self, x: Elem, y: Elem) -> bool:
        self.host._check(x, y)
        return self.left.same(x[0], y[0]) and self.right.same(x[1], y[1])

    def region(self, x: Elem) -> list[Elem]:
        return [y for y in self.host if self.equiv(x, y)]

    @cached_property
    def _tops(self) -> dict[Elem, Elem]:
        lk = {a: k for k, c in enumerate(self.left.classes()) for a in c}
        rk = {b: k for k, c in enumerate(self.right.classes()) for b in c}
        groups: dict[tuple[int, int], list[Elem]] = {}
        for x in self.host:
            groups.setdefault((lk[x[0]], rk[x[1]]), []).append(x)
        tops = {key: self.host.join_all(g) for key, g in groups.items()}
        return {x: tops[lk[x[0]], rk[x[1]]] for x in self.host}

    def top(self, x: Elem) -> Elem:
        try:
            return self._tops[x]
        except KeyError:
            raise DomainError(f"{x!r} is not an element of the host") from None

    def operator(self) -> OperatorTable:
        return OperatorTable.from_function(self.host, self.top)

    def regions(self) -> list[list[Elem]]:
        seen: set[Elem] = set()
        out = []
        for x in self.host:
            if x not in seen:
                r = self.region(x)
                seen.update(r)
                out.append(r)
        return out

    def __str__(self) -> str:
        return f"({self.left}, {self.right})"

    def slashed(self) -> str:
        return f"({self.left.slashed('/', reverse=True)}, {self.right.slashed(chr(92))})"


def s_equiv(s: Slashing, x: Elem, y: Elem) -> bool:
    return s.equiv(x, y)


def s_top(s: Slashing, x: Elem) -> Elem:
    return s.top(x)


def parse_slashing(text: str, host: Zha) -> Slashing:
    text = text.strip()
    if not (text.startswith("(") and text.endswith(")")) or text.count(",") != 1:
        raise ParseError(f"slashing must look like '(<picc>, <picc>)': {text!r}")
    lt, rt = text[1:-1].split(",")
    return Slashing(parse_picc(lt), parse_picc(rt), host)


def all_slashings(zha: Zha) -> Iterator[Slashing]:
    for lp, rp in product(list(all_piccs(zha.l)), list(all_piccs(zha.r))):
        yield Slashing(lp, rp, zha)


@dataclass(frozen=True)
class OperatorTable:
    """A total function ``H -> H`` stored as images aligned with ``host.elements``."""

    host: Zha
    values: tuple[Elem, ...]

    def __post_init__(self) -> None:
        if len(self.values) != len(self.host):
            raise ShapeError("operator table is not total on its host")
        for v in self.values:
            if v not in self.host:
                raise DomainError(f"operator value {v!r} is outside the host")

    @classmethod
    def from_function(cls, host: Zha, f: Callable[[Elem], Elem]) -> OperatorTable:
        return cls(host, tuple(f(x) for x in host))

    @classmethod
    def from_mapping(cls, host: Zha, mapping: dict[Elem, Elem]) -> OperatorTable:
        missing = [x for x in host if x not in mapping]
        if missing:
            raise ShapeError(f"operator table has no entry for {fmt_elem(missing[0])}")
        extra = [x for x in mapping if x not in host]
        if extra:
            raise DomainError(f"operator table mentions non-element {extra[0]!r}")
        return cls(host, tuple(mapping[x] for x in host))

    @classmethod
    def identity(cls, host: Zha) -> OperatorTable:
        return cls(host, host.elements)

    @classmethod
    def constant_top(cls, host: Zha) -> OperatorTable:
        return cls(host, tuple(host.top for _ in host))

    def __call__(self, x: Elem) -> Elem:
        try:
            return self.values[self.host.index[x]]
        except KeyError:
            raise DomainError(f"{x!r} is not an element of the host") from None

    def items(self) -> list[tuple[Elem, Elem]]:
        return list(zip(self.host.elements, self.values))

    def __str__(self) -> str:
        return "\n".join(f"{fmt_elem(x)} -> {fmt_elem(y)}" for x, y in self.items())


def parse_operator_table(text: str, host: Zha) -> OperatorTable:
    """Read ``<ab> -> <cd>`` lines (any order, ``#`` comments allowed)."""
    mapping: dict[Elem, Elem] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split("->")
        if len(parts) != 2:
            raise ParseError(f"expected '<ab> -> <cd>', got {line!r}", lineno)
        try:
            x, y = parse_elem(parts[0]), parse_elem(parts[1])
        except ValueError as exc:
            raise ParseError(str(exc), lineno) from None
        if x in mapping:
            raise ParseError(f"duplicate entry for {fmt_elem(x)}", lineno)
        mapping[x] = y
    return OperatorTable.from_mapping(host, mapping)


# question marks


def q_equiv(graph: TwoColumnGraph, x: Elem, y: Elem) -> bool:
    q = graph.questions
    return pile(graph, *x) - q == pile(graph, *y) - q


def slashing_from_questions(graph: TwoColumnGraph, host: Zha | None = None) -> Slashing:
    host = host or zha_from_2cg(graph)
    q = graph.questions
    left = Picc(graph.left, frozenset(a for a in range(1, graph.left + 1) if f"L{a}" not in q))
    right = Picc(graph.right, frozenset(b for b in range(1, graph.right + 1) if f"R{b}" not in q))
    return Slashing(left, right, host)


def questions_from_slashing(graph: TwoColumnGraph, s: Slashing) -> frozenset[str]:
    if s.left.n != graph.left or s.right.n != graph.right:
        raise ShapeError("slashing piccs do not match the graph's column heights")
    return frozenset(
        [f"L{a}" for a in range(1, graph.left + 1) if a not in s.left.cuts]
        + [f"R{b}" for b in range(1, graph.right + 1) if b not in s.right.cuts]
    )


def cuts_along_path(graph: TwoColumnGraph, path: list[Elem]) -> tuple[frozenset[int], frozenset[int]]:
    """Read the cut set off a bottom-to-top unit-step path by erasing ``Q`` step by step."""
    left, right = set(), set()
    for x, y in zip(path, path[1:]):
        if y == (x[0] + 1, x[1]):
            target = left
        elif y == (x[0], x[1] + 1):
            target = right
        else:
            raise DomainError(f"{fmt_elem(x)} -> {fmt_elem(y)} is not a unit step")
        if not q_equiv(graph, x, y):
            (new,) = pile(graph, *y) - pile(graph, *x)
            target.add(int(new[1:]))
    return frozenset(left), frozenset(right)


# recognition


@dataclass(frozen=True)
class Rejection:
    reason: Literal["non-contiguous class", "f != top-of-region"]
    witness: Elem | int
    side: str | None = None

    def __str__(self) -> str:
        w = fmt_elem(self.witness) if isinstance(self.witness, tuple) else str(self.witness)
        where = f" ({self.side} digit)" if self.side else ""
        return f"{self.reason}{where} at {w}"


def _equivalence_classes(n: int, pairs: Iterable[tuple[int, int]]) -> list[set[int]]:
    parent = list(range(n + 1))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for a, c in pairs:
        ra, rc = find(a), find(c)
        if ra != rc:
            parent[max(ra, rc)] = min(ra, rc)
    groups: dict[int, set[int]] = {}
    for a in range(n + 1):
        groups.setdefault(find(a), set()).add(a)
    return sorted(groups.values(), key=min)


def _picc_from_classes(n: int, classes: list[set[int]]) -> Picc | int:
    """The picc with these classes, or the first digit breaking contiguity."""
    for c in classes:
        lo, hi = min(c), max(c)
        gap = [a for a in range(lo, hi + 1) if a not in c]
        if gap:
            return gap[0]
    return Picc(n, frozenset(min(c) for c in classes if min(c) > 0))


def recognize_slash_operator(t: OperatorTable) -> Slashing | Rejection:
    host = t.host
    pairs = t.items()
    lp = _picc_from_classes(host.l, _equivalence_classes(host.l, [(x[0], y[0]) for x, y in pairs]))
    if isinstance(lp, int):
        return Rejection("non-contiguous class", lp, "left")
    rp = _picc_from_classes(host.r, _equivalence_classes(host.r, [(x[1], y[1]) for x, y in pairs]))
    if isinstance(rp, int):
        return Rejection("non-contiguous class", rp, "right")
    s = Slashing(lp, rp, host)
    for x, y in pairs:
        if s.top(x) != y:
            return Rejection("f != top-of-region", x)
    return s
