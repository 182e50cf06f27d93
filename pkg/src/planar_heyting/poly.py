"""Polynomial J-operators and the lattice of slash-operators.

Expressions are built from the variable ``P``, element constants, top and
bottom, and the Heyting connectives.  Text syntax::

    P  T  F  22  [10]3  !e  e & e  e | e  e -> e  (e)

with precedence ``! > & > | > ->`` and ``->`` associating to the right.
Operator sections are accepted inside parentheses: ``(v 22)`` is ``P | 22``,
``(-> 24)`` is ``24 -> P``, ``(->-> 21)`` is ``(P -> 21) -> 21``, ``(!!)`` is
``!!P``, and sections may be joined with ``&`` as in ``(v 42 & -> 24)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import product
from typing import Union

from .errors import DomainError, ParseError, RangeError, ShapeError
from .lattice_core import Elem, Zha, fmt_elem, parse_elem
from .nucleus import JVerdict, check_j123
from .slashing import OperatorTable, Picc, Rejection, Slashing, recognize_slash_operator


@dataclass(frozen=True)
class Var:
    def __str__(self) -> str:
        return "P"


@dataclass(frozen=True)
class Const:
    value: Elem

    def __str__(self) -> str:
        return fmt_elem(self.value)


@dataclass(frozen=True)
class Top:
    def __str__(self) -> str:
        return "T"


@dataclass(frozen=True)
class Bot:
    def __str__(self) -> str:
        return "F"


@dataclass(frozen=True)
class Not:
    arg: PolyExpr

    def __str__(self) -> str:
        return f"!{_wrap(self.arg, 4)}"


@dataclass(frozen=True)
class And:
    lhs: PolyExpr
    rhs: PolyExpr

    def __str__(self) -> str:
        return f"{_wrap(self.lhs, 3)} & {_wrap(self.rhs, 4)}"


@dataclass(frozen=True)
class Or:
    lhs: PolyExpr
    rhs: PolyExpr

    def __str__(self) -> str:
        return f"{_wrap(self.lhs, 2)} | {_wrap(self.rhs, 3)}"


@dataclass(frozen=True)
class Imp:
    lhs: PolyExpr
    rhs: PolyExpr

    def __str__(self) -> str:
        return f"{_wrap(self.lhs, 2)} -> {_wrap(self.rhs, 1)}"


PolyExpr = Union[Var, Const, Top, Bot, Not, And, Or, Imp]

P = Var()

_LEVEL = {Imp: 1, Or: 2, And: 3, Not: 4}


def _wrap(e: PolyExpr, level: int) -> str:
    own = _LEVEL.get(type(e), 5)
    return f"({e})" if own < level else str(e)


def conj(*es: PolyExpr) -> PolyExpr:
    """Left-nested meet; the empty meet is ``T``."""
    if not es:
        return Top()
    out = es[0]
    for e in es[1:]:
        out = And(out, e)
    return out


def eval_poly(e: PolyExpr, zha: Zha, p: Elem) -> Elem:
    if isinstance(e, Var):
        zha._check(p)
        return p
    if isinstance(e, Const):
        if e.value not in zha:
            raise DomainError(f"constant {e} is not an element of {zha!r}")
        return e.value
    if isinstance(e, Top):
        return zha.top
    if isinstance(e, Bot):
        return zha.bottom
    if isinstance(e, Not):
        return zha.neg(eval_poly(e.arg, zha, p))
    a, b = eval_poly(e.lhs, zha, p), eval_poly(e.rhs, zha, p)
    if isinstance(e, And):
        return zha.meet(a, b)
    if isinstance(e, Or):
        return zha.join(a, b)
    return zha.imp(a, b)


def tabulate(e: PolyExpr, zha: Zha) -> OperatorTable:
    return OperatorTable.from_function(zha, lambda p: eval_poly(e, zha, p))


def is_polynomial_j(e: PolyExpr, zha: Zha) -> JVerdict:
    return check_j123(tabulate(e, zha))


# parsing

_TOKEN = re.compile(r"\s*(->|\[\d+\]\d|\d\[\d+\]|\[\d+\]\[\d+\]|\d\d|[PTFv!&|()])")


def _tokenize(text: str) -> list[str]:
    pos, out = 0, []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos:].strip()[:1]!r} at column {pos + 1}")
        out.append(m.group(1))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self, k: int = 0) -> str | None:
        j = self.i + k
        return self.toks[j] if j < len(self.toks) else None

    def take(self, expected: str | None = None) -> str:
        tok = self.peek()
        if tok is None or (expected is not None and tok != expected):
            raise ParseError(f"expected {expected or 'a token'}, got {tok or 'end of input'}")
        self.i += 1
        return tok

    def parse(self) -> PolyExpr:
        e = self.imp()
        if self.peek() is not None:
            raise ParseError(f"trailing input at {self.peek()!r}")
        return e

    def imp(self) -> PolyExpr:
        lhs = self.disj()
        if self.peek() == "->":
            self.take()
            return Imp(lhs, self.imp())
        return lhs

    def disj(self) -> PolyExpr:
        e = self.conj()
        while self.peek() == "|":
            self.take()
            e = Or(e, self.conj())
        return e

    def conj(self) -> PolyExpr:
        e = self.unary()
        while self.peek() == "&":
            self.take()
            e = And(e, self.unary())
        return e

    def unary(self) -> PolyExpr:
        if self.peek() == "!":
            self.take()
            return Not(self.unary())
        return self.atom()

    def atom(self) -> PolyExpr:
        tok = self.take()
        if tok == "P":
            return P
        if tok == "T":
            return Top()
        if tok == "F":
            return Bot()
        if tok == "(":
            if self._at_section():
                e = self.sections()
            else:
                e = self.imp()
            self.take(")")
            return e
        if tok[0].isdigit() or tok[0] == "[":
            return Const(parse_elem(tok))
        raise ParseError(f"unexpected token {tok!r}")

    def _at_section(self) -> bool:
        nxt = self.peek()
        return nxt in ("v", "->") or (nxt == "!" and self.peek(1) == "!" and self.peek(2) in (")", "&"))

    def sections(self) -> PolyExpr:
        parts = [self.section()]
        while self.peek() == "&":
            self.take()
            parts.append(self.section())
        return conj(*parts)

    def section(self) -> PolyExpr:
        tok = self.take()
        if tok == "v":
            return Or(P, self.constant())
        if tok == "!":
            self.take("!")
            return Not(Not(P))
        if tok == "->":
            if self.peek() == "->":
                self.take()
                c = self.constant()
                return Imp(Imp(P, c), c)
            return Imp(self.constant(), P)
        raise ParseError(f"unknown operator section {tok!r}")

    def constant(self) -> PolyExpr:
        tok = self.take()
        if tok == "T":
            return Top()
        if tok == "F":
            return Bot()
        try:
            return Const(parse_elem(tok))
        except ValueError:
            raise ParseError(f"expected a constant, got {tok!r}") from None


def parse_poly(text: str) -> PolyExpr:
    return _Parser(text).parse()


# the operator catalog

_ARITY = {"neg_neg": 0, "or_const": 1, "imp_const": 1, "imp_imp_const": 1, "forcing": 2, "mixed": 1}


def named_expr(kind: str, *constants: Elem | PolyExpr) -> PolyExpr:
    if kind not in _ARITY:
        raise ValueError(f"unknown operator kind {kind!r}")
    if len(constants) != _ARITY[kind]:
        raise TypeError(f"{kind} takes {_ARITY[kind]} constant(s), got {len(constants)}")
    cs = [c if not isinstance(c, tuple) else Const(c) for c in constants]
    if kind == "neg_neg":
        return Not(Not(P))
    if kind == "or_const":
        return Or(P, cs[0])
    if kind == "imp_const":
        return Imp(cs[0], P)
    if kind == "imp_imp_const":
        return Imp(Imp(P, cs[0]), cs[0])
    if kind == "forcing":
        return And(Or(P, cs[0]), Imp(cs[1], P))
    return Imp(Imp(P, cs[0]), P)


def named_operator(zha: Zha, kind: str, *constants: Elem | PolyExpr) -> OperatorTable:
    return tabulate(named_expr(kind, *constants), zha)


def op_meet(j: OperatorTable, k: OperatorTable) -> OperatorTable:
    if j.host != k.host:
        raise ShapeError("operators live on different hosts")
    h = j.host
    return OperatorTable(h, tuple(h.meet(a, b) for a, b in zip(j.values, k.values)))


@dataclass(frozen=True)
class CutSet:
    left_cuts: frozenset[int]
    right_cuts: frozenset[int]

    def __or__(self, other: CutSet) -> CutSet:
        return CutSet(self.left_cuts | other.left_cuts, self.right_cuts | other.right_cuts)

    def __and__(self, other: CutSet) -> CutSet:
        return CutSet(self.left_cuts & other.left_cuts, self.right_cuts & other.right_cuts)

    def __len__(self) -> int:
        return len(self.left_cuts) + len(self.right_cuts)


def cuts_of(s: Slashing) -> CutSet:
    return CutSet(s.left.cuts, s.right.cuts)


def slashing_from_cuts(zha: Zha, c: CutSet) -> Slashing:
    for side, cuts, n in (("left", c.left_cuts, zha.l), ("right", c.right_cuts, zha.r)):
        if any(not 1 <= x <= n for x in cuts):
            raise RangeError(f"{side} cut outside 1..{n}")
    return Slashing(Picc(zha.l, c.left_cuts), Picc(zha.r, c.right_cuts), zha)


def op_join_slash(j: Slashing, k: Slashing) -> Slashing:
    if j.host != k.host:
        raise ShapeError("slashings live on different hosts")
    return slashing_from_cuts(j.host, cuts_of(j) & cuts_of(k))


def op_meet_slash(j: Slashing, k: Slashing) -> Slashing:
    if j.host != k.host:
        raise ShapeError("slashings live on different hosts")
    return slashing_from_cuts(j.host, cuts_of(j) | cuts_of(k))


def as_slashing(t: OperatorTable) -> Slashing:
    s = recognize_slash_operator(t)
    if isinstance(s, Rejection):
        raise DomainError(f"not a slash-operator: {s}")
    return s


def op_join(j: OperatorTable, k: OperatorTable) -> OperatorTable:
    """Join of two slash-operators: the slash-operator with the common cuts."""
    return op_join_slash(as_slashing(j), as_slashing(k)).operator()


# piccs as a lattice


@dataclass(frozen=True)
class PiccOps:
    meet: Picc
    join: Picc
    leq_by_cuts: bool
    leq_pointwise: bool

    @property
    def leq(self) -> bool:
        if self.leq_by_cuts != self.leq_pointwise:
            raise AssertionError("picc order characterizations disagree")
        return self.leq_by_cuts


def picc_lattice_ops(p: Picc, q: Picc) -> PiccOps:
    """Meet adds cuts, join keeps the common ones; ``p <= q`` iff ``p`` has more cuts."""
    if p.n != q.n:
        raise ShapeError(f"piccs on {{0..{p.n}}} and {{0..{q.n}}}")
    return PiccOps(
        meet=Picc(p.n, p.cuts | q.cuts),
        join=Picc(p.n, p.cuts & q.cuts),
        leq_by_cuts=p.cuts >= q.cuts,
        leq_pointwise=all(p.top(a) <= q.top(a) for a in range(p.n + 1)),
    )


# Fourman-Scott identities (i)-(vi)


def _closed(zha: Zha, a: Elem) -> OperatorTable:
    return named_operator(zha, "or_const", a)


def _open(zha: Zha, a: Elem) -> OperatorTable:
    return named_operator(zha, "imp_const", a)


def fs_identities(zha: Zha) -> dict[str, tuple[bool, tuple[Elem, Elem] | None]]:
    """Check identities (i)-(vi) for every pair of constants ``a, b``.

    Meets are compared pointwise.  Joins are compared through cut sets: each
    operator is recognized as a slash-operator once, the join keeps the
    common cuts, and a slashing is determined by its cuts.
    """
    closed = {a: _closed(zha, a) for a in zha}
    opened = {a: _open(zha, a) for a in zha}
    ccuts = {a: cuts_of(as_slashing(t)) for a, t in closed.items()}
    ocuts = {a: cuts_of(as_slashing(t)) for a, t in opened.items()}
    ident = OperatorTable.identity(zha)
    no_cuts = cuts_of(as_slashing(OperatorTable.constant_top(zha)))
    checks = {
        "i": lambda a, b: ccuts[a] & ccuts[b] == ccuts[zha.join(a, b)],
        "ii": lambda a, b: ocuts[a] & ocuts[b] == ocuts[zha.meet(a, b)],
        "iii": lambda a, b: op_meet(closed[a], closed[b]) == closed[zha.meet(a, b)],
        "iv": lambda a, b: op_meet(opened[a], opened[b]) == opened[zha.join(a, b)],
        "v": lambda a, b: op_meet(closed[a], opened[a]) == ident,
        "vi": lambda a, b: ccuts[a] & ocuts[a] == no_cuts,
    }
    report = {}
    for name, check in checks.items():
        bad = next(((a, b) for a, b in product(zha, repeat=2) if not check(a, b)), None)
        report[name] = (bad is None, bad)
    return report


def slashing_to_polynomial(s: Slashing) -> PolyExpr:
    """One ``(P -> c) -> c`` factor per cut, ``c`` the top of the region below that cut."""
    zha = s.host
    factors = []
    for side, cuts in (("L", sorted(s.left.cuts)), ("R", sorted(s.right.cuts))):
        for i in cuts:
            single = CutSet(frozenset([i]), frozenset()) if side == "L" else CutSet(frozenset(), frozenset([i]))
            c = slashing_from_cuts(zha, single).top(zha.bottom)
            factors.append(named_expr("imp_imp_const", c))
    return conj(*factors)
