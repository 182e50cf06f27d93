"""The and/or/implication cubes: where the stars may go in ``(P? op Q?)?``.

Node ``n`` of a cube is a number in ``0..7``; bit 1 stars the first argument,
bit 2 the second and bit 4 the whole expression.  ``theorem_preorder`` is
generated from the inequalities provable by variance and the three derived
rules; ``semantic_preorder`` is what models actually satisfy.

Model enumeration order, used by every search here: hosts as listed by
``all_zhas`` (every ZHA shape inside the ``[00, bb]`` grid, by size, then
top, then element list), then slashings in ``all_slashings`` order, then
``(vP, vQ)`` lexicographically.  Full grids alone are not enough: on a grid
every slash-operator acts componentwise and therefore preserves joins.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import product
from typing import Iterable, Iterator, Literal, Sequence

from .errors import ContractError, DomainError
from .lattice_core import Elem, Zha, all_zhas, fmt_elem, full_grid
from .slashing import Slashing, all_slashings

Connective = Literal["and", "or", "imp"]
CONNECTIVES: tuple[Connective, ...] = ("and", "or", "imp")
NODES = range(8)
SYMBOL = {"and": "&", "or": "v", "imp": "->"}

Preorder = frozenset[tuple[int, int]]


@dataclass(frozen=True)
class CubeNode:
    connective: Connective
    bits: int

    def __post_init__(self) -> None:
        if self.connective not in CONNECTIVES:
            raise DomainError(f"unknown connective {self.connective!r}")
        if not 0 <= self.bits <= 7:
            raise DomainError(f"cube node {self.bits} outside 0..7")

    def __str__(self) -> str:
        p = "P*" if self.bits & 1 else "P"
        q = "Q*" if self.bits & 2 else "Q"
        body = f"{p} {SYMBOL[self.connective]} {q}"
        return f"({body})*" if self.bits & 4 else body


@dataclass(frozen=True)
class Model:
    zha: Zha
    slashing: Slashing
    vP: Elem
    vQ: Elem

    def __post_init__(self) -> None:
        if self.slashing.host != self.zha:
            raise DomainError("slashing is not hosted on the model's ZHA")
        self.zha._check(self.vP, self.vQ)

    def __str__(self) -> str:
        return f"H={host_label(self.zha)} J={self.slashing} P={fmt_elem(self.vP)} Q={fmt_elem(self.vQ)}"


def host_label(zha: Zha) -> str:
    if len(zha) == (zha.l + 1) * (zha.r + 1):
        return f"[00,{fmt_elem(zha.top)}]"
    return "{" + ",".join(fmt_elem(x) for x in zha) + "}"


def _apply(zha: Zha, connective: Connective, x: Elem, y: Elem) -> Elem:
    if connective == "and":
        return zha.meet(x, y)
    if connective == "or":
        return zha.join(x, y)
    return zha.imp(x, y)


def node_eval(n: CubeNode, m: Model) -> Elem:
    star = m.slashing.top
    p = star(m.vP) if n.bits & 1 else m.vP
    q = star(m.vQ) if n.bits & 2 else m.vQ
    v = _apply(m.zha, n.connective, p, q)
    return star(v) if n.bits & 4 else v


def closure(pairs: Iterable[tuple[int, int]]) -> Preorder:
    """Reflexive-transitive closure on the eight cube nodes."""
    rel = [[i == j for j in NODES] for i in NODES]
    for i, j in pairs:
        rel[i][j] = True
    for k in NODES:
        for i in NODES:
            if rel[i][k]:
                for j in NODES:
                    if rel[k][j]:
                        rel[i][j] = True
    return frozenset((i, j) for i in NODES for j in NODES if rel[i][j])


def generators(connective: Connective) -> list[tuple[int, int]]:
    """Edges ``(i, j)`` meaning node ``i <= node j``.

    Starring is inflationary and every connective is monotone in its second
    argument; ``&`` and ``v`` are monotone in the first, ``->`` antitone.
    """
    out = []
    for n in NODES:
        if not n & 2:
            out.append((n, n | 2))
        if not n & 4:
            out.append((n, n | 4))
        if not n & 1:
            out.append((n, n | 1) if connective != "imp" else (n | 1, n))
    if connective == "and":
        out += [(3, 4), (4, 3), (4, 7), (7, 4), (3, 7), (7, 3)]
    elif connective == "or":
        out.append((7, 4))
    else:
        out.append((6, 3))
    return out


def theorem_preorder(connective: Connective) -> Preorder:
    if connective not in CONNECTIVES:
        raise DomainError(f"unknown connective {connective!r}")
    return closure(generators(connective))


def grid_hosts(max_l: int, max_r: int | None = None) -> list[Zha]:
    """Only the full grids ``[00, lr]``, by increasing size then ``l``."""
    max_r = max_l if max_r is None else max_r
    shapes = sorted(product(range(max_l + 1), range(max_r + 1)), key=lambda s: ((s[0] + 1) * (s[1] + 1), s))
    return [full_grid(l, r) for l, r in shapes]


def search_hosts(bound: int) -> list[Zha]:
    """Every ZHA with ``l, r <= bound``, in the documented order."""
    return all_zhas(bound)


class _Evaluator:
    """Index-level evaluation of all eight nodes on one (host, slashing)."""

    def __init__(self, s: Slashing):
        zha = s.host
        self.zha = zha
        ix = zha.index
        self.star = [ix[s.top(x)] for x in zha]
        self.tables = {
            "and": zha.meet_idx,
            "or": zha.join_idx,
            "imp": tuple(tuple(ix[zha.imp(x, y)] for y in zha) for x in zha),
        }
        self.up = zha.up_masks

    def values(self, connective: Connective, p: int, q: int) -> list[int]:
        star, op = self.star, self.tables[connective]
        out = []
        for n in NODES:
            a = star[p] if n & 1 else p
            b = star[q] if n & 2 else q
            v = op[a][b]
            out.append(star[v] if n & 4 else v)
        return out

    def order(self, vals: list[int]) -> Preorder:
        up = self.up
        return frozenset((i, j) for i in NODES for j in NODES if up[vals[i]] >> vals[j] & 1)


def _models(hosts: Iterable[Zha], order_seed: int | None = None):
    """Yield ``(evaluator, slashing, vP index, vQ index)`` in enumeration order.

    ``order_seed`` shuffles slashings and valuations within each host,
    reproducibly; hosts always keep their order.
    """
    rng = random.Random(order_seed) if order_seed is not None else None
    for zha in hosts:
        slashings = list(all_slashings(zha))
        pairs = list(product(range(len(zha)), repeat=2))
        if rng:
            rng.shuffle(slashings)
            rng.shuffle(pairs)
        for s in slashings:
            ev = _Evaluator(s)
            for p, q in pairs:
                yield ev, s, p, q


def all_models(hosts: Iterable[Zha]) -> Iterator[Model]:
    for ev, s, p, q in _models(hosts):
        yield Model(ev.zha, s, ev.zha.elements[p], ev.zha.elements[q])


def semantic_preorder(connective: Connective, model_list: Iterable[Model]) -> Preorder:
    """Pairs ``(i, j)`` with node ``i <= node j`` in every given model."""
    rel = set(product(NODES, NODES))
    seen = False
    for m in model_list:
        seen = True
        vals = [node_eval(CubeNode(connective, n), m) for n in NODES]
        rel = {(i, j) for i, j in rel if m.zha.leq(vals[i], vals[j])}
    if not seen:
        raise ContractError("semantic preorder needs at least one model")
    return frozenset(rel)


def semantic_preorder_over(connective: Connective, hosts: Iterable[Zha]) -> Preorder:
    """``semantic_preorder`` over every model on ``hosts``, at index level."""
    rel = frozenset(product(NODES, NODES))
    seen = False
    for ev, _, p, q in _models(hosts):
        seen = True
        rel &= ev.order(ev.values(connective, p, q))
    if not seen:
        raise ContractError("semantic preorder needs at least one model")
    return rel


def countermodel_search(
    connective: Connective, i: int, j: int, size_bound: int = 3, order_seed: int | None = None
) -> Model | None:
    """First model with ``node i > node j``; None when the bound is exhausted.

    ``size_bound`` limits hosts to the ZHAs with ``l, r <= size_bound``.
    """
    if (i, j) in theorem_preorder(connective):
        raise ContractError(f"node {i} <= node {j} is a theorem; it has no countermodel")
    for ev, s, p, q in _models(search_hosts(size_bound), order_seed):
        vals = ev.values(connective, p, q)
        if not ev.up[vals[i]] >> vals[j] & 1:
            return Model(ev.zha, s, ev.zha.elements[p], ev.zha.elements[q])
    return None


def separating_valuation_search(
    connective: Connective, size_bound: int = 3, order_seed: int | None = None
) -> Model | None:
    """First single model whose induced order is exactly the theorem preorder."""
    target = theorem_preorder(connective)
    for ev, s, p, q in _models(search_hosts(size_bound), order_seed):
        if ev.order(ev.values(connective, p, q)) == target:
            return Model(ev.zha, s, ev.zha.elements[p], ev.zha.elements[q])
    return None


def induced_order(connective: Connective, m: Model) -> Preorder:
    return semantic_preorder(connective, [m])


def equivalence_classes(rel: Preorder) -> list[tuple[int, ...]]:
    classes: list[tuple[int, ...]] = []
    for n in NODES:
        if not any(n in c for c in classes):
            classes.append(tuple(m for m in NODES if (n, m) in rel and (m, n) in rel))
    return classes


def simplified_cube(connective: Connective) -> tuple[list[tuple[int, ...]], list[tuple[int, int]]]:
    """Equivalence classes and the Hasse edges between them.

    Edges ``(a, b)`` index into the class list and mean class ``a`` lies below
    class ``b``.
    """
    rel = theorem_preorder(connective)
    classes = equivalence_classes(rel)
    rep = [c[0] for c in classes]
    k = len(classes)
    below = {(a, b) for a in range(k) for b in range(k) if a != b and (rep[a], rep[b]) in rel}
    hasse = sorted(
        (a, b) for a, b in below if not any((a, c) in below and (c, b) in below for c in range(k))
    )
    return classes, hasse


def expand_simplified(classes: list[tuple[int, ...]], hasse: list[tuple[int, int]]) -> Preorder:
    pairs = [(x, y) for c in classes for x in c for y in c]
    pairs += [(classes[a][0], classes[b][0]) for a, b in hasse]
    return closure(pairs)
