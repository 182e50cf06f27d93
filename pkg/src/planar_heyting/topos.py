"""The presheaf topos over a finite poset, computed by enumeration.

Orientation convention (fixed for the whole module): the index category has
an arrow ``p -> q`` whenever ``q`` is reachable from ``p`` along the DAG's
arrows.  For a two-column graph these are the arrows ``La -> L(a-1)`` and the
cross arrows, so ``down(p)`` is the smallest open set containing ``p``.  A
presheaf ``C`` assigns a set ``C(p)`` to every point and a map
``C(p) -> C(q)`` to every ``p -> q``; only covering arrows are stored.

The truth-value object is ``omega(p) = opens of down(p)`` with restriction
``R |-> R & down(q)``; ``true_nat`` sends ``*`` to ``down(p)``.
Open sets are ``frozenset``s of point names.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Callable, Hashable, Iterable, Iterator, Mapping, Sequence

from .errors import ContractError, DomainError, InputError
from .lattice_core import Elem, TwoColumnGraph, Zha, fmt_elem, pile, pile_coords, zha_from_2cg
from .slashing import OperatorTable

Point = str
Open = frozenset
STAR = "*"


# posets


@dataclass(frozen=True)
class FinitePoset:
    """Points plus, for each point, its down-set (reflexive and transitive)."""

    points: tuple[Point, ...]
    down_sets: Mapping[Point, frozenset[Point]] = field(hash=False)

    def __post_init__(self) -> None:
        pts = set(self.points)
        if set(self.down_sets) != pts:
            raise DomainError("down-sets must be given for exactly the points")
        for p in self.points:
            d = self.down_sets[p]
            if p not in d or not d <= pts:
                raise DomainError(f"down-set of {p} is not reflexive")
            for q in d:
                if not self.down_sets[q] <= d:
                    raise DomainError(f"order is not transitive at {p} -> {q}")
                if q != p and p in self.down_sets[q]:
                    raise InputError(f"{p} and {q} lie on a cycle")

    def __hash__(self) -> int:
        return hash(self.points)

    def down(self, p: Point) -> frozenset[Point]:
        try:
            return self.down_sets[p]
        except KeyError:
            raise DomainError(f"{p!r} is not a point of the poset") from None

    def leq(self, q: Point, p: Point) -> bool:
        """True when there is an arrow ``p -> q``."""
        return q in self.down(p)

    @cached_property
    def order(self) -> tuple[Point, ...]:
        """Points sorted so that every down-set precedes its top."""
        return tuple(sorted(self.points, key=lambda p: (len(self.down_sets[p]), self.points.index(p))))

    @cached_property
    def covers(self) -> tuple[tuple[Point, Point], ...]:
        """Covering arrows ``(p, q)``: ``q < p`` with nothing strictly between."""
        out = []
        for p in self.points:
            below = self.down_sets[p] - {p}
            for q in sorted(below, key=self.points.index):
                if not any(q in self.down_sets[m] for m in below if m != q):
                    out.append((p, q))
        return tuple(out)

    @cached_property
    def _lower(self) -> dict[Point, tuple[Point, ...]]:
        out: dict[Point, list[Point]] = {p: [] for p in self.points}
        for p, q in self.covers:
            out[p].append(q)
        return {p: tuple(qs) for p, qs in out.items()}

    def lower_covers(self, p: Point) -> tuple[Point, ...]:
        return self._lower[p]

    def is_open(self, s: Iterable[Point]) -> bool:
        s = frozenset(s)
        return all(self.down_sets[p] <= s for p in s)

    def opens_within(self, d: Iterable[Point]) -> list[Open]:
        """The open subsets of ``d`` (``d`` itself must be open), smallest first."""
        d = sorted(d, key=self.points.index)
        out = []
        for bits in range(1 << len(d)):
            s = frozenset(p for i, p in enumerate(d) if bits >> i & 1)
            if self.is_open(s):
                out.append(s)
        return sorted(out, key=lambda s: (len(s), sorted(map(self.points.index, s))))

    @cached_property
    def opens(self) -> tuple[Open, ...]:
        return tuple(self.opens_within(self.points))

    def induced(self, keep: Iterable[Point]) -> FinitePoset:
        keep = frozenset(keep)
        pts = tuple(p for p in self.points if p in keep)
        return FinitePoset(pts, {p: self.down_sets[p] & keep for p in pts})


def poset_from_dag(points: Sequence[Point], arrows: Iterable[tuple[Point, Point]]) -> FinitePoset:
    """Reachability order of a DAG; a cycle is an input error."""
    pts = tuple(points)
    succ: dict[Point, set[Point]] = {p: set() for p in pts}
    for src, dst in arrows:
        if src not in succ or dst not in succ:
            raise InputError(f"arrow {src} -> {dst} mentions an unknown point")
        if src == dst:
            raise InputError(f"self-loop at {src}")
        succ[src].add(dst)
    down: dict[Point, frozenset[Point]] = {}
    for p in pts:
        seen = {p}
        stack = [p]
        while stack:
            for q in succ[stack.pop()]:
                if q not in seen:
                    seen.add(q)
                    stack.append(q)
        down[p] = frozenset(seen)
    for p in pts:
        for q in down[p]:
            if q != p and p in down[q]:
                raise InputError(f"cycle through {p} and {q}")
    return FinitePoset(pts, down)


def poset_from_2cg(graph: TwoColumnGraph) -> FinitePoset:
    return poset_from_dag(graph.points, graph.all_arrows())


def down_set(poset: FinitePoset, p: Point) -> frozenset[Point]:
    return poset.down(p)


# presheaves and natural transformations


@dataclass(frozen=True, eq=False)
class Presheaf:
    """Finite sets on points, maps on covering arrows.

    Composites along different paths must agree; this is checked on
    construction and the composites are cached for ``restrict``.
    """

    poset: FinitePoset
    sets: Mapping[Point, tuple]
    maps: Mapping[tuple[Point, Point], Mapping]

    def __post_init__(self) -> None:
        P = self.poset
        if set(self.sets) != set(P.points):
            raise DomainError("presheaf must give a set at every point")
        object.__setattr__(self, "sets", {p: tuple(self.sets[p]) for p in P.points})
        if set(self.maps) != set(P.covers):
            raise DomainError("presheaf maps must be given on exactly the covering arrows")
        members = {p: set(xs) for p, xs in self.sets.items()}
        for (p, q), m in self.maps.items():
            if m.keys() != members[p]:
                raise DomainError(f"map {p} -> {q} is not total on C({p})")
            bad = [x for x, y in m.items() if y not in members[q]]
            if bad:
                raise DomainError(f"map {p} -> {q} sends {bad[0]!r} outside C({q})")
        object.__setattr__(self, "_composites", self._compose_all())

    def _compose_all(self) -> dict[tuple[Point, Point], dict]:
        P = self.poset
        comp: dict[tuple[Point, Point], dict] = {}
        for p in P.order:
            xs = self.sets[p]
            comp[p, p] = {x: x for x in xs}
            for m in P.lower_covers(p):
                step = self.maps[p, m]
                for q in P.down_sets[m]:
                    below = comp[m, q]
                    via = {x: below[step[x]] for x in xs}
                    known = comp.get((p, q))
                    if known is None:
                        comp[p, q] = via
                    elif known != via:
                        x = next(x for x in via if via[x] != known[x])
                        raise ContractError(
                            f"paths {p} -> {q} disagree on {x!r}: {known[x]!r} vs {via[x]!r}"
                        )
        return comp

    def restrict(self, p: Point, q: Point, x):
        """``C(p -> q)(x)``."""
        try:
            return self._composites[p, q][x]
        except KeyError:
            raise DomainError(f"no arrow {p} -> {q} or {x!r} not in C({p})") from None

    def restriction(self, p: Point, q: Point) -> dict:
        return self._composites[p, q]

    def size(self) -> int:
        return sum(len(s) for s in self.sets.values())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Presheaf):
            return NotImplemented
        return (
            self.poset == other.poset
            and {p: set(s) for p, s in self.sets.items()} == {p: set(s) for p, s in other.sets.items()}
            and {k: dict(v) for k, v in self.maps.items()} == {k: dict(v) for k, v in other.maps.items()}
        )

    __hash__ = None  # type: ignore[assignment]


def presheaf_from_function(
    poset: FinitePoset, sets: Mapping[Point, Iterable], restrict: Callable[[Point, Point, object], object]
) -> Presheaf:
    sets = {p: tuple(sets[p]) for p in poset.points}
    maps = {(p, q): {x: restrict(p, q, x) for x in sets[p]} for p, q in poset.covers}
    return Presheaf(poset, sets, maps)


def terminal(poset: FinitePoset) -> Presheaf:
    return presheaf_from_function(poset, {p: (STAR,) for p in poset.points}, lambda p, q, x: STAR)


def empty_presheaf(poset: FinitePoset) -> Presheaf:
    return presheaf_from_function(poset, {p: () for p in poset.points}, lambda p, q, x: x)


@dataclass(frozen=True, eq=False)
class NatTrans:
    source: Presheaf
    target: Presheaf
    components: Mapping[Point, Mapping]

    def __post_init__(self) -> None:
        if self.source.poset != self.target.poset:
            raise DomainError("source and target live on different posets")
        for p in self.source.poset.points:
            comp = self.components.get(p)
            if comp is None or set(comp) != set(self.source.sets[p]):
                raise DomainError(f"component at {p} is not total")
            for x, y in comp.items():
                if y not in self.target.sets[p]:
                    raise DomainError(f"component at {p} sends {x!r} outside the target")

    def __call__(self, p: Point, x):
        return self.components[p][x]

    def naturality_failure(self) -> tuple[Point, Point, object] | None:
        """First ``(p, q, x)`` where the square for ``p -> q`` does not commute."""
        for p, q in self.source.poset.covers:
            for x in self.source.sets[p]:
                lhs = self.target.maps[p, q][self.components[p][x]]
                rhs = self.components[q][self.source.maps[p, q][x]]
                if lhs != rhs:
                    return p, q, x
        return None

    def is_natural(self) -> bool:
        return self.naturality_failure() is None

    def is_iso(self) -> bool:
        """Natural with bijective components whose inverse is natural too."""
        if not self.is_natural():
            return False
        for p in self.source.poset.points:
            comp = self.components[p]
            if len(set(comp.values())) != len(comp) or len(comp) != len(self.target.sets[p]):
                return False
        return self.inverse().is_natural()

    def inverse(self) -> NatTrans:
        comps = {}
        for p, comp in self.components.items():
            inv = {y: x for x, y in comp.items()}
            if len(inv) != len(comp) or len(inv) != len(self.target.sets[p]):
                raise ContractError(f"component at {p} is not a bijection")
            comps[p] = inv
        return NatTrans(self.target, self.source, comps)

    def then(self, other: NatTrans) -> NatTrans:
        """``other . self``."""
        return NatTrans(
            self.source,
            other.target,
            {p: {x: other.components[p][y] for x, y in c.items()} for p, c in self.components.items()},
        )


def nat_from_function(source: Presheaf, target: Presheaf, f: Callable[[Point, object], object]) -> NatTrans:
    return NatTrans(source, target, {p: {x: f(p, x) for x in source.sets[p]} for p in source.poset.points})


def identity_nat(c: Presheaf) -> NatTrans:
    return nat_from_function(c, c, lambda p, x: x)


@dataclass(frozen=True, eq=False)
class Subfunctor:
    host: Presheaf
    parts: Mapping[Point, frozenset]

    def __post_init__(self) -> None:
        h = self.host
        object.__setattr__(self, "parts", {p: frozenset(self.parts.get(p, ())) for p in h.poset.points})
        for p, part in self.parts.items():
            if not part <= set(h.sets[p]):
                raise ContractError(f"B({p}) is not a subset of C({p})")
        for p, q in h.poset.covers:
            for x in self.parts[p]:
                if h.maps[p, q][x] not in self.parts[q]:
                    raise ContractError(f"B is not closed under {p} -> {q} at {x!r}")

    def key(self) -> tuple:
        return tuple((p, tuple(sorted(self.parts[p], key=repr))) for p in self.host.poset.points)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Subfunctor):
            return NotImplemented
        return self.host is other.host and self.parts == other.parts

    def __hash__(self) -> int:
        return hash(self.key())

    def __le__(self, other: Subfunctor) -> bool:
        return all(self.parts[p] <= other.parts[p] for p in self.parts)

    def as_presheaf(self) -> Presheaf:
        h = self.host
        return Presheaf(
            h.poset,
            {p: tuple(x for x in h.sets[p] if x in self.parts[p]) for p in h.poset.points},
            {(p, q): {x: h.maps[p, q][x] for x in self.parts[p]} for p, q in h.poset.covers},
        )

    def inclusion(self) -> NatTrans:
        return nat_from_function(self.as_presheaf(), self.host, lambda p, x: x)


def subterminal(poset: FinitePoset, u: Iterable[Point]) -> Subfunctor:
    """The subfunctor of ``1`` that is ``{*}`` exactly on the open set ``u``."""
    u = frozenset(u)
    return Subfunctor(terminal(poset), {p: {STAR} if p in u else set() for p in poset.points})


def subfunctors(c: Presheaf) -> Iterator[Subfunctor]:
    """Every subfunctor of ``c``, chosen point by point from the bottom up."""
    P = c.poset
    order = P.order
    chosen: dict[Point, frozenset] = {}

    def rec(i: int) -> Iterator[Subfunctor]:
        if i == len(order):
            yield Subfunctor(c, dict(chosen))
            return
        p = order[i]
        allowed = [
            x for x in c.sets[p] if all(c.maps[p, q][x] in chosen[q] for q in P.lower_covers(p))
        ]
        for bits in range(1 << len(allowed)):
            chosen[p] = frozenset(x for k, x in enumerate(allowed) if bits >> k & 1)
            yield from rec(i + 1)
        del chosen[p]

    yield from rec(0)


def sub1_lattice(poset: FinitePoset) -> list[Open]:
    """``Sub(1)`` read as open sets, ordered by size; it is the open-set lattice."""
    one = terminal(poset)
    subs = [frozenset(p for p in poset.points if s.parts[p]) for s in subfunctors(one)]
    return sorted(subs, key=lambda s: (len(s), sorted(map(poset.points.index, s))))


def sub1_as_zha(graph: TwoColumnGraph) -> list[Elem]:
    """``Sub(1)`` of a two-column graph's poset, as digit pairs, top first."""
    poset = poset_from_2cg(graph)
    out = []
    for u in sub1_lattice(poset):
        xy = pile_coords(u)
        if xy is None:
            raise ContractError(f"open set {sorted(u)} is not a pile")
        out.append(xy)
    return sorted(out, reverse=True)


# the classifier


def omega(poset: FinitePoset) -> Presheaf:
    return presheaf_from_function(
        poset,
        {p: poset.opens_within(poset.down(p)) for p in poset.points},
        lambda p, q, r: r & poset.down(q),
    )


def true_nat(poset: FinitePoset, om: Presheaf | None = None) -> NatTrans:
    om = om or omega(poset)
    return nat_from_function(terminal(poset), om, lambda p, _: poset.down(p))


def chi(sub: Subfunctor, om: Presheaf | None = None) -> NatTrans:
    """``chi_B(p)(c) = {r in down(p) | C(p -> r)(c) in B(r)}``."""
    c = sub.host
    P = c.poset
    om = om or omega(P)

    def value(p: Point, x) -> Open:
        return frozenset(r for r in P.down(p) if c.restrict(p, r, x) in sub.parts[r])

    return nat_from_function(c, om, value)


def pullback_of_true(phi: NatTrans) -> Subfunctor:
    """The subfunctor of ``phi.source`` on which ``phi`` is ``down(p)``."""
    P = phi.source.poset
    return Subfunctor(
        phi.source, {p: {x for x, v in phi.components[p].items() if v == P.down(p)} for p in P.points}
    )


def nat_transformations(c: Presheaf, d: Presheaf) -> Iterator[NatTrans]:
    """Every natural ``c -> d``, chosen point by point with pruning.

    Naturality constrains each element separately, so at each point the
    candidates for ``x`` are filtered against the already fixed lower covers.
    """
    P = c.poset
    order = P.order
    comps: dict[Point, dict] = {}

    def rec(i: int) -> Iterator[NatTrans]:
        if i == len(order):
            yield NatTrans(c, d, {p: dict(v) for p, v in comps.items()})
            return
        p = order[i]
        xs = c.sets[p]
        cands = []
        for x in xs:
            ok = [
                y
                for y in d.sets[p]
                if all(d.maps[p, q][y] == comps[q][c.maps[p, q][x]] for q in P.lower_covers(p))
            ]
            if not ok:
                return
            cands.append(ok)
        for choice in product(*cands):
            comps[p] = dict(zip(xs, choice))
            yield from rec(i + 1)
        del comps[p]

    yield from rec(0)


@dataclass(frozen=True)
class ClassifierReport:
    n_sub: int
    n_hom: int
    chi_natural: bool
    chi_injective: bool
    chi_surjective: bool
    pullback_inverts_chi: bool
    chi_inverts_pullback: bool

    @property
    def ok(self) -> bool:
        return (
            self.n_sub == self.n_hom
            and self.chi_natural
            and self.chi_injective
            and self.chi_surjective
            and self.pullback_inverts_chi
            and self.chi_inverts_pullback
        )


def _nat_key(t: NatTrans) -> tuple:
    P = t.source.poset
    return tuple(
        (p, tuple(sorted(((repr(x), y) for x, y in t.components[p].items()), key=lambda kv: kv[0])))
        for p in P.points
    )


def classifier_bijection_check(poset: FinitePoset, c: Presheaf) -> ClassifierReport:
    """Enumerate ``Sub(c)`` and ``Hom(c, omega)`` and test that ``chi`` matches them up."""
    if c.poset != poset:
        raise DomainError("presheaf lives on a different poset")
    om = omega(poset)
    subs = list(subfunctors(c))
    homs = list(nat_transformations(c, om))
    hom_keys = {_nat_key(h) for h in homs}
    chis = [chi(b, om) for b in subs]
    chi_keys = [_nat_key(t) for t in chis]
    return ClassifierReport(
        n_sub=len(subs),
        n_hom=len(homs),
        chi_natural=all(t.is_natural() for t in chis),
        chi_injective=len(set(chi_keys)) == len(chi_keys),
        chi_surjective=set(chi_keys) == hom_keys,
        pullback_inverts_chi=all(pullback_of_true(t) == b for t, b in zip(chis, subs)),
        chi_inverts_pullback=all(_nat_key(chi(pullback_of_true(h), om)) == _nat_key(h) for h in homs),
    )


# local operators


OpenOperator = Mapping[Open, Open]


def check_open_operator(poset: FinitePoset, J: OpenOperator) -> str | None:
    """J1-J3 on the open-set lattice; None when all hold, else the first failure."""
    opens = poset.opens
    if set(J) != set(opens):
        raise DomainError("operator must be total on the open sets")
    for u in opens:
        if not u <= J[u]:
            return f"J1 fails at {sorted(u)}"
    for u in opens:
        if J[J[u]] != J[u]:
            return f"J2 fails at {sorted(u)}"
    for u, v in product(opens, repeat=2):
        if J[u & v] != J[u] & J[v]:
            return f"J3 fails at ({sorted(u)}, {sorted(v)})"
    return None


def opens_operator(graph: TwoColumnGraph, table: OperatorTable) -> dict[Open, Open]:
    """Carry an operator on a graph's ZHA over to open sets via piles."""
    return {pile(graph, *x): pile(graph, *y) for x, y in table.items()}


def operator_table(graph: TwoColumnGraph, J: OpenOperator, host: Zha | None = None) -> OperatorTable:
    host = host or zha_from_2cg(graph)
    mapping = {}
    for u, v in J.items():
        x, y = pile_coords(u), pile_coords(v)
        if x is None or y is None:
            raise ContractError("operator mentions a non-pile open set")
        mapping[x] = y
    return OperatorTable.from_mapping(host, mapping)


def local_operator(
    poset: FinitePoset, J: OpenOperator, om: Presheaf | None = None, validate: bool = True
) -> NatTrans:
    """``j(p)(R) = J(R) & down(p)``.

    With ``validate`` the operator must satisfy J1-J3; without it the map is
    built anyway, which is how non-nuclei are shown to break the laws.
    """
    if validate:
        failure = check_open_operator(poset, J)
        if failure:
            raise ContractError(f"not a J-operator: {failure}")
    om = om or omega(poset)
    return nat_from_function(om, om, lambda p, r: J[r] & poset.down(p))


def local_operator_laws(j: NatTrans) -> dict[str, tuple[bool, tuple | None]]:
    """The three laws ``j.T = T``, ``j.j = j`` and ``j.(&) = (&).(j x j)``."""
    P = j.source.poset
    om = j.source

    def first(cases):
        w = next(cases, None)
        return (w is None, w)

    return {
        "natural": (j.is_natural(), j.naturality_failure()),
        "j_true": first(p for p in P.points if j(p, P.down(p)) != P.down(p)),
        "j_idempotent": first(
            (p, r) for p in P.points for r in om.sets[p] if j(p, j(p, r)) != j(p, r)
        ),
        "j_meet": first(
            (p, r, s)
            for p in P.points
            for r, s in product(om.sets[p], repeat=2)
            if j(p, r & s) != j(p, r) & j(p, s)
        ),
    }


def restrict_to_sub1(j: NatTrans) -> dict[Open, Open]:
    """``J(U) = {p | j(p)(U & down(p)) = down(p)}``: the induced map on ``Sub(1)``."""
    P = j.source.poset
    return {u: frozenset(p for p in P.points if j(p, u & P.down(p)) == P.down(p)) for u in P.opens}


def closure(sub: Subfunctor, j: NatTrans, om: Presheaf | None = None) -> Subfunctor:
    """``B-bar(p) = {c | j(p)(chi_B(p)(c)) = down(p)}``."""
    P = sub.host.poset
    x = chi(sub, om or j.source)
    return Subfunctor(
        sub.host,
        {p: {c for c in sub.host.sets[p] if j(p, x(p, c)) == P.down(p)} for p in P.points},
    )


def pullback(f: NatTrans, g: NatTrans) -> Presheaf:
    """The pointwise pullback of ``f: X -> Z`` and ``g: Y -> Z``; elements are pairs."""
    if f.target is not g.target and f.target != g.target:
        raise DomainError("pullback legs must share a target")
    X, Y = f.source, g.source
    sets = {
        p: tuple((x, y) for x in X.sets[p] for y in Y.sets[p] if f(p, x) == g(p, y))
        for p in X.poset.points
    }
    return presheaf_from_function(
        X.poset, sets, lambda p, q, xy: (X.maps[p, q][xy[0]], Y.maps[p, q][xy[1]])
    )


def closure_by_pullback(sub: Subfunctor, j: NatTrans) -> Subfunctor:
    """Independent path to the closure: pull ``true`` back along ``j . chi_B``."""
    P = sub.host.poset
    om = j.source
    jchi = chi(sub, om).then(j)
    pb = pullback(jchi, true_nat(P, om))
    return Subfunctor(sub.host, {p: {x for x, _ in pb.sets[p]} for p in P.points})


@dataclass(frozen=True)
class SquareReport:
    name: str
    checked: int
    failure: tuple | None

    @property
    def ok(self) -> bool:
        return self.failure is None


def naturality_suite(
    poset: FinitePoset,
    J: OpenOperator | Sequence[OpenOperator],
    battery: Iterable[Presheaf] | None = None,
) -> list[SquareReport]:
    """The five squares ``B -> 1``, ``B -> C``, ``true``, ``chi_B`` and ``j``.

    Every subfunctor of every presheaf in ``battery`` (default: just ``1``)
    is checked, on every covering arrow and every element.  ``J`` may be a
    list of operators; the four squares that do not involve ``j`` are then
    checked once and the ``j`` square once per operator.
    """
    om = omega(poset)
    one = terminal(poset)
    ops = [J] if isinstance(J, Mapping) else list(J)
    battery = [one] if battery is None else list(battery)
    counts = dict.fromkeys(["B->1", "B->C", "true", "chi_B", "j"], 0)
    failures: dict[str, tuple | None] = dict.fromkeys(counts)

    def record(name: str, t: NatTrans, tag) -> None:
        counts[name] += 1
        if failures[name] is None:
            f = t.naturality_failure()
            if f is not None:
                failures[name] = (tag, *f)

    record("true", true_nat(poset, om), None)
    for k, op in enumerate(ops):
        record("j", local_operator(poset, op, om), k)
    for ci, c in enumerate(battery):
        for b in subfunctors(c):
            bp = b.as_presheaf()
            tag = (ci, b.key())
            record("B->1", nat_from_function(bp, one, lambda p, x: STAR), tag)
            record("B->C", b.inclusion(), tag)
            record("chi_B", chi(b, om), tag)
    return [SquareReport(n, counts[n], failures[n]) for n in counts]


# Kan extensions along a full subposet inclusion


Family = tuple  # sorted tuple of (point, element) pairs


def restrict_presheaf(c: Presheaf, sub: FinitePoset) -> Presheaf:
    """``f^* C``: precomposition with the inclusion of a full subposet."""
    return presheaf_from_function(sub, {a: c.sets[a] for a in sub.points}, c.restrict)


def _index_set(A: FinitePoset, B: FinitePoset, b: Point) -> list[Point]:
    return [a for a in A.points if a in B.down(b)]


def compatible_families(d: Presheaf, index: Sequence[Point]) -> list[Family]:
    """Compatible families over the down-closed ``index``, via choices at its maxima."""
    A = d.poset
    idx = set(index)
    maxima = [m for m in index if not any(m != n and m in A.down(n) for n in idx)]
    out = []
    for choice in product(*(d.sets[m] for m in maxima)):
        fam: dict[Point, object] = {}
        ok = True
        for m, x in zip(maxima, choice):
            for a in A.down(m):
                y = d.restrict(m, a, x)
                if fam.setdefault(a, y) != y:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            out.append(tuple(sorted(fam.items())))
    return sorted(set(out), key=repr)


def brute_force_limit(d: Presheaf, index: Sequence[Point]) -> list[Family]:
    """Oracle: every element of the product over ``index``, filtered by compatibility."""
    A = d.poset
    idx = sorted(index)
    out = []
    for choice in product(*(d.sets[a] for a in idx)):
        fam = dict(zip(idx, choice))
        if all(d.restrict(a, a2, fam[a]) == fam[a2] for a in idx for a2 in A.down(a) if a2 in fam):
            out.append(tuple(sorted(fam.items())))
    return sorted(out, key=repr)


def ran(
    d: Presheaf, B: FinitePoset, limit: Callable[[Presheaf, Sequence[Point]], list[Family]] = compatible_families
) -> Presheaf:
    """``(Ran_f D)(b)`` = compatible families over ``{a in A | b -> a}``."""
    A = d.poset
    if any(a not in B.down_sets for a in A.points):
        raise ContractError("presheaf's poset is not a subposet of B")
    for a in A.points:
        if A.down(a) != B.down(a) & frozenset(A.points):
            raise ContractError("subposet is not full")
    sets = {b: limit(d, _index_set(A, B, b)) for b in B.points}

    def restrict(b: Point, b2: Point, fam: Family) -> Family:
        keep = B.down(b2)
        return tuple((a, x) for a, x in fam if a in keep)

    return presheaf_from_function(B, sets, restrict)


def counit(d: Presheaf, ran_d: Presheaf) -> NatTrans:
    """``eps_D: f^*(Ran_f D) -> D`` picks the component at ``a`` itself."""
    A = d.poset
    src = restrict_presheaf(ran_d, A)
    return nat_from_function(src, d, lambda a, fam: dict(fam)[a])


def unit(c: Presheaf, A: FinitePoset, ran_fc: Presheaf) -> NatTrans:
    """``eta_C: C -> Ran_f f^* C`` sends ``x`` to its family of restrictions."""
    B = c.poset

    def fam(b: Point, x) -> Family:
        return tuple(sorted((a, c.restrict(b, a, x)) for a in _index_set(A, B, b)))

    return nat_from_function(c, ran_fc, fam)


@dataclass
class Sheafification:
    """Every object and map of the Kan-extension battery for one ``(B, A, C)``."""

    B: FinitePoset
    A: FinitePoset
    C: Presheaf
    restricted: Presheaf  # f^* C
    sheaf: Presheaf  # Ran_f f^* C
    unit: NatTrans  # C -> sheaf
    counit: NatTrans  # f^* sheaf -> f^* C

    def twice(self) -> Presheaf:
        return ran(restrict_presheaf(self.sheaf, self.A), self.B)

    def idempotence_iso(self) -> NatTrans:
        """``Ran_f(eps)``: sheafify(sheafify(C)) -> sheafify(C), built componentwise."""
        twice = self.twice()
        eps = self.counit

        def apply(b: Point, fam: Family) -> Family:
            return tuple(sorted((a, eps(a, y)) for a, y in fam))

        return nat_from_function(twice, self.sheaf, apply)


def kan_sheafify(B: FinitePoset, sub_points: Iterable[Point], c: Presheaf, questions: Iterable[Point] | None = None) -> Sheafification:
    """``f_* f^* C`` for the inclusion of the full subposet on ``sub_points``.

    When ``questions`` is given, ``sub_points`` must be exactly its complement.
    """
    keep = frozenset(sub_points)
    if not keep <= set(B.points):
        raise ContractError("subposet mentions unknown points")
    if questions is not None and keep != frozenset(B.points) - frozenset(questions):
        raise ContractError("subposet must be the full subposet on the points outside Q")
    A = B.induced(keep)
    fc = restrict_presheaf(c, A)
    sheaf = ran(fc, B)
    return Sheafification(B, A, c, fc, sheaf, unit(c, A, sheaf), counit(fc, sheaf))


def sheafified_subterminal(B: FinitePoset, sub_points: Iterable[Point], u: Iterable[Point]) -> Open:
    """The open set on which ``f_* f^*`` of the subterminal ``u`` is inhabited."""
    s = kan_sheafify(B, sub_points, subterminal(B, u).as_presheaf())
    return frozenset(b for b in B.points if s.sheaf.sets[b])


# random instances for property tests


def random_poset(rng: random.Random, max_points: int = 6) -> FinitePoset:
    n = rng.randint(1, max_points)
    pts = [f"p{i}" for i in range(n)]
    arrows = [(pts[i], pts[k]) for i in range(n) for k in range(i) if rng.random() < 0.35]
    return poset_from_dag(pts, arrows)


def random_presheaf(rng: random.Random, poset: FinitePoset, max_fiber: int = 3) -> Presheaf:
    """Built bottom-up: each new element picks a random compatible family below it."""
    sets: dict[Point, tuple] = {}
    below: dict[Point, dict] = {}
    for p in poset.order:
        strict = [q for q in poset.down(p) if q != p]
        partial = Presheaf(
            poset.induced(strict),
            {q: sets[q] for q in strict},
            {(q, q2): below[q][q2] for q, q2 in poset.induced(strict).covers},
        ) if strict else None
        fams = compatible_families(partial, strict) if partial else [()]
        if not fams:
            sets[p] = ()
            below[p] = {q: {} for q in poset.lower_covers(p)}
            continue
        k = rng.randint(0, max_fiber)
        sets[p] = tuple(f"{p}.{i}" for i in range(k))
        picks = [dict(rng.choice(fams)) for _ in range(k)]
        below[p] = {q: {x: fam[q] for x, fam in zip(sets[p], picks)} for q in poset.lower_covers(p)}
    return Presheaf(poset, sets, {(p, q): below[p][q] for p, q in poset.covers})


def fmt_open(u: Iterable[Point], graph: TwoColumnGraph | None = None) -> str:
    if graph is not None:
        xy = pile_coords(u)
        if xy is not None:
            return fmt_elem(xy)
    return "{" + ",".join(sorted(u)) + "}"
