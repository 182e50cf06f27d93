"""J-operators (nuclei) on a ZHA and the partitions they induce.

The central fact checked here is that the partitions of a ZHA into
intervals whose top-of-block map is a J-operator are exactly the slashings.
Partitions are generated directly as interval partitions, never by
filtering arbitrary set partitions.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import product
from typing import Iterator, Literal

from .errors import ContractError, RefusalError, ShapeError
from .lattice_core import Elem, Zha, fmt_elem
from .slashing import OperatorTable, Slashing, all_slashings


@dataclass(frozen=True)
class JVerdict:
    j1_ok: bool
    j2_ok: bool
    j3_ok: bool
    j1_witness: Elem | None = None
    j2_witness: Elem | None = None
    j3_witness: tuple[Elem, Elem] | None = None

    @property
    def ok(self) -> bool:
        return self.j1_ok and self.j2_ok and self.j3_ok

    def first_failure(self) -> str | None:
        if not self.j1_ok:
            return f"J1 fails at {fmt_elem(self.j1_witness)}"
        if not self.j2_ok:
            return f"J2 fails at {fmt_elem(self.j2_witness)}"
        if not self.j3_ok:
            p, q = self.j3_witness
            return f"J3 fails at ({fmt_elem(p)}, {fmt_elem(q)})"
        return None


def check_j123(t: OperatorTable) -> JVerdict:
    """Witnesses are the first failures scanning from the top element down."""
    h = t.host
    down = h.elements[::-1]
    j1 = next((p for p in down if not h.leq(p, t(p))), None)
    j2 = next((p for p in down if t(p) != t(t(p))), None)
    j3 = next(
        ((p, q) for p, q in product(down, repeat=2) if t(h.meet(p, q)) != h.meet(t(p), t(q))),
        None,
    )
    return JVerdict(j1 is None, j2 is None, j3 is None, j1, j2, j3)


def derived_rule_suite(t: OperatorTable) -> dict[str, tuple[bool, tuple | None]]:
    """Evaluate Mop, Mo, Sand, EC-and, EC-or and ECS over the whole host.

    Each entry maps a rule name to ``(holds, first counterexample)``.  For a
    genuine J-operator every rule holds.
    """
    h = t.host
    els = h.elements

    def first(cases):
        w = next(cases, None)
        return (w is None, w)

    return {
        "Mop": first((p, q) for p, q in product(els, repeat=2) if not h.leq(t(h.meet(p, q)), t(q))),
        "Mo": first(
            (p, q) for p, q in product(els, repeat=2) if h.leq(p, q) and not h.leq(t(p), t(q))
        ),
        "Sand": first(
            (p, q)
            for p, q in product(els, repeat=2)
            if h.leq(p, q) and h.leq(q, t(p)) and t(p) != t(q)
        ),
        "EC_and": first(
            (p, q) for p, q in product(els, repeat=2) if t(p) == t(q) and t(h.meet(p, q)) != t(p)
        ),
        "EC_or": first(
            (p, q) for p, q in product(els, repeat=2) if t(p) == t(q) and t(h.join(p, q)) != t(p)
        ),
        "ECS": first(
            (p, q, r)
            for p, q, r in product(els, repeat=3)
            if h.leq(p, q) and h.leq(q, r) and t(p) == t(r) and t(q) != t(p)
        ),
    }


def no_cut_rules(t: OperatorTable) -> dict[str, tuple[bool, tuple | None]]:
    """The two rules excluding Y-cuts and lambda-cuts, checked for all ``P, Q, R``."""
    h = t.host
    els = h.elements
    y = next(
        (
            (p, q, r)
            for p, q, r in product(els, repeat=3)
            if t(p) == t(q) and t(h.join(p, r)) != t(h.join(q, r))
        ),
        None,
    )
    lam = next(
        (
            (p, q, r)
            for p, q, r in product(els, repeat=3)
            if t(p) == t(q) and t(h.meet(p, r)) != t(h.meet(q, r))
        ),
        None,
    )
    return {"NoYcuts": (y is None, y), "NoLambdacuts": (lam is None, lam)}


@dataclass(frozen=True)
class IntervalPartition:
    host: Zha
    blocks: tuple[tuple[Elem, ...], ...]
    _block_of: dict[Elem, int] = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        blocks = tuple(sorted(tuple(sorted(b)) for b in self.blocks))
        object.__setattr__(self, "blocks", blocks)
        owner = {}
        for i, b in enumerate(blocks):
            for x in b:
                if x in owner:
                    raise ShapeError(f"{fmt_elem(x)} lies in two blocks")
                owner[x] = i
        if set(owner) != set(self.host.elements):
            raise ShapeError("blocks do not cover the host")
        for b in blocks:
            lo, hi = self.host.meet_all(b), self.host.join_all(b)
            if lo not in b or hi not in b or set(self.host.interval(lo, hi)) != set(b):
                raise ShapeError(f"block {[fmt_elem(x) for x in b]} is not an interval")
        object.__setattr__(self, "_block_of", owner)

    def block_of(self, x: Elem) -> tuple[Elem, ...]:
        return self.blocks[self._block_of[x]]

    def same(self, x: Elem, y: Elem) -> bool:
        return self._block_of[x] == self._block_of[y]

    def top_operator(self) -> OperatorTable:
        return OperatorTable.from_function(self.host, lambda x: self.block_of(x)[-1])

    @classmethod
    def from_slashing(cls, s: Slashing) -> IntervalPartition:
        return cls(s.host, tuple(tuple(r) for r in s.regions()))


def j_regions(t: OperatorTable) -> IntervalPartition:
    verdict = check_j123(t)
    if not verdict.ok:
        raise ContractError(f"not a J-operator: {verdict.first_failure()}")
    groups: dict[Elem, list[Elem]] = {}
    for x in t.host:
        groups.setdefault(t(x), []).append(x)
    part = IntervalPartition(t.host, tuple(tuple(g) for g in groups.values()))
    for top, block in groups.items():
        assert max(block) == top and top in block
    return part


@dataclass(frozen=True)
class ForbiddenCut:
    kind: Literal["Y", "lambda"]
    diamond: tuple[Elem, Elem, Elem, Elem]  # bottom, left (a+1), right (b+1), top

    def __str__(self) -> str:
        return f"{self.kind}-cut at " + " ".join(fmt_elem(x) for x in self.diamond)


def detect_forbidden_cuts(p: IntervalPartition) -> list[ForbiddenCut]:
    """Unit diamonds whose two parallel edges are treated differently.

    A Y-cut has an uncut lower edge whose parallel upper edge is cut; a
    lambda-cut is the reverse.
    """
    out = []
    for bot, lft, rgt, top in p.host.diamonds():
        for lower, upper in (((bot, rgt), (lft, top)), ((bot, lft), (rgt, top))):
            lower_cut = not p.same(*lower)
            upper_cut = not p.same(*upper)
            if upper_cut and not lower_cut:
                out.append(ForbiddenCut("Y", (bot, lft, rgt, top)))
            elif lower_cut and not upper_cut:
                out.append(ForbiddenCut("lambda", (bot, lft, rgt, top)))
    return out


def _partition_masks(zha: Zha, choose) -> Iterator[list[tuple[int, int]]]:
    """Yield partitions as lists of ``(block mask, index of block top)``.

    The least free element (index order is a linear extension of the ZHA
    order) must be the bottom of its block; each admissible top above it
    whose interval is still free opens a branch.
    """
    up, down = zha.up_masks, zha.down_masks
    n = len(zha)
    blocks: list[tuple[int, int]] = []

    def rec(free: int) -> Iterator[list[tuple[int, int]]]:
        if not free:
            yield blocks
            return
        m = (free & -free).bit_length() - 1
        tops = []
        above = up[m]
        for t in range(m, n):
            if above >> t & 1:
                iv = above & down[t]
                if iv & ~free == 0:
                    tops.append((iv, t))
        for iv, t in choose(tops):
            blocks.append((iv, t))
            yield from rec(free & ~iv)
            blocks.pop()

    yield from rec((1 << n) - 1)


def _blocks_to_partition(zha: Zha, blocks) -> IntervalPartition:
    els = zha.elements
    return IntervalPartition(
        zha, tuple(tuple(els[i] for i in range(len(els)) if iv >> i & 1) for iv, _ in blocks)
    )


def interval_partitions(zha: Zha) -> Iterator[IntervalPartition]:
    for blocks in _partition_masks(zha, lambda tops: tops):
        yield _blocks_to_partition(zha, blocks)


def count_interval_partitions(zha: Zha) -> int:
    return sum(1 for _ in _partition_masks(zha, lambda tops: tops))


def random_interval_partition(zha: Zha, rng: random.Random) -> IntervalPartition:
    blocks = next(_partition_masks(zha, lambda tops: [rng.choice(tops)]))
    return _blocks_to_partition(zha, blocks)


def _tops_from_blocks(n: int, blocks) -> list[int]:
    img = [0] * n
    for iv, t in blocks:
        for i in range(n):
            if iv >> i & 1:
                img[i] = t
    return img


def _meet_preserving(img: list[int], meet: tuple[tuple[int, ...], ...]) -> bool:
    # J1 and J2 hold for any top-of-block map, so only J3 needs checking
    n = len(img)
    for i in range(n):
        mi, ii = meet[i], img[i]
        for j in range(i + 1, n):
            if img[mi[j]] != meet[ii][img[j]]:
                return False
    return True


def enumerate_j_operators(zha: Zha, max_size: int = 14) -> set[OperatorTable]:
    """All J-operators on ``zha``, found by brute force over interval partitions."""
    if len(zha) > max_size:
        raise RefusalError(f"host has {len(zha)} elements, guard is {max_size}")
    n, els, meet = len(zha), zha.elements, zha.meet_idx
    found = set()
    for blocks in _partition_masks(zha, lambda tops: tops):
        img = _tops_from_blocks(n, blocks)
        if _meet_preserving(img, meet):
            found.add(OperatorTable(zha, tuple(els[i] for i in img)))
    return found


def slash_operators(zha: Zha) -> set[OperatorTable]:
    return {s.operator() for s in all_slashings(zha)}
