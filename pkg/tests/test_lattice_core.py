from __future__ import annotations

from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from planar_heyting.errors import DomainError, InputError, RangeError, ShapeError
from planar_heyting.topos import poset_from_2cg
from planar_heyting.lattice_core import (
    TwoColumnGraph,
    Zha,
    acyclic_2cgs,
    all_zhas,
    cross_arrows,
    fmt_elem,
    full_grid,
    is_open,
    open_sets,
    parse_elem,
    pile,
    pile_coords,
    zha_from_2cg,
)


def oracle_imp(graph, u, w):
    """Largest open contained in the complement of pile(u) joined with pile(w)."""
    allowed = set(graph.points) - pile(graph, *u) | pile(graph, *w)
    best = frozenset()
    for s in open_sets(graph):
        if s <= allowed:
            best |= s
    return pile_coords(best)


def test_pile_examples(running):
    assert pile(running, 2, 5) == {"L1", "L2", "R1", "R2", "R3", "R4", "R5"}
    assert pile(running, 0, 0) == frozenset()
    with pytest.raises(RangeError):
        pile(running, 5, 0)


def test_running_zha_misses_21(running_zha):
    assert (2, 1) not in running_zha
    assert running_zha.top == (4, 6)
    for x in ["00", "01", "02", "03", "04", "14", "24", "34", "35", "36", "46"]:
        assert parse_elem(x) in running_zha


def test_opens_are_piles(running):
    opens = open_sets(running)
    coords = [pile_coords(s) for s in opens]
    assert None not in coords
    assert sorted(coords) == list(zha_from_2cg(running).elements)


def test_imp_matches_open_set_oracle(running):
    h = zha_from_2cg(running)
    for u, w in product(h, repeat=2):
        assert h.imp(u, w) == oracle_imp(running, u, w)


def test_full_grid_operations():
    h = full_grid(2, 2)
    assert len(h) == 9
    assert h.meet((2, 0), (0, 2)) == (0, 0)
    assert h.join((2, 0), (0, 2)) == (2, 2)
    assert h.imp((1, 1), (0, 2)) == (0, 2)
    assert h.neg((1, 0)) == (0, 2)
    with pytest.raises(DomainError):
        h.meet((3, 0), (0, 0))


def test_zha_rejects_non_lattice():
    with pytest.raises(ShapeError):
        Zha(1, 1, ((0, 0), (1, 0), (0, 1)))
    with pytest.raises(ShapeError):
        Zha(1, 1, ((0, 0), (1, 0), (0, 1), (1, 2), (1, 1)))


def test_graph_validation():
    with pytest.raises(DomainError):
        TwoColumnGraph(1, 1, frozenset({("L1", "L2")}))
    with pytest.raises(DomainError):
        TwoColumnGraph(1, 1, frozenset({("L1", "L1")}))
    with pytest.raises(DomainError):
        TwoColumnGraph(1, 1, questions=frozenset({"R3"}))


def test_digit_pairs_above_nine():
    assert fmt_elem((10, 2)) == "[10]2"
    assert parse_elem("[10]2") == (10, 2)


@pytest.mark.parametrize("k, count", [(1, 3), (2, 20), (3, 175)])
def test_shape_counts(k, count):
    assert len(acyclic_2cgs(k, k)) == count


def test_acyclic_shapes_match_arrow_subsets():
    seen = set()
    arrows = cross_arrows(2, 2)
    for bits in range(1 << len(arrows)):
        g = TwoColumnGraph(2, 2, frozenset(a for i, a in enumerate(arrows) if bits >> i & 1))
        try:
            poset_from_2cg(g)
        except InputError:
            continue
        seen.add(zha_from_2cg(g).elements)
    canon = {zha_from_2cg(g).elements for g in acyclic_2cgs(2, 2)}
    assert seen == canon


hosts = st.sampled_from(all_zhas(2))


@settings(max_examples=60, deadline=None)
@given(hosts, st.data())
def test_heyting_laws(h, data):
    x, y, z = (data.draw(st.sampled_from(h.elements)) for _ in range(3))
    assert h.leq(h.meet(x, y), z) == h.leq(x, h.imp(y, z))
    assert h.meet(x, h.join(y, z)) == h.join(h.meet(x, y), h.meet(x, z))
    assert h.meet(x, h.neg(x)) == h.bottom
    assert h.iff(x, x) == h.top


def test_open_definition(running):
    assert is_open(running, pile(running, 1, 1))
    assert not is_open(running, pile(running, 1, 0))
