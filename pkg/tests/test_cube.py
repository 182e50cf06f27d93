from __future__ import annotations

import pytest

from planar_heyting.cube import (
    CONNECTIVES,
    NODES,
    CubeNode,
    Model,
    all_models,
    countermodel_search,
    equivalence_classes,
    expand_simplified,
    induced_order,
    node_eval,
    search_hosts,
    semantic_preorder,
    semantic_preorder_over,
    separating_valuation_search,
    simplified_cube,
    theorem_preorder,
)
from planar_heyting.errors import ContractError, DomainError
from planar_heyting.lattice_core import full_grid, parse_elem
from planar_heyting.slashing import parse_slashing

E = parse_elem


def test_node_labels():
    assert str(CubeNode("and", 0)) == "P & Q"
    assert str(CubeNode("imp", 7)) == "(P* -> Q*)*"
    with pytest.raises(DomainError):
        CubeNode("xor", 0)
    with pytest.raises(DomainError):
        CubeNode("and", 8)


@pytest.mark.parametrize("c", CONNECTIVES)
def test_theorem_preorder_is_a_preorder(c):
    rel = theorem_preorder(c)
    assert all((n, n) in rel for n in NODES)
    for a, b in rel:
        for b2, d in rel:
            if b == b2:
                assert (a, d) in rel


@pytest.mark.parametrize("c, merged", [("and", {3, 4, 7}), ("or", {4, 5, 6})])
def test_required_merges(c, merged):
    classes = [set(k) for k in equivalence_classes(theorem_preorder(c))]
    assert any(merged <= k for k in classes)


@pytest.mark.parametrize("c", CONNECTIVES)
def test_simplified_cube_round_trip(c):
    assert expand_simplified(*simplified_cube(c)) == theorem_preorder(c)


@pytest.mark.parametrize("c", CONNECTIVES)
def test_soundness_on_tiny_hosts(c):
    assert theorem_preorder(c) <= semantic_preorder_over(c, search_hosts(1))


def test_index_level_matches_model_level():
    hosts = search_hosts(1)
    for c in CONNECTIVES:
        assert semantic_preorder(c, all_models(hosts)) == semantic_preorder_over(c, hosts)


def test_separating_model_for_and():
    m = separating_valuation_search("and", size_bound=1)
    assert m is not None
    assert induced_order("and", m) == theorem_preorder("and")
    h = full_grid(1, 1)
    expected = Model(h, parse_slashing("(01, 01)", h), E("01"), E("10"))
    assert m == expected
    assert [node_eval(CubeNode("and", n), m) for n in NODES] == [E("00"), E("10"), E("01")] + [E("11")] * 5


def test_countermodel_contract():
    with pytest.raises(ContractError):
        countermodel_search("and", 0, 7)
    with pytest.raises(ContractError):
        semantic_preorder("and", [])


def test_countermodel_refutes():
    m = countermodel_search("imp", 0, 1, size_bound=2)
    assert m is not None
    assert not m.zha.leq(node_eval(CubeNode("imp", 0), m), node_eval(CubeNode("imp", 1), m))


def test_order_seed_is_reproducible():
    a = countermodel_search("or", 1, 0, size_bound=2, order_seed=5)
    b = countermodel_search("or", 1, 0, size_bound=2, order_seed=5)
    assert a == b and a is not None
