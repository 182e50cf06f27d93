from __future__ import annotations

import random
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from planar_heyting.errors import ContractError, RefusalError, ShapeError
from planar_heyting.lattice_core import all_zhas, full_grid, parse_elem
from planar_heyting.nucleus import (
    IntervalPartition,
    check_j123,
    count_interval_partitions,
    derived_rule_suite,
    detect_forbidden_cuts,
    enumerate_j_operators,
    interval_partitions,
    j_regions,
    no_cut_rules,
    random_interval_partition,
    slash_operators,
)
from planar_heyting.slashing import OperatorTable, all_slashings

E = parse_elem


def set_partitions(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        yield [[first]] + part
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1 :]


def is_interval(h, block):
    lo, hi = h.meet_all(block), h.join_all(block)
    return lo in block and hi in block and set(h.interval(lo, hi)) == set(block)


def j_by_all_functions(h):
    els = h.elements
    out = set()
    for values in product(els, repeat=len(els)):
        t = OperatorTable(h, values)
        if check_j123(t).ok:
            out.add(t)
    return out


@pytest.mark.parametrize("l, r", [(1, 1), (2, 1), (1, 2)])
def test_j_operators_by_all_functions(l, r):
    h = full_grid(l, r)
    assert enumerate_j_operators(h) == j_by_all_functions(h) == slash_operators(h)


@pytest.mark.parametrize("l, r", [(1, 1), (2, 1), (2, 2)])
def test_interval_partition_count_by_set_partitions(l, r):
    h = full_grid(l, r)
    expected = sum(1 for p in set_partitions(list(h.elements)) if all(is_interval(h, b) for b in p))
    assert count_interval_partitions(h) == expected


@pytest.mark.parametrize(
    "l, r, partitions, jops", [(1, 1, 8, 4), (2, 2, 322, 16), (3, 2, 3164, 32)]
)
def test_frozen_counts(l, r, partitions, jops):
    h = full_grid(l, r)
    assert count_interval_partitions(h) == partitions
    assert len(enumerate_j_operators(h)) == jops


def test_j_operators_are_slashings_on_small_shapes():
    for h in all_zhas(2):
        assert enumerate_j_operators(h) == slash_operators(h)


def test_refusal_guard():
    with pytest.raises(RefusalError):
        enumerate_j_operators(full_grid(3, 3), max_size=14)


def test_verdict_witnesses():
    h = full_grid(4, 4)
    meet22 = OperatorTable.from_function(h, lambda p: h.meet(p, E("22")))
    v = check_j123(meet22)
    assert not v.j1_ok and v.j2_ok and v.j3_ok
    assert v.first_failure() == "J1 fails at 44"
    shift = OperatorTable.from_function(full_grid(2, 0), lambda p: (min(2, p[0] + 1), 0))
    assert check_j123(shift).first_failure() == "J2 fails at 00"


def test_derived_rules_hold_for_slashings():
    for h in all_zhas(2):
        for s in all_slashings(h):
            t = s.operator()
            assert all(ok for ok, _ in derived_rule_suite(t).values())
            assert all(ok for ok, _ in no_cut_rules(t).values())


def test_derived_rules_catch_a_non_j():
    h = full_grid(2, 2)
    neg = OperatorTable.from_function(h, h.neg)
    report = derived_rule_suite(neg)
    assert not report["Mo"][0]


def test_j_regions_match_slashing():
    h = full_grid(2, 2)
    for s in all_slashings(h):
        assert j_regions(s.operator()) == IntervalPartition.from_slashing(s)
    with pytest.raises(ContractError):
        j_regions(OperatorTable.from_function(h, h.neg))


def test_interval_partition_validation():
    h = full_grid(1, 1)
    with pytest.raises(ShapeError):
        IntervalPartition(h, ((E("00"), E("11")), (E("01"),), (E("10"),)))
    with pytest.raises(ShapeError):
        IntervalPartition(h, ((E("00"),), (E("01"),)))


def test_forbidden_cut_examples():
    h = full_grid(1, 1)
    y = IntervalPartition(h, ((E("00"), E("01")), (E("10"),), (E("11"),)))
    kinds = {c.kind for c in detect_forbidden_cuts(y)}
    assert kinds == {"Y"}
    assert not check_j123(y.top_operator()).j3_ok
    lam = IntervalPartition(h, ((E("00"),), (E("01"), E("11")), (E("10"),)))
    assert {c.kind for c in detect_forbidden_cuts(lam)} == {"lambda"}
    assert not check_j123(lam.top_operator()).j3_ok


def test_slashings_have_no_forbidden_cuts():
    for h in all_zhas(2):
        for s in all_slashings(h):
            assert detect_forbidden_cuts(IntervalPartition.from_slashing(s)) == []


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(all_zhas(3)), st.integers(0, 2**32))
def test_forbidden_cut_means_j3_failure(h, seed):
    p = random_interval_partition(h, random.Random(seed))
    if detect_forbidden_cuts(p):
        assert not check_j123(p.top_operator()).j3_ok


@settings(max_examples=100, deadline=None)
@given(st.sampled_from(all_zhas(2)), st.integers(0, 2**32))
def test_random_partitions_are_enumerated(h, seed):
    p = random_interval_partition(h, random.Random(seed))
    assert p in set(interval_partitions(h))
