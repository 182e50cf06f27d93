from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from planar_heyting.errors import ParseError
from planar_heyting.formats import dump_2cg, dump_psh, parse_2cg, parse_psh, tokenized
from planar_heyting.lattice_core import TwoColumnGraph, acyclic_2cgs
from planar_heyting.topos import poset_from_2cg, random_presheaf

from conftest import FIXTURES


def test_running_file(running):
    assert running.left == 4 and running.right == 6
    assert ("L3", "R4") in running.arrows
    assert set(running.points) - running.questions == {"L1", "R4", "R6"}


@pytest.mark.parametrize(
    "text, line",
    [
        ("left 1\nright 1\narrow L1 L2\n", 3),
        ("left 1\nright x\n", 2),
        ("left 1\nleft 2\nright 1\n", 2),
        ("left 1\nright 1\nfrobnicate\n", 3),
        ("left 1\nright 1\nquestions R2\n", 3),
        ("left 1\nright 1\narrow L1 Q1\n", 3),
    ],
)
def test_2cg_errors_carry_lines(text, line):
    with pytest.raises(ParseError, match=f"line {line}"):
        parse_2cg(text)


def test_2cg_requires_heights():
    with pytest.raises(ParseError):
        parse_2cg("left 2\n")


graphs = st.sampled_from([g for l in range(3) for r in range(3) for g in acyclic_2cgs(l, r)])


@settings(max_examples=60, deadline=None)
@given(graphs, st.data())
def test_2cg_round_trip(g, data):
    q = data.draw(st.frozensets(st.sampled_from(g.points))) if g.points else frozenset()
    g = g.with_questions(q)
    assert parse_2cg(dump_2cg(g)) == g


def test_psh_fixture_round_trip(rungs3q):
    P = poset_from_2cg(rungs3q)
    c = parse_psh((FIXTURES / "rungs3q.psh").read_text(), P)
    assert c.sets["L3"] == ("d", "e")
    assert parse_psh(dump_psh(c), P) == c


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32))
def test_psh_round_trip_random(seed):
    rng = random.Random(seed)
    g = TwoColumnGraph(3, 3, frozenset({("L3", "R2"), ("R3", "L1")}))
    P = poset_from_2cg(g)
    c = tokenized(random_presheaf(rng, P, 3))
    assert parse_psh(dump_psh(c), P) == c


@pytest.mark.parametrize(
    "text",
    [
        "point Z9: a\n",
        "point L1 a\n",
        "point L1: a a\n",
        "point L1: a\npoint L2: b\nmap L2 -> L1: b->zz\n",
        "point L1: a\nmap L1 -> R1: a->a\n",
        "blah L1: a\n",
    ],
)
def test_psh_errors(text, rungs3q):
    with pytest.raises(ParseError):
        parse_psh(text, poset_from_2cg(rungs3q))
