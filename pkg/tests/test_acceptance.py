"""The ten acceptance criteria, each with its time limit.

Every criterion prints one ``PASS``/``FAIL`` line; the lines are also
collected in ``RESULTS`` and repeated in pytest's terminal summary.  Run this
file directly (``python3 tests/test_acceptance.py``) for the lines alone.
"""

from __future__ import annotations

import random
import sys
import time
from itertools import product
from pathlib import Path

import pytest

from planar_heyting.cube import (
    CONNECTIVES,
    NODES,
    countermodel_search,
    equivalence_classes,
    induced_order,
    search_hosts,
    semantic_preorder_over,
    separating_valuation_search,
    theorem_preorder,
)
from planar_heyting.errors import InputError
from planar_heyting.formats import parse_2cg
from planar_heyting.lattice_core import (
    TwoColumnGraph,
    acyclic_2cgs,
    all_zhas,
    cross_arrows,
    fmt_elem,
    full_grid,
    parse_elem,
    zha_from_2cg,
)
from planar_heyting.nucleus import (
    check_j123,
    detect_forbidden_cuts,
    enumerate_j_operators,
    random_interval_partition,
)
from planar_heyting.poly import fs_identities, named_operator, op_join, op_meet, slashing_to_polynomial, tabulate
from planar_heyting.slashing import (
    OperatorTable,
    all_slashings,
    q_equiv,
    questions_from_slashing,
    s_top,
    slashing_from_questions,
)
from planar_heyting.topos import (
    brute_force_limit,
    classifier_bijection_check,
    closure,
    counit,
    kan_sheafify,
    local_operator,
    local_operator_laws,
    naturality_suite,
    omega,
    opens_operator,
    poset_from_2cg,
    random_poset,
    random_presheaf,
    ran,
    restrict_presheaf,
    restrict_to_sub1,
    sub1_as_zha,
    subterminal,
    terminal,
)

FIXTURES = Path(__file__).parent / "fixtures"
E = parse_elem
RESULTS: list[str] = []


def report(n: int, ok: bool, elapsed: float, limit: float, detail: str) -> None:
    within = elapsed < limit
    line = f"{'PASS' if ok and within else 'FAIL'} criterion {n:>2}: {detail} [{elapsed:.2f}s / limit {limit:g}s]"
    RESULTS.append(line)
    print(line)
    assert ok, line
    assert within, line


def graphs_up_to(k: int) -> list[TwoColumnGraph]:
    return [g for l, r in product(range(k + 1), repeat=2) for g in acyclic_2cgs(l, r)]


def running():
    return parse_2cg((FIXTURES / "running.2cg").read_text())


def test_criterion_01_running_fixture():
    t = time.perf_counter()
    g = running()
    s = slashing_from_questions(g)
    checks = {
        "slashing": str(s) == "(0|1234, 0123|45|6)",
        "23 ~Q 13": q_equiv(g, E("23"), E("13")),
        "13 !~Q 14": not q_equiv(g, E("13"), E("14")),
        "11 ~S 23": s.equiv(E("11"), E("23")),
        "23 !~S 14": not s.equiv(E("23"), E("14")),
    }
    bad = [k for k, v in checks.items() if not v]
    report(1, not bad, time.perf_counter() - t, 1, f"S = {s}; verdicts {'all hold' if not bad else 'failing: ' + ', '.join(bad)}")


def test_criterion_02_worked_values():
    t = time.perf_counter()
    s = slashing_from_questions(running())
    got = {
        "[2]^L": set(s.left.cls(2)),
        "2^L": s.left.top(2),
        "2^R": s.right.top(2),
        "[22]^S": {fmt_elem(x) for x in s.region(E("22"))},
        "2^S": fmt_elem(s_top(s, E("22"))),
    }
    want = {
        "[2]^L": {1, 2, 3, 4},
        "2^L": 4,
        "2^R": 4,
        "[22]^S": {"11", "12", "13", "22", "23"},
        "2^S": "23",
    }
    bad = [f"{k} = {got[k]} (expected {want[k]})" for k in want if got[k] != want[k]]
    detail = "all values equal" if not bad else "mismatch: " + "; ".join(bad) + f"; [2]^R = {set(s.right.cls(2))}"
    report(2, not bad, time.perf_counter() - t, 1, detail)


def test_criterion_03_j_operators_are_slashings():
    t = time.perf_counter()
    rng = random.Random(3)
    sampled = []
    while len(sampled) < 60:
        l, r = rng.randint(0, 3), rng.randint(0, 3)
        arrows = [a for a in cross_arrows(l, r) if rng.random() < 0.25]
        g = TwoColumnGraph(l, r, frozenset(arrows))
        try:
            poset_from_2cg(g)
        except InputError:
            continue
        sampled.append(zha_from_2cg(g))
    grids = [full_grid(l, r) for l, r in product(range(4), repeat=2)]
    hosts = all_zhas(3) + sampled + grids
    mismatches = [h for h in hosts if enumerate_j_operators(h, max_size=16) != {s.operator() for s in all_slashings(h)}]
    count22 = len(enumerate_j_operators(full_grid(2, 2)))
    ok = not mismatches and count22 == 16
    detail = (
        f"{len(all_zhas(3))} shapes + {len(sampled)} sampled graphs + {len(grids)} full grids, "
        f"{len(mismatches)} mismatches; [00,22] has {count22} J-operators"
    )
    report(3, ok, time.perf_counter() - t, 60, detail)


def test_criterion_04_forbidden_cuts():
    t = time.perf_counter()
    rng = random.Random(4)
    hosts = all_zhas(3)
    total = with_cut = exceptions = 0
    while total < 10_000:
        h = rng.choice(hosts)
        p = random_interval_partition(h, rng)
        total += 1
        if detect_forbidden_cuts(p):
            with_cut += 1
            if check_j123(p.top_operator()).j3_ok:
                exceptions += 1
    ok = exceptions == 0 and with_cut > 0
    report(4, ok, time.perf_counter() - t, 60, f"{total} partitions, {with_cut} with a Y/lambda-cut, {exceptions} pass J3")


def test_criterion_05_fourman_scott():
    t = time.perf_counter()
    hosts = all_zhas(3)
    failing = [(h, k) for h in hosts for k, (ok, _) in fs_identities(h).items() if not ok]

    def grid_for(*consts):
        return full_grid(max(c[0] for c in consts), max(c[1] for c in consts))

    def closed(h, a):
        return named_operator(h, "or_const", E(a))

    def opened(h, a):
        return named_operator(h, "imp_const", E(a))

    instances = {}
    h = grid_for(E("21"), E("12"), E("22"))
    instances["(v21) v (v12) = (v22)"] = op_join(closed(h, "21"), closed(h, "12")) == closed(h, "22")
    h = grid_for(E("32"), E("23"), E("22"))
    instances["(->32) v (->23) = (->22)"] = op_join(opened(h, "32"), opened(h, "23")) == opened(h, "22")
    h = grid_for(E("21"), E("12"), E("11"))
    instances["(v21) & (v12) = (v11)"] = op_meet(closed(h, "21"), closed(h, "12")) == closed(h, "11")
    h = grid_for(E("32"), E("23"), E("33"))
    instances["(->32) & (->23) = (->33)"] = op_meet(opened(h, "32"), opened(h, "23")) == opened(h, "33")
    h = grid_for(E("22"))
    instances["(v22) & (->22) = bottom-op"] = op_meet(closed(h, "22"), opened(h, "22")) == OperatorTable.identity(h)
    instances["(v22) v (->22) = top-op"] = op_join(closed(h, "22"), opened(h, "22")) == OperatorTable.constant_top(h)
    bad = [k for k, v in instances.items() if not v]
    ok = not failing and not bad
    detail = f"(i)-(vi) on {len(hosts)} ZHAs: {len(failing)} failures; {len(instances) - len(bad)}/6 concrete instances"
    report(5, ok, time.perf_counter() - t, 30, detail)


def test_criterion_06_slashing_polynomials():
    t = time.perf_counter()
    n = bad = 0
    for h in all_zhas(3):
        for s in all_slashings(h):
            n += 1
            if tabulate(slashing_to_polynomial(s), h) != s.operator():
                bad += 1
    report(6, bad == 0, time.perf_counter() - t, 30, f"{n} slashings, {bad} polynomial mismatches")


def test_criterion_07_cubes():
    t = time.perf_counter()
    notes = []
    ok = True
    for c in CONNECTIVES:
        thm = theorem_preorder(c)
        sem = semantic_preorder_over(c, search_hosts(2))
        if not thm <= sem:
            ok = False
            notes.append(f"{c}: unsound")
        missing = [(i, j) for i in NODES for j in NODES if (i, j) not in thm and countermodel_search(c, i, j, 3) is None]
        if missing:
            ok = False
            notes.append(f"{c}: no countermodel for {missing}")
        sep = separating_valuation_search(c, 3)
        if sep is None or induced_order(c, sep) != thm:
            ok = False
            notes.append(f"{c}: no separating valuation")
        else:
            notes.append(f"{c} separated by {sep}")
    merged = {c: [set(k) for k in equivalence_classes(theorem_preorder(c))] for c in ("and", "or")}
    if not any({3, 4, 7} <= k for k in merged["and"]) or not any({4, 5, 6} <= k for k in merged["or"]):
        ok = False
        notes.append("required merges missing")
    report(7, ok, time.perf_counter() - t, 300, "; ".join(notes))


def test_criterion_08_classifier():
    t = time.perf_counter()
    rng = random.Random(8)
    reports = []
    for _ in range(24):
        P = random_poset(rng, 6)
        reports.append(classifier_bijection_check(P, random_presheaf(rng, P, 3)))
    g = parse_2cg((FIXTURES / "rungs3.2cg").read_text())
    P = poset_from_2cg(g)
    listed = {E(x) for x in "33 32 23 22 13 21 12 20 11 02 10 01 00".split()}
    sub1 = sub1_as_zha(g)
    one = classifier_bijection_check(P, terminal(P))
    ok = all(r.ok for r in reports) and one.ok and one.n_sub == 13 and set(sub1) == listed and len(sub1) == 13
    detail = (
        f"{sum(r.ok for r in reports)}/{len(reports)} random bijections verified "
        f"(largest Sub(C) {max(r.n_sub for r in reports)}); three-rung |Sub(1)| = {len(sub1)}, "
        f"|Hom(1, Omega)| = {one.n_hom}"
    )
    report(8, ok, time.perf_counter() - t, 120, detail)


def test_criterion_09_local_operators():
    t = time.perf_counter()
    rng = random.Random(9)
    n = 0
    failures = []
    for g in graphs_up_to(3):
        P = poset_from_2cg(g)
        om = omega(P)
        Js = [opens_operator(g, s.operator()) for s in all_slashings(zha_from_2cg(g))]
        squares = naturality_suite(P, Js, [terminal(P), random_presheaf(rng, P, 2)])
        if not all(r.ok for r in squares):
            failures.append((g, "square"))
        subs = {u: subterminal(P, u) for u in P.opens}
        for J in Js:
            n += 1
            j = local_operator(P, J, om)
            if not all(ok for ok, _ in local_operator_laws(j).values()):
                failures.append((g, "law"))
            if restrict_to_sub1(j) != J:
                failures.append((g, "round trip"))
            for u, b in subs.items():
                cl = closure(b, j, om)
                if frozenset(p for p in P.points if cl.parts[p]) != J[u]:
                    failures.append((g, "closure"))
                    break
    detail = f"{n} slashing operators on {len(graphs_up_to(3))} graphs: laws, 5 squares, round trip, closure = P*; {len(failures)} failures"
    report(9, not failures, time.perf_counter() - t, 120, detail)


def test_criterion_10_kan_sheafification():
    t = time.perf_counter()
    rng = random.Random(10)
    fixtures = 0
    failures = []
    for g in graphs_up_to(3):
        B = poset_from_2cg(g)
        h = zha_from_2cg(g)
        c = random_presheaf(rng, B, 2)
        ident = kan_sheafify(B, B.points, c, questions=())
        if not ident.unit.is_iso() or not kan_sheafify(B, B.points, terminal(B), ()).unit.is_iso():
            failures.append((g, "Q empty"))
        for s in all_slashings(h):
            fixtures += 1
            q = questions_from_slashing(g, s)
            keep = [p for p in B.points if p not in q]
            A = B.induced(keep)
            battery = [terminal(A), restrict_presheaf(c, A), random_presheaf(rng, A, 2)]
            for d in battery:
                fast = ran(d, B)
                if fast != ran(d, B, brute_force_limit):
                    failures.append((g, s, "limit"))
                if not counit(d, fast).is_iso():
                    failures.append((g, s, "counit"))
            for base in (terminal(B), c):
                sh = kan_sheafify(B, keep, base, q)
                if not sh.idempotence_iso().is_iso():
                    failures.append((g, s, "idempotence"))
    detail = f"{fixtures} (graph, Q) fixtures x 3 presheaves on A: Ran = brute limit, counit iso, idempotent; Q = empty iso; {len(failures)} failures"
    report(10, not failures, time.perf_counter() - t, 120, detail)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-s"]))
