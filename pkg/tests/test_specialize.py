import random

import pytest

from graphpoly.errors import BudgetError
from graphpoly.graphs import (
    complete_graph,
    cycle_graph,
    empty_graph,
    line_graph,
    path_graph,
)
from graphpoly.homopoly import hom_poly, hom_poly_q2_subsets
from graphpoly.polyring import Polynomial
from graphpoly.specialize import (
    chromatic_deletion_contraction,
    chromatic_from_counts,
    colour_count,
    colour_count_from_hom,
    hardcore_from_p2,
    hardcore_partition,
    independence_counts_fast,
    independence_polynomial,
    ising_direct,
    ising_from_p2,
    matching_counts_fast,
    matching_polynomial,
    potts_direct,
    potts_from_hom,
    vdw_bruteforce,
    vdw_polynomial,
)


def poly_of(variables, entries) -> Polynomial:
    return Polynomial(variables, entries)


# -- bivariate Ising ---------------------------------------------------------

def test_ising_k1():
    assert ising_direct(empty_graph(1)) == poly_of(("x", "y"), {(0, 1): 1, (0, -1): 1})


def test_ising_k2():
    expected = poly_of(("x", "y"), {(1, 2): 1, (1, -2): 1, (-1, 0): 2})
    assert ising_direct(complete_graph(2)) == expected


def test_ising_p3():
    z = ising_direct(path_graph(3))
    assert z.terms[(2, 3)] == 1 and z.terms[(2, -3)] == 1
    assert sum(z.terms.values()) == 8
    brute = {}
    for s0 in (1, -1):
        for s1 in (1, -1):
            for s2 in (1, -1):
                key = (s0 * s1 + s1 * s2, s0 + s1 + s2)
                brute[key] = brute.get(key, 0) + 1
    assert z.terms == brute


def test_ising_structural_invariants(graphs_by_order):
    for g in graphs_by_order[6]:
        z = ising_direct(g)
        for (i, j) in z.terms:
            assert -g.m <= i <= g.m
            assert -g.n <= j <= g.n
            assert (j - g.n) % 2 == 0
        assert z.evaluate({"x": 1, "y": 1}) == 2**g.n


def test_ising_from_p2_matches_direct(graphs_by_order):
    for n in range(1, 8):
        for g in graphs_by_order[n]:
            assert ising_from_p2(hom_poly_q2_subsets(g)) == ising_direct(g)


# -- Potts -------------------------------------------------------------------

def test_potts_examples():
    assert potts_direct(complete_graph(2), 2) == poly_of(("y",), {(1,): 2, (0,): 2})
    assert potts_direct(complete_graph(2), 3) == poly_of(("y",), {(1,): 3, (0,): 6})
    assert potts_direct(complete_graph(3), 2) == poly_of(("y",), {(3,): 2, (1,): 6})


def test_potts_matches_hom_specialization(graphs_by_order):
    for g in graphs_by_order[5] + graphs_by_order[6][:40]:
        for q in (2, 3):
            assert potts_from_hom(hom_poly(g, q)) == potts_direct(g, q)


def test_potts_total_mass(graphs_by_order):
    for g in graphs_by_order[5]:
        for q in (2, 3):
            assert potts_direct(g, q).evaluate({"y": 1}) == q**g.n


# -- colour counting ---------------------------------------------------------

def test_colour_count_examples():
    k3 = complete_graph(3)
    assert colour_count(k3, 3) == 6
    assert colour_count(k3, 2) == 0
    assert colour_count(path_graph(3), 2) == 2


def test_colour_count_from_hom(graphs_by_order):
    for g in graphs_by_order[5]:
        p4 = hom_poly(g, 4)
        for k in (1, 2, 3, 4):
            assert colour_count_from_hom(p4, k) == colour_count(g, k)


# -- chromatic ---------------------------------------------------------------

def test_chromatic_examples():
    assert chromatic_deletion_contraction(empty_graph(1)) == poly_of(("k",), {(1,): 1})
    assert chromatic_deletion_contraction(complete_graph(2)) == poly_of(("k",), {(2,): 1, (1,): -1})
    c4 = chromatic_deletion_contraction(cycle_graph(4))
    # evaluate against brute-force counts for k = 1..4
    for k in range(1, 5):
        assert c4.evaluate({"k": k}) == colour_count(cycle_graph(4), k)
    assert c4 == poly_of(("k",), {(4,): 1, (3,): -4, (2,): 6, (1,): -3})


def test_chromatic_interpolation_examples():
    k3 = complete_graph(3)
    poly = chromatic_from_counts(k3, [0, 0])
    assert poly == poly_of(("k",), {(3,): 1, (2,): -3, (1,): 2})
    e2 = empty_graph(2)
    assert chromatic_from_counts(e2, [1]) == poly_of(("k",), {(2,): 1})
    p3 = path_graph(3)
    assert chromatic_from_counts(p3, [0, 2]) == chromatic_deletion_contraction(p3)


def test_chromatic_interpolation_matches_deletion_contraction(graphs_by_order):
    for n in (2, 3, 4, 5):
        for g in graphs_by_order[n]:
            counts = [colour_count(g, k) for k in range(1, n)]
            assert chromatic_from_counts(g, counts) == chromatic_deletion_contraction(g)


def test_chromatic_interpolation_rejects_bad_counts():
    with pytest.raises(ValueError):
        chromatic_from_counts(complete_graph(3), [0, 1])  # not a chromatic polynomial
    with pytest.raises(ValueError):
        chromatic_from_counts(complete_graph(3), [0])


def test_chromatic_budget():
    with pytest.raises(BudgetError):
        chromatic_deletion_contraction(empty_graph(13))


# -- matching ----------------------------------------------------------------

def test_matching_examples():
    assert matching_polynomial(path_graph(3)) == poly_of(("x",), {(0,): 1, (1,): 2})
    assert matching_polynomial(complete_graph(2)) == poly_of(("x",), {(0,): 1, (1,): 1})
    assert matching_polynomial(cycle_graph(4)) == poly_of(("x",), {(0,): 1, (1,): 4, (2,): 2})


def test_matching_fast_agrees(graphs_by_order):
    for n in (3, 5, 6, 7):
        for g in graphs_by_order[n]:
            poly = matching_polynomial(g)
            counts = matching_counts_fast(g)
            assert {(i,): c for i, c in enumerate(counts) if c} == poly.terms


# -- independence / hard-core ------------------------------------------------

def test_independence_examples():
    assert independence_polynomial(path_graph(3)) == poly_of(("x",), {(0,): 1, (1,): 3, (2,): 1})
    assert independence_polynomial(complete_graph(3)) == poly_of(("x",), {(0,): 1, (1,): 3})


def test_independence_of_line_graph_is_matching(graphs_by_order):
    for n in (2, 3, 4, 5, 6):
        for g in graphs_by_order[n]:
            if g.m == 0:
                continue
            assert independence_polynomial(line_graph(g)) == matching_polynomial(g)


def test_hardcore_examples():
    assert hardcore_partition(complete_graph(2)) == poly_of(("h", "x"), {(0, 0): 1, (0, 1): 2, (1, 2): 1})
    assert hardcore_partition(path_graph(3)) == poly_of(
        ("h", "x"), {(0, 0): 1, (0, 1): 3, (1, 2): 2, (0, 2): 1, (2, 3): 1}
    )
    e2 = hardcore_partition(empty_graph(2))
    assert e2 == poly_of(("h", "x"), {(0, 0): 1, (0, 1): 2, (0, 2): 1})


def test_hardcore_routes_agree(graphs_by_order):
    for n in range(1, 7):
        for g in graphs_by_order[n]:
            direct = hardcore_partition(g)
            assert hardcore_from_p2(hom_poly_q2_subsets(g)) == direct
            assert direct.substitute({"h": 1}).evaluate({"x": 1}) == 2**g.n
            indep = independence_polynomial(g)
            assert direct.substitute({"h": 0}) == indep
            counts = independence_counts_fast(g)
            assert {(i,): c for i, c in enumerate(counts) if c} == indep.terms


# -- van der Waerden ---------------------------------------------------------

def test_vdw_examples():
    assert vdw_polynomial(complete_graph(2)) == poly_of(("u", "t"), {(0, 0): 1, (1, 2): 1})
    assert vdw_polynomial(path_graph(3)) == poly_of(("u", "t"), {(0, 0): 1, (1, 2): 2, (2, 2): 1})


def test_vdw_matches_bruteforce(graphs_by_order):
    for n in (4, 5, 6):
        for g in graphs_by_order[n]:
            assert vdw_polynomial(g) == vdw_bruteforce(g)


def test_vdw_matching_slice(graphs_by_order):
    for n in (4, 5, 6, 7):
        for g in graphs_by_order[n]:
            w = vdw_polynomial(g)
            mp = matching_polynomial(g)
            for i in range(g.m + 1):
                assert w.terms.get((i, 2 * i), 0) == mp.terms.get((i,), 0)
