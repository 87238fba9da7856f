import random
from itertools import permutations

import pytest

from graphpoly.errors import BudgetError
from graphpoly.graphs import (
    complement,
    complete_graph,
    cycle_graph,
    disjoint_union,
    empty_graph,
    from_edges,
    join,
    path_graph,
    relabel,
)
from graphpoly.homopoly import (
    complement_transform,
    hom_poly,
    hom_poly_complete,
    hom_poly_q2_subsets,
    hom_poly_via_complement,
    permute_classes,
    restrict_order,
    same_order_iso_check,
)
from graphpoly.polyring import Polynomial, VarSpace

# The order-3 polynomial of the 3-vertex path, coefficient for coefficient.
# Terms are (x-exponents, {(i,j): e}) -> coefficient.
PATH3_ORDER3_TERMS = {
    ((3, 0, 0), ((1, 1, 2),)): 1,
    ((2, 1, 0), ((1, 1, 1), (1, 2, 1))): 2,
    ((2, 1, 0), ((1, 2, 2),)): 1,
    ((1, 2, 0), ((1, 2, 2),)): 1,
    ((2, 0, 1), ((1, 1, 1), (1, 3, 1))): 2,
    ((1, 1, 1), ((1, 2, 1), (1, 3, 1))): 2,
    ((2, 0, 1), ((1, 3, 2),)): 1,
    ((1, 0, 2), ((1, 3, 2),)): 1,
    ((1, 2, 0), ((1, 2, 1), (2, 2, 1))): 2,
    ((0, 3, 0), ((2, 2, 2),)): 1,
    ((1, 1, 1), ((1, 2, 1), (2, 3, 1))): 2,
    ((1, 1, 1), ((1, 3, 1), (2, 3, 1))): 2,
    ((0, 2, 1), ((2, 2, 1), (2, 3, 1))): 2,
    ((0, 2, 1), ((2, 3, 2),)): 1,
    ((0, 1, 2), ((2, 3, 2),)): 1,
    ((1, 0, 2), ((1, 3, 1), (3, 3, 1))): 2,
    ((0, 1, 2), ((2, 3, 1), (3, 3, 1))): 2,
    ((0, 0, 3), ((3, 3, 2),)): 1,
}


def expected_path3_order3() -> Polynomial:
    vs = VarSpace.of_order(3)
    terms = {}
    for (xs, ys), coeff in PATH3_ORDER3_TERMS.items():
        exps = [0] * len(vs.names)
        for i, e in enumerate(xs):
            exps[i] = e
        for i, j, e in ys:
            exps[vs.y_index(i, j)] = e
        terms[tuple(exps)] = coeff
    return Polynomial(vs.names, terms)


def test_path3_order3_expansion():
    assert hom_poly(path_graph(3), 3) == expected_path3_order3()


def test_hom_poly_single_vertex():
    for q in (2, 3, 4):
        p = hom_poly(empty_graph(1), q)
        vs = VarSpace.of_order(q)
        expected = Polynomial.zero(vs.names)
        for i in range(1, q + 1):
            expected = expected + Polynomial.variable(vs.names, f"x{i}")
        assert p == expected


def test_hom_poly_empty_graph_power():
    for n in (2, 3):
        for q in (2, 3):
            vs = VarSpace.of_order(q)
            xsum = Polynomial.zero(vs.names)
            for i in range(1, q + 1):
                xsum = xsum + Polynomial.variable(vs.names, f"x{i}")
            assert hom_poly(empty_graph(n), q) == xsum**n


def test_hom_poly_rejects_small_q():
    with pytest.raises(ValueError):
        hom_poly(path_graph(3), 1)


def test_hom_poly_budget():
    with pytest.raises(BudgetError):
        hom_poly(path_graph(3), 3, budget=26)


def test_degree_bounds(graphs_by_order):
    for g in graphs_by_order[5]:
        for q in (2, 3):
            p = hom_poly(g, q)
            for exps in p.terms:
                assert sum(exps[:q]) == g.n
                assert sum(exps[q:]) == g.m


def test_symmetry_under_class_permutation(graphs_by_order):
    rng = random.Random(3)
    for g in rng.sample(graphs_by_order[5], 10):
        p3 = hom_poly(g, 3)
        for perm in permutations((1, 2, 3)):
            assert permute_classes(p3, perm) == p3


def test_complete_closed_form_examples():
    vs = VarSpace.of_order(2)
    p = hom_poly_complete(2, 2)
    assert p.terms == {(2, 0, 1, 0, 0): 1, (1, 1, 0, 1, 0): 2, (0, 2, 0, 0, 1): 1}
    p13 = hom_poly_complete(1, 3)
    vs3 = VarSpace.of_order(3)
    expected = (
        Polynomial.variable(vs3.names, "x1")
        + Polynomial.variable(vs3.names, "x2")
        + Polynomial.variable(vs3.names, "x3")
    )
    assert p13 == expected
    p32 = hom_poly_complete(3, 2)
    assert p32.terms == {
        (3, 0, 3, 0, 0): 1,
        (2, 1, 1, 2, 0): 3,
        (1, 2, 0, 2, 1): 3,
        (0, 3, 0, 0, 3): 1,
    }


def test_complete_closed_form_matches_enumeration():
    for n in range(1, 8):
        for q in (2, 3, 4):
            assert hom_poly_complete(n, q) == hom_poly(complete_graph(n), q)


def test_complement_transform_examples():
    p = complement_transform(hom_poly(complete_graph(2), 2), 2, 2)
    assert p == hom_poly(empty_graph(2), 2)
    p3 = hom_poly(path_graph(3), 2)
    assert complement_transform(complement_transform(p3, 3, 2), 3, 2) == p3
    one_edge = from_edges(3, [(0, 2)])
    assert complement_transform(hom_poly(path_graph(3), 3), 3, 3) == hom_poly(one_edge, 3)


def test_complement_transform_rejects_invalid():
    p = hom_poly(complete_graph(3), 2)
    with pytest.raises(ValueError):
        complement_transform(p, 4, 2)  # wrong order
    vs = VarSpace.of_order(2)
    bogus = Polynomial.monomial(vs.names, (2, 0, 5, 0, 0), 1)  # too many edges for n=2
    with pytest.raises(ValueError):
        complement_transform(bogus, 2, 2)


def test_complement_property(graphs_by_order):
    for n in (4, 5):
        for g in graphs_by_order[n]:
            for q in (2, 3):
                assert complement_transform(hom_poly(g, q), n, q) == hom_poly(complement(g), q)


def test_restrict_order_examples():
    p3 = hom_poly(path_graph(3), 3)
    assert restrict_order(p3, 2) == hom_poly(path_graph(3), 2)
    assert restrict_order(hom_poly_complete(2, 3), 2) == hom_poly_complete(2, 2)
    assert restrict_order(p3, 3) == p3
    with pytest.raises(ValueError):
        restrict_order(p3, 1)


def test_restrict_order_property(graphs_by_order):
    for g in graphs_by_order[5]:
        assert restrict_order(hom_poly(g, 3), 2) == hom_poly(g, 2)


def test_multiplicativity(graphs_by_order):
    rng = random.Random(8)
    cases = []
    for n1 in range(1, 4):
        for n2 in range(1, 8 - n1 - 2):
            g1s = rng.sample(graphs_by_order[n1], min(3, len(graphs_by_order[n1])))
            g2s = rng.sample(graphs_by_order[n2], min(3, len(graphs_by_order[n2])))
            cases += [(a, b) for a in g1s for b in g2s]
    for g1, g2 in cases:
        for q in (2, 3):
            u = disjoint_union(g1, g2)
            assert hom_poly(u, q) == hom_poly(g1, q) * hom_poly(g2, q)


def test_via_complement_examples():
    c4 = cycle_graph(4)
    assert hom_poly_via_complement(c4, 2) == hom_poly(c4, 2)
    k2 = join(empty_graph(1), empty_graph(1))
    assert hom_poly_via_complement(k2, 3) == hom_poly_complete(2, 3)
    k111 = join(join(empty_graph(1), empty_graph(1)), empty_graph(1))
    assert hom_poly_via_complement(k111, 2) == hom_poly_complete(3, 2)


def test_via_complement_property(graphs_by_order):
    rng = random.Random(5)
    for g in rng.sample(graphs_by_order[6], 20):
        assert hom_poly_via_complement(g, 2) == hom_poly(g, 2)


def test_q2_subset_formulation(graphs_by_order):
    for n in (1, 3, 5, 6):
        for g in graphs_by_order[n]:
            assert hom_poly_q2_subsets(g) == hom_poly(g, 2)


def test_same_order_iso_check():
    assert not same_order_iso_check(path_graph(3), complete_graph(3), 3)
    shuffled = relabel(path_graph(3), (2, 0, 1))
    assert same_order_iso_check(path_graph(3), shuffled, 3)
    with pytest.raises(ValueError):
        same_order_iso_check(path_graph(3), complete_graph(4), 4)


def test_same_order_iso_check_exhaustive_n4(graphs_by_order):
    from graphpoly.graphs import canonical_key

    graphs = graphs_by_order[4]
    for i, g1 in enumerate(graphs):
        for g2 in graphs[i:]:
            expected = canonical_key(g1) == canonical_key(g2)
            assert same_order_iso_check(g1, g2, 4) == expected
