import random
from itertools import combinations

import pytest

from graphpoly.errors import Graph6Error
from graphpoly.graphs import (
    Graph,
    basic_invariants,
    canonical_form,
    complement,
    complete_graph,
    cycle_graph,
    disjoint_union,
    empty_graph,
    enumerate_graphs,
    from_edges,
    join,
    line_graph,
    parse_graph6,
    path_graph,
    relabel,
    write_graph6,
)

EXPECTED_COUNTS = {1: 1, 2: 2, 3: 4, 4: 11, 5: 34, 6: 156, 7: 1044}


def test_parse_graph6_k2():
    g = parse_graph6("A_")
    assert g.n == 2 and g.edges() == [(0, 1)]


def test_parse_graph6_empty2():
    g = parse_graph6("A?")
    assert g.n == 2 and g.m == 0


def test_parse_graph6_k3():
    g = parse_graph6("Bw")
    assert g == complete_graph(3)


def test_write_graph6_examples():
    assert write_graph6(complete_graph(2)) == "A_"
    assert write_graph6(empty_graph(2)) == "A?"
    assert write_graph6(complete_graph(3)) == "Bw"


def test_parse_graph6_errors():
    with pytest.raises(Graph6Error):
        parse_graph6("A")  # missing payload byte
    with pytest.raises(Graph6Error):
        parse_graph6("A_?")  # extra payload byte
    with pytest.raises(Graph6Error):
        parse_graph6("A!")  # byte below 63
    with pytest.raises(Graph6Error):
        parse_graph6(chr(63 + 45) + "??")  # n = 45 > 31
    err = None
    try:
        parse_graph6("A!", line=17)
    except Graph6Error as exc:
        err = exc
    assert err is not None and "line 17" in str(err)


def test_roundtrip_all_small(graphs_by_order):
    for n in range(1, 8):
        for g in graphs_by_order[n]:
            assert parse_graph6(write_graph6(g)) == g


def test_graph_validation():
    with pytest.raises(ValueError):
        Graph(2, (1, 0))  # asymmetric
    with pytest.raises(ValueError):
        Graph(1, (1,))  # loop
    with pytest.raises(ValueError):
        Graph(0, ())
    with pytest.raises(ValueError):
        from_edges(2, [(0, 0)])


def test_complement_examples():
    assert complement(complete_graph(3)) == empty_graph(3)
    p3 = path_graph(3)
    assert complement(p3) == from_edges(3, [(0, 2)])
    assert complement(complement(p3)) == p3


def test_complement_involution(graphs_by_order):
    for g in graphs_by_order[6]:
        assert complement(complement(g)) == g


def test_disjoint_union_examples():
    k1 = empty_graph(1)
    assert disjoint_union(k1, k1) == empty_graph(2)
    g = disjoint_union(complete_graph(2), k1)
    assert g.n == 3 and g.edges() == [(0, 1)]
    g = disjoint_union(complete_graph(2), complete_graph(2))
    assert g.edges() == [(0, 1), (2, 3)]


def test_join_examples():
    k1 = empty_graph(1)
    assert join(k1, k1) == complete_graph(2)
    star = join(k1, empty_graph(2))
    assert sorted(star.degree(v) for v in range(3)) == [1, 1, 2]
    assert join(empty_graph(2), empty_graph(2)) == from_edges(4, [(0, 2), (0, 3), (1, 2), (1, 3)])


def test_join_complement_identity(graphs_by_order):
    rng = random.Random(1)
    pairs = []
    for n1 in range(1, 4):
        for n2 in range(1, 8 - n1 - 3):
            for g1 in rng.sample(graphs_by_order[n1], min(3, len(graphs_by_order[n1]))):
                for g2 in rng.sample(graphs_by_order[n2], min(3, len(graphs_by_order[n2]))):
                    pairs.append((g1, g2))
    for g1, g2 in pairs:
        expected = complement(disjoint_union(complement(g1), complement(g2)))
        assert join(g1, g2) == expected


def test_basic_invariants_k4():
    rec = basic_invariants(complete_graph(4))
    assert rec.m == 6
    assert rec.degree_sequence == (3, 3, 3, 3)
    assert rec.triangle_count == 4
    assert rec.edge_connectivity == 3
    assert rec.girth == 3
    assert not rec.is_bipartite


def test_basic_invariants_c5():
    rec = basic_invariants(cycle_graph(5))
    assert rec.m == 5
    assert rec.triangle_count == 0
    assert rec.edge_connectivity == 2
    assert rec.girth == 5
    assert not rec.is_bipartite


def test_basic_invariants_p3():
    rec = basic_invariants(path_graph(3))
    assert rec.m == 2
    assert rec.degree_sequence == (2, 1, 1)
    assert rec.triangle_count == 0
    assert rec.edge_connectivity == 1
    assert rec.girth == 0
    assert rec.is_bipartite


def test_invariant_consistency(graphs_by_order):
    for g in graphs_by_order[6]:
        rec = basic_invariants(g)
        assert sum(rec.degree_sequence) == 2 * rec.m
        assert sum(rec.component_sizes) == g.n
        if rec.degree_sequence:
            assert rec.edge_connectivity <= min(rec.degree_sequence)
        acyclic = rec.m == g.n - len(rec.component_sizes)
        assert (rec.girth == 0) == (rec.triangle_count == 0 and acyclic)


def test_canonical_form_relabeling_invariance(graphs_by_order):
    rng = random.Random(99)
    for g in rng.sample(graphs_by_order[6], 25) + rng.sample(graphs_by_order[7], 25):
        ref = canonical_form(g).graph6
        for _ in range(100):
            perm = list(range(g.n))
            rng.shuffle(perm)
            assert canonical_form(relabel(g, perm)).graph6 == ref


def test_canonical_form_distinguishes():
    assert canonical_form(path_graph(3)).graph6 != canonical_form(complete_graph(3)).graph6


def test_canonical_form_p4_vs_c4():
    p4, c4 = path_graph(4), cycle_graph(4)
    from itertools import permutations

    p4_strings = {canonical_form(relabel(p4, perm)).graph6 for perm in permutations(range(4))}
    c4_strings = {canonical_form(relabel(c4, perm)).graph6 for perm in permutations(range(4))}
    assert len(p4_strings) == 1 and len(c4_strings) == 1
    assert p4_strings != c4_strings


def test_canonical_permutation_is_witness(graphs_by_order):
    for g in graphs_by_order[5]:
        res = canonical_form(g)
        assert parse_graph6(res.graph6) == relabel(g, res.permutation)


def test_enumeration_counts(graphs_by_order):
    for n, expected in EXPECTED_COUNTS.items():
        assert len(graphs_by_order[n]) == expected


def test_enumeration_matches_exhaustive_n4():
    """Literal iteration over all 2^C(4,2) labeled graphs must give the same classes."""
    seen = set()
    pairs = list(combinations(range(4), 2))
    for mask in range(1 << 6):
        edges = [pairs[i] for i in range(6) if (mask >> i) & 1]
        seen.add(canonical_form(from_edges(4, edges)).graph6)
    assert seen == {write_graph6(g) for g in enumerate_graphs(4)}


def test_enumeration_bounds():
    with pytest.raises(ValueError):
        enumerate_graphs(0)
    with pytest.raises(ValueError):
        enumerate_graphs(8)


def test_line_graph():
    assert line_graph(path_graph(3)) == complete_graph(2)
    assert line_graph(complete_graph(3)) == complete_graph(3)
    lc5 = line_graph(cycle_graph(5))
    assert canonical_form(lc5).graph6 == canonical_form(cycle_graph(5)).graph6
