"""The order-q homomorphism polynomial P_q(G) and its structure theory.

The weight graph is the complete graph on q vertices with all loops, vertex
weights x_i and edge/loop weights y_{i,j}, so every map V(G) -> {1..q} is a
homomorphism and

    P_q(G) = sum over maps of  prod_v x_{phi(v)} * prod_{uv in E} y_{phi(u),phi(v)}.

Provided routes: direct enumeration, the closed form on complete graphs, the
complement transform, join composition, and order restriction.
"""

from __future__ import annotations

import math
from itertools import combinations

from .errors import check_budget
from .graphs import Graph, complement, components, edge_in_counts, iter_bits
from .polyring import Polynomial, VarSpace


def _compositions(n: int, q: int):
    """Ordered tuples of q nonnegative integers summing to n."""
    for cuts in combinations(range(n + q - 1), q - 1):
        prev = -1
        parts = []
        for c in cuts:
            parts.append(c - prev - 1)
            prev = c
        parts.append(n + q - 2 - prev)
        yield tuple(parts)


def hom_poly(g: Graph, q: int, budget: int | None = None) -> Polynomial:
    """P_q(G) by direct enumeration of all q^n maps.

    Maps are iterated as a base-q odometer over the vertices; the class sizes
    and pairwise edge counts are maintained incrementally, so each step costs
    O(deg) updates on the vertex whose digit changed.
    """
    vs = VarSpace.of_order(q)
    n = g.n
    check_budget(q**n, f"hom_poly(n={n}, q={q})", budget)

    nbrs = [tuple(iter_bits(row)) for row in g.adj]
    pair_index = [[vs.y_index(i + 1, j + 1) for j in range(q)] for i in range(q)]
    nvars = len(vs.names)

    color = [0] * n
    class_size = [0] * q
    class_size[0] = n
    stats = [0] * nvars
    stats[vs.y_index(1, 1)] = g.m

    def recolor(v: int, new: int) -> None:
        old = color[v]
        color[v] = new
        class_size[old] -= 1
        class_size[new] += 1
        row_old = pair_index[old]
        row_new = pair_index[new]
        for u in nbrs[v]:
            cu = color[u]
            stats[row_old[cu]] -= 1
            stats[row_new[cu]] += 1

    terms: dict[tuple[int, ...], int] = {}
    total = q**n
    for _ in range(total):
        key = tuple(class_size) + tuple(stats[q:])
        terms[key] = terms.get(key, 0) + 1
        # odometer increment with carries
        v = 0
        while v < n and color[v] == q - 1:
            recolor(v, 0)
            v += 1
        if v == n:
            break
        recolor(v, color[v] + 1)
    return Polynomial(vs.names, terms)


def hom_poly_complete(n: int, q: int) -> Polynomial:
    """P_q(K_n) in closed form over ordered partitions of n into q parts.

    A map with class sizes (n_1..n_q) is counted with multiplicity equal to
    the multinomial n!/(prod n_i!); it contributes y_{i,i}^C(n_i,2) for the
    edges inside class i and y_{i,j}^{n_i n_j} across classes.
    """
    if n < 1:
        raise ValueError("n must be positive")
    vs = VarSpace.of_order(q)
    nvars = len(vs.names)
    factorial_n = math.factorial(n)
    terms: dict[tuple[int, ...], int] = {}
    for parts in _compositions(n, q):
        exps = [0] * nvars
        coeff = factorial_n
        for i, ni in enumerate(parts):
            exps[i] = ni
            coeff //= math.factorial(ni)
            exps[vs.y_index(i + 1, i + 1)] = ni * (ni - 1) // 2
        for i in range(q):
            for j in range(i + 1, q):
                exps[vs.y_index(i + 1, j + 1)] = parts[i] * parts[j]
        key = tuple(exps)
        terms[key] = terms.get(key, 0) + coeff
    return Polynomial(vs.names, terms)


def _infer_order(p: Polynomial) -> int:
    nvars = len(p.vars)
    q = 2
    while 2 * q + math.comb(q, 2) < nvars:
        q += 1
    vs = VarSpace.of_order(q)
    if vs.names != p.vars:
        raise ValueError("polynomial is not over an order-q homomorphism variable space")
    return q


def complement_transform(p: Polynomial, n: int, q: int) -> Polynomial:
    """P_q(G) -> P_q(complement of G) monomial by monomial.

    Each monomial's class sizes are kept; its y-exponents flip to the
    complementary edge counts C(n_i,2) - e_{i,i} and n_i n_j - e_{i,j}.  A
    negative complement exponent means p was not a valid P_q of an n-vertex
    graph.
    """
    vs = VarSpace.of_order(q)
    if p.vars != vs.names:
        raise ValueError("polynomial is not over the expected variable space")
    nvars = len(vs.names)
    terms: dict[tuple[int, ...], int] = {}
    for exps, coeff in p.terms.items():
        sizes = exps[:q]
        if sum(sizes) != n:
            raise ValueError(f"monomial class sizes {sizes} do not sum to n={n}")
        out = list(exps)
        for i in range(q):
            for j in range(i, q):
                idx = vs.y_index(i + 1, j + 1)
                cap = sizes[i] * (sizes[i] - 1) // 2 if i == j else sizes[i] * sizes[j]
                flipped = cap - exps[idx]
                if flipped < 0:
                    raise ValueError(
                        f"edge exponent {exps[idx]} exceeds capacity {cap} at y{i + 1}_{j + 1}"
                    )
                out[idx] = flipped
        key = tuple(out)
        terms[key] = terms.get(key, 0) + coeff
    return Polynomial(vs.names, terms)


def restrict_order(p: Polynomial, q_new: int) -> Polynomial:
    """P_q(G) -> P_{q'}(G) for q' <= q by zeroing out the classes above q'."""
    q = _infer_order(p)
    if q_new < 2:
        raise ValueError(f"target order must be at least 2, got {q_new}")
    if q_new > q:
        raise ValueError(f"target order {q_new} exceeds current order {q}")
    result = p
    for k in range(q, q_new, -1):
        vs = VarSpace.of_order(k)
        drop = [vs.names[vs.x_index(k)]]
        drop += [vs.names[vs.y_index(i, k)] for i in range(1, k + 1)]
        result = result.restrict_zero(drop)
    return result


def hom_poly_via_complement(g: Graph, q: int, budget: int | None = None) -> Polynomial:
    """P_q(G) composed from the components of the complement.

    The complement's components multiply (disjoint union rule) and the
    complement transform recovers P_q(G); joins and complete multipartite
    graphs become cheap because their complements fall apart.
    """
    co = complement(g)
    comp_masks = components(co)
    cost = sum(q ** mask.bit_count() for mask in comp_masks)
    check_budget(cost, f"hom_poly_via_complement(n={g.n}, q={q})", budget)
    product: Polynomial | None = None
    for mask in comp_masks:
        verts = list(iter_bits(mask))
        index = {v: i for i, v in enumerate(verts)}
        rows = [0] * len(verts)
        for v in verts:
            for u in iter_bits(co.adj[v] & mask):
                rows[index[v]] |= 1 << index[u]
        sub = Graph(len(verts), tuple(rows))
        part = hom_poly(sub, q, budget)
        product = part if product is None else product * part
    assert product is not None
    return complement_transform(product, g.n, q)


def hom_poly_q2_subsets(g: Graph) -> Polynomial:
    """P_2(G) over the 2^n ordered bipartitions, with incremental edge counts.

    Same cost as generic map iteration but with one table lookup per subset;
    this is the formulation the classification pipeline keys on.
    """
    vs = VarSpace.of_order(2)
    n, m = g.n, g.m
    table = edge_in_counts(g)
    full = (1 << n) - 1
    terms: dict[tuple[int, ...], int] = {}
    for s in range(1 << n):
        k = s.bit_count()
        inside = table[s]
        outside = table[full ^ s]
        key = (k, n - k, inside, m - inside - outside, outside)
        terms[key] = terms.get(key, 0) + 1
    return Polynomial(vs.names, terms)


def permute_classes(p: Polynomial, perm: tuple[int, ...]) -> Polynomial:
    """Relabel weight-graph classes: class i becomes perm[i-1] (1-based values)."""
    q = _infer_order(p)
    vs = VarSpace.of_order(q)
    terms: dict[tuple[int, ...], int] = {}
    for exps, coeff in p.terms.items():
        out = [0] * len(exps)
        for i in range(q):
            out[vs.x_index(perm[i])] = exps[i]
        for i in range(1, q + 1):
            for j in range(i, q + 1):
                out[vs.y_index(perm[i - 1], perm[j - 1])] = exps[vs.y_index(i, j)]
        terms[tuple(out)] = coeff
    return Polynomial(vs.names, terms)


def same_order_iso_check(g1: Graph, g2: Graph, q: int) -> bool:
    """P_q equality for two graphs on exactly q vertices (equivalent to isomorphism)."""
    if g1.n != q or g2.n != q:
        raise ValueError(f"both graphs must have exactly q={q} vertices")
    return hom_poly(g1, q) == hom_poly(g2, q)
