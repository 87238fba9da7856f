"""Edge-subset polynomials: random-cluster form, U-polynomial, strong U-polynomial.

Every edge subset A splits the vertex set into the components of (V, A); the
fast route is therefore a set-partition DP over vertex subsets, driven by a
profile of connected spanning subgraph counts.  A 2^m edge-subset oracle with
union-find guards the DP at small m.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import BudgetError
from .graphs import Graph, edge_in_counts, iter_bits
from .polyring import Polynomial

RC_VARS = ("p", "q")


@dataclass(frozen=True)
class ConnectedSpanningProfile:
    """For each vertex subset S (as a bitmask), the counts of connected spanning
    edge subsets of G[S] indexed by excess |A| - (|S| - 1); empty for
    disconnected G[S]."""

    n: int
    counts: tuple[tuple[int, ...], ...]

    def __getitem__(self, mask: int) -> tuple[int, ...]:
        return self.counts[mask]


def connected_spanning_profile(g: Graph) -> ConnectedSpanningProfile:
    """Inclusion-exclusion over the component of the lowest vertex:

    conn(S) = all(S) - sum over proper T containing min(S) of conn(T)*all(S-T),
    where all(S) has binomial counts (1+z)^(edges inside S), graded by |A|.
    """
    n = g.n
    if n > 16:
        raise BudgetError(f"connected spanning profile supported up to n=16, got {n}")
    inside = edge_in_counts(g)
    # by_size[mask][a] = connected spanning subsets of G[mask] with a edges
    by_size: list[tuple[int, ...]] = [()] * (1 << n)
    from math import comb

    for mask in range(1, 1 << n):
        size = mask.bit_count()
        e = inside[mask]
        total = [comb(e, a) for a in range(e + 1)]
        low = mask & -mask
        rest = mask ^ low
        sub = rest
        while True:
            if sub != rest:  # proper subset of mask containing the lowest vertex
                part = sub | low
                conn_part = by_size[part]
                if conn_part:
                    base = part.bit_count() - 1  # excess index -> edge count
                    e_other = inside[mask ^ part]
                    for x, ca in enumerate(conn_part):
                        if ca:
                            a = base + x
                            for b in range(e_other + 1):
                                total[a + b] -= ca * comb(e_other, b)
            if sub == 0:
                break
            sub = (sub - 1) & rest
        # shift from edge count to excess; a connected spanning subgraph of
        # G[mask] needs at least size-1 edges
        shift = size - 1
        assert all(c == 0 for c in total[:shift]), "undercounted connected subsets"
        trimmed = total[shift:]
        while trimmed and trimmed[-1] == 0:
            trimmed.pop()
        by_size[mask] = tuple(trimmed)
    return ConnectedSpanningProfile(n, tuple(by_size))


def _partition_dp(g: Graph, block_label, combine_key):
    """Run the set-partition DP with per-block labels.

    block_label(size, excess) -> hashable label for one connected block;
    combine_key(acc_key, label) -> new accumulated key.  Returns the map
    from accumulated keys to counts over all edge subsets of g.
    """
    n = g.n
    profile = connected_spanning_profile(g)
    empty_key = ()
    table: list[dict | None] = [None] * (1 << n)
    table[0] = {empty_key: 1}
    for mask in range(1, 1 << n):
        low = mask & -mask
        rest = mask ^ low
        acc: dict = {}
        sub = rest
        while True:
            block = sub | low  # block containing the lowest vertex of mask
            conn = profile[block]
            if conn:
                other = table[mask ^ block]
                bsize = block.bit_count()
                for excess, cnt in enumerate(conn):
                    if not cnt:
                        continue
                    label = block_label(bsize, excess)
                    for key, kcnt in other.items():
                        new_key = combine_key(key, label)
                        acc[new_key] = acc.get(new_key, 0) + cnt * kcnt
            if sub == 0:
                break
            sub = (sub - 1) & rest
        table[mask] = acc
    return table[(1 << n) - 1]


def _sorted_insert(key: tuple, label) -> tuple:
    out = list(key)
    out.append(label)
    out.sort()
    return tuple(out)


def random_cluster(g: Graph) -> Polynomial:
    """T(G,p,q) = sum over edge subsets A of p^|A| (1-p)^(m-|A|) q^k(A), expanded.

    DP route: the set-partition convolution, keyed on (|A|, component count).
    """
    from math import comb

    m = g.m
    counts = _partition_dp(
        g,
        block_label=lambda size, excess: (size - 1 + excess, 1),
        combine_key=lambda key, label: (key[0] + label[0], key[1] + label[1]) if key else label,
    )
    # counts: (|A|, k) -> number of subsets; expand p^a (1-p)^(m-a) q^k
    terms: dict[tuple[int, int], int] = {}
    for (a, k), cnt in counts.items():
        for j in range(m - a + 1):
            coeff = cnt * comb(m - a, j) * (-1) ** j
            key = (a + j, k)
            new = terms.get(key, 0) + coeff
            if new:
                terms[key] = new
            else:
                terms.pop(key, None)
    return Polynomial(RC_VARS, terms)


def u_polynomial(g: Graph) -> Polynomial:
    """U(G) = sum over edge subsets of y^(|A|-r(A)) * prod over components x_size.

    Component sizes are recorded in variables u1..un; isolated vertices count
    as components of size 1.
    """
    n = g.n
    counts = _partition_dp(
        g,
        block_label=lambda size, excess: (size, excess),
        combine_key=_sorted_insert,
    )
    variables = tuple(f"u{s}" for s in range(1, n + 1)) + ("y",)
    terms: dict[tuple[int, ...], int] = {}
    for blocks, cnt in counts.items():
        exps = [0] * (n + 1)
        for size, excess in blocks:
            exps[size - 1] += 1
            exps[n] += excess
        key = tuple(exps)
        terms[key] = terms.get(key, 0) + cnt
    return Polynomial(variables, terms)


def strong_u_polynomial(g: Graph) -> Polynomial:
    """Strong U-polynomial: each component H of (V,A) contributes
    x_{|H|, |E(H)|-|H|+1}, i.e. size and cyclomatic excess per block.

    Variables are named u<size>_<excess>."""
    counts = _partition_dp(
        g,
        block_label=lambda size, excess: (size, excess),
        combine_key=_sorted_insert,
    )
    labels = sorted({lab for blocks in counts for lab in blocks})
    variables = tuple(f"u{s}_{c}" for s, c in labels)
    index = {lab: i for i, lab in enumerate(labels)}
    terms: dict[tuple[int, ...], int] = {}
    for blocks, cnt in counts.items():
        exps = [0] * len(labels)
        for lab in blocks:
            exps[index[lab]] += 1
        key = tuple(exps)
        terms[key] = terms.get(key, 0) + cnt
    return Polynomial(variables, terms)


def su_to_u(su: Polynomial, n: int) -> Polynomial:
    """Forget the per-block excess: x_{s,c} -> x_s * y^c recovers U(G)."""
    variables = tuple(f"u{s}" for s in range(1, n + 1)) + ("y",)
    mapping: dict[str, Polynomial] = {}
    for name in su.vars:
        s, c = name[1:].split("_")
        target = Polynomial.monomial(variables, _unit_exps(variables, f"u{s}", int(c)), 1)
        mapping[name] = target
    return su.substitute(mapping, strict=True) if su.vars else Polynomial(variables, {(0,) * len(variables): su.terms.get((), 0)})


def _unit_exps(variables: tuple[str, ...], name: str, yexp: int) -> tuple[int, ...]:
    exps = [0] * len(variables)
    exps[variables.index(name)] = 1
    exps[-1] = yexp
    return tuple(exps)


def u_to_random_cluster(u: Polynomial, n: int, m: int) -> Polynomial:
    """Specialize U to the random-cluster form: x_s -> q*y^(s-1) turns the
    y-grade into |A|, then y -> p/(1-p) with the (1-p)^m normalization."""
    from math import comb

    inter_vars = ("q", "y")
    mapping: dict[str, Polynomial] = {}
    for s in range(1, n + 1):
        mapping[f"u{s}"] = Polynomial.monomial(inter_vars, (1, s - 1), 1)
    mapping["y"] = Polynomial.variable(inter_vars, "y")
    flat = u.substitute(mapping, strict=True)
    assert flat.vars == ("q", "y")
    terms: dict[tuple[int, int], int] = {}
    for (k, a), cnt in flat.terms.items():
        for j in range(m - a + 1):
            coeff = cnt * comb(m - a, j) * (-1) ** j
            key = (a + j, k)
            new = terms.get(key, 0) + coeff
            if new:
                terms[key] = new
            else:
                terms.pop(key, None)
    return Polynomial(RC_VARS, terms)


# ---------------------------------------------------------------------------
# 2^m edge-subset oracle
# ---------------------------------------------------------------------------

def _edge_subset_scan(g: Graph):
    """Yield (edge_count, sorted block (size, excess) tuple) for every A subset of E.

    Recursive include/exclude over edges with an undoable union-find, so the
    whole scan costs O(2^m) amortized instead of O(2^m * m).
    """
    edges = g.edges()
    m = len(edges)
    if m > 24:
        raise BudgetError(f"edge-subset oracle supported up to m=24, got {m}")
    n = g.n
    parent = list(range(n))
    rank = [0] * n
    comp_edges = [0] * n  # edge count per root

    def find(x: int) -> int:
        while parent[x] != x:
            x = parent[x]
        return x

    results = []

    def emit(chosen: int):
        sizes: dict[int, list[int]] = {}
        for v in range(n):
            sizes.setdefault(find(v), [0, 0])[0] += 1
        blocks = []
        for root, pair in sizes.items():
            size = pair[0]
            excess = comp_edges[root] - (size - 1)
            blocks.append((size, excess))
        blocks.sort()
        results.append((chosen, tuple(blocks)))

    def rec(i: int, chosen: int):
        if i == m:
            emit(chosen)
            return
        rec(i + 1, chosen)  # exclude edge i
        u, v = edges[i]
        ru, rv = find(u), find(v)
        if ru == rv:
            comp_edges[ru] += 1
            rec(i + 1, chosen + 1)
            comp_edges[ru] -= 1
        else:
            if rank[ru] < rank[rv]:
                ru, rv = rv, ru
            parent[rv] = ru
            bumped = rank[ru] == rank[rv]
            if bumped:
                rank[ru] += 1
            saved = comp_edges[ru]
            comp_edges[ru] += comp_edges[rv] + 1
            rec(i + 1, chosen + 1)
            comp_edges[ru] = saved
            parent[rv] = rv
            if bumped:
                rank[ru] -= 1

    rec(0, 0)
    return results


def u_polynomial_oracle(g: Graph) -> Polynomial:
    n = g.n
    variables = tuple(f"u{s}" for s in range(1, n + 1)) + ("y",)
    terms: dict[tuple[int, ...], int] = {}
    for _, blocks in _edge_subset_scan(g):
        exps = [0] * (n + 1)
        for size, excess in blocks:
            exps[size - 1] += 1
            exps[n] += excess
        key = tuple(exps)
        terms[key] = terms.get(key, 0) + 1
    return Polynomial(variables, terms)


def strong_u_polynomial_oracle(g: Graph) -> Polynomial:
    scan = _edge_subset_scan(g)
    labels = sorted({lab for _, blocks in scan for lab in blocks})
    variables = tuple(f"u{s}_{c}" for s, c in labels)
    index = {lab: i for i, lab in enumerate(labels)}
    terms: dict[tuple[int, ...], int] = {}
    for _, blocks in scan:
        exps = [0] * len(labels)
        for lab in blocks:
            exps[index[lab]] += 1
        key = tuple(exps)
        terms[key] = terms.get(key, 0) + 1
    return Polynomial(variables, terms)


def random_cluster_oracle(g: Graph) -> Polynomial:
    from math import comb

    m = g.m
    terms: dict[tuple[int, int], int] = {}
    for a, blocks in _edge_subset_scan(g):
        k = len(blocks)
        for j in range(m - a + 1):
            coeff = comb(m - a, j) * (-1) ** j
            key = (a + j, k)
            new = terms.get(key, 0) + coeff
            if new:
                terms[key] = new
            else:
                terms.pop(key, None)
    return Polynomial(RC_VARS, terms)
