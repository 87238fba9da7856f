"""Simple undirected graphs on at most 31 vertices, stored as per-vertex bitsets.

Covers graph6 I/O, the complement/union/join operators, the cheap invariants
used by the classification pipeline, canonical labeling, and exhaustive
enumeration of small orders.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator

from .errors import BudgetError, Graph6Error

MAX_VERTICES = 31


def iter_bits(mask: int) -> Iterator[int]:
    """Indices of the set bits of mask, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class Graph:
    """Loop-free symmetric adjacency; bit j of adj[i] is set iff {i,j} is an edge."""

    n: int
    adj: tuple[int, ...]

    def __post_init__(self):
        if not 1 <= self.n <= MAX_VERTICES:
            raise ValueError(f"vertex count {self.n} outside 1..{MAX_VERTICES}")
        if len(self.adj) != self.n:
            raise ValueError("adjacency row count does not match n")
        full = (1 << self.n) - 1
        for i, row in enumerate(self.adj):
            if row & ~full:
                raise ValueError(f"row {i} has bits outside the vertex range")
            if (row >> i) & 1:
                raise ValueError(f"loop at vertex {i}")
        for i in range(self.n):
            for j in iter_bits(self.adj[i]):
                if not (self.adj[j] >> i) & 1:
                    raise ValueError(f"asymmetric adjacency at {{{i},{j}}}")

    @property
    def m(self) -> int:
        return sum(row.bit_count() for row in self.adj) // 2

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def has_edge(self, u: int, v: int) -> bool:
        return bool((self.adj[u] >> v) & 1)

    def edges(self) -> list[tuple[int, int]]:
        out = []
        for i in range(self.n):
            row = self.adj[i] >> (i + 1)
            for j in iter_bits(row):
                out.append((i, i + 1 + j))
        return out


def from_edges(n: int, edges) -> Graph:
    rows = [0] * n
    for u, v in edges:
        if u == v:
            raise ValueError(f"loop at vertex {u}")
        rows[u] |= 1 << v
        rows[v] |= 1 << u
    return Graph(n, tuple(rows))


def empty_graph(n: int) -> Graph:
    return Graph(n, (0,) * n)


def complete_graph(n: int) -> Graph:
    full = (1 << n) - 1
    return Graph(n, tuple(full ^ (1 << i) for i in range(n)))


def path_graph(n: int) -> Graph:
    return from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    return from_edges(n, [(i, (i + 1) % n) for i in range(n)])


# ---------------------------------------------------------------------------
# graph6 (short form, n <= 31: one length byte, then 6-bit groups of the
# column-major upper triangle x(0,1), x(0,2), x(1,2), x(0,3), ...)
# ---------------------------------------------------------------------------

def parse_graph6(text: str, line: int | None = None) -> Graph:
    record = text.strip()
    if not record:
        raise Graph6Error("empty graph6 record", line)
    data = record.encode("ascii", errors="replace")
    for b in data:
        if not 63 <= b <= 126:
            raise Graph6Error(f"byte {b} outside graph6 range [63,126]", line)
    n = data[0] - 63
    if not 1 <= n <= MAX_VERTICES:
        raise Graph6Error(f"vertex count {n} outside 1..{MAX_VERTICES}", line)
    npairs = n * (n - 1) // 2
    expect = (npairs + 5) // 6
    if len(data) - 1 != expect:
        raise Graph6Error(
            f"graph6 record for n={n} needs {expect} payload bytes, got {len(data) - 1}", line
        )
    rows = [0] * n
    idx = 0
    for b in data[1:]:
        group = b - 63
        for k in range(5, -1, -1):
            if idx >= npairs:
                break
            if (group >> k) & 1:
                i, j = _PAIR_CACHE.setdefault(n, _pair_list(n))[idx]
                rows[i] |= 1 << j
                rows[j] |= 1 << i
            idx += 1
    return Graph(n, tuple(rows))


def _pair_list(n: int) -> list[tuple[int, int]]:
    return [(i, j) for j in range(1, n) for i in range(j)]


_PAIR_CACHE: dict[int, list[tuple[int, int]]] = {}


def write_graph6(g: Graph) -> str:
    n = g.n
    out = [n + 63]
    group = 0
    nbits = 0
    for i, j in _PAIR_CACHE.setdefault(n, _pair_list(n)):
        group = (group << 1) | ((g.adj[i] >> j) & 1)
        nbits += 1
        if nbits == 6:
            out.append(group + 63)
            group = 0
            nbits = 0
    if nbits:
        out.append((group << (6 - nbits)) + 63)
    return bytes(out).decode("ascii")


def read_graph6_file(path) -> list[Graph]:
    """Newline-delimited graph6 records, one graph per line."""
    graphs = []
    with open(path, "r", encoding="ascii") as fh:
        for lineno, raw in enumerate(fh, start=1):
            record = raw.strip()
            if not record:
                continue
            graphs.append(parse_graph6(record, line=lineno))
    return graphs


# ---------------------------------------------------------------------------
# construction operators
# ---------------------------------------------------------------------------

def complement(g: Graph) -> Graph:
    full = (1 << g.n) - 1
    return Graph(g.n, tuple((full ^ row ^ (1 << i)) for i, row in enumerate(g.adj)))


def disjoint_union(g1: Graph, g2: Graph) -> Graph:
    n = g1.n + g2.n
    if n > MAX_VERTICES:
        raise ValueError(f"union on {n} vertices exceeds {MAX_VERTICES}")
    rows = list(g1.adj) + [row << g1.n for row in g2.adj]
    return Graph(n, tuple(rows))


def join(g1: Graph, g2: Graph) -> Graph:
    n = g1.n + g2.n
    if n > MAX_VERTICES:
        raise ValueError(f"join on {n} vertices exceeds {MAX_VERTICES}")
    left = ((1 << n) - 1) ^ ((1 << g1.n) - 1)
    right = (1 << g1.n) - 1
    rows = [row | left for row in g1.adj]
    rows += [(row << g1.n) | right for row in g2.adj]
    return Graph(n, tuple(rows))


def relabel(g: Graph, perm) -> Graph:
    """Apply a vertex permutation; perm[old] = new."""
    rows = [0] * g.n
    for i in range(g.n):
        for j in iter_bits(g.adj[i]):
            rows[perm[i]] |= 1 << perm[j]
    return Graph(g.n, tuple(rows))


def line_graph(g: Graph) -> Graph:
    """Vertices are the edges of g (in sorted order); adjacency is sharing an endpoint."""
    edges = g.edges()
    if len(edges) > MAX_VERTICES:
        raise ValueError(f"line graph on {len(edges)} vertices exceeds {MAX_VERTICES}")
    if not edges:
        raise ValueError("line graph of an edgeless graph is empty")
    lg_edges = []
    for a in range(len(edges)):
        for b in range(a + 1, len(edges)):
            if set(edges[a]) & set(edges[b]):
                lg_edges.append((a, b))
    return from_edges(len(edges), lg_edges)


# ---------------------------------------------------------------------------
# cheap invariants
# ---------------------------------------------------------------------------

def edge_in_counts(g: Graph) -> list[int]:
    """edge_in_counts(g)[S] = number of edges of g inside vertex subset S.

    Table of size 2^n; the workhorse behind bipartition-style enumerations.
    """
    n = g.n
    if n > 20:
        raise BudgetError(f"edge subset table for n={n} would need 2^{n} entries")
    adj = g.adj
    table = [0] * (1 << n)
    for s in range(1, 1 << n):
        low = s & -s
        v = low.bit_length() - 1
        rest = s ^ low
        table[s] = table[rest] + (adj[v] & rest).bit_count()
    return table


def components(g: Graph) -> list[int]:
    """Vertex masks of the connected components, ordered by smallest member."""
    seen = 0
    out = []
    full = (1 << g.n) - 1
    while seen != full:
        start = (~seen) & -(~seen)
        comp = start
        frontier = start
        while frontier:
            nxt = 0
            for v in iter_bits(frontier):
                nxt |= g.adj[v]
            frontier = nxt & ~comp
            comp |= frontier
        out.append(comp)
        seen |= comp
    return out


def is_connected(g: Graph) -> bool:
    return len(components(g)) == 1


@dataclass(frozen=True)
class InvariantRecord:
    n: int
    m: int
    degree_sequence: tuple[int, ...]
    triangle_count: int
    edge_connectivity: int
    girth: int
    is_bipartite: bool
    component_sizes: tuple[int, ...]


def triangle_count(g: Graph) -> int:
    total = 0
    for i, j in g.edges():
        total += (g.adj[i] & g.adj[j]).bit_count()
    return total // 3


def girth(g: Graph) -> int:
    """Length of a shortest cycle; 0 when g is acyclic."""
    best = 0
    n = g.n
    for root in range(n):
        dist = [-1] * n
        parent = [-1] * n
        dist[root] = 0
        queue = [root]
        qi = 0
        while qi < len(queue):
            u = queue[qi]
            qi += 1
            if best and dist[u] * 2 >= best:
                break
            for w in iter_bits(g.adj[u]):
                if dist[w] < 0:
                    dist[w] = dist[u] + 1
                    parent[w] = u
                    queue.append(w)
                elif w != parent[u] and dist[w] >= dist[u]:
                    cycle = dist[u] + dist[w] + 1
                    if best == 0 or cycle < best:
                        best = cycle
    return best


def bipartite(g: Graph) -> bool:
    color = [-1] * g.n
    for root in range(g.n):
        if color[root] >= 0:
            continue
        color[root] = 0
        queue = [root]
        qi = 0
        while qi < len(queue):
            u = queue[qi]
            qi += 1
            for w in iter_bits(g.adj[u]):
                if color[w] < 0:
                    color[w] = color[u] ^ 1
                    queue.append(w)
                elif color[w] == color[u]:
                    return False
    return True


def edge_connectivity(g: Graph) -> int:
    """Global min cut by exhaustive bipartition scan; 0 for disconnected graphs."""
    if not is_connected(g):
        return 0
    n = g.n
    if n == 1:
        return 0
    table = edge_in_counts(g)
    m = g.m
    full = (1 << n) - 1
    best = m
    # subsets containing vertex 0 cover every bipartition once
    for s in range(1 << (n - 1)):
        mask = (s << 1) | 1
        if mask == full:
            continue
        cut = m - table[mask] - table[full ^ mask]
        if cut < best:
            best = cut
    return best


def basic_invariants(g: Graph) -> InvariantRecord:
    degs = tuple(sorted((g.degree(v) for v in range(g.n)), reverse=True))
    comps = tuple(sorted(c.bit_count() for c in components(g)))
    return InvariantRecord(
        n=g.n,
        m=g.m,
        degree_sequence=degs,
        triangle_count=triangle_count(g),
        edge_connectivity=edge_connectivity(g),
        girth=girth(g),
        is_bipartite=bipartite(g),
        component_sizes=comps,
    )


# ---------------------------------------------------------------------------
# canonical labeling: equitable refinement + individualization search for the
# lexicographically smallest upper-triangle adjacency encoding
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CanonicalGraph:
    graph6: str
    permutation: tuple[int, ...]  # permutation[old] = new


def _refine(adj: tuple[int, ...], cells: list[list[int]]) -> list[list[int]]:
    while True:
        masks = []
        for cell in cells:
            m = 0
            for v in cell:
                m |= 1 << v
            masks.append(m)
        changed = False
        for w_mask in masks:
            new_cells: list[list[int]] = []
            for cell in cells:
                if len(cell) == 1:
                    new_cells.append(cell)
                    continue
                groups: dict[int, list[int]] = {}
                for v in cell:
                    groups.setdefault((adj[v] & w_mask).bit_count(), []).append(v)
                if len(groups) == 1:
                    new_cells.append(cell)
                else:
                    changed = True
                    for key in sorted(groups):
                        new_cells.append(groups[key])
            cells = new_cells
            if changed:
                break
        if not changed:
            return cells


def _orbit_reps(n: int, gens: list[tuple[int, ...]]) -> list[int]:
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for p in gens:
        for v in range(n):
            a, b = find(v), find(p[v])
            if a != b:
                parent[a] = b
    return [find(v) for v in range(n)]


def canonical_form(g: Graph) -> CanonicalGraph:
    n = g.n
    if n > 16:
        raise BudgetError(f"canonical labeling supported up to 16 vertices, got {n}")
    adj = g.adj
    if n == 1:
        return CanonicalGraph(write_graph6(g), (0,))
    pairs = _PAIR_CACHE.setdefault(n, _pair_list(n))

    by_deg: dict[int, list[int]] = {}
    for v in range(n):
        by_deg.setdefault(adj[v].bit_count(), []).append(v)
    initial = [by_deg[d] for d in sorted(by_deg)]

    best_cert: int | None = None
    best_order: list[int] | None = None
    gens: list[tuple[int, ...]] = []

    def certificate(order: list[int]) -> int:
        cert = 0
        for i, j in pairs:
            cert = (cert << 1) | ((adj[order[i]] >> order[j]) & 1)
        return cert

    def search(cells: list[list[int]], base: list[int]) -> None:
        nonlocal best_cert, best_order
        cells = _refine(adj, cells)
        target = -1
        for ci, cell in enumerate(cells):
            if len(cell) > 1:
                target = ci
                break
        if target < 0:
            order = [cell[0] for cell in cells]
            cert = certificate(order)
            if best_cert is None or cert < best_cert:
                best_cert = cert
                best_order = order
            elif cert == best_cert:
                gamma = [0] * n
                for k in range(n):
                    gamma[order[k]] = best_order[k]
                if gamma != list(range(n)):
                    gens.append(tuple(gamma))
            return
        cell = sorted(cells[target])
        explored: list[int] = []
        for v in cell:
            if explored:
                fixing = [p for p in gens if all(p[b] == b for b in base)]
                if fixing:
                    reps = _orbit_reps(n, fixing)
                    if any(reps[v] == reps[u] for u in explored):
                        continue
            child = cells[:target] + [[v], [u for u in cell if u != v]] + cells[target + 1:]
            search(child, base + [v])
            explored.append(v)

    search(initial, [])
    assert best_order is not None
    perm = [0] * n
    for new, old in enumerate(best_order):
        perm[old] = new
    return CanonicalGraph(write_graph6(relabel(g, perm)), tuple(perm))


def canonical_key(g: Graph) -> str:
    return canonical_form(g).graph6


# ---------------------------------------------------------------------------
# enumeration of pairwise non-isomorphic graphs
# ---------------------------------------------------------------------------

def extend_representatives(reps: list[Graph], progress: Callable[[int, int], None] | None = None) -> list[Graph]:
    """All isomorphism classes on n+1 vertices, from the classes on n vertices.

    Every (n+1)-vertex graph is some n-vertex graph plus one new vertex, so
    attaching the new vertex by every possible neighborhood and deduplicating
    canonically is exhaustive.  Output is sorted by canonical graph6 string.
    """
    if not reps:
        raise ValueError("no representatives to extend")
    k = reps[0].n + 1
    seen: set[str] = set()
    for idx, base in enumerate(reps):
        if progress is not None:
            progress(idx, len(reps))
        rows_base = base.adj
        for mask in range(1 << (k - 1)):
            rows = [row | ((mask >> i & 1) << (k - 1)) for i, row in enumerate(rows_base)]
            rows.append(mask)
            g = Graph(k, tuple(rows))
            seen.add(canonical_form(g).graph6)
    return [parse_graph6(s) for s in sorted(seen)]


def enumerate_graphs(n: int) -> list[Graph]:
    """One representative per isomorphism class, n <= 7."""
    if not 1 <= n <= 7:
        raise ValueError(f"direct enumeration supported for 1 <= n <= 7, got {n}")
    reps = [Graph(1, (0,))]
    for _ in range(n - 1):
        reps = extend_representatives(reps)
    return reps
