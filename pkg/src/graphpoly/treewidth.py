"""Exact treewidth, tree decompositions, and the width-parameterized P_q program.

Treewidth comes from the elimination-ordering DP over vertex subsets; the
polynomial is evaluated bottom-up over a nice decomposition with tables of
size q^(bag size).  The complement-side shortcut picks whichever of G and its
complement has the smaller width.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import BudgetError
from .graphs import Graph, complement, iter_bits
from .homopoly import complement_transform
from .polyring import Polynomial, VarSpace


@dataclass(frozen=True)
class TreeDecomposition:
    """bags[k] is a sorted vertex tuple; parent[k] is the tree link (-1 at the root)."""

    bags: tuple[tuple[int, ...], ...]
    parent: tuple[int, ...]

    @property
    def width(self) -> int:
        return max(len(bag) for bag in self.bags) - 1

    def to_pace_text(self, n: int) -> str:
        lines = [f"s td {len(self.bags)} {self.width + 1} {n}"]
        for i, bag in enumerate(self.bags):
            lines.append(f"b {i + 1} " + " ".join(str(v + 1) for v in bag))
        for i, p in enumerate(self.parent):
            if p >= 0:
                lines.append(f"{p + 1} {i + 1}")
        return "\n".join(lines)


def validate_decomposition(g: Graph, td: TreeDecomposition) -> None:
    n = g.n
    if len(td.bags) != len(td.parent):
        raise ValueError("bag/parent length mismatch")
    covered = 0
    for bag in td.bags:
        for v in bag:
            if not 0 <= v < n:
                raise ValueError(f"bag vertex {v} out of range")
            covered |= 1 << v
    if covered != (1 << n) - 1:
        raise ValueError("some vertex appears in no bag")
    # tree shape: exactly one root, parents acyclic
    roots = [i for i, p in enumerate(td.parent) if p < 0]
    if len(roots) != 1:
        raise ValueError(f"expected one root, found {len(roots)}")
    for i, p in enumerate(td.parent):
        seen = {i}
        j = p
        while j >= 0:
            if j in seen:
                raise ValueError("parent links contain a cycle")
            seen.add(j)
            j = td.parent[j]
    # every edge inside some bag
    bag_masks = []
    for bag in td.bags:
        mask = 0
        for v in bag:
            mask |= 1 << v
        bag_masks.append(mask)
    for u, v in g.edges():
        edge = (1 << u) | (1 << v)
        if not any(mask & edge == edge for mask in bag_masks):
            raise ValueError(f"edge {{{u},{v}}} not contained in any bag")
    # connectivity: bags containing each vertex form a subtree
    for v in range(n):
        holders = [i for i, mask in enumerate(bag_masks) if (mask >> v) & 1]
        if not holders:
            raise ValueError(f"vertex {v} in no bag")
        holder_set = set(holders)
        # each holder except the shallowest must reach another holder via its parent
        anchors = 0
        for i in holders:
            p = td.parent[i]
            if p < 0 or p not in holder_set:
                anchors += 1
        if anchors != 1:
            raise ValueError(f"bags containing vertex {v} are not connected in the tree")


def _reachable_neighbors(adj, v: int, through: int) -> int:
    """Vertices outside `through` u {v} connected to v by a path inside `through`."""
    comp = 1 << v
    frontier = 1 << v
    reach = 0
    while frontier:
        nxt = 0
        for u in iter_bits(frontier):
            nxt |= adj[u]
        reach |= nxt
        frontier = nxt & through & ~comp
        comp |= frontier
    return reach & ~through & ~(1 << v)


def exact_treewidth(g: Graph) -> tuple[int, TreeDecomposition]:
    """Optimal width via the subset DP over elimination orderings.

    dp[S] = width of the best ordering that eliminates exactly S first, where
    eliminating v after S costs the number of not-yet-eliminated vertices
    reachable from v through S.
    """
    n = g.n
    if n > 16:
        raise BudgetError(f"exact treewidth supported up to n=16, got {n}")
    adj = g.adj
    if n == 1:
        return 0, TreeDecomposition(((0,),), (-1,))
    size = 1 << n
    dp = [0] * size
    choice = [-1] * size
    for s in range(1, size):
        best = n  # upper bound: any width is < n
        pick = -1
        for v in iter_bits(s):
            rest = s ^ (1 << v)
            cost = _reachable_neighbors(adj, v, rest).bit_count()
            cand = dp[rest] if dp[rest] > cost else cost
            if cand < best:
                best = cand
                pick = v
        dp[s] = best
        choice[s] = pick
    width = dp[size - 1]

    # recover the elimination order (choice[S] is eliminated last within S)
    order = []
    s = size - 1
    while s:
        v = choice[s]
        order.append(v)
        s ^= 1 << v
    order.reverse()

    # simulate elimination with fill-in to build the bags
    work = list(adj)
    remaining = size - 1
    position = {v: i for i, v in enumerate(order)}
    bags = []
    for v in order:
        remaining ^= 1 << v
        nbrs = work[v] & remaining
        bags.append(tuple(sorted([v] + list(iter_bits(nbrs)))))
        for a in iter_bits(nbrs):
            work[a] |= nbrs & ~(1 << a)
    parent = []
    for i, v in enumerate(order):
        later = [u for u in bags[i] if u != v]
        if later:
            parent.append(position[min(later, key=lambda u: position[u])])
        elif i + 1 < len(order):
            parent.append(i + 1)  # isolated component: hang onto the next bag
        else:
            parent.append(-1)
    td = TreeDecomposition(tuple(bags), tuple(parent))
    validate_decomposition(g, td)
    assert td.width == width, (td.width, width)
    return width, td


# ---------------------------------------------------------------------------
# nice decomposition and the DP
# ---------------------------------------------------------------------------

@dataclass
class _Nice:
    kind: str  # "leaf" | "introduce" | "forget" | "join"
    bag: tuple[int, ...]
    vertex: int = -1
    children: tuple = ()


def _nicify(td: TreeDecomposition) -> _Nice:
    kids: dict[int, list[int]] = {}
    root = -1
    for i, p in enumerate(td.parent):
        if p < 0:
            root = i
        else:
            kids.setdefault(p, []).append(i)

    def chain_from_empty(bag: tuple[int, ...]) -> _Nice:
        node = _Nice("leaf", ())
        current: tuple[int, ...] = ()
        for v in bag:
            current = tuple(sorted(current + (v,)))
            node = _Nice("introduce", current, v, (node,))
        return node

    def morph(node: _Nice, source: tuple[int, ...], target: tuple[int, ...]) -> _Nice:
        current = source
        for v in sorted(set(source) - set(target)):
            current = tuple(u for u in current if u != v)
            node = _Nice("forget", current, v, (node,))
        for v in sorted(set(target) - set(current)):
            current = tuple(sorted(current + (v,)))
            node = _Nice("introduce", current, v, (node,))
        return node

    def build(i: int) -> _Nice:
        bag = td.bags[i]
        subtrees = [morph(build(c), td.bags[c], bag) for c in kids.get(i, [])]
        if not subtrees:
            return chain_from_empty(bag)
        node = subtrees[0]
        for other in subtrees[1:]:
            node = _Nice("join", bag, -1, (node, other))
        return node

    top = build(root)
    return morph(top, td.bags[root], ())


def dp_hom_poly(g: Graph, td: TreeDecomposition, q: int) -> Polynomial:
    """P_q(G) over a tree decomposition.

    Table entries map bag colourings to the polynomial over the already-seen
    subtree; joins multiply the child tables and divide out the doubly
    counted bag weight by exponent subtraction (the shared factor is a
    monomial for each fixed colouring, so this stays in the semiring).
    """
    validate_decomposition(g, td)
    vs = VarSpace.of_order(q)
    nvars = len(vs.names)
    adj = g.adj
    root = _nicify(td)

    def bag_weight_exps(bag: tuple[int, ...], colors: tuple[int, ...]) -> tuple[int, ...]:
        exps = [0] * nvars
        for v, c in zip(bag, colors):
            exps[vs.x_index(c + 1)] += 1
        for a in range(len(bag)):
            for b in range(a + 1, len(bag)):
                if (adj[bag[a]] >> bag[b]) & 1:
                    exps[vs.y_index(colors[a] + 1, colors[b] + 1)] += 1
        return tuple(exps)

    def eval_node(node: _Nice) -> dict[tuple[int, ...], Polynomial]:
        if node.kind == "leaf":
            return {(): Polynomial.constant(vs.names, 1)}
        if node.kind == "join":
            left = eval_node(node.children[0])
            right = eval_node(node.children[1])
            out = {}
            for colors, lpoly in left.items():
                rpoly = right[colors]
                shared = bag_weight_exps(node.bag, colors)
                inverse = tuple(-e for e in shared)
                out[colors] = (lpoly * rpoly).mul_monomial(inverse)
            return out
        child = eval_node(node.children[0])
        if node.kind == "introduce":
            v = node.vertex
            pos = node.bag.index(v)
            out = {}
            child_bag = tuple(u for u in node.bag if u != v)
            for colors, poly in child.items():
                for c in range(q):
                    exps = [0] * nvars
                    exps[vs.x_index(c + 1)] = 1
                    for u, cu in zip(child_bag, colors):
                        if (adj[v] >> u) & 1:
                            exps[vs.y_index(c + 1, cu + 1)] += 1
                    new_colors = colors[:pos] + (c,) + colors[pos:]
                    out[new_colors] = poly.mul_monomial(tuple(exps))
            return out
        if node.kind == "forget":
            v = node.vertex
            child_bag = tuple(sorted(node.bag + (v,)))
            pos = child_bag.index(v)
            out: dict[tuple[int, ...], Polynomial] = {}
            for colors, poly in child.items():
                key = colors[:pos] + colors[pos + 1:]
                if key in out:
                    out[key] = out[key] + poly
                else:
                    out[key] = poly
            return out
        raise AssertionError(node.kind)

    table = eval_node(root)
    assert list(table.keys()) == [()]
    return table[()]


def best_side(g: Graph, q: int) -> Polynomial:
    """P_q(G) via whichever of G and its complement has smaller treewidth.

    Complete-ish graphs have edgeless-ish complements, so the complement side
    plus the complement transform wins there; ties go to the direct side.
    """
    if g.n > 16:
        raise BudgetError(f"best_side supported up to n=16, got {g.n}")
    co = complement(g)
    w_direct, td_direct = exact_treewidth(g)
    w_co, td_co = exact_treewidth(co)
    if w_direct <= w_co:
        return dp_hom_poly(g, td_direct, q)
    p_co = dp_hom_poly(co, td_co, q)
    return complement_transform(p_co, g.n, q)
