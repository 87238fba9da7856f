"""Univariate and bivariate specializations of the homomorphism polynomial.

Each specialization has a direct statistical-physics-style enumeration and,
where the homomorphism polynomial determines it, a substitution route from
P_q(G); the two must agree exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import BudgetError, check_budget
from .graphs import Graph, canonical_key, complement, components, edge_in_counts, is_connected, iter_bits
from .homopoly import restrict_order, _infer_order
from .polyring import Polynomial, VarSpace

ISING_VARS = ("x", "y")
POTTS_VARS = ("y",)
CHROMATIC_VARS = ("k",)
MATCHING_VARS = ("x",)
INDEPENDENCE_VARS = ("x",)
HARDCORE_VARS = ("h", "x")
VDW_VARS = ("u", "t")


@dataclass(frozen=True)
class SpecializationResult:
    kind: str
    polynomial: Polynomial
    provenance: str  # "direct" | "from_homopoly"

    def to_json_dict(self) -> dict:
        out = self.polynomial.to_json_dict()
        out["kind"] = self.kind
        out["provenance"] = self.provenance
        return out


def _state_budget(g: Graph, what: str) -> None:
    if g.n > 25:
        raise BudgetError(f"{what} enumerates 2^{g.n} states, supported up to n=25")
    check_budget(2**g.n, what)


# ---------------------------------------------------------------------------
# bivariate Ising
# ---------------------------------------------------------------------------

def ising_direct(g: Graph) -> Polynomial:
    """Z(G,x,y) = sum over the 2^n spin states of x^energy * y^magnetisation.

    Energy is the sum of sigma(u)*sigma(v) over edges, magnetisation the sum
    of spins; both are tracked incrementally along a Gray-code walk.
    """
    _state_budget(g, "bivariate Ising")
    n, m = g.n, g.m
    adj = g.adj
    terms: dict[tuple[int, int], int] = {}
    state = 0  # mask of +1 spins
    agree = m  # edges whose endpoints currently share a spin
    terms[(m, -n)] = 1  # all-minus state
    for counter in range(1, 1 << n):
        flip = (counter & -counter).bit_length() - 1
        bit = 1 << flip
        row = adj[flip]
        plus_nbrs = (row & state).bit_count()
        old_same = plus_nbrs if state & bit else row.bit_count() - plus_nbrs
        state ^= bit
        # the flipped vertex's same-side edges become opposite and vice versa
        agree += row.bit_count() - 2 * old_same
        key = (2 * agree - m, 2 * state.bit_count() - n)
        terms[key] = terms.get(key, 0) + 1
    return Polynomial(ISING_VARS, terms)


def ising_from_p2(p2: Polynomial) -> Polynomial:
    """Read Z(G,x,y) off P_2(G): class 1 is spin +1, loops carry the coupling."""
    if _infer_order(p2) != 2:
        raise ValueError("expected a polynomial over the order-2 variable space")
    x = Polynomial.variable(ISING_VARS, "x")
    y = Polynomial.variable(ISING_VARS, "y")
    return p2.substitute(
        {"x1": y, "x2": y**-1, "y1_1": x, "y2_2": x, "y1_2": x**-1}
    )


# ---------------------------------------------------------------------------
# Potts partition functions and colour counting
# ---------------------------------------------------------------------------

def potts_direct(g: Graph, q: int, budget: int | None = None) -> Polynomial:
    """Sum over q-colourings of y^(number of monochromatic edges)."""
    if q < 2:
        raise ValueError(f"Potts order must be at least 2, got {q}")
    n = g.n
    check_budget(q**n, f"potts(n={n}, q={q})", budget)
    nbrs = [tuple(iter_bits(row)) for row in g.adj]
    color = [0] * n
    same_count = [len(nbrs[v]) for v in range(n)]  # neighbors sharing v's colour
    mono = g.m
    counts: dict[int, int] = {}

    def recolor(v: int, new: int) -> int:
        old = color[v]
        color[v] = new
        delta = 0
        for u in nbrs[v]:
            cu = color[u]
            if cu == old:
                delta -= 1
            if cu == new:
                delta += 1
        return delta

    total = q**n
    for _ in range(total):
        counts[mono] = counts.get(mono, 0) + 1
        v = 0
        while v < n and color[v] == q - 1:
            mono += recolor(v, 0)
            v += 1
        if v == n:
            break
        mono += recolor(v, color[v] + 1)
    return Polynomial(POTTS_VARS, {(e,): c for e, c in counts.items()})


def potts_from_hom(p: Polynomial) -> Polynomial:
    """Specialize P_q(G): x_i -> 1, cross weights y_{i,j} -> 1, loop weights -> y."""
    q = _infer_order(p)
    vs = VarSpace.of_order(q)
    y = Polynomial.variable(POTTS_VARS, "y")
    mapping: dict[str, Polynomial | int] = {}
    for i in range(1, q + 1):
        mapping[vs.names[vs.x_index(i)]] = 1
        for j in range(i, q + 1):
            mapping[vs.names[vs.y_index(i, j)]] = y if i == j else 1
    return p.substitute(mapping, strict=True)


def colour_count(g: Graph, k: int) -> int:
    """Number of proper k-colourings, by backtracking over vertices."""
    if k < 1:
        raise ValueError("colour count needs k >= 1")
    total = 1
    for comp in components(g):
        total *= _colour_count_connected(g, comp, k)
        if total == 0:
            break
    return total


def _colour_count_connected(g: Graph, mask: int, k: int) -> int:
    verts = list(iter_bits(mask))
    # order by degree inside the component, densest first, to prune early
    verts.sort(key=lambda v: -(g.adj[v] & mask).bit_count())
    pos = {v: i for i, v in enumerate(verts)}
    earlier = []
    for v in verts:
        earlier.append([pos[u] for u in iter_bits(g.adj[v] & mask) if pos[u] < pos[v]])
    colors = [0] * len(verts)
    count = 0
    depth = 0
    choice = [0] * (len(verts) + 1)
    while depth >= 0:
        if depth == len(verts):
            count += 1
            depth -= 1
            continue
        start = choice[depth]
        found = -1
        for c in range(start, k):
            if all(colors[u] != c for u in earlier[depth]):
                found = c
                break
        if found < 0:
            choice[depth] = 0
            depth -= 1
            continue
        colors[depth] = found
        choice[depth] = found + 1
        depth += 1
        choice[depth] = 0
    return count


def colour_count_from_hom(p: Polynomial, k: int) -> int:
    """Proper k-colouring count from P_q(G), k <= q: kill loops, flatten the rest."""
    q = _infer_order(p)
    if k > q:
        raise ValueError(f"cannot count {k}-colourings from an order-{q} polynomial")
    if k >= 2:
        p = restrict_order(p, k)
        qq = k
        vs = VarSpace.of_order(qq)
        mapping: dict[str, Polynomial | int] = {}
        for i in range(1, qq + 1):
            mapping[vs.names[vs.x_index(i)]] = 1
            for j in range(i, qq + 1):
                mapping[vs.names[vs.y_index(i, j)]] = 0 if i == j else 1
        out = p.substitute(mapping, strict=True)
        return out.terms.get((), 0)
    # k = 1: a single class; proper iff no edges, i.e. no loop weight appears
    p = restrict_order(p, 2)
    vs = VarSpace.of_order(2)
    out = p.substitute({"x1": 1, "x2": 0, "y1_1": 0, "y1_2": 0, "y2_2": 0}, strict=True)
    return out.terms.get((), 0)


# ---------------------------------------------------------------------------
# chromatic polynomial
# ---------------------------------------------------------------------------

_chromatic_cache: dict[str, tuple[int, ...]] = {}


def _chrom_coeffs(g: Graph) -> tuple[int, ...]:
    """Coefficients (ascending) of the chromatic polynomial, memoized on the
    canonical form; deletion-contraction with edgeless and component shortcuts."""
    if g.m == 0:
        coeffs = [0] * g.n + [1]
        return tuple(coeffs)
    comps = components(g)
    if len(comps) > 1:
        prod = (1,)
        for mask in comps:
            prod = _poly_mul_coeffs(prod, _chrom_coeffs(_induced(g, mask)))
        return prod
    key = canonical_key(g)
    hit = _chromatic_cache.get(key)
    if hit is not None:
        return hit
    u, v = g.edges()[0]
    deleted = _delete_edge(g, u, v)
    contracted = _contract_edge(g, u, v)
    coeffs = _poly_sub_coeffs(_chrom_coeffs(deleted), _chrom_coeffs(contracted))
    _chromatic_cache[key] = coeffs
    return coeffs


def _induced(g: Graph, mask: int) -> Graph:
    verts = list(iter_bits(mask))
    index = {v: i for i, v in enumerate(verts)}
    rows = [0] * len(verts)
    for v in verts:
        for u in iter_bits(g.adj[v] & mask):
            rows[index[v]] |= 1 << index[u]
    return Graph(len(verts), tuple(rows))


def _delete_edge(g: Graph, u: int, v: int) -> Graph:
    rows = list(g.adj)
    rows[u] ^= 1 << v
    rows[v] ^= 1 << u
    return Graph(g.n, tuple(rows))


def _contract_edge(g: Graph, u: int, v: int) -> Graph:
    """Merge v into u, dropping loops and parallel edges."""
    keep = [w for w in range(g.n) if w != v]
    index = {w: i for i, w in enumerate(keep)}
    rows = [0] * len(keep)
    for w in keep:
        targets = g.adj[w]
        if (targets >> v) & 1:
            targets = (targets ^ (1 << v)) | (1 << u)
        targets &= ~(1 << w)
        for t in iter_bits(targets):
            if t == v:
                t = u
            if t != w:
                rows[index[w]] |= 1 << index[t]
    merged = (g.adj[u] | g.adj[v]) & ~(1 << u) & ~(1 << v)
    for t in iter_bits(merged):
        rows[index[u]] |= 1 << index[t]
        rows[index[t]] |= 1 << index[u]
    return Graph(len(keep), tuple(rows))


def _poly_mul_coeffs(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca:
            for j, cb in enumerate(b):
                out[i + j] += ca * cb
    return tuple(out)


def _poly_sub_coeffs(a, b):
    out = list(a) + [0] * max(0, len(b) - len(a))
    for i, cb in enumerate(b):
        out[i] -= cb
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


def chromatic_deletion_contraction(g: Graph) -> Polynomial:
    """The chromatic polynomial via C(G) = C(G-e) - C(G/e)."""
    if g.n > 12:
        raise BudgetError(f"deletion-contraction supported up to n=12, got {g.n}")
    coeffs = _chrom_coeffs(g)
    return Polynomial(CHROMATIC_VARS, {(i,): c for i, c in enumerate(coeffs) if c})


def chromatic_from_counts(g: Graph, counts) -> Polynomial:
    """The unique monic degree-n integer polynomial through the colouring counts.

    Interpolates C(G,k) at k = 1..n-1 together with the forced node C(G,0) = 0;
    with the monic x^n term that pins all n+1 coefficients.
    """
    n = g.n
    if n < 2:
        raise ValueError("reconstruction needs n >= 2")
    counts = list(counts)
    if len(counts) != n - 1:
        raise ValueError(f"need counts for k=1..{n - 1}, got {len(counts)} values")
    xs = list(range(n))
    ys = [Fraction(0)] + [Fraction(c) - Fraction(k**n) for k, c in enumerate(counts, start=1)]
    # Newton divided differences for the degree-(n-1) remainder r = C - k^n
    table = ys[:]
    for level in range(1, n):
        for i in range(n - 1, level - 1, -1):
            table[i] = (table[i] - table[i - 1]) / (xs[i] - xs[i - level])
    coeffs = [Fraction(0)] * n
    acc = [Fraction(1)]  # product (x - x_0)...(x - x_{level-1})
    for level in range(n):
        for i, c in enumerate(acc):
            coeffs[i] += table[level] * c
        new = [Fraction(0)] * (len(acc) + 1)
        for i, c in enumerate(acc):
            new[i + 1] += c
            new[i] -= c * xs[level]
        acc = new
    out = {}
    for i, c in enumerate(coeffs):
        if c.denominator != 1:
            raise ValueError(f"interpolated coefficient of k^{i} is not an integer: {c}")
        if c != 0:
            out[(i,)] = int(c)
    out[(n,)] = 1
    return Polynomial(CHROMATIC_VARS, out)


# ---------------------------------------------------------------------------
# matching, independence, hard-core, van der Waerden
# ---------------------------------------------------------------------------

def matching_polynomial(g: Graph) -> Polynomial:
    """m(G,x) = sum m_i x^i by the recursion m(G) = m(G-e) + x*m(G-u-v)."""

    def rec(adj: tuple[int, ...]) -> dict[int, int]:
        u = -1
        for i, row in enumerate(adj):
            if row:
                u = i
                break
        if u < 0:
            return {0: 1}
        v = (adj[u] & -adj[u]).bit_length() - 1
        without_edge = list(adj)
        without_edge[u] ^= 1 << v
        without_edge[v] ^= 1 << u
        left = rec(tuple(without_edge))
        drop = ~((1 << u) | (1 << v))
        without_ends = tuple(
            0 if i in (u, v) else row & drop for i, row in enumerate(adj)
        )
        right = rec(without_ends)
        for size, cnt in right.items():
            left[size + 1] = left.get(size + 1, 0) + cnt
        return left

    counts = rec(g.adj)
    return Polynomial(MATCHING_VARS, {(i,): c for i, c in counts.items()})


def matching_counts_fast(g: Graph) -> tuple[int, ...]:
    """Matching counts by a vertex-subset DP, coefficients packed into one int.

    f(S) = f(S - v) + sum over neighbours u of v in S of x * f(S - v - u) with
    v the lowest vertex of S; 64-bit limbs hold the per-size counts.
    """
    n = g.n
    if n > 20:
        raise BudgetError(f"matching DP table for n={n} would need 2^{n} entries")
    adj = g.adj
    table = [0] * (1 << n)
    table[0] = 1
    for s in range(1, 1 << n):
        low = s & -s
        v = low.bit_length() - 1
        rest = s ^ low
        acc = table[rest]
        avail = adj[v] & rest
        while avail:
            ulow = avail & -avail
            acc += table[rest ^ ulow] << 64
            avail ^= ulow
        table[s] = acc
    packed = table[(1 << n) - 1]
    out = []
    while packed:
        out.append(packed & ((1 << 64) - 1))
        packed >>= 64
    return tuple(out) if out else (0,)


def independence_polynomial(g: Graph) -> Polynomial:
    """I(G,x): the hard-core partition function at h = 0."""
    return hardcore_partition(g).substitute({"h": 0}, strict=False)


def independence_counts_fast(g: Graph) -> tuple[int, ...]:
    """Independent-set counts by subset DP with packed coefficients."""
    n = g.n
    if n > 20:
        raise BudgetError(f"independence DP table for n={n} would need 2^{n} entries")
    adj = g.adj
    table = [0] * (1 << n)
    table[0] = 1
    for s in range(1, 1 << n):
        low = s & -s
        v = low.bit_length() - 1
        rest = s ^ low
        table[s] = table[rest] + (table[rest & ~adj[v]] << 64)
    packed = table[(1 << n) - 1]
    out = []
    while packed:
        out.append(packed & ((1 << 64) - 1))
        packed >>= 64
    return tuple(out) if out else (0,)


def hardcore_partition(g: Graph) -> Polynomial:
    """H(G,h,x) = sum over vertex subsets A of h^(edges inside A) * x^|A|."""
    _state_budget(g, "hard-core partition function")
    n = g.n
    adj = g.adj
    terms: dict[tuple[int, int], int] = {(0, 0): 1}
    state = 0
    inside = 0
    for counter in range(1, 1 << n):
        flip = (counter & -counter).bit_length() - 1
        bit = 1 << flip
        if state & bit:
            state ^= bit
            inside -= (adj[flip] & state).bit_count()
        else:
            inside += (adj[flip] & state).bit_count()
            state ^= bit
        key = (inside, state.bit_count())
        terms[key] = terms.get(key, 0) + 1
    return Polynomial(HARDCORE_VARS, terms)


def hardcore_from_p2(p2: Polynomial) -> Polynomial:
    """H(G,h,x) from P_2(G): flatten class 2, keep class 1's size and loops."""
    if _infer_order(p2) != 2:
        raise ValueError("expected a polynomial over the order-2 variable space")
    h = Polynomial.variable(HARDCORE_VARS, "h")
    x = Polynomial.variable(HARDCORE_VARS, "x")
    return p2.substitute({"x1": x, "y1_1": h, "x2": 1, "y2_2": 1, "y1_2": 1})


def vdw_polynomial(g: Graph) -> Polynomial:
    """W(G,t,u): b_{i,j} counts edge subsets with i edges and j odd-degree vertices.

    Dynamic program over edges with the vertex-parity bitmask as state.
    """
    _state_budget(g, "van der Waerden polynomial")
    # states: parity mask -> list of counts by edge count
    states: dict[int, list[int]] = {0: [1]}
    for u, v in g.edges():
        toggle = (1 << u) | (1 << v)
        additions: dict[int, list[int]] = {}
        for mask, counts in states.items():
            target = mask ^ toggle
            bucket = additions.setdefault(target, [])
            if len(bucket) < len(counts) + 1:
                bucket.extend([0] * (len(counts) + 1 - len(bucket)))
            for i, c in enumerate(counts):
                bucket[i + 1] += c
        for mask, extra in additions.items():
            bucket = states.setdefault(mask, [])
            if len(bucket) < len(extra):
                bucket.extend([0] * (len(extra) - len(bucket)))
            for i, c in enumerate(extra):
                bucket[i] += c
    terms: dict[tuple[int, int], int] = {}
    for mask, counts in states.items():
        odd = mask.bit_count()
        for i, c in enumerate(counts):
            if c:
                key = (i, odd)
                terms[key] = terms.get(key, 0) + c
    return Polynomial(VDW_VARS, terms)


def vdw_bruteforce(g: Graph) -> Polynomial:
    """2^m oracle for the van der Waerden polynomial, m <= 20."""
    edges = g.edges()
    m = len(edges)
    if m > 20:
        raise BudgetError(f"van der Waerden brute force supported up to m=20, got {m}")
    terms: dict[tuple[int, int], int] = {}
    for sub in range(1 << m):
        parity = 0
        for i in iter_bits(sub):
            u, v = edges[i]
            parity ^= (1 << u) | (1 << v)
        key = (sub.bit_count(), parity.bit_count())
        terms[key] = terms.get(key, 0) + 1
    return Polynomial(VDW_VARS, terms)
