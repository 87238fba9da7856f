"""Staged equivalence classification of graphs under P_q, plus the searches
for Potts, U-polynomial, and chromatic anomalies.

The procedure: start from one class holding every input graph, split classes
by one invariant at a time, drop singletons after each split, and compute the
expensive target polynomial only on the survivors of all cheap stages.  Every
stage key is sound for the target: graphs with equal P_q always share it.
"""

from __future__ import annotations

import hashlib
import json
import multiprocessing
import os
import time
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .errors import DuplicateGraphError
from .graphs import (
    Graph,
    canonical_key,
    complement,
    components,
    edge_connectivity,
    parse_graph6,
    triangle_count,
    write_graph6,
)
from .homopoly import hom_poly, hom_poly_q2_subsets
from .specialize import (
    chromatic_deletion_contraction,
    colour_count,
    independence_counts_fast,
    ising_direct,
    matching_counts_fast,
    potts_direct,
)
from .subsetpolys import strong_u_polynomial, u_polynomial

FORMAT_VERSION = 1


@dataclass(frozen=True)
class InvariantStage:
    name: str
    key_fn: Callable[[Graph], bytes]
    tier: int  # rough cost rank, cheap stages first


@dataclass(frozen=True)
class EquivalenceClass:
    stage: str
    key_digest: str
    members: tuple[str, ...]  # graph6 strings in input order
    polynomial: str | None  # canonical text at the final stage


@dataclass
class ClassificationReport:
    n: int
    q: int
    input_count: int
    stage_rows: list[dict] = field(default_factory=list)
    nontrivial_classes: int = 0
    class_size_histogram: dict[int, int] = field(default_factory=dict)
    elapsed: dict[str, float] = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        """Canonical report payload; timings stay out so bytes are reproducible."""
        return {
            "n": self.n,
            "q": self.q,
            "input_count": self.input_count,
            "stages": self.stage_rows,
            "nontrivial_classes": self.nontrivial_classes,
            "class_size_histogram": {str(k): v for k, v in sorted(self.class_size_histogram.items())},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True, indent=2) + "\n"

    def to_text(self) -> str:
        lines = [f"classification n={self.n} q={self.q} over {self.input_count} graphs"]
        for row in self.stage_rows:
            lines.append(
                f"  stage {row['name']}: {row['classes']} classes, {row['graphs']} graphs remain"
            )
        lines.append(f"non-trivial classes: {self.nontrivial_classes}")
        if self.class_size_histogram:
            hist = ", ".join(f"{size}:{cnt}" for size, cnt in sorted(self.class_size_histogram.items()))
            lines.append(f"class sizes: {hist}")
        return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# stage key functions (module level so worker processes can import them)
# ---------------------------------------------------------------------------

def _key_edge_count(g: Graph) -> bytes:
    return str(g.m).encode()


def _key_degree_sequence(g: Graph) -> bytes:
    return ",".join(map(str, sorted((g.degree(v) for v in range(g.n)), reverse=True))).encode()


def _key_triangles_edge_connectivity(g: Graph) -> bytes:
    return f"{triangle_count(g)},{edge_connectivity(g)}".encode()


def _key_matching(g: Graph) -> bytes:
    return ",".join(map(str, matching_counts_fast(g))).encode()


def _key_independence_pair(g: Graph) -> bytes:
    own = independence_counts_fast(g)
    other = independence_counts_fast(complement(g))
    return (",".join(map(str, own)) + "|" + ",".join(map(str, other))).encode()


def _key_ising(g: Graph) -> bytes:
    return ising_direct(g).canonical_text().encode()


def _key_hom_q2(g: Graph) -> bytes:
    return hom_poly_q2_subsets(g).canonical_text().encode()


def _key_colour3(g: Graph) -> bytes:
    return str(colour_count(g, 3)).encode()


def _key_colour4(g: Graph) -> bytes:
    return str(colour_count(g, 4)).encode()


def _key_hom_q3(g: Graph) -> bytes:
    return hom_poly(g, 3).canonical_text().encode()


def _key_hom_q4(g: Graph) -> bytes:
    return hom_poly(g, 4).canonical_text().encode()


_STAGE_DEFS: dict[str, tuple[Callable[[Graph], bytes], int]] = {
    "edge-count": (_key_edge_count, 0),
    "degree-sequence": (_key_degree_sequence, 0),
    "triangles-edge-connectivity": (_key_triangles_edge_connectivity, 1),
    "matching-polynomial": (_key_matching, 1),
    "independence-pair": (_key_independence_pair, 1),
    "bivariate-ising": (_key_ising, 2),
    "hom-poly-q2": (_key_hom_q2, 3),
    "colour-count-3": (_key_colour3, 2),
    "hom-poly-q3": (_key_hom_q3, 4),
    "colour-count-4": (_key_colour4, 3),
    "hom-poly-q4": (_key_hom_q4, 5),
}


def stage_by_name(name: str) -> InvariantStage:
    fn, tier = _STAGE_DEFS[name]
    return InvariantStage(name, fn, tier)


def default_stages(q: int) -> list[InvariantStage]:
    """The staged invariant list: each stage is determined by P_q of the target
    order, so it can never separate graphs with equal target polynomials."""
    base = [
        "edge-count",
        "degree-sequence",
        "triangles-edge-connectivity",
        "matching-polynomial",
        "independence-pair",
        "bivariate-ising",
        "hom-poly-q2",
    ]
    if q == 2:
        names = base
    elif q == 3:
        names = base + ["colour-count-3", "hom-poly-q3"]
    elif q == 4:
        names = base + ["colour-count-3", "hom-poly-q3", "colour-count-4", "hom-poly-q4"]
    else:
        raise ValueError(f"no default stage list for q={q}")
    return [stage_by_name(name) for name in names]


# ---------------------------------------------------------------------------
# parallel key computation
# ---------------------------------------------------------------------------

def _worker(task: tuple[str, str]) -> bytes:
    name, g6 = task
    fn, _ = _STAGE_DEFS[name]
    return fn(parse_graph6(g6))


def _compute_keys(stage: InvariantStage, g6s: Sequence[str], threads: int) -> list[bytes]:
    if threads <= 1 or len(g6s) < 4 * threads or stage.name not in _STAGE_DEFS:
        return [stage.key_fn(parse_graph6(s)) for s in g6s]
    chunk = max(1, len(g6s) // (threads * 8))
    with multiprocessing.Pool(threads) as pool:
        return pool.map(_worker, [(stage.name, s) for s in g6s], chunksize=chunk)


def _digest(key: bytes) -> str:
    return hashlib.sha256(key).hexdigest()


# ---------------------------------------------------------------------------
# persistence
# ---------------------------------------------------------------------------

def _write_state(out_dir: str, meta: dict, classes: list[EquivalenceClass]) -> None:
    os.makedirs(out_dir, exist_ok=True)
    tmp = os.path.join(out_dir, "classes.jsonl.tmp")
    with open(tmp, "w", encoding="ascii") as fh:
        for cls in sorted(classes, key=lambda c: (c.key_digest, c.members)):
            record = {
                "stage": cls.stage,
                "key_digest": cls.key_digest,
                "members": list(cls.members),
                "polynomial": cls.polynomial,
            }
            fh.write(json.dumps(record, sort_keys=True) + "\n")
    os.replace(tmp, os.path.join(out_dir, "classes.jsonl"))
    with open(os.path.join(out_dir, "meta.json"), "w", encoding="ascii") as fh:
        json.dump(meta, fh, sort_keys=True, indent=2)
        fh.write("\n")


def read_classes(path: str) -> list[EquivalenceClass]:
    classes = []
    with open(path, "r", encoding="ascii") as fh:
        for lineno, raw in enumerate(fh, start=1):
            raw = raw.strip()
            if not raw:
                continue
            try:
                record = json.loads(raw)
                cls = EquivalenceClass(
                    stage=record["stage"],
                    key_digest=record["key_digest"],
                    members=tuple(record["members"]),
                    polynomial=record.get("polynomial"),
                )
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                raise ValueError(f"corrupt class record at line {lineno}: {exc}") from exc
            classes.append(cls)
    return classes


def _read_state(out_dir: str) -> tuple[dict, list[EquivalenceClass]]:
    with open(os.path.join(out_dir, "meta.json"), "r", encoding="ascii") as fh:
        meta = json.load(fh)
    if meta.get("version") != FORMAT_VERSION:
        raise ValueError(
            f"class store version {meta.get('version')} does not match {FORMAT_VERSION}"
        )
    classes = read_classes(os.path.join(out_dir, "classes.jsonl"))
    return meta, classes


# ---------------------------------------------------------------------------
# classification
# ---------------------------------------------------------------------------

def _input_digest(g6s: Sequence[str]) -> str:
    h = hashlib.sha256()
    for s in g6s:
        h.update(s.encode())
        h.update(b"\n")
    return h.hexdigest()


def classify(
    graphs: Sequence[Graph] | Sequence[str],
    stages: Sequence[InvariantStage],
    n: int | None = None,
    q: int = 2,
    threads: int = 1,
    out_dir: str | None = None,
    resume: bool = False,
    progress: Callable[[str], None] | None = None,
) -> tuple[list[EquivalenceClass], ClassificationReport]:
    """Partition pairwise non-isomorphic graphs into P_q-equivalence classes.

    Returns the non-trivial classes (>= 2 members) and the report.  With
    out_dir set, the class store is checkpointed after every stage and a
    prior run can be resumed.  Inputs may be Graph values or graph6 strings;
    only the strings are held between stages, so very large inputs stay cheap.
    """
    if not stages:
        raise ValueError("need at least one stage")
    if not graphs:
        raise ValueError("no input graphs")
    g6s = [g if isinstance(g, str) else write_graph6(g) for g in graphs]
    first = parse_graph6(g6s[0])
    if n is None:
        n = first.n
    seen: dict[str, int] = {}
    for i, s in enumerate(g6s):
        if s in seen:
            raise DuplicateGraphError(f"input graphs {seen[s]} and {i} are identical")
        seen[s] = i
    del seen
    for i, s in enumerate(g6s):
        order = ord(s[0]) - 63
        if order != n:
            raise ValueError(f"input mixes orders {n} and {order}")

    report = ClassificationReport(n=n, q=q, input_count=len(graphs))
    meta = {
        "version": FORMAT_VERSION,
        "n": n,
        "q": q,
        "stages": [s.name for s in stages],
        "input_digest": _input_digest(g6s),
        "completed_stage": -1,
    }

    start_stage = 0
    classes_members: list[list[str]] = [list(g6s)]
    final_digests: list[str] = []
    final_polys: list[str | None] = []
    if resume:
        if out_dir is None:
            raise ValueError("resume requires an output directory")
        old_meta, old_classes = _read_state(out_dir)
        for field_name in ("n", "q", "stages", "input_digest"):
            if old_meta.get(field_name) != meta[field_name]:
                raise ValueError(f"resume mismatch on {field_name}")
        start_stage = old_meta["completed_stage"] + 1
        classes_members = [list(c.members) for c in old_classes]
        final_digests = [c.key_digest for c in old_classes]
        final_polys = [c.polynomial for c in old_classes]
        report.stage_rows = old_meta.get("stage_rows", [])

    for si in range(start_stage, len(stages)):
        stage = stages[si]
        t0 = time.monotonic()
        new_classes: list[list[str]] = []
        digests: list[str] = []
        keys: list[bytes] = []
        for members in classes_members:
            member_keys = _compute_keys(stage, members, threads)
            groups: dict[bytes, list[str]] = {}
            for g6, key in zip(members, member_keys):
                groups.setdefault(key, []).append(g6)
            for key in sorted(groups):
                group = groups[key]
                if len(group) >= 2:
                    new_classes.append(group)
                    digests.append(_digest(key))
                    keys.append(key)
        classes_members = new_classes
        final_digests = digests
        final_polys = [
            key.decode() if si == len(stages) - 1 else None for key in keys
        ]
        elapsed = time.monotonic() - t0
        report.stage_rows.append(
            {
                "name": stage.name,
                "classes": len(classes_members),
                "graphs": sum(len(c) for c in classes_members),
            }
        )
        report.elapsed[stage.name] = elapsed
        if progress is not None:
            progress(
                f"stage {stage.name}: {len(classes_members)} classes, "
                f"{sum(len(c) for c in classes_members)} graphs, {elapsed:.1f}s"
            )
        if out_dir is not None:
            meta["completed_stage"] = si
            meta["stage_rows"] = report.stage_rows
            checkpoint = [
                EquivalenceClass(
                    stage=stage.name,
                    key_digest=final_digests[i],
                    members=tuple(classes_members[i]),
                    polynomial=final_polys[i],
                )
                for i in range(len(classes_members))
            ]
            _write_state(out_dir, meta, checkpoint)

    final_stage_name = stages[-1].name
    classes = [
        EquivalenceClass(
            stage=final_stage_name,
            key_digest=final_digests[i],
            members=tuple(classes_members[i]),
            polynomial=final_polys[i] if final_polys else None,
        )
        for i in range(len(classes_members))
    ]
    classes.sort(key=lambda c: (c.key_digest, c.members))

    # certify members pairwise non-isomorphic; isomorphic inputs always end in
    # the same class, so checking inside classes catches every duplicate
    for cls in classes:
        seen_canon: dict[str, str] = {}
        for g6 in cls.members:
            canon = canonical_key(parse_graph6(g6))
            if canon in seen_canon:
                raise DuplicateGraphError(
                    f"isomorphic input graphs {seen_canon[canon]!r} and {g6!r}"
                )
            seen_canon[canon] = g6

    report.nontrivial_classes = len(classes)
    hist: dict[int, int] = {}
    for cls in classes:
        hist[len(cls.members)] = hist.get(len(cls.members), 0) + 1
    report.class_size_histogram = hist

    if out_dir is not None:
        with open(os.path.join(out_dir, "report.json"), "w", encoding="ascii") as fh:
            fh.write(report.to_json())
        with open(os.path.join(out_dir, "report.txt"), "w", encoding="ascii") as fh:
            fh.write(report.to_text())
    return classes, report


def smallest_nontrivial_order(reports: Sequence[ClassificationReport]) -> dict[int, int | None]:
    """Per q, the smallest n with a non-trivial class among the given reports."""
    out: dict[int, int | None] = {}
    for rep in sorted(reports, key=lambda r: (r.q, r.n)):
        if rep.q not in out:
            out[rep.q] = None
        if out[rep.q] is None and rep.nontrivial_classes > 0:
            out[rep.q] = rep.n
    return out


# ---------------------------------------------------------------------------
# Potts search
# ---------------------------------------------------------------------------

def _potts_key(task: tuple[str, int]) -> str:
    g6, q = task
    return potts_direct(parse_graph6(g6), q).canonical_text()


def _parallel_map(fn, tasks, threads: int):
    if threads <= 1 or len(tasks) < 4 * threads:
        return [fn(t) for t in tasks]
    chunk = max(1, len(tasks) // (threads * 8))
    with multiprocessing.Pool(threads) as pool:
        return pool.map(fn, tasks, chunksize=chunk)


def search_potts_pairs(
    graphs: Sequence[Graph],
    q_hi: int = 3,
    q_lo: int = 2,
    threads: int = 1,
    progress: Callable[[str], None] | None = None,
) -> list[tuple[str, str]]:
    """Pairs with equal q_hi-state but distinct q_lo-state Potts partition functions.

    Groups whose members agree on both orders are certified pairwise
    non-isomorphic, which rejects duplicate inputs.
    """
    g6s = [write_graph6(g) for g in graphs]
    t0 = time.monotonic()
    hi_keys = _parallel_map(_potts_key, [(s, q_hi) for s in g6s], threads)
    if progress is not None:
        progress(f"potts q={q_hi} keys: {time.monotonic() - t0:.1f}s")
    groups: dict[str, list[int]] = {}
    for i, key in enumerate(hi_keys):
        groups.setdefault(key, []).append(i)
    pairs: list[tuple[str, str]] = []
    for key in sorted(groups):
        idxs = groups[key]
        if len(idxs) < 2:
            continue
        lo_keys = [_potts_key((g6s[i], q_lo)) for i in idxs]
        same_lo: dict[str, list[int]] = {}
        for i, lo in zip(idxs, lo_keys):
            same_lo.setdefault(lo, []).append(i)
        # duplicate detection inside fully-agreeing groups
        for lo_key in sorted(same_lo):
            bucket = same_lo[lo_key]
            seen_canon: dict[str, int] = {}
            for i in bucket:
                canon = canonical_key(graphs[i])
                if canon in seen_canon:
                    raise DuplicateGraphError(
                        f"isomorphic input graphs {g6s[seen_canon[canon]]!r} and {g6s[i]!r}"
                    )
                seen_canon[canon] = i
        lo_sorted = sorted(same_lo)
        for a in range(len(lo_sorted)):
            for b in range(a + 1, len(lo_sorted)):
                for i in same_lo[lo_sorted[a]]:
                    for j in same_lo[lo_sorted[b]]:
                        pairs.append(tuple(sorted((g6s[i], g6s[j]))))
    return sorted(set(pairs))


def potts_joint_classes(
    graphs: Sequence[Graph], orders: tuple[int, ...] = (2, 3), threads: int = 1
) -> list[list[str]]:
    """Non-trivial classes of graphs agreeing on every listed Potts order."""
    g6s = [write_graph6(g) for g in graphs]
    keys: list[tuple[str, ...]] = [() for _ in g6s]
    alive = list(range(len(g6s)))
    for q in orders:
        new_keys = _parallel_map(_potts_key, [(g6s[i], q) for i in alive], threads)
        for i, key in zip(alive, new_keys):
            keys[i] = keys[i] + (key,)
        groups: dict[tuple[str, ...], list[int]] = {}
        for i in alive:
            groups.setdefault(keys[i], []).append(i)
        alive = [i for idxs in groups.values() if len(idxs) >= 2 for i in idxs]
    groups = {}
    for i in alive:
        groups.setdefault(keys[i], []).append(i)
    out = [sorted(g6s[i] for i in idxs) for key, idxs in sorted(groups.items()) if len(idxs) >= 2]
    return out


# ---------------------------------------------------------------------------
# U-polynomial search
# ---------------------------------------------------------------------------

def _key_edge_count_g6(g6: str) -> str:
    return str(parse_graph6(g6).m)


def _key_component_sizes(g6: str) -> str:
    g = parse_graph6(g6)
    return ",".join(map(str, sorted(c.bit_count() for c in components(g))))


def _key_forest_profile(g6: str) -> str:
    """Counts of spanning forests by component-size partition: the y-degree-0
    slice of the U-polynomial, so U-equal graphs always share it."""
    g = parse_graph6(g6)
    u = u_polynomial(g)
    slices = []
    for exps, coeff in u.sorted_terms():
        if exps[-1] == 0:
            slices.append((exps[:-1], coeff))
    return repr(slices)


def _key_chromatic(g6: str) -> str:
    return chromatic_deletion_contraction(parse_graph6(g6)).canonical_text()


def _key_u_poly(g6: str) -> str:
    return u_polynomial(parse_graph6(g6)).canonical_text()


@dataclass(frozen=True)
class UClassReport:
    members: tuple[str, ...]
    shares_p2: bool
    shares_p3: bool
    shares_strong_u: bool


def search_u_classes(
    graphs: Sequence[Graph],
    threads: int = 1,
    progress: Callable[[str], None] | None = None,
) -> list[UClassReport]:
    """Non-trivial U-polynomial classes with the P_2 / P_3 / strong-U cross checks.

    Cheap U-determined invariants (edge count, component sizes, the spanning
    forest profile, the chromatic polynomial) prune the graphs before the full
    U-polynomial is compared; each filter is a specialization of U, so no
    U-equal pair is ever separated early.
    """
    g6s = [write_graph6(g) for g in graphs]
    grouped: list[list[int]] = [list(range(len(g6s)))]

    def split(key_fn, label: str) -> None:
        nonlocal grouped
        flat = [i for grp in grouped for i in grp]
        keys = _parallel_map(key_fn, [g6s[i] for i in flat], threads)
        key_of = dict(zip(flat, keys))
        new_groups: list[list[int]] = []
        for grp in grouped:
            buckets: dict[str, list[int]] = {}
            for i in grp:
                buckets.setdefault(key_of[i], []).append(i)
            for key in sorted(buckets):
                if len(buckets[key]) >= 2:
                    new_groups.append(buckets[key])
        grouped = new_groups
        if progress is not None:
            remaining = sum(len(grp) for grp in grouped)
            progress(f"u-search after {label}: {len(grouped)} groups, {remaining} graphs")

    split(_key_edge_count_g6, "edge count")
    split(_key_component_sizes, "components")
    split(_key_forest_profile, "forest profile")
    split(_key_chromatic, "chromatic")
    split(_key_u_poly, "u-polynomial")

    reports = []
    for idxs in grouped:
        members = [g6s[i] for i in idxs]
        member_graphs = [graphs[i] for i in idxs]
        seen_canon: dict[str, str] = {}
        for g6, g in zip(members, member_graphs):
            canon = canonical_key(g)
            if canon in seen_canon:
                raise DuplicateGraphError(
                    f"isomorphic input graphs {seen_canon[canon]!r} and {g6!r}"
                )
            seen_canon[canon] = g6
        p2 = {hom_poly_q2_subsets(g).canonical_text() for g in member_graphs}
        p3 = {hom_poly(g, 3).canonical_text() for g in member_graphs}
        su = {strong_u_polynomial(g).canonical_text() for g in member_graphs}
        reports.append(
            UClassReport(
                members=tuple(sorted(members)),
                shares_p2=len(p2) == 1,
                shares_p3=len(p3) == 1,
                shares_strong_u=len(su) == 1,
            )
        )
    reports.sort(key=lambda r: r.members)
    return reports


# ---------------------------------------------------------------------------
# chromatic anomalies
# ---------------------------------------------------------------------------

def search_chromatic_anomalies(classes: Sequence[Sequence[Graph]]) -> list[dict]:
    """Classes whose members disagree on the chromatic polynomial.

    Input classes are groups already known to share some polynomial (P_2 or a
    set of Potts partition functions); a non-empty result shows that
    polynomial does not determine the chromatic polynomial."""
    out = []
    for members in classes:
        if len(members) < 2:
            continue
        texts = [chromatic_deletion_contraction(g).canonical_text() for g in members]
        if len(set(texts)) > 1:
            out.append(
                {
                    "members": [write_graph6(g) for g in members],
                    "chromatic": sorted(set(texts)),
                }
            )
    out.sort(key=lambda rec: rec["members"])
    return out
