#!/usr/bin/env python3
"""Generate data/graphs<n>.g6: one canonical graph6 record per isomorphism class.

Extends the representatives on n-1 vertices by every neighborhood of one new
vertex and deduplicates canonically, starting from the bundled n=7 enumeration.
Counts are checked against the known number of graphs per order.
"""

import argparse
import multiprocessing
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from graphpoly.graphs import Graph, canonical_form, enumerate_graphs, parse_graph6, write_graph6

KNOWN_COUNTS = {
    1: 1, 2: 2, 3: 4, 4: 11, 5: 34, 6: 156, 7: 1044,
    8: 12346, 9: 274668, 10: 12005168,
}


def _extend_one(args: tuple[str, int]) -> list[str]:
    parent_g6, k = args
    base = parse_graph6(parent_g6)
    out = set()
    rows_base = base.adj
    for mask in range(1 << (k - 1)):
        rows = [row | ((mask >> i & 1) << (k - 1)) for i, row in enumerate(rows_base)]
        rows.append(mask)
        out.add(canonical_form(Graph(k, tuple(rows))).graph6)
    return sorted(out)


def extend_file(parents: list[str], k: int, threads: int) -> list[str]:
    tasks = [(p, k) for p in parents]
    seen: set[str] = set()
    t0 = time.time()
    if threads > 1:
        with multiprocessing.Pool(threads) as pool:
            for i, chunk in enumerate(pool.imap_unordered(_extend_one, tasks, chunksize=8)):
                seen.update(chunk)
                if (i + 1) % 1000 == 0:
                    rate = (i + 1) / (time.time() - t0)
                    print(
                        f"  {i + 1}/{len(tasks)} parents, {len(seen)} classes, {rate:.0f}/s",
                        file=sys.stderr,
                    )
    else:
        for i, task in enumerate(tasks):
            seen.update(_extend_one(task))
            if (i + 1) % 1000 == 0:
                print(f"  {i + 1}/{len(tasks)} parents, {len(seen)} classes", file=sys.stderr)
    return sorted(seen)


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-n", type=int, default=9, help="largest order to generate")
    ap.add_argument("--out-dir", default=str(Path(__file__).resolve().parent.parent / "data"))
    ap.add_argument("--threads", type=int, default=multiprocessing.cpu_count())
    args = ap.parse_args()

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    current = [write_graph6(g) for g in enumerate_graphs(7)]
    assert len(current) == KNOWN_COUNTS[7]
    for k in range(8, args.max_n + 1):
        path = out_dir / f"graphs{k}.g6"
        if path.exists():
            current = [line.strip() for line in path.read_text().splitlines() if line.strip()]
            print(f"n={k}: {len(current)} classes (existing {path})")
        else:
            t0 = time.time()
            current = extend_file(current, k, args.threads)
            path.write_text("\n".join(current) + "\n")
            print(f"n={k}: {len(current)} classes in {time.time() - t0:.0f}s -> {path}")
        if k in KNOWN_COUNTS and len(current) != KNOWN_COUNTS[k]:
            print(f"ERROR: expected {KNOWN_COUNTS[k]} classes at n={k}", file=sys.stderr)
            return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
