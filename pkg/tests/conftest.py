import os
from pathlib import Path

import pytest

from graphpoly.graphs import enumerate_graphs, read_graph6_file

DATA_DIR = Path(__file__).resolve().parent.parent / "data"


@pytest.fixture(scope="session")
def graphs_by_order():
    return {n: enumerate_graphs(n) for n in range(1, 8)}


@pytest.fixture(scope="session")
def graphs8():
    path = DATA_DIR / "graphs8.g6"
    if not path.exists():
        pytest.skip("data/graphs8.g6 missing; run tools/generate_graphs.py")
    return read_graph6_file(path)


@pytest.fixture(scope="session")
def graphs9():
    path = DATA_DIR / "graphs9.g6"
    if not path.exists():
        pytest.skip("data/graphs9.g6 missing; run tools/generate_graphs.py")
    return read_graph6_file(path)


@pytest.fixture(scope="session")
def classified8(graphs8):
    """The n=8, q=2 classification, shared across tests that only read it."""
    from graphpoly.pipeline import classify, default_stages

    return classify(graphs8, default_stages(2), q=2, threads=2)


def run_n10() -> bool:
    return os.environ.get("GRAPHPOLY_RUN_N10") == "1"
