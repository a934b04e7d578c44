from __future__ import annotations

import sys
from functools import lru_cache
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from walkcert.graph import Graph, generate_labeled_graphs, walk_counts  # noqa: E402


@lru_cache(maxsize=None)
def labeled_corpus(n: int) -> tuple[Graph, ...]:
    return tuple(generate_labeled_graphs(n, limit=8))


@lru_cache(maxsize=None)
def corpus_upto(n: int) -> tuple[Graph, ...]:
    out = []
    for k in range(1, n + 1):
        out.extend(labeled_corpus(k))
    return tuple(out)


@lru_cache(maxsize=None)
def tables_upto(n: int, K: int):
    return tuple((g, walk_counts(g, K)) for g in corpus_upto(n))


@pytest.fixture(scope="session")
def graphs_n5():
    return corpus_upto(5)


@pytest.fixture(scope="session")
def tables_n5():
    return tables_upto(5, 12)
