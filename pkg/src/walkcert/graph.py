"""Simple undirected graphs, graph6/edge-list I/O, corpora and exact walk counts."""

from __future__ import annotations

import os
import warnings
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Iterator

GRAPH6_MAX_N = 62
DEFAULT_MAX_N = 7
HARD_MAX_N = 8


class GraphFormatError(ValueError):
    """Raised for malformed graph text or invalid edge data."""


class CorpusLimitError(ValueError):
    pass


@dataclass(frozen=True)
class Graph:
    n: int
    edges: frozenset[tuple[int, int]]
    _adj: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.n < 0:
            raise GraphFormatError(f"negative node count {self.n}")
        norm = set()
        for e in self.edges:
            u, v = e
            if u == v:
                raise GraphFormatError(f"self-loop at node {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise GraphFormatError(f"edge ({u}, {v}) out of range for n={self.n}")
            norm.add((min(u, v), max(u, v)))
        object.__setattr__(self, "edges", frozenset(norm))
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in sorted(norm):
            adj[u].append(v)
            adj[v].append(u)
        object.__setattr__(self, "_adj", tuple(tuple(a) for a in adj))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        return cls(n, frozenset(tuple(e) for e in edges))

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        return self._adj

    def degrees(self) -> list[int]:
        return [len(a) for a in self._adj]

    def is_regular(self) -> bool:
        degs = self.degrees()
        return len(set(degs)) <= 1

    def adjacency_matrix(self):
        import numpy as np

        A = np.zeros((self.n, self.n))
        for u, v in self.edges:
            A[u, v] = A[v, u] = 1.0
        return A

    def __str__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


@dataclass(frozen=True)
class WalkTable:
    """Exact walk counts ``counts[k] = w_k`` for k = 0..K."""

    n: int
    m: int
    counts: tuple[int, ...]

    @property
    def max_length(self) -> int:
        return len(self.counts) - 1

    def __getitem__(self, k: int) -> int:
        return self.counts[k]

    def __len__(self) -> int:
        return len(self.counts)


# --------------------------------------------------------------------------
# graph6

def _pairs_graph6(n: int) -> Iterator[tuple[int, int]]:
    # column order of the upper triangle: (0,1), (0,2), (1,2), (0,3), ...
    for v in range(1, n):
        for u in range(v):
            yield u, v


def decode_graph6(text: str) -> Graph:
    s = text.strip()
    if s.startswith(">>graph6<<"):
        s = s[len(">>graph6<<"):]
    if not s:
        raise GraphFormatError("empty graph6 string")
    data = [ord(c) - 63 for c in s]
    if any(not 0 <= d <= 63 for d in data):
        raise GraphFormatError(f"invalid graph6 character in {text!r}")
    n = data[0]
    if n == 63:
        raise GraphFormatError(f"graph6 supports n <= {GRAPH6_MAX_N} only")
    nbits = n * (n - 1) // 2
    need = (nbits + 5) // 6
    body = data[1:]
    if len(body) != need:
        raise GraphFormatError(f"graph6 body has {len(body)} bytes, expected {need} for n={n}")
    edges = []
    for i, (u, v) in enumerate(_pairs_graph6(n)):
        if (body[i // 6] >> (5 - i % 6)) & 1:
            edges.append((u, v))
    return Graph.from_edges(n, edges)


def encode_graph6(g: Graph) -> str:
    if g.n > GRAPH6_MAX_N:
        raise GraphFormatError(f"graph6 supports n <= {GRAPH6_MAX_N} only")
    bits = [1 if e in g.edges else 0 for e in _pairs_graph6(g.n)]
    bits += [0] * (-len(bits) % 6)
    out = [chr(63 + g.n)]
    for i in range(0, len(bits), 6):
        val = 0
        for b in bits[i:i + 6]:
            val = (val << 1) | b
        out.append(chr(63 + val))
    return "".join(out)


# --------------------------------------------------------------------------
# edge list

def parse_edge_list(text: str) -> Graph:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise GraphFormatError("edge list is empty (missing 'n <count>' header)")
    head = lines[0].split()
    if len(head) != 2 or head[0] != "n" or not head[1].isdigit():
        raise GraphFormatError(f"malformed header {lines[0]!r}, expected 'n <count>'")
    n = int(head[1])
    edges: set[tuple[int, int]] = set()
    for lineno, ln in enumerate(lines[1:], start=2):
        parts = ln.split()
        if len(parts) != 2:
            raise GraphFormatError(f"line {lineno}: expected 'u v', got {ln!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphFormatError(f"line {lineno}: non-integer endpoint in {ln!r}") from None
        if u == v:
            raise GraphFormatError(f"line {lineno}: self-loop at node {u}")
        if not (0 <= u < n and 0 <= v < n):
            raise GraphFormatError(f"line {lineno}: endpoint out of range for n={n}")
        e = (min(u, v), max(u, v))
        if e in edges:
            warnings.warn(f"line {lineno}: duplicate edge {e} ignored", stacklevel=2)
        edges.add(e)
    return Graph.from_edges(n, edges)


def emit_edge_list(g: Graph) -> str:
    rows = [f"n {g.n}"] + [f"{u} {v}" for u, v in sorted(g.edges)]
    return "\n".join(rows) + "\n"


def load_graph(text: str, format: str = "graph6") -> Graph:
    if format == "graph6":
        return decode_graph6(text)
    if format in ("edge-list", "edgelist"):
        return parse_edge_list(text)
    raise GraphFormatError(f"unknown graph format {format!r}")


# --------------------------------------------------------------------------
# named families

def make_named_graph(family: str, size: int) -> Graph:
    """Standard graphs; ``star(s)`` has a hub plus ``s`` leaves (s + 1 nodes)."""
    if size < 1:
        raise ValueError(f"size must be positive, got {size}")
    if family == "complete":
        return Graph.from_edges(size, combinations(range(size), 2))
    if family == "path":
        return Graph.from_edges(size, ((i, i + 1) for i in range(size - 1)))
    if family == "cycle":
        if size < 3:
            raise ValueError("cycle requires size >= 3")
        return Graph.from_edges(size, ((i, (i + 1) % size) for i in range(size)))
    if family == "star":
        return Graph.from_edges(size + 1, ((0, i) for i in range(1, size + 1)))
    if family == "edgeless":
        return Graph.from_edges(size, ())
    raise ValueError(f"unknown graph family {family!r}")


def disjoint_union(g1: Graph, g2: Graph) -> Graph:
    off = g1.n
    return Graph.from_edges(g1.n + g2.n, list(g1.edges) + [(u + off, v + off) for u, v in g2.edges])


# --------------------------------------------------------------------------
# corpora

def max_corpus_n(override: bool = False) -> int:
    env = os.environ.get("WALKCERT_MAX_N")
    if env:
        return int(env)
    return HARD_MAX_N if override else DEFAULT_MAX_N


def num_labeled_graphs(n: int) -> int:
    return 1 << (n * (n - 1) // 2)


def generate_labeled_graphs(
    n: int,
    *,
    limit: int | None = None,
    start: int = 0,
    stop: int | None = None,
    dedup: bool = False,
) -> Iterator[Graph]:
    """Yield every labeled simple graph on ``n`` nodes, indexed by edge mask.

    ``start``/``stop`` select a half-open mask range so the corpus can be split
    into independent partitions. Bit ``i`` of the mask is the ``i``-th pair in
    graph6 column order.

    ``dedup`` drops graphs whose (sorted degree sequence, walk vector up to
    length n) was already seen. This is a heuristic for shrinking reports and is
    not an isomorphism test.
    """
    if limit is None:
        limit = max_corpus_n()
    if n < 1:
        raise ValueError("n must be positive")
    if n > limit:
        raise CorpusLimitError(
            f"refusing to enumerate labeled graphs with n={n} > limit {limit}; "
            "raise the limit explicitly (WALKCERT_MAX_N) to proceed"
        )
    pairs = list(_pairs_graph6(n))
    total = 1 << len(pairs)
    stop = total if stop is None else min(stop, total)
    seen: set = set()
    for mask in range(start, stop):
        g = Graph.from_edges(n, (p for i, p in enumerate(pairs) if mask >> i & 1))
        if dedup:
            key = (tuple(sorted(g.degrees())), walk_counts(g, n).counts)
            if key in seen:
                continue
            seen.add(key)
        yield g


# --------------------------------------------------------------------------
# walks

def walk_counts(g: Graph, K: int) -> WalkTable:
    if K < 0:
        raise ValueError("K must be nonnegative")
    adj = g.adjacency
    v = [1] * g.n
    counts = [g.n]
    for _ in range(K):
        v = [sum(v[x] for x in nbrs) for nbrs in adj]
        counts.append(sum(v))
    return WalkTable(g.n, g.m, tuple(counts))
