"""Independent reference computations used only by tests."""

from __future__ import annotations

from functools import lru_cache
from itertools import product

import numpy as np


@lru_cache(maxsize=None)
def _sequences(n: int, length: int) -> np.ndarray:
    return np.array(list(product(range(n), repeat=length)), dtype=np.int64).reshape(-1, length)


def brute_force_walks(n: int, edges, K: int) -> list[int]:
    """Count walks by listing every node sequence of length k+1 and filtering on adjacency."""
    A = np.zeros((max(n, 1), max(n, 1)), dtype=bool)
    for u, v in edges:
        A[u, v] = A[v, u] = True
    out = []
    for k in range(K + 1):
        seqs = _sequences(n, k + 1)
        if k == 0:
            out.append(len(seqs))
            continue
        ok = A[seqs[:, :-1], seqs[:, 1:]].all(axis=1)
        out.append(int(ok.sum()))
    return out


def brute_force_walks_python(n: int, edges, K: int) -> list[int]:
    """Slow pure-Python variant for larger n with small K."""
    adj = {(u, v) for u, v in edges} | {(v, u) for u, v in edges}
    out = []
    for k in range(K + 1):
        cnt = 0
        for seq in product(range(n), repeat=k + 1):
            if all((a, b) in adj for a, b in zip(seq, seq[1:])):
                cnt += 1
        out.append(cnt)
    return out


def labeled_edge_sets(n: int):
    """All labeled graphs on n nodes, enumerated in lexicographic pair order (independent of graph6 order)."""
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    for mask in range(1 << len(pairs)):
        yield [p for i, p in enumerate(pairs) if mask >> i & 1]


def univariate_min_reference(coeffs_low_first, lo: float, hi: float) -> float:
    """Global minimum on [lo, hi] via a dense grid and bisection on the derivative."""
    c = np.array([float(x) for x in coeffs_low_first])
    p = np.polynomial.Polynomial(c)
    dp = p.deriv()
    xs = np.linspace(lo, hi, 200001)
    vals = dp(xs)
    best = float(np.min(p(xs)))
    for i in np.nonzero(np.sign(vals[:-1]) != np.sign(vals[1:]))[0]:
        a, b = xs[i], xs[i + 1]
        for _ in range(100):
            m = 0.5 * (a + b)
            if np.sign(dp(m)) == np.sign(dp(a)):
                a = m
            else:
                b = m
        best = min(best, float(p(0.5 * (a + b))))
    return best
