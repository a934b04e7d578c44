"""Walk inequalities ``sum c * w_{i1} ... w_{ik} >= 0``: compile, evaluate, search."""

from __future__ import annotations

import re
import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from math import gcd, lcm, prod
from typing import Callable, Iterable, Iterator, Mapping, Sequence

from .graph import (
    CorpusLimitError,
    Graph,
    WalkTable,
    decode_graph6,
    disjoint_union,
    encode_graph6,
    generate_labeled_graphs,
    make_named_graph,
    max_corpus_n,
    num_labeled_graphs,
    walk_counts,
)
from .polynomials import Polynomial, as_fraction, format_fraction

Term = tuple[Fraction, tuple[int, ...]]


class WalkTableTooShort(ValueError):
    def __init__(self, required: int, available: int):
        super().__init__(f"walk table covers w_0..w_{available}; inequality needs K >= {required}")
        self.required = required
        self.available = available


class WalkInequality:
    """Claim ``sum_t c_t * prod(w_i for i in indices_t) >= 0`` for all graphs.

    Canonical form: each index multiset sorted, duplicates merged, zero
    coefficients dropped, terms ordered by index tuple. An empty term list is
    the trivial claim ``0 >= 0``.
    """

    __slots__ = ("terms", "_int_coefs", "_denom")

    def __init__(self, terms: Iterable[tuple[object, Sequence[int]]]):
        acc: dict[tuple[int, ...], Fraction] = {}
        for c, idx in terms:
            idx = tuple(sorted(int(i) for i in idx))
            if any(i < 0 for i in idx):
                raise ValueError(f"negative walk index in {idx}")
            acc[idx] = acc.get(idx, Fraction(0)) + as_fraction(c)
        self.terms: tuple[Term, ...] = tuple((acc[i], i) for i in sorted(acc) if acc[i] != 0)
        self._denom = reduce(lcm, (c.denominator for c, _ in self.terms), 1)
        self._int_coefs = tuple(int(c * self._denom) for c, _ in self.terms)

    @property
    def max_index(self) -> int:
        return max((max(idx, default=0) for _, idx in self.terms), default=0)

    def is_trivial(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        return isinstance(other, WalkInequality) and self.terms == other.terms

    def __hash__(self):
        return hash(self.terms)

    def __add__(self, other: "WalkInequality") -> "WalkInequality":
        return WalkInequality(self.terms + other.terms)

    def __mul__(self, s) -> "WalkInequality":
        s = as_fraction(s)
        return WalkInequality((s * c, i) for c, i in self.terms)

    __rmul__ = __mul__

    def __neg__(self) -> "WalkInequality":
        return self * -1

    def __sub__(self, other: "WalkInequality") -> "WalkInequality":
        return self + (-other)

    def times(self, other: "WalkInequality") -> "WalkInequality":
        """Formal product of the two expressions (index multisets concatenate)."""
        return WalkInequality((c1 * c2, i1 + i2) for c1, i1 in self.terms for c2, i2 in other.terms)

    def primitive(self) -> "WalkInequality":
        """Positive rescaling to coprime integer coefficients."""
        if not self.terms:
            return self
        g = reduce(gcd, (abs(c) for c in self._int_coefs))
        return WalkInequality((Fraction(c, g), i) for c, (_, i) in zip(self._int_coefs, self.terms))

    def equivalent(self, other: "WalkInequality") -> bool:
        """Equal up to a positive scalar factor."""
        return self.primitive() == other.primitive()

    def shifted(self, amount: int) -> "WalkInequality":
        return WalkInequality((c, tuple(i + amount for i in idx)) for c, idx in self.terms)

    def evaluate(self, wt: WalkTable) -> Fraction:
        return evaluate_inequality(self, wt)

    def holds_on(self, g: Graph) -> bool:
        return self.evaluate(walk_counts(g, self.max_index)) >= 0

    def __str__(self) -> str:
        if not self.terms:
            return "0 >= 0"
        parts = []
        for c, idx in self.terms:
            mono = "*".join(f"w{i}" for i in idx) or "1"
            mag = abs(c)
            body = mono if mag == 1 else f"{format_fraction(mag)}*{mono}"
            parts.append(("- " if c < 0 else "+ ") + body)
        s = " ".join(parts)
        s = s[2:] if s.startswith("+ ") else "-" + s[2:]
        return s + " >= 0"

    def __repr__(self) -> str:
        return f"WalkInequality({str(self)!r})"

    def to_json(self) -> dict:
        return {"terms": [{"coef": format_fraction(c), "indices": list(i)} for c, i in self.terms]}

    @classmethod
    def from_json(cls, data: Mapping) -> "WalkInequality":
        try:
            return cls((Fraction(str(t["coef"])), [int(i) for i in t["indices"]]) for t in data["terms"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed inequality JSON: {exc}") from None

    @classmethod
    def binomial(cls, lhs: Sequence[int], rhs: Sequence[int]) -> "WalkInequality":
        """``prod w_lhs <= prod w_rhs`` stored as ``rhs - lhs >= 0``."""
        return cls([(1, rhs), (-1, lhs)])


def evaluate_inequality(ineq: WalkInequality, wt: WalkTable) -> Fraction:
    if ineq.max_index > wt.max_length:
        raise WalkTableTooShort(ineq.max_index, wt.max_length)
    counts = wt.counts
    total = 0
    for c, (_, idx) in zip(ineq._int_coefs, ineq.terms):
        total += c * prod(counts[i] for i in idx)
    return Fraction(total, ineq._denom)


def compile_polynomial(f: Polynomial) -> WalkInequality:
    """Each term c * x^alpha becomes c * w_{alpha_1} ... w_{alpha_k}; zero exponents give w_0."""
    return WalkInequality((c, e) for e, c in f.items())


# alias under the operation's public name
compile = compile_polynomial


def to_polynomial(ineq: WalkInequality) -> Polynomial:
    """Inverse of compile, defined when every term has the same number of factors."""
    sizes = {len(idx) for _, idx in ineq.terms}
    if len(sizes) > 1:
        raise ValueError("terms have differing factor counts; no k-variable polynomial corresponds")
    k = sizes.pop() if sizes else 1
    return Polynomial(k, [(idx, c) for c, idx in ineq.terms])


# --------------------------------------------------------------------------
# named inequalities, built directly from their index formulas

def _check_perm(sigma: Sequence[int], k: int) -> tuple[int, ...]:
    sigma = tuple(int(s) for s in sigma)
    if sorted(sigma) != list(range(k)):
        raise ValueError(f"{sigma} is not a permutation of 0..{k - 1}")
    return sigma


def sandwich(a: int, b: int, c: int) -> WalkInequality:
    return WalkInequality.binomial([2 * a + c, 2 * (a + b) + c], [2 * a, 2 * (a + b + c)])


def erdos(l: int, p: int, k: int) -> WalkInequality:
    if k < 1:
        raise ValueError("k must be positive")
    return WalkInequality.binomial([2 * l + p] * k, [2 * l + p * k] + [2 * l] * (k - 1))


def symmetric_family(alpha: Sequence[int], sigma: Sequence[int]) -> WalkInequality:
    """``prod w_{alpha_i + alpha_sigma(i)} <= prod w_{2 alpha_i}``; ``sigma`` is 0-based."""
    sigma = _check_perm(sigma, len(alpha))
    return WalkInequality.binomial([alpha[i] + alpha[sigma[i]] for i in range(len(alpha))],
                                   [2 * a for a in alpha])


def agm(alpha: Sequence[int]) -> WalkInequality:
    D = sum(alpha)
    if D % 2:
        raise ValueError("|alpha| must be even")
    return WalkInequality.binomial(list(alpha), [0] * (len(alpha) - 1) + [D])


def dress_gutman(a: int, b: int) -> WalkInequality:
    return WalkInequality.binomial([a + b, a + b], [2 * a, 2 * b])


BUILTINS: dict[str, Callable[..., WalkInequality]] = {
    "sandwich": sandwich,
    "erdos": erdos,
    "symmetric_family": symmetric_family,
    "agm": agm,
    "dress_gutman": dress_gutman,
}


def builtin_inequality(kind: str, *args, **kwargs) -> WalkInequality:
    try:
        fn = BUILTINS[kind]
    except KeyError:
        raise ValueError(f"unknown builtin inequality {kind!r}; choose from {sorted(BUILTINS)}") from None
    return fn(*args, **kwargs)


# --------------------------------------------------------------------------
# graph families for scans

_TOKEN = re.compile(r"\s*(union|[A-Za-z_]+|\d+|[():,])")


def parse_family(expr: str) -> Callable[[Mapping[str, int]], Graph]:
    """Parse ``name:size`` or ``union(expr, expr)``; sizes may be variable names."""
    toks = []
    pos = 0
    expr = expr.strip()
    while pos < len(expr):
        m = _TOKEN.match(expr, pos)
        if not m:
            raise ValueError(f"cannot parse family expression at {expr[pos:]!r}")
        toks.append(m.group(1))
        pos = m.end()
        while pos < len(expr) and expr[pos].isspace():
            pos += 1
    i = 0

    def take(expected=None):
        nonlocal i
        if i >= len(toks):
            raise ValueError(f"unexpected end of family expression {expr!r}")
        t = toks[i]
        if expected is not None and t != expected:
            raise ValueError(f"expected {expected!r} in {expr!r}, got {t!r}")
        i += 1
        return t

    def node():
        t = take()
        if t == "union":
            take("(")
            left = node()
            take(",")
            right = node()
            take(")")
            return lambda env: disjoint_union(left(env), right(env))
        name = t
        take(":")
        size = take()
        if size.isdigit():
            s = int(size)
            return lambda env: make_named_graph(name, s)
        return lambda env: make_named_graph(name, _lookup(env, size))

    tree = node()
    if i != len(toks):
        raise ValueError(f"trailing input in family expression {expr!r}")
    return tree


def _lookup(env: Mapping[str, int], var: str) -> int:
    if var not in env:
        raise ValueError(f"family variable {var!r} has no value")
    return env[var]


def parse_range(text: str) -> tuple[str, range]:
    m = re.fullmatch(r"\s*([A-Za-z_]\w*)\s*=\s*(\d+)\s*\.\.\s*(\d+)\s*", text)
    if not m:
        raise ValueError(f"range must look like 'm=1..10', got {text!r}")
    lo, hi = int(m.group(2)), int(m.group(3))
    if lo > hi:
        raise ValueError(f"empty range {text!r}")
    return m.group(1), range(lo, hi + 1)


# --------------------------------------------------------------------------
# corpora and search

@dataclass(frozen=True)
class Exhaustive:
    n: int
    start: int = 0
    stop: int | None = None
    override: bool = False

    def describe(self) -> str:
        return f"exhaustive(n={self.n})"

    def graphs(self) -> Iterator[tuple[str, Graph]]:
        limit = max_corpus_n(self.override)
        for g in generate_labeled_graphs(self.n, limit=limit, start=self.start, stop=self.stop):
            yield "", g

    def partitions(self, parts: int) -> list["Exhaustive"]:
        total = num_labeled_graphs(self.n)
        stop = total if self.stop is None else self.stop
        span = stop - self.start
        bounds = [self.start + span * i // parts for i in range(parts + 1)]
        return [Exhaustive(self.n, lo, hi, self.override) for lo, hi in zip(bounds, bounds[1:]) if hi > lo]


@dataclass(frozen=True)
class FamilyScan:
    expr: str
    var: str
    values: tuple[int, ...]

    def describe(self) -> str:
        return f"family({self.expr}, {self.var}={self.values[0]}..{self.values[-1]})"

    def graphs(self) -> Iterator[tuple[str, Graph]]:
        build = parse_family(self.expr)
        for v in self.values:
            yield f"{self.var}={v}", build({self.var: v})


@dataclass(frozen=True)
class GraphList:
    items: tuple[tuple[str, Graph], ...]
    label: str = "file-list"

    def describe(self) -> str:
        return f"{self.label}({len(self.items)} graphs)"

    def graphs(self) -> Iterator[tuple[str, Graph]]:
        yield from self.items


@dataclass
class Violation:
    graph: Graph
    value: Fraction
    label: str = ""

    def to_json(self) -> dict:
        out = {"graph6": encode_graph6(self.graph), "n": self.graph.n, "m": self.graph.m,
               "value": format_fraction(self.value)}
        if self.label:
            out["label"] = self.label
        return out


@dataclass
class SearchReport:
    inequality: WalkInequality
    corpus: str
    tested: int = 0
    violations: list[Violation] = field(default_factory=list)
    elapsed: float = 0.0
    zero_count: int = 0

    def merge(self, other: "SearchReport") -> "SearchReport":
        return SearchReport(self.inequality, self.corpus, self.tested + other.tested,
                            self.violations + other.violations, self.elapsed + other.elapsed,
                            self.zero_count + other.zero_count)

    @property
    def holds(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {
            "inequality": self.inequality.to_json(),
            "corpus": self.corpus,
            "tested": self.tested,
            "equalities": self.zero_count,
            "violations": [v.to_json() for v in self.violations],
            "elapsed": round(self.elapsed, 6),
        }


def _search_one(ineq: WalkInequality, corpus, stop_at_first: bool, regular_only: bool) -> SearchReport:
    t0 = time.perf_counter()
    rep = SearchReport(ineq, corpus.describe())
    K = ineq.max_index
    for label, g in corpus.graphs():
        if regular_only and not g.is_regular():
            continue
        rep.tested += 1
        val = evaluate_inequality(ineq, walk_counts(g, K))
        if val == 0:
            rep.zero_count += 1
        elif val < 0:
            rep.violations.append(Violation(g, val, label))
            if stop_at_first:
                break
    rep.elapsed = time.perf_counter() - t0
    return rep


def search_counterexamples(
    ineq: WalkInequality,
    corpus,
    *,
    stop_at_first: bool = False,
    regular_only: bool = False,
    jobs: int = 1,
) -> SearchReport:
    """Evaluate ``ineq`` exactly on every graph of ``corpus`` and collect violations."""
    if jobs > 1 and isinstance(corpus, Exhaustive):
        from concurrent.futures import ProcessPoolExecutor

        parts = corpus.partitions(jobs * 4)
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(_search_one, [ineq] * len(parts), parts,
                                    [stop_at_first] * len(parts), [regular_only] * len(parts)))
        rep = reduce(SearchReport.merge, reports)
        rep.corpus = corpus.describe()
        if stop_at_first:
            rep.violations = rep.violations[:1]
        return rep
    return _search_one(ineq, corpus, stop_at_first, regular_only)


def _walks_by_matrix_power(g: Graph, K: int) -> WalkTable:
    # deliberately a different route from walk_counts: exact integer powers of A
    A = [[0] * g.n for _ in range(g.n)]
    for u, v in g.edges:
        A[u][v] = A[v][u] = 1
    P = [[int(i == j) for j in range(g.n)] for i in range(g.n)]
    counts = []
    for _ in range(K + 1):
        counts.append(sum(map(sum, P)))
        P = [[sum(P[i][t] * A[t][j] for t in range(g.n)) for j in range(g.n)] for i in range(g.n)]
    return WalkTable(g.n, g.m, tuple(counts))


def reverify(report: SearchReport) -> bool:
    """Recompute every reported violation from its graph6 encoding, via exact matrix powers."""
    K = report.inequality.max_index
    for v in report.violations:
        g = decode_graph6(encode_graph6(v.graph))
        if evaluate_inequality(report.inequality, _walks_by_matrix_power(g, K)) >= 0:
            return False
    return True


__all__ = [
    "CorpusLimitError", "WalkInequality", "WalkTableTooShort", "compile_polynomial", "to_polynomial",
    "evaluate_inequality", "builtin_inequality", "sandwich", "erdos", "symmetric_family", "agm",
    "dress_gutman", "parse_family", "parse_range", "Exhaustive", "FamilyScan", "GraphList",
    "SearchReport", "Violation", "search_counterexamples", "reverify",
]
