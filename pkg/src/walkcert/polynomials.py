"""Sparse multivariate polynomials with exact rational coefficients."""

from __future__ import annotations

from fractions import Fraction
from itertools import permutations
from math import factorial
from typing import Iterable, Mapping, Sequence

MAX_SYMMETRIZE_VARS = 8

Exponent = tuple[int, ...]


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        # floats are accepted only when they are exact decimals the user typed
        return Fraction(str(x))
    return Fraction(x)


def format_fraction(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


class Polynomial:
    """Polynomial in ``k`` variables stored as ``{exponent tuple: Fraction}``.

    Zero coefficients are never stored. Instances are treated as immutable.
    """

    __slots__ = ("k", "_terms", "_hash")

    def __init__(self, k: int, terms: Mapping[Sequence[int], object] | Iterable = ()):
        if k < 0:
            raise ValueError("variable count must be nonnegative")
        self.k = k
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Exponent, Fraction] = {}
        for exp, c in items:
            exp = tuple(int(e) for e in exp)
            if len(exp) != k:
                raise ValueError(f"exponent {exp} has length {len(exp)}, expected {k}")
            if any(e < 0 for e in exp):
                raise ValueError(f"negative exponent in {exp}")
            acc[exp] = acc.get(exp, Fraction(0)) + as_fraction(c)
        self._terms = {e: c for e, c in acc.items() if c != 0}
        self._hash = None

    # construction helpers

    @classmethod
    def constant(cls, k: int, c=1) -> "Polynomial":
        return cls(k, {(0,) * k: c})

    @classmethod
    def monomial(cls, exp: Sequence[int], c=1) -> "Polynomial":
        return cls(len(exp), {tuple(exp): c})

    @classmethod
    def variable(cls, k: int, i: int) -> "Polynomial":
        exp = [0] * k
        exp[i] = 1
        return cls(k, {tuple(exp): 1})

    # basic accessors

    @property
    def terms(self) -> dict[Exponent, Fraction]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def support(self) -> list[Exponent]:
        return sorted(self._terms)

    def coefficient(self, exp: Sequence[int]) -> Fraction:
        return self._terms.get(tuple(exp), Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self) -> int:
        return len(self._terms)

    def total_degree(self) -> int:
        if not self._terms:
            return -1
        return max(sum(e) for e in self._terms)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self._terms}) <= 1

    # arithmetic

    def _check(self, other: "Polynomial"):
        if other.k != self.k:
            raise ValueError(f"variable count mismatch: {self.k} vs {other.k}")

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        return Polynomial.constant(self.k, as_fraction(other))

    def __add__(self, other) -> "Polynomial":
        other = self._coerce(other)
        acc = dict(self._terms)
        for e, c in other._terms.items():
            acc[e] = acc.get(e, 0) + c
        return Polynomial(self.k, acc)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.k, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other) -> "Polynomial":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Polynomial":
        return self._coerce(other) - self

    def __mul__(self, other) -> "Polynomial":
        if not isinstance(other, Polynomial):
            s = as_fraction(other)
            return Polynomial(self.k, {e: s * c for e, c in self._terms.items()})
        self._check(other)
        acc: dict[Exponent, Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                acc[e] = acc.get(e, 0) + c1 * c2
        return Polynomial(self.k, acc)

    __rmul__ = __mul__

    def __pow__(self, p: int) -> "Polynomial":
        if p < 0:
            raise ValueError("negative power")
        out = Polynomial.constant(self.k)
        base = self
        while p:
            if p & 1:
                out = out * base
            base = base * base
            p >>= 1
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.k == other.k and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.k, frozenset(self._terms.items())))
        return self._hash

    def permute(self, perm: Sequence[int]) -> "Polynomial":
        """Return ``f(x_{perm[0]}, ..., x_{perm[k-1]})`` (0-based ``perm``)."""
        if sorted(perm) != list(range(self.k)):
            raise ValueError(f"{perm} is not a permutation of 0..{self.k - 1}")
        out = {}
        for e, c in self._terms.items():
            new = [0] * self.k
            for i, ei in enumerate(e):
                new[perm[i]] += ei
            out[tuple(new)] = c
        return Polynomial(self.k, out)

    def multiply_monomial(self, exp: Sequence[int]) -> "Polynomial":
        return Polynomial(self.k, {tuple(a + b for a, b in zip(e, exp)): c for e, c in self._terms.items()})

    # evaluation

    def __call__(self, *point):
        return evaluate(self, point)

    def __repr__(self) -> str:
        return f"Polynomial({self.k}, {format_polynomial(self)!r})"

    def __str__(self) -> str:
        return format_polynomial(self)

    # serialization

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "terms": [{"exp": list(e), "coef": format_fraction(self._terms[e])}
                      for e in sorted(self._terms, reverse=True)],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "Polynomial":
        try:
            k = int(data["k"])
            terms = [(t["exp"], Fraction(str(t["coef"]))) for t in data["terms"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed polynomial JSON: {exc}") from None
        return cls(k, terms)


def format_polynomial(f: Polynomial) -> str:
    if f.is_zero():
        return "0"
    parts = []
    for e in sorted(f.support(), reverse=True):
        c = f.coefficient(e)
        mono = "*".join(f"x{i + 1}" + (f"^{a}" if a > 1 else "") for i, a in enumerate(e) if a)
        mag = abs(c)
        if mono:
            body = mono if mag == 1 else f"{format_fraction(mag)}*{mono}"
        else:
            body = format_fraction(mag)
        parts.append(("- " if c < 0 else "+ ") + body)
    s = " ".join(parts)
    return s[2:] if s.startswith("+ ") else "-" + s[2:]


def symmetrize(f: Polynomial) -> Polynomial:
    """Sum of ``f`` over all k! permutations of its variables."""
    if f.k > MAX_SYMMETRIZE_VARS:
        raise ValueError(f"symmetrization limited to k <= {MAX_SYMMETRIZE_VARS} (got k={f.k})")
    acc: dict[Exponent, Fraction] = {}
    for e, c in f.items():
        # distinct images of e weighted by stabilizer size
        images = set(permutations(e))
        mult = factorial(f.k) // len(images)
        for img in images:
            acc[img] = acc.get(img, 0) + mult * c
    return Polynomial(f.k, acc)


def expand_product(factors: Sequence[Polynomial], k: int | None = None) -> Polynomial:
    if not factors:
        if k is None:
            k = 0
        return Polynomial.constant(k)
    out = factors[0]
    for g in factors[1:]:
        out = out * g
    return out


def evaluate(f: Polynomial, point: Sequence) -> Fraction:
    if len(point) != f.k:
        raise ValueError(f"point has {len(point)} coordinates, expected {f.k}")
    pt = [as_fraction(x) for x in point]
    total = Fraction(0)
    for e, c in f.items():
        term = c
        for x, a in zip(pt, e):
            if a:
                term *= x ** a
        total += term
    return total


def evaluate_real(f: Polynomial, point: Sequence[float]) -> float:
    if len(point) != f.k:
        raise ValueError(f"point has {len(point)} coordinates, expected {f.k}")
    total = 0.0
    for e, c in f.items():
        term = float(c)
        for x, a in zip(point, e):
            if a:
                term *= x ** a
        total += term
    return total


def binomial(beta: Sequence[int], alpha: Sequence[int]) -> Polynomial:
    """``x^beta - x^alpha``."""
    return Polynomial(len(beta), [(beta, 1), (alpha, -1)])
