"""Univariate rational polynomials: Sturm sequences, root isolation, certified minima."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import floor
from typing import Sequence

from .polynomials import as_fraction


class UPoly:
    """Univariate polynomial over Q, coefficients lowest degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence = ()):
        cs = [as_fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    @classmethod
    def x(cls) -> "UPoly":
        return cls([0, 1])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lc(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __call__(self, x) -> Fraction:
        x = as_fraction(x)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def eval_float(self, x: float) -> float:
        acc = 0.0
        for c in reversed(self.coeffs):
            acc = acc * x + float(c)
        return acc

    def __eq__(self, other) -> bool:
        return isinstance(other, UPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"UPoly({[str(c) for c in self.coeffs]})"

    def __add__(self, other) -> "UPoly":
        other = other if isinstance(other, UPoly) else UPoly([other])
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return UPoly([x + y for x, y in zip(a, b)])

    def __neg__(self) -> "UPoly":
        return UPoly([-c for c in self.coeffs])

    def __sub__(self, other) -> "UPoly":
        other = other if isinstance(other, UPoly) else UPoly([other])
        return self + (-other)

    def __mul__(self, other) -> "UPoly":
        if not isinstance(other, UPoly):
            s = as_fraction(other)
            return UPoly([s * c for c in self.coeffs])
        if self.is_zero() or other.is_zero():
            return UPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return UPoly(out)

    __rmul__ = __mul__

    def derivative(self) -> "UPoly":
        return UPoly([i * c for i, c in enumerate(self.coeffs)][1:])

    def divmod(self, other: "UPoly") -> tuple["UPoly", "UPoly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return UPoly(), self
        quot = [Fraction(0)] * (dq + 1)
        lead = other.lc
        for i in range(dq, -1, -1):
            q = rem[i + other.degree] / lead
            quot[i] = q
            if q:
                for j, c in enumerate(other.coeffs):
                    rem[i + j] -= q * c
        return UPoly(quot), UPoly(rem[:other.degree])

    def __floordiv__(self, other: "UPoly") -> "UPoly":
        return self.divmod(other)[0]

    def __mod__(self, other: "UPoly") -> "UPoly":
        return self.divmod(other)[1]

    def monic(self) -> "UPoly":
        return self * (1 / self.lc) if self.coeffs else self


def gcd(a: UPoly, b: UPoly) -> UPoly:
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def squarefree_part(u: UPoly) -> UPoly:
    """u / gcd(u, u'): same distinct roots, all simple."""
    if u.degree <= 0:
        return u
    return (u // gcd(u, u.derivative())).monic()


def squarefree_decomposition(u: UPoly) -> list[UPoly]:
    """Yun's algorithm: returns ``[a1, a2, ...]`` with ``u = lc * prod(a_i**i)``."""
    if u.degree <= 0:
        return []
    u = u.monic()
    d = u.derivative()
    a = gcd(u, d)
    b = u // a
    c = d // a
    out = []
    while True:
        y = c - b.derivative()
        if b.degree == 0:
            break
        z = gcd(b, y)
        out.append(z)
        b = b // z
        c = y // z
    return out


def odd_multiplicity_part(u: UPoly) -> UPoly:
    """Product of the squarefree factors whose multiplicity is odd."""
    out = UPoly([1])
    for i, a in enumerate(squarefree_decomposition(u), start=1):
        if i % 2:
            out = out * a
    return out


def sturm_sequence(u: UPoly) -> list[UPoly]:
    seq = [u, u.derivative()]
    while not seq[-1].is_zero():
        seq.append(-(seq[-2] % seq[-1]))
    return seq[:-1]


def _sign_variations(seq: Sequence[UPoly], x: Fraction) -> int:
    signs = [s for s in (p(x) for p in seq) if s != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if (a < 0) != (b < 0))


def sturm_count_roots(u: UPoly, lo, hi, *, seq: Sequence[UPoly] | None = None) -> int:
    """Number of distinct real roots of ``u`` in the half-open interval (lo, hi]."""
    if u.is_zero():
        raise ValueError("zero polynomial has infinitely many roots")
    lo, hi = as_fraction(lo), as_fraction(hi)
    if not lo < hi:
        raise ValueError(f"empty interval ({lo}, {hi}]")
    if seq is None:
        seq = sturm_sequence(squarefree_part(u))
    return _sign_variations(seq, lo) - _sign_variations(seq, hi)


def cauchy_bound(u: UPoly) -> Fraction:
    """All real roots lie strictly inside (-B, B)."""
    if u.degree <= 0:
        return Fraction(1)
    return 1 + max(abs(c / u.lc) for c in u.coeffs[:-1])


def simplest_between(lo: Fraction, hi: Fraction) -> Fraction:
    """Rational with the smallest denominator in the open interval (lo, hi)."""
    if lo >= hi:
        raise ValueError("empty interval")
    if lo < 0 < hi:
        return Fraction(0)
    if hi <= 0:
        return -simplest_between(-hi, -lo)
    fl = floor(lo)
    if fl + 1 < hi:
        return Fraction(fl + 1)
    # lo and hi share the integer part (or hi is that integer + 1)
    frac_lo, frac_hi = lo - fl, hi - fl
    if frac_lo == 0:
        # lo is an integer; need something in (0, frac_hi)
        return fl + Fraction(1, floor(1 / frac_hi) + 1)
    return fl + 1 / simplest_between(1 / frac_hi, 1 / frac_lo)


@dataclass(frozen=True)
class RootInterval:
    """Isolating interval (lo, hi] holding exactly one root; lo == hi for an exact rational root."""

    lo: Fraction
    hi: Fraction

    @property
    def exact(self) -> bool:
        return self.lo == self.hi

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo


def isolate_real_roots(u: UPoly, max_width=None) -> list[RootInterval]:
    """Isolating intervals for the distinct real roots of ``u``, in increasing order.

    Bisection on Sturm counts. Before splitting, the simplest rational inside the
    interval is tested, so a rational root hit on the way is reported exactly.
    """
    if u.is_zero():
        raise ValueError("zero polynomial")
    p = squarefree_part(u)
    if p.degree <= 0:
        return []
    seq = sturm_sequence(p)
    B = cauchy_bound(p)
    max_width = None if max_width is None else as_fraction(max_width)
    out: list[RootInterval] = []
    stack = [(-B, B)]
    while stack:
        lo, hi = stack.pop()
        n = _sign_variations(seq, lo) - _sign_variations(seq, hi)
        if n == 0:
            continue
        if p(hi) == 0 and n == 1:
            out.append(RootInterval(hi, hi))
            continue
        q = simplest_between(lo, hi)
        if n == 1 and p(q) == 0:
            out.append(RootInterval(q, q))
            continue
        if n == 1 and (max_width is None or hi - lo <= max_width):
            out.append(RootInterval(lo, hi))
            continue
        mid = (lo + hi) / 2
        stack.append((mid, hi))
        stack.append((lo, mid))
    out.sort(key=lambda r: r.lo)
    return out


def refine_root(u: UPoly, iv: RootInterval, width) -> RootInterval:
    """Shrink an isolating interval of a root of the squarefree part of ``u``."""
    if iv.exact:
        return iv
    p = squarefree_part(u)
    seq = sturm_sequence(p)
    lo, hi = iv.lo, iv.hi
    width = as_fraction(width)
    while hi - lo > width:
        q = simplest_between(lo, hi)
        if p(q) == 0:
            return RootInterval(q, q)
        mid = (lo + hi) / 2
        if p(mid) == 0:
            return RootInterval(mid, mid)
        if _sign_variations(seq, lo) - _sign_variations(seq, mid) == 1:
            hi = mid
        else:
            lo = mid
    if p(hi) == 0:
        return RootInterval(hi, hi)
    return RootInterval(lo, hi)


# --------------------------------------------------------------------------
# global nonnegativity

@dataclass(frozen=True)
class NonnegativityResult:
    """Outcome of deciding ``u(x) >= 0`` on all of R.

    ``odd_roots`` counts real roots of odd multiplicity; ``witness`` is a
    rational point with ``u(witness) < 0`` when nonnegativity fails.
    """

    nonnegative: bool
    odd_roots: int
    witness: Fraction | None = None


def _negative_off_roots(u: UPoly) -> Fraction:
    # u <= 0 everywhere with finitely many roots: the first integer that is not a root works
    x = Fraction(0)
    while u(x) == 0:
        x += 1
    if u(x) >= 0:
        raise AssertionError("expected a polynomial that is nonpositive off its roots")
    return x


def decide_nonnegative(u: UPoly) -> NonnegativityResult:
    """Exact decision of global nonnegativity of ``u`` over the reals.

    ``u >= 0`` iff ``u`` has no real root of odd multiplicity and a positive
    leading coefficient (or ``u`` is a nonnegative constant).
    """
    if u.is_zero():
        return NonnegativityResult(True, 0)
    if u.degree == 0:
        ok = u.lc > 0
        return NonnegativityResult(ok, 0, None if ok else Fraction(0))
    odd = odd_multiplicity_part(u)
    n_odd = len(isolate_real_roots(odd)) if odd.degree > 0 else 0
    if n_odd == 0 and u.lc > 0:
        return NonnegativityResult(True, 0)
    return NonnegativityResult(False, n_odd, _negative_point_from_odd(u, odd))


def _negative_point_from_odd(u: UPoly, odd: UPoly) -> Fraction:
    roots = isolate_real_roots(odd) if odd.degree > 0 else []
    if not roots:
        # no sign change and negative leading coefficient
        return _negative_off_roots(u)
    # u changes sign across each odd-multiplicity root; bracket one of them so no
    # other root of u lies inside, then one endpoint is negative
    sf = squarefree_part(u)
    for r in roots:
        if r.exact:
            iv = _isolate_for_u(sf, r.lo)
        else:
            iv = r
            while True:
                c = sturm_count_roots(sf, iv.lo, iv.hi)
                if c == 1 and sf(iv.lo) != 0 and sf(iv.hi) != 0:
                    break
                iv = refine_root(odd, iv, iv.width / 2)
                if iv.exact:
                    iv = _isolate_for_u(sf, iv.lo)
                    break
        for cand in (iv.lo, iv.hi):
            if u(cand) < 0:
                return cand
    raise AssertionError("odd-multiplicity root without a sign change")


def _isolate_for_u(sf: UPoly, root: Fraction) -> RootInterval:
    # bracket a known rational root so that no other root of sf is in [lo, hi]
    h = Fraction(1)
    while True:
        lo, hi = root - h, root + h
        if sf(lo) != 0 and sf(hi) != 0 and sturm_count_roots(sf, lo, hi) == 1:
            return RootInterval(lo, hi)
        h /= 2


def is_nonnegative(u: UPoly) -> bool:
    return decide_nonnegative(u).nonnegative


# --------------------------------------------------------------------------
# certified global minimum

@dataclass(frozen=True)
class MinimumBound:
    """Certified lower bound ``L`` with ``u - L >= 0`` on R."""

    bound: Fraction
    critical_points: tuple[RootInterval, ...]
    steps: int


def certified_global_min_bound(u: UPoly, tol) -> MinimumBound:
    """Exact rational ``L`` with ``u(x) >= L`` for all x and ``L >= min u - tol``.

    The candidate is the least value of ``u`` at rational points inside refined
    enclosures of the critical points. Nonnegativity of ``u - L`` is then decided
    exactly; on failure ``L`` is lowered by ``tol`` and checked again, which also
    guarantees the ``tol`` closeness of the returned bound.
    """
    tol = as_fraction(tol)
    if tol <= 0:
        raise ValueError("tol must be positive")
    if u.degree < 0 or u.degree % 2 or u.lc <= 0:
        raise ValueError("certified minimum needs even degree and positive leading coefficient")
    if u.degree == 0:
        return MinimumBound(u.lc, (), 0)
    du = u.derivative()
    crit = []
    for iv in isolate_real_roots(du):
        crit.append(_refine_for_value(u, du, iv, tol))
    candidates = []
    for iv in crit:
        if iv.exact:
            candidates.append(u(iv.lo))
        else:
            candidates.append(min(u(iv.lo), u(iv.hi), u(simplest_between(iv.lo, iv.hi))))
    L = min(candidates)
    if decide_nonnegative(u - UPoly([L])).nonnegative:
        # a candidate value that passes is the exact minimum
        return MinimumBound(L, tuple(crit), 0)
    # round down onto the tol/2 grid; keeps L >= min - tol
    grid = tol / 2
    L = floor(L / grid) * grid
    steps = 0
    while not decide_nonnegative(u - UPoly([L])).nonnegative:
        L -= tol
        steps += 1
    return MinimumBound(L, tuple(crit), steps)


def _refine_for_value(u: UPoly, du: UPoly, iv: RootInterval, tol: Fraction) -> RootInterval:
    # shrink until the variation of u across the enclosure is below tol / 2
    while not iv.exact:
        bound = sum(abs(c) for c in du.coeffs) * max(abs(iv.lo), abs(iv.hi), 1) ** max(du.degree, 0)
        if bound * iv.width <= tol / 2:
            break
        iv = refine_root(du, iv, iv.width / 2)
    return iv
