"""Exact nonnegativity certificates for symmetrized forms, and obstructions to them."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Mapping, Sequence

from .inequalities import WalkInequality, compile_polynomial
from .newton import newton_vertex_check
from .polynomials import (
    MAX_SYMMETRIZE_VARS,
    Polynomial,
    as_fraction,
    binomial,
    evaluate,
    expand_product,
    format_fraction,
    symmetrize,
)
from .univariate import UPoly, certified_global_min_bound, decide_nonnegative, sturm_count_roots

KINDS = ("Square", "Sandwich", "AgmSos", "UnivariateMin", "BinaryPsd")


class CertificateError(RuntimeError):
    """An exact verification failed where it must succeed."""


@dataclass(frozen=True)
class SosDecomposition:
    """``sum coef_i * poly_i**2`` with positive rational ``coef_i``."""

    squares: tuple[tuple[Fraction, Polynomial], ...]

    def expand(self, k: int) -> Polynomial:
        out = Polynomial(k)
        for c, h in self.squares:
            out = out + c * (h * h)
        return out

    def verify(self, target: Polynomial) -> bool:
        return all(c > 0 for c, _ in self.squares) and self.expand(target.k) == target

    def to_json(self) -> list:
        return [{"coef": format_fraction(c), "poly": h.to_json()} for c, h in self.squares]

    @classmethod
    def from_json(cls, data: Sequence[Mapping]) -> "SosDecomposition":
        return cls(tuple((Fraction(str(d["coef"])), Polynomial.from_json(d["poly"])) for d in data))


@dataclass(frozen=True)
class Obstruction:
    kind: str  # OddVertex | NegativeVertexCoefficient | OddDegree | NegativeWitness
    data: dict

    def to_json(self) -> dict:
        return {"kind": self.kind, **_jsonable(self.data)}


def _jsonable(x):
    if isinstance(x, Fraction):
        return format_fraction(x)
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


@dataclass(frozen=True)
class Certificate:
    kind: str
    params: dict
    base_poly: Polynomial
    sos: SosDecomposition | None = None
    record: dict = field(default_factory=dict)

    @property
    def k(self) -> int:
        return self.base_poly.k

    def verify(self) -> bool:
        """Recompute the validity argument from ``params`` alone."""
        try:
            return _verify(self)
        except (ValueError, KeyError, CertificateError):
            return False

    def inequality(self) -> WalkInequality:
        """The walk inequality implied by nonnegativity of the symmetrized base polynomial."""
        return compile_polynomial(self.base_poly)

    def claim(self) -> WalkInequality:
        return self.inequality().primitive()

    def to_json(self) -> dict:
        out: dict[str, Any] = {
            "kind": self.kind,
            "params": _jsonable(self.params),
            "base_poly": self.base_poly.to_json(),
            "inequality": self.inequality().to_json(),
            "verified": self.verify(),
        }
        if self.sos is not None:
            out["sos"] = self.sos.to_json()
        return out

    @classmethod
    def from_json(cls, data: Mapping) -> "Certificate":
        kind = data["kind"]
        if kind not in KINDS:
            raise ValueError(f"unknown certificate kind {kind!r}")
        params = dict(data["params"])
        if "L" in params:
            params["L"] = Fraction(str(params["L"]))
        if "a" in params and isinstance(params["a"], list):
            params["a"] = [Fraction(str(x)) for x in params["a"]]
        sos = SosDecomposition.from_json(data["sos"]) if data.get("sos") is not None else None
        # any stored "verified" flag is ignored; call verify()
        return cls(kind, params, Polynomial.from_json(data["base_poly"]), sos)


# --------------------------------------------------------------------------
# constructions

def _check_perm(sigma: Sequence[int], k: int) -> tuple[int, ...]:
    sigma = tuple(int(s) for s in sigma)
    if sorted(sigma) != list(range(k)):
        raise ValueError(f"{sigma} is not a permutation of 0..{k - 1}")
    return sigma


def square_binomial(alpha: Sequence[int], sigma: Sequence[int]) -> Polynomial:
    """``x^alpha - prod_i x_{sigma(i)}^{alpha_i}`` with 0-based ``sigma``."""
    k = len(alpha)
    sigma = _check_perm(sigma, k)
    moved = [0] * k
    for i, a in enumerate(alpha):
        moved[sigma[i]] += a
    return binomial(tuple(alpha), tuple(moved))


def square_certificate(alpha: Sequence[int], sigma: Sequence[int]) -> Certificate:
    k = len(alpha)
    if k > MAX_SYMMETRIZE_VARS:
        raise ValueError(f"k <= {MAX_SYMMETRIZE_VARS} required")
    h = square_binomial(alpha, sigma)
    f = expand_product([h, h], k)
    return Certificate("Square", {"alpha": list(alpha), "sigma": list(_check_perm(sigma, k))}, f,
                       record={"argument": "square of a binomial"})


def sandwich_factors(a: int, b: int, c: int) -> list[Polynomial]:
    return [
        Polynomial.monomial((2 * a, 2 * a)),
        binomial((2 * b + c, 0), (0, 2 * b + c)),
        binomial((c, 0), (0, c)),
    ]


def sandwich_polynomial(a: int, b: int, c: int) -> Polynomial:
    return binomial((2 * a, 2 * (a + b + c)), (2 * a + c, 2 * (a + b) + c))


def sandwich_certificate(a: int, b: int, c: int) -> Certificate:
    if min(a, b, c) < 0:
        raise ValueError("a, b, c must be nonnegative")
    f = sandwich_polynomial(a, b, c)
    if symmetrize(f) != expand_product(sandwich_factors(a, b, c)):
        raise CertificateError(f"factorization identity failed for (a,b,c)=({a},{b},{c})")
    return Certificate("Sandwich", {"a": a, "b": b, "c": c}, f, record={
        "argument": "f_sym = (x1*x2)^(2a) (x1^(2b+c) - x2^(2b+c)) (x1^c - x2^c); "
                    "exponents 2b+c and c share parity, so both differences have the same sign",
    })


def agm_form(alpha: Sequence[int]) -> Polynomial:
    """``sum alpha_i x_i^{2d} - 2d x^alpha`` with ``2d = |alpha|``."""
    k = len(alpha)
    D = sum(alpha)
    terms = []
    for i, a in enumerate(alpha):
        if a:
            e = [0] * k
            e[i] = D
            terms.append((e, a))
    terms.append((list(alpha), -D))
    return Polynomial(k, terms)


def _mediate(p: tuple[int, ...]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    # p = (s + t) / 2 with s != t both even lattice points of the same simplex
    odd = [i for i, x in enumerate(p) if x % 2]
    s, t = list(p), list(p)
    if odd:
        for i, j in zip(odd[::2], odd[1::2]):
            s[i] += 1
            s[j] -= 1
            t[i] -= 1
            t[j] += 1
    else:
        nz = sorted((i for i, x in enumerate(p) if x), key=lambda i: (-p[i], i))
        i, j = nz[0], nz[-1]
        s[i] += p[j]
        s[j] -= p[j]
        t[i] -= p[j]
        t[j] += p[j]
    return tuple(s), tuple(t)


def _solve(A: list[list[Fraction]], b: list[Fraction]) -> list[Fraction]:
    n = len(b)
    M = [row[:] + [b[i]] for i, row in enumerate(A)]
    for col in range(n):
        piv = next(r for r in range(col, n) if M[r][col] != 0)
        M[col], M[piv] = M[piv], M[col]
        pv = M[col][col]
        M[col] = [v / pv for v in M[col]]
        for r in range(n):
            if r != col and M[r][col] != 0:
                f = M[r][col]
                M[r] = [x - f * y for x, y in zip(M[r], M[col])]
    return [M[i][n] for i in range(n)]


def agm_sos_decomposition(alpha: Sequence[int]) -> SosDecomposition:
    """Rational sos decomposition of ``agm_form(alpha)``.

    Every non-vertex lattice point p of the simplex {|p| = 2d} is the midpoint
    of two distinct even points s, t, and ``(x^s + x^t)/2 - x^p`` is the square
    ``(x^(s/2) - x^(t/2))^2 / 2``. Chaining these moves from alpha is a random
    walk absorbed at the vertices 2d*e_i with absorption probabilities
    alpha_i / 2d, and weighting each square by the expected number of visits
    to p reproduces the form exactly.
    """
    alpha = tuple(int(a) for a in alpha)
    k, D = len(alpha), sum(alpha)
    start = alpha

    def is_vertex(p):
        return max(p) == D

    moves: dict[tuple[int, ...], tuple[tuple[int, ...], tuple[int, ...]]] = {}
    frontier = [start] if not is_vertex(start) else []
    while frontier:
        p = frontier.pop()
        if p in moves:
            continue
        moves[p] = _mediate(p)
        for q in moves[p]:
            if not is_vertex(q) and q not in moves:
                frontier.append(q)
    states = sorted(moves)
    if not states:
        return SosDecomposition(())
    pos = {p: i for i, p in enumerate(states)}
    # visits h solve h = e_start + Q^T h over transient states
    n = len(states)
    A = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for p, (s, t) in moves.items():
        for q in (s, t):
            if q in pos:
                A[pos[q]][pos[p]] -= Fraction(1, 2)
    rhs = [Fraction(int(p == start)) for p in states]
    h = _solve(A, rhs)
    squares = []
    for p, hp in zip(states, h):
        if hp == 0:
            continue
        s, t = moves[p]
        poly = binomial(tuple(x // 2 for x in s), tuple(x // 2 for x in t))
        squares.append((D * hp / 2, poly))
    return SosDecomposition(tuple(squares))


def agm_sos(alpha: Sequence[int]) -> Certificate:
    alpha = [int(a) for a in alpha]
    D = sum(alpha)
    if D % 2 or D < 2:
        raise ValueError("|alpha| must be even and at least 2")
    if len(alpha) > MAX_SYMMETRIZE_VARS:
        raise ValueError(f"k <= {MAX_SYMMETRIZE_VARS} required")
    f = agm_form(alpha)
    sos = agm_sos_decomposition(alpha)
    if not sos.verify(f):
        raise CertificateError(f"sos expansion does not reproduce the AGM form for alpha={alpha}")
    return Certificate("AgmSos", {"alpha": alpha}, f, sos, record={"squares": len(sos.squares)})


# --------------------------------------------------------------------------
# binary forms

@dataclass(frozen=True)
class BinaryPsdResult:
    psd: bool
    certificate: Certificate | None = None
    obstruction: Obstruction | None = None

    def to_json(self) -> dict:
        if self.psd:
            return {"status": "psd", "certificate": self.certificate.to_json()}
        return {"status": "not_psd", "refutation": self.obstruction.to_json()}


def _dehomogenize(f: Polynomial, var: int) -> UPoly:
    # var = 0: u(t) = f(t, 1); var = 1: v(t) = f(1, t)
    deg = max((e[var] for e in f.support()), default=0)
    coeffs = [Fraction(0)] * (deg + 1)
    for e, c in f.items():
        coeffs[e[var]] += c
    return UPoly(coeffs)


def _binary_record(f: Polynomial) -> tuple[dict, Obstruction | None]:
    if f.is_zero():
        return {"degree": None}, None
    D = f.total_degree()
    record: dict[str, Any] = {"degree": D}
    if D % 2:
        u = _dehomogenize(f, 0)
        t = Fraction(0)
        while u(t) == 0:
            t += 1
        point = (t, Fraction(1)) if u(t) < 0 else (-t, Fraction(-1))
        return record, _witness(f, point, "odd degree form takes both signs")
    for point in ((Fraction(1), Fraction(0)), (Fraction(0), Fraction(1))):
        if evaluate(f, point) < 0:
            return record, _witness(f, point, "negative on a coordinate axis")
    record["axis_values"] = [f.coefficient((D, 0)), f.coefficient((0, D))]
    for var, name in ((0, "u"), (1, "v")):
        res = decide_nonnegative(_dehomogenize(f, var))
        record[f"{name}_odd_roots"] = res.odd_roots
        if not res.nonnegative:
            point = (res.witness, Fraction(1)) if var == 0 else (Fraction(1), res.witness)
            return record, _witness(f, point, f"sign change of {name}(t)")
    return record, None


def _witness(f: Polynomial, point, reason: str) -> Obstruction:
    val = evaluate(f, point)
    if not val < 0:
        raise CertificateError(f"witness {point} does not refute: value {val}")
    return Obstruction("NegativeWitness", {"point": list(point), "value": val, "reason": reason})


def binary_psd_decide(f: Polynomial) -> BinaryPsdResult:
    """Exact psd decision for a binary form via Sturm analysis of its dehomogenizations.

    The zero form is reported psd.
    """
    if f.k != 2:
        raise ValueError("binary_psd_decide needs a form in exactly 2 variables")
    if not f.is_homogeneous():
        raise ValueError("input is not homogeneous")
    record, obstruction = _binary_record(f)
    if obstruction is not None:
        return BinaryPsdResult(False, obstruction=obstruction)
    cert = Certificate("BinaryPsd", {"form": f.to_json()}, f, record=_jsonable(record))
    return BinaryPsdResult(True, certificate=cert)


# --------------------------------------------------------------------------
# two-factor characterization

@dataclass(frozen=True)
class TwoFactorResult:
    params: tuple[int, int, int] | None
    obstruction: Obstruction | None = None
    certificate: Certificate | None = None

    @property
    def ok(self) -> bool:
        return self.params is not None

    def to_json(self) -> dict:
        if self.ok:
            a, b, c = self.params
            return {"params": {"a": a, "b": b, "c": c}, "certificate": self.certificate.to_json()}
        return {"refuted": self.obstruction.to_json()}


def two_factor_characterize(alpha: Sequence[int], beta: Sequence[int]) -> TwoFactorResult:
    """Test ``w_a1 w_a2 <= w_b1 w_b2`` against the sandwich parameterization."""
    if len(alpha) != 2 or len(beta) != 2:
        raise ValueError("two-factor candidates need exactly two indices per side")
    if sum(alpha) != sum(beta):
        raise ValueError("|alpha| must equal |beta|")
    a1, a2 = sorted(alpha)
    b1, b2 = sorted(beta)
    if b1 % 2 or b2 % 2:
        v = (b1, b2) if b1 % 2 else (b2, b1)
        return TwoFactorResult(None, Obstruction("OddVertex", {"vertex": list(v), "condition": "beta even"}))
    if not (b1 <= a1 <= a2 <= b2):
        return TwoFactorResult(None, Obstruction("NegativeVertexCoefficient", {
            "vertex": [a1, a2] if a1 < b1 else [a2, a1], "coefficient": Fraction(-1),
            "condition": "beta1 <= alpha1 <= alpha2 <= beta2"}))
    if (a1 - a2) % 2:
        return TwoFactorResult(None, Obstruction("OddVertex", {"vertex": [a1, a2],
                                                               "condition": "alpha1 = alpha2 mod 2"}))
    a, c, b = b1 // 2, a1 - b1, (a2 - a1) // 2
    if b2 != 2 * (a + b + c):
        raise CertificateError("parameterization inconsistent with |alpha| = |beta|")
    return TwoFactorResult((a, b, c), certificate=sandwich_certificate(a, b, c))


# --------------------------------------------------------------------------
# univariate non-binomial inequalities

def univariate_polynomial(k: int, a: Sequence) -> UPoly:
    """``x^{2k} - a_1 x^{2k-1} - ... - a_{2k-1} x``."""
    coeffs = [Fraction(0)] * (2 * k + 1)
    coeffs[2 * k] = Fraction(1)
    for j, aj in enumerate(a, start=1):
        coeffs[2 * k - j] = -as_fraction(aj)
    return UPoly(coeffs)


def univariate_certificate(k: int, a: Sequence, tol=Fraction(1, 10**6)) -> Certificate:
    if k < 1:
        raise ValueError("k must be positive")
    a = [as_fraction(x) for x in a]
    if len(a) != 2 * k - 1:
        raise ValueError(f"need {2 * k - 1} coefficients a_1..a_{2 * k - 1}, got {len(a)}")
    if any(x < 0 for x in a):
        raise ValueError("all a_j must be nonnegative")
    if not any(a):
        raise ValueError("at least one a_j must be nonzero")
    u = univariate_polynomial(k, a)
    mb = certified_global_min_bound(u, tol)
    B = 1 + max(a)
    positive_roots = sturm_count_roots(u, 0, B)
    if positive_roots != 1:
        raise CertificateError(f"expected exactly one root in (0, {B}], found {positive_roots}")
    base = Polynomial(1, [((i,), c) for i, c in enumerate((u - UPoly([mb.bound])).coeffs)])
    return Certificate("UnivariateMin", {"k": k, "a": a, "L": mb.bound}, base, record={
        "root_bracket": [Fraction(0), B],
        "positive_roots": positive_roots,
        "tol": as_fraction(tol),
        "lowering_steps": mb.steps,
    })


# --------------------------------------------------------------------------
# obstructions

def erdos_polynomial(l: int, p: int, k: int) -> Polynomial:
    """``x1^{2l+pk} (x2...xk)^{2l} - (x1...xk)^{2l+p}``."""
    first = [2 * l + p * k] + [2 * l] * (k - 1)
    return binomial(tuple(first), tuple([2 * l + p] * k))


def candidate_polynomial(lhs: Sequence[int], rhs: Sequence[int]) -> Polynomial:
    """Base polynomial ``x^rhs - x^lhs`` of the candidate ``prod w_lhs <= prod w_rhs``."""
    if len(lhs) != len(rhs):
        raise ValueError("both sides need the same number of factors")
    return binomial(tuple(rhs), tuple(lhs))


def sample_negative_witness(f: Polynomial, samples: int, seed: int = 0, bound: int = 8) -> Obstruction | None:
    rng = random.Random(seed)
    for _ in range(samples):
        pt = [Fraction(rng.randint(-bound * 4, bound * 4), rng.randint(1, 4)) for _ in range(f.k)]
        if evaluate(f, pt) < 0:
            return _witness(f, pt, "random sampling")
    return None


def psd_obstructions(f: Polynomial, *, samples: int = 0, seed: int = 0) -> list[Obstruction]:
    """Reasons why the symmetrization of ``f`` cannot be nonnegative.

    An empty list means none were found; it is not a certificate. ``samples``
    enables a seeded random search for a negative point (off by default).
    """
    fs = symmetrize(f)
    out: list[Obstruction] = []
    if fs.is_zero():
        return out
    deg = fs.total_degree()
    if deg % 2:
        out.append(Obstruction("OddDegree", {"degree": deg}))
    check = newton_vertex_check(fs)
    for v in check.violations:
        if v.reason == "odd-coordinate":
            out.append(Obstruction("OddVertex", {"vertex": list(v.vertex), "coefficient": v.coefficient}))
        else:
            out.append(Obstruction("NegativeVertexCoefficient",
                                   {"vertex": list(v.vertex), "coefficient": v.coefficient}))
    if samples:
        w = sample_negative_witness(fs, samples, seed)
        if w is not None:
            out.append(w)
    return out


# --------------------------------------------------------------------------
# index shift

def shift_certificate(cert: Certificate, a: int) -> Certificate:
    """Multiply the symmetrized base by ``(x1...xk)^{2a}``; every walk index rises by 2a."""
    if a < 0:
        raise ValueError("shift must be nonnegative")
    if a == 0:
        return cert
    if not cert.verify():
        raise CertificateError("refusing to shift an unverified certificate")
    # a shifted base is already symmetric
    sym = cert.base_poly if "shift" in cert.params else symmetrize(cert.base_poly)
    base = sym.multiply_monomial((2 * a,) * cert.k)
    params = dict(cert.params)
    params["shift"] = params.get("shift", 0) + a
    return Certificate(cert.kind, params, base, cert.sos, dict(cert.record))


# --------------------------------------------------------------------------
# verification

def _unshifted_base(cert: Certificate) -> Polynomial:
    p = cert.params
    if cert.kind == "Square":
        h = square_binomial(p["alpha"], p["sigma"])
        return h * h
    if cert.kind == "Sandwich":
        a, b, c = int(p["a"]), int(p["b"]), int(p["c"])
        if symmetrize(sandwich_polynomial(a, b, c)) != expand_product(sandwich_factors(a, b, c)):
            raise CertificateError("factorization identity failed")
        return sandwich_polynomial(a, b, c)
    if cert.kind == "AgmSos":
        f = agm_form(p["alpha"])
        if cert.sos is None or not cert.sos.verify(f):
            raise CertificateError("sos decomposition does not expand to the AGM form")
        return f
    if cert.kind == "UnivariateMin":
        u = univariate_polynomial(int(p["k"]), p["a"]) - UPoly([as_fraction(p["L"])])
        if not decide_nonnegative(u).nonnegative:
            raise CertificateError("u - L is not nonnegative")
        return Polynomial(1, [((i,), c) for i, c in enumerate(u.coeffs)])
    if cert.kind == "BinaryPsd":
        f = Polynomial.from_json(p["form"])
        _, obstruction = _binary_record(f)
        if obstruction is not None:
            raise CertificateError("binary form is not psd")
        return f
    raise ValueError(f"unknown certificate kind {cert.kind!r}")


def _verify(cert: Certificate) -> bool:
    base = _unshifted_base(cert)
    shift = int(cert.params.get("shift", 0))
    if shift:
        base = symmetrize(base).multiply_monomial((2 * shift,) * base.k)
    return base == cert.base_poly
