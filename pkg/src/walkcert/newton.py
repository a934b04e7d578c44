"""Newton polytope vertices by exact LP, and the vertex-coefficient test."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .polynomials import Exponent, Polynomial


def _phase_one_feasible(A: list[list[Fraction]], b: list[Fraction]) -> bool:
    """Decide whether ``A x = b, x >= 0`` has a solution (exact, Bland's rule)."""
    m = len(A)
    ncols = len(A[0]) if A else 0
    rows = []
    for i in range(m):
        row = list(A[i])
        rhs = b[i]
        if rhs < 0:
            row = [-a for a in row]
            rhs = -rhs
        art = [Fraction(0)] * m
        art[i] = Fraction(1)
        rows.append(row + art + [rhs])
    total = ncols + m
    basis = [ncols + i for i in range(m)]
    # objective: minimize the sum of artificials, expressed in reduced-cost form
    obj = [Fraction(0)] * (total + 1)
    for r in rows:
        for j in range(ncols):
            obj[j] -= r[j]
        obj[total] -= r[total]
    while True:
        enter = next((j for j in range(total) if obj[j] < 0), None)
        if enter is None:
            break
        leave, best = None, None
        for i, r in enumerate(rows):
            if r[enter] > 0:
                ratio = r[total] / r[enter]
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    leave, best = i, ratio
        if leave is None:
            # unbounded cannot happen for a phase-one objective bounded below by 0
            raise AssertionError("phase-one LP reported unbounded")
        piv = rows[leave][enter]
        prow = [v / piv for v in rows[leave]]
        rows[leave] = prow
        for i, r in enumerate(rows):
            if i != leave and r[enter] != 0:
                f = r[enter]
                rows[i] = [a - f * p for a, p in zip(r, prow)]
        if obj[enter] != 0:
            f = obj[enter]
            obj = [a - f * p for a, p in zip(obj, prow)]
        basis[leave] = enter
    return obj[total] == 0


def in_convex_hull(point: Sequence[int], others: Sequence[Sequence[int]]) -> bool:
    if not others:
        return False
    dim = len(point)
    A = [[Fraction(p[d]) for p in others] for d in range(dim)]
    A.append([Fraction(1)] * len(others))
    b = [Fraction(x) for x in point] + [Fraction(1)]
    return _phase_one_feasible(A, b)


def newton_vertices(points: Sequence[Sequence[int]]) -> list[Exponent]:
    """Vertices of conv(points): exactly the points outside the hull of the rest."""
    pts = sorted({tuple(p) for p in points})
    return [p for i, p in enumerate(pts) if not in_convex_hull(p, pts[:i] + pts[i + 1:])]


@dataclass(frozen=True)
class VertexViolation:
    vertex: Exponent
    coefficient: Fraction
    reason: str  # "negative-coefficient" or "odd-coordinate"


@dataclass(frozen=True)
class NewtonCheck:
    vertices: tuple[Exponent, ...]
    violations: tuple[VertexViolation, ...] = field(default=())

    @property
    def passed(self) -> bool:
        return not self.violations

    @property
    def refuted(self) -> bool:
        return bool(self.violations)

    @property
    def vertex(self) -> Exponent | None:
        return self.violations[0].vertex if self.violations else None

    @property
    def coefficient(self) -> Fraction | None:
        return self.violations[0].coefficient if self.violations else None

    def to_json(self) -> dict:
        from .polynomials import format_fraction

        out = {"status": "pass" if self.passed else "refuted",
               "vertices": [list(v) for v in self.vertices]}
        if self.violations:
            out["violations"] = [
                {"vertex": list(v.vertex), "coefficient": format_fraction(v.coefficient), "reason": v.reason}
                for v in self.violations
            ]
        return out


def newton_vertex_check(f: Polynomial) -> NewtonCheck:
    """Necessary condition for f >= 0: every Newton vertex is even with positive coefficient.

    A pass says nothing about nonnegativity.
    """
    if f.is_zero():
        raise ValueError("Newton polytope of the zero polynomial is empty")
    verts = newton_vertices(f.support())
    bad = []
    for v in verts:
        c = f.coefficient(v)
        if c < 0:
            bad.append(VertexViolation(v, c, "negative-coefficient"))
        if any(a % 2 for a in v):
            bad.append(VertexViolation(v, c, "odd-coordinate"))
    return NewtonCheck(tuple(verts), tuple(bad))
