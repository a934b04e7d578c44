"""Floating-point spectral diagnostics: eigenvalues, all-ones weights, identity residuals.

Nothing here feeds a certificate; all validity claims come from exact arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations_with_replacement, permutations
from math import factorial, prod

import numpy as np

from .graph import Graph, walk_counts
from .polynomials import Polynomial, symmetrize

GROUP_TOL = 1e-9
WEIGHT_TOL = 1e-9


class SpectralError(RuntimeError):
    pass


@dataclass(frozen=True)
class SpectralData:
    eigenvalues: tuple[float, ...]  # descending
    weights: tuple[float, ...]      # squared coordinates of the all-ones vector
    n: int
    m: int

    def aggregated(self, tol: float = GROUP_TOL) -> list[tuple[float, float]]:
        """(eigenvalue, total weight) per group of eigenvalues within ``tol``.

        Individual weights depend on the chosen eigenbasis inside degenerate
        eigenspaces; only these sums are basis independent.
        """
        groups: list[list[int]] = []
        for i, lam in enumerate(self.eigenvalues):
            if groups and abs(self.eigenvalues[groups[-1][-1]] - lam) <= tol:
                groups[-1].append(i)
            else:
                groups.append([i])
        return [
            (float(np.mean([self.eigenvalues[i] for i in g])), sum(self.weights[i] for i in g))
            for g in groups
        ]

    def residuals(self) -> dict[str, float]:
        sum_mu2 = sum(self.weights)
        w1 = sum(l * w for l, w in zip(self.eigenvalues, self.weights))
        return {
            "sum_mu2": abs(sum_mu2 - self.n) / max(1, self.n),
            "w1": abs(w1 - 2 * self.m) / max(1, 2 * self.m),
        }

    def to_json(self) -> dict:
        return {
            "eigenvalues": list(self.eigenvalues),
            "weights": list(self.weights),
            "residuals": self.residuals(),
        }


def spectral_decompose(g: Graph) -> SpectralData:
    if g.n < 1:
        raise ValueError("spectral decomposition needs n >= 1")
    A = g.adjacency_matrix()
    try:
        vals, vecs = np.linalg.eigh(A)
    except np.linalg.LinAlgError as exc:
        raise SpectralError(f"eigendecomposition failed: {exc}") from exc
    if not (np.all(np.isfinite(vals)) and np.all(np.isfinite(vecs))):
        raise SpectralError("eigendecomposition returned non-finite values")
    order = np.argsort(vals)[::-1]
    vals = vals[order]
    vecs = vecs[:, order]
    mu = vecs.T @ np.ones(g.n)
    w = mu * mu
    if np.any(w < -WEIGHT_TOL):
        raise SpectralError("negative weight beyond tolerance")
    w = np.where(w < 0, 0.0, w)
    sd = SpectralData(tuple(float(v) for v in vals), tuple(float(x) for x in w), g.n, g.m)
    res = sd.residuals()
    if res["sum_mu2"] > 1e-8 or res["w1"] > 1e-8:
        raise SpectralError(f"spectral invariants violated: {res}")
    return sd


def walk_counts_spectral(s: SpectralData, K: int) -> list[float]:
    if K < 0:
        raise ValueError("K must be nonnegative")
    lam = np.array(s.eigenvalues)
    w = np.array(s.weights)
    return [float(np.sum(lam ** k * w)) for k in range(K + 1)]


def stabilizer_size(index_tuple) -> int:
    """Number of permutations fixing a (sorted) index tuple: product of multiplicity factorials."""
    out = 1
    run = 1
    for a, b in zip(index_tuple, index_tuple[1:]):
        if a == b:
            run += 1
        else:
            out *= factorial(run)
            run = 1
    return out * factorial(run)


def gamma(index_tuple) -> float:
    return 1.0 / stabilizer_size(index_tuple)


@lru_cache(maxsize=None)
def _index_tuples(n: int, k: int):
    tuples = np.array(list(combinations_with_replacement(range(n), k)), dtype=np.int64).reshape(-1, k)
    gam = np.array([gamma(tuple(t)) for t in tuples])
    return tuples, gam


class IdentityEvaluator:
    """Both sides of the symmetrization identity for one polynomial, vectorized over graphs.

    LHS: sum of c_alpha * w_{alpha_1} ... w_{alpha_k} with exact walk counts.
    RHS: sum over i_1 <= ... <= i_k of gamma * f_sym(lambda_i) * mu_{i_1}^2 ... mu_{i_k}^2.
    """

    def __init__(self, f: Polynomial):
        self.f = f
        self.k = f.k
        fs = symmetrize(f)
        self.sym_exps = np.array(fs.support(), dtype=np.int64).reshape(-1, f.k)
        self.sym_coefs = np.array([float(fs.coefficient(e)) for e in fs.support()])
        self.max_index = max((max(e) for e in f.support()), default=0)

    def lhs(self, g: Graph) -> float:
        wt = walk_counts(g, self.max_index)
        total = 0
        for e, c in self.f.items():
            total += c * prod(wt[a] for a in e)
        return float(total)

    def rhs(self, s: SpectralData) -> float:
        if self.k == 0:
            return float(self.sym_coefs.sum()) if len(self.sym_coefs) else 0.0
        tuples, gam = _index_tuples(s.n, self.k)
        lam = np.array(s.eigenvalues)[tuples]        # (M, k)
        mu2 = np.array(s.weights)[tuples].prod(axis=1)  # (M,)
        if len(self.sym_coefs) == 0:
            return 0.0
        mono = (lam[:, None, :] ** self.sym_exps[None, :, :]).prod(axis=2)  # (M, T)
        fsym = mono @ self.sym_coefs
        return float(np.sum(gam * fsym * mu2))

    def residual(self, g: Graph, s: SpectralData | None = None) -> float:
        if s is None:
            s = spectral_decompose(g)
        lhs = self.lhs(g)
        return abs(lhs - self.rhs(s)) / max(1.0, abs(lhs))


def symmetrization_identity_residual(f: Polynomial, g: Graph) -> float:
    return IdentityEvaluator(f).residual(g)
