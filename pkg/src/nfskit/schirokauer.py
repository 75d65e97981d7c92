"""Schirokauer maps: construction, evaluation, dual basis and kernel invariance."""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from sympy import isprime

from .errors import BadEllError, DegenerateMapError, DomainError, NotInKellError, SingularUnitsError
from .galois import FracAutomorphism, apply_to_element
from .mathcore import (
    ModPoly, degree, discriminant, mpowmod, poly, poly_factor_degrees_mod, poly_resultant,
)
from .modlinalg import inverse_mod, matmul_mod, rank_mod


@dataclass(frozen=True)
class SchirokauerMap:
    f: tuple
    ell: int
    epsilon: int
    coordRows: tuple  # r rows of length deg f, residues mod ell

    @property
    def r(self):
        return len(self.coordRows)


def schirokauer_epsilon(f, ell: int) -> int:
    f = poly(f)
    if not isprime(ell):
        raise BadEllError(f"{ell} is not prime")
    if f[-1] != 1:
        raise BadEllError("Schirokauer maps need a monic polynomial")
    if discriminant(f) % ell == 0:
        raise BadEllError(f"{ell} divides the discriminant")
    degs = poly_factor_degrees_mod(ModPoly(ell, tuple(c % ell for c in f)))
    return math.lcm(*(ell ** d - 1 for d in set(degs)))


def _to_residues(gamma, m):
    """Coefficients of gamma (ints or Fractions) as residues mod m."""
    out = []
    for c in gamma:
        c = Fraction(c)
        if c.denominator % m == 0 or math.gcd(c.denominator, m) != 1:
            raise NotInKellError("denominator not coprime to ell")
        out.append(c.numerator * pow(c.denominator, -1, m) % m)
    return out


def _norm_mod(f, gamma, ell):
    res = _to_residues(gamma, ell)
    return poly_resultant(f, poly(res)) % ell if poly(res) else 0


def full_log(f, ell, epsilon, gamma):
    """(gamma^epsilon - 1)/ell in F_ell[x]/(f), all deg f coordinates."""
    d = degree(f)
    if _norm_mod(f, gamma, ell) == 0:
        raise NotInKellError("norm divisible by ell")
    m = ell * ell
    g = mpowmod(_to_residues(gamma, m), epsilon, list(f), m)
    g = list(g) + [0] * (d - len(g))
    g[0] = (g[0] - 1) % m
    if any(c % ell for c in g):
        raise DomainError("gamma^epsilon is not 1 modulo ell")
    return [c // ell for c in g]


def sm_evaluate(smap: SchirokauerMap, gamma) -> list:
    if smap.r == 0:
        return []
    v = full_log(smap.f, smap.ell, smap.epsilon, gamma)
    return [sum(a * b for a, b in zip(row, v)) % smap.ell for row in smap.coordRows]


def random_k_ell(f, ell, rng: random.Random):
    """Uniform element of Z[x]/(f) with coefficients in [0, ell^2) and norm prime to ell."""
    d = degree(f)
    while True:
        g = tuple(rng.randrange(ell * ell) for _ in range(d))
        if poly(g) and _norm_mod(f, g, ell):
            return g


def sm_build(f, ell: int, r: int, seed: int = 0) -> SchirokauerMap:
    """First r coordinates, swapping in later ones if the sample rank is short."""
    f = poly(f)
    eps = schirokauer_epsilon(f, ell)
    d = degree(f)
    if r == 0:
        return SchirokauerMap(f, ell, eps, ())
    if r > d:
        raise DomainError("rank exceeds the degree")
    rng = random.Random(seed)
    samples = [full_log(f, ell, eps, random_k_ell(f, ell, rng)) for _ in range(2 * r)]
    chosen = []
    for j in range(d):
        trial = chosen + [j]
        if rank_mod([[s[k] for k in trial] for s in samples], ell) == len(trial):
            chosen = trial
        if len(chosen) == r:
            break
    if len(chosen) < r:
        raise DegenerateMapError("no rank-r choice of coordinates")
    rows = tuple(tuple(1 if k == j else 0 for k in range(d)) for j in chosen)
    return SchirokauerMap(f, ell, eps, rows)


def sample_rank(smap: SchirokauerMap, count: int, seed: int = 1) -> int:
    rng = random.Random(seed)
    vals = [sm_evaluate(smap, random_k_ell(smap.f, smap.ell, rng)) for _ in range(count)]
    return rank_mod(vals, smap.ell) if smap.r else 0


def sm_dualize(smap: SchirokauerMap, units: Sequence, vanishing: int = 0) -> SchirokauerMap:
    """lambda' = L^-1 lambda with L[i][j] = lambda_i(u_j); keeps the last r - vanishing rows."""
    units = list(getattr(units, "units", units))
    r, ell = smap.r, smap.ell
    if len(units) != r:
        raise DomainError(f"need {r} units, got {len(units)}")
    if not 0 <= vanishing <= r:
        raise DomainError("vanishing count out of range")
    if r == 0:
        return smap
    cols = [sm_evaluate(smap, u) for u in units]
    L = [[cols[j][i] for j in range(r)] for i in range(r)]
    try:
        C = inverse_mod(L, ell)
    except DomainError as exc:
        raise SingularUnitsError("units are not a basis modulo ell") from exc
    rows = matmul_mod(C, [list(x) for x in smap.coordRows], ell)
    return SchirokauerMap(smap.f, ell, smap.epsilon, tuple(tuple(x) for x in rows[vanishing:]))


@dataclass
class InvarianceReport:
    ok: bool
    M: list | None
    checked: int
    failure: tuple | None = None


def sm_kernel_invariance_check(smap: SchirokauerMap, sigma: FracAutomorphism, samples: int = 50,
                               seed: int = 0, extra: Sequence = (),
                               evaluate: Callable | None = None) -> InvarianceReport:
    """Fit M with map(sigma(gamma)) = M map(gamma) and test it on fresh elements.

    evaluate replaces sm_evaluate, e.g. to test a map that is not polynomial.
    """
    f, ell = smap.f, smap.ell
    ev = evaluate or (lambda g: sm_evaluate(smap, g))
    r = len(ev((1,) + (0,) * (degree(f) - 1)))
    rng = random.Random(seed)
    if r == 0:
        return InvarianceReport(True, [], 0)

    def pair(g):
        return ev(g), ev(apply_to_element(g, sigma, f))

    X, Y = [], []
    while len(X) < r + 4:
        x, y = pair(random_k_ell(f, ell, rng))
        X.append(x)
        Y.append(y)
    basis, idx = [], []
    for i, x in enumerate(X):
        if rank_mod(basis + [x], ell) > len(basis):
            basis.append(x)
            idx.append(i)
        if len(basis) == r:
            break
    if len(basis) < r:
        return InvarianceReport(False, None, 0, ("rank", None))
    # rows: y_k = M x_k  ->  Y_b^T = M X_b^T
    Xb_inv = inverse_mod([[X[i][a] for i in idx] for a in range(r)], ell)
    Yb = [[Y[i][a] for i in idx] for a in range(r)]
    M = matmul_mod(Yb, Xb_inv, ell)

    def consistent(x, y):
        return all(sum(M[a][b] * x[b] for b in range(r)) % ell == y[a] % ell for a in range(r))

    pool = [(X[i], Y[i], None) for i in range(len(X))]
    checked = 0
    for g in list(extra) + [random_k_ell(f, ell, rng) for _ in range(samples)]:
        x, y = pair(g)
        pool.append((x, y, g))
    for x, y, g in pool:
        checked += 1
        if not consistent(x, y):
            return InvarianceReport(False, M, checked, (g, x, y))
    return InvarianceReport(True, M, checked)
