"""Polynomial quality: Dickman rho, Murphy alpha and E, norm-size estimates."""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from functools import lru_cache

import mpmath
import numpy as np
from sympy import primerange

from .errors import DomainError
from .mathcore import degree, mtrim, pderiv, poly, poly_roots_mod, ModPoly

RHO_MAX_U = 30
_RHO_TERMS = 200


# ---------------------------------------------------------------------------
# Dickman rho

@lru_cache(maxsize=None)
def _rho_series():
    """Taylor coefficients of rho(k - xi), xi in [0, 1], for k = 1..RHO_MAX_U.

    On [k-1, k] the delay equation u rho'(u) = -rho(u-1) becomes
    (k - xi) c'(xi) = d(xi) with d the expansion on the previous interval,
    and continuity at u = k-1 fixes the constant term.
    """
    with mpmath.workdps(60):
        table = [[mpmath.mpf(1)] + [mpmath.mpf(0)] * (_RHO_TERMS - 1)]
        for k in range(2, RHO_MAX_U + 1):
            d = table[-1]
            c = [mpmath.mpf(0)] * _RHO_TERMS
            for i in range(_RHO_TERMS - 1):
                c[i + 1] = (d[i] + i * c[i]) / (k * (i + 1))
            c[0] = d[0] - mpmath.fsum(c[1:])
            table.append(c)
        return [[float(x) for x in row] for row in table]


def dickman_rho(u: float) -> float:
    """rho(u); 1 for u <= 1 and 0 beyond u = 30."""
    if u <= 1:
        return 1.0
    if u > RHO_MAX_U:
        return 0.0
    k = math.ceil(u)
    xi = k - u
    acc = 0.0
    for c in reversed(_rho_series()[k - 1]):
        acc = acc * xi + c
    return acc


@lru_cache(maxsize=None)
def _log_rho_grid(steps_per_unit=4096):
    us = np.arange(0, RHO_MAX_U * steps_per_unit + 1) / steps_per_unit
    series = np.array(_rho_series())
    k = np.maximum(np.ceil(us).astype(np.int64), 1)
    xi = k - us
    acc = np.zeros_like(us)
    for j in range(series.shape[1] - 1, -1, -1):
        acc = acc * xi + series[k - 1, j]
    acc[us <= 1] = 1.0
    return steps_per_unit, np.log(acc)


def dickman_rho_array(u: np.ndarray) -> np.ndarray:
    """Vectorized rho by log-linear interpolation (relative error below 4e-8)."""
    spu, table = _log_rho_grid()
    u = np.asarray(u, dtype=float)
    x = np.clip(u, 0.0, RHO_MAX_U) * spu
    i = np.minimum(x.astype(np.int64), len(table) - 2)
    t = x - i
    out = np.exp(table[i] * (1 - t) + table[i + 1] * t)
    out[u <= 1] = 1.0
    out[u > RHO_MAX_U] = 0.0
    return out


# ---------------------------------------------------------------------------
# Murphy alpha

@dataclass(frozen=True)
class MurphyParams:
    K: int = 2000
    Bf: float = 1e7
    Bg: float = 5e6
    alphaPrimeBound: int = 2000

    def __post_init__(self):
        if self.K < 1 or self.Bf < 2 or self.Bg < 2:
            raise DomainError("MurphyParams: K >= 1 and bounds >= 2 required")


_MAX_DEPTH = 64


def _vq(x, q):
    if x == 0:
        return math.inf
    v = 0
    while x % q == 0:
        x //= q
        v += 1
    return v


@lru_cache(maxsize=4096)
def _sqrt_table(q):
    tab = np.full(q, -1, dtype=np.int64)
    r = np.arange(q, dtype=np.int64)
    tab[r * r % q] = r
    return tab


def _roots_small(coeffs, q):
    f = [c % q for c in coeffs]
    f = mtrim(f)
    if len(f) < 2:
        return []
    if len(f) == 2:
        return [(-f[0]) * pow(f[1], -1, q) % q]
    if len(f) == 3 and 2 < q < 1 << 16:
        c, b, a = f
        s = int(_sqrt_table(q)[(b * b - 4 * a * c) % q])
        if s < 0:
            return []
        i2a = pow(2 * a, -1, q)
        return sorted({(-b + s) * i2a % q, (-b - s) * i2a % q})
    if q < 64:
        out = []
        for r in range(q):
            acc = 0
            for c in reversed(f):
                acc = (acc * r + c) % q
            if acc == 0:
                out.append(r)
        return out
    return poly_roots_mod(ModPoly(q, tuple(f)))


def _expected_affine(F, q, depth, acc_val, need):
    """E[v_q(F(x))] for x uniform in Z_q.  need[0] tracks the q-adic precision read."""
    if depth > _MAX_DEPTH:
        return 0.0
    c = min((_vq(x, q) for x in F if x), default=math.inf)
    if c is math.inf:
        raise DomainError("zero polynomial in valuation recursion")
    need[0] = max(need[0], acc_val + c + 1)
    if c:
        qc = q ** c
        F = [x // qc for x in F]
    total = float(c)
    roots = _roots_small(F, q)
    if not roots:
        return total
    dF = pderiv(F)
    for r in roots:
        if sum(x * pow(r, i, q) for i, x in enumerate(dF)) % q:
            total += 1.0 / (q - 1)
        else:
            G = _taylor_shift_scaled(F, r, q)
            total += _expected_affine(G, q, depth + 1, acc_val + c, need) / q
    return total


def _taylor_shift_scaled(F, r, q):
    """Coefficients of F(r + q*y)."""
    n = len(F)
    G = list(F)
    # Horner-style shift by r, then scale coefficient i by q^i
    for i in range(n):
        for j in range(n - 2, i - 1, -1):
            G[j] += r * G[j + 1]
    return [g * q ** i for i, g in enumerate(G)]


def _avg_valuation_core(F, q):
    need = [0]
    n = len(F) - 1
    aff = _expected_affine(list(F), q, 0, 0, need)
    rev = [F[n - i] * q ** i for i in range(n + 1)]
    proj = _expected_affine(rev, q, 0, 0, need)
    return (q * aff + proj) / (q + 1), need[0]


_AVG_CACHE: dict = {}


def _quadratic_avg(F, q):
    """Closed form for a quadratic with q odd and q not dividing the leading term.

    Completing the square reduces v(F(x)) to v(y^2 - D/4a^2) with y uniform
    in Z_q; the projective point contributes nothing.
    """
    c, b, a = F
    D = b * b - 4 * a * c
    if D == 0:
        return q / (q + 1) * 2.0 / (q - 1)
    k = 0
    while D % q == 0:
        D //= q
        k += 1
    e = sum((1 - 1 / q) * q ** -j * 2 * j for j in range((k + 1) // 2))
    if k % 2:
        e += k * q ** (-(k + 1) // 2)
    else:
        m = k // 2
        square = pow(D % q, (q - 1) // 2, q) == 1
        e += k * q ** (-m - 1) + (1 - 1 / q) * q ** -m * (k + (2 * q / (q - 1) ** 2 if square else 0.0))
    return q / (q + 1) * e


def avg_valuation(F, q) -> float:
    """Average q-valuation of F(a, b) over coprime pairs (a, b), exactly."""
    F = tuple(F)
    if len(F) == 3 and q > 2 and F[2] % q:
        return _quadratic_avg(F, q)
    for m in range(1, 8):
        key = (q, m, tuple(x % q ** m for x in F))
        hit = _AVG_CACHE.get(key)
        if hit is not None:
            return hit
    val, m = _avg_valuation_core(F, q)
    if m < 8 and len(_AVG_CACHE) < 500000:
        _AVG_CACHE[(q, m, tuple(x % q ** m for x in F))] = val
    return val


@lru_cache(maxsize=None)
def _primes(bound):
    return tuple(primerange(2, bound + 1))


def alpha_contribution(F, q) -> float:
    return (1.0 / (q - 1) - avg_valuation(F, q)) * math.log(q)


def murphy_alpha(f, params: MurphyParams = MurphyParams()) -> float:
    f = poly(f)
    if degree(f) < 1:
        raise DomainError("alpha needs a non-constant polynomial")
    return math.fsum(alpha_contribution(f, q) for q in _primes(params.alphaPrimeBound))


# ---------------------------------------------------------------------------
# Murphy E

def sample_angles(K):
    return (np.arange(1, K + 1) - 0.5) * (math.pi / K)


def homogeneous_log_abs(h, thetas, scale):
    """ln|H(scale cos t, scale sin t)| for the homogenization H of h."""
    d = degree(h)
    c, s = np.cos(thetas), np.sin(thetas)
    acc = np.zeros_like(thetas)
    for i, coef in enumerate(h):
        acc = acc + float(coef) * c ** i * s ** (d - i)
    with np.errstate(divide="ignore"):
        return np.log(np.abs(acc)) + d * math.log(scale)


def murphy_e(f, g, params: MurphyParams = MurphyParams(), areaScale: float = 2.0 ** 27,
             alpha_f: float | None = None, alpha_g: float | None = None) -> float:
    f, g = poly(f), poly(g)
    if not f or not g:
        raise DomainError("Murphy E needs nonzero polynomials")
    th = sample_angles(params.K)
    af = murphy_alpha(f, params) if alpha_f is None else alpha_f
    ag = murphy_alpha(g, params) if alpha_g is None else alpha_g
    uf = (homogeneous_log_abs(f, th, areaScale) + af) / math.log(params.Bf)
    ug = (homogeneous_log_abs(g, th, areaScale) + ag) / math.log(params.Bg)
    terms = [dickman_rho(a) * dickman_rho(b) for a, b in zip(uf.tolist(), ug.tolist())]
    return math.fsum(terms)


# ---------------------------------------------------------------------------
# vectorized alpha over a pencil lam1*g1 + lam2*g2

def _eval_mod_array(coeffs, rs, q):
    acc = np.zeros_like(rs)
    for c in reversed(coeffs):
        acc = (acc * rs + (c % q)) % q
    return acc


def _pad(a, n):
    return list(a) + [0] * (n + 1 - len(a))


def pencil_alpha(g1, g2, lam1: np.ndarray, lam2: np.ndarray, bound: int) -> np.ndarray:
    """alpha(lam1*g1 + lam2*g2) for arrays of coprime (lam1, lam2).

    Residue classes of (lam1 : lam2) mod q with only simple roots use the
    closed form; other classes are refined with q^2 information or computed
    exactly one by one.
    """
    n = max(degree(g1), degree(g2))
    G1, G2 = _pad(g1, n), _pad(g2, n)
    lam1 = np.asarray(lam1, dtype=np.int64)
    lam2 = np.asarray(lam2, dtype=np.int64)
    m = len(lam1)
    alpha = np.zeros(m)
    for q in _primes(bound):
        avg = _pencil_avg(G1, G2, n, lam1, lam2, q)
        alpha += (1.0 / (q - 1) - avg) * math.log(q)
    return alpha


@lru_cache(maxsize=1 << 14)
def _inv_table(q):
    inv = np.zeros(q, dtype=np.int64)
    inv[1:] = [pow(x, -1, q) for x in range(1, q)]
    return inv


@lru_cache(maxsize=1 << 14)
def _pencil_tables(G1, G2, n, q):
    """Root counts and bad flags for every class (a : b) in P^1(F_q); class q is (1 : 0)."""
    rs = np.arange(q, dtype=np.int64)
    v1 = _eval_mod_array(G1, rs, q)
    v2 = _eval_mod_array(G2, rs, q)
    d1 = _eval_mod_array(pderiv(G1) or [0], rs, q)
    d2 = _eval_mod_array(pderiv(G2) or [0], rs, q)
    inv = _inv_table(q)

    def cls(a, b):
        a, b = np.asarray(a) % q, np.asarray(b) % q
        return np.where(b != 0, (a * inv[b]) % q, q)

    count = np.zeros(q + 1, dtype=np.int64)
    bad = np.zeros(q + 1, dtype=bool)

    both = (v1 == 0) & (v2 == 0)
    single = ~both
    c_single = cls(v2[single], -v1[single])
    np.add.at(count, c_single, 1)
    w = (v2 * d1 - v1 * d2) % q
    bad[np.unique(c_single[w[single] == 0])] = True
    # common roots of g1 and g2 are roots of every class
    for r in rs[both].tolist():
        count += 1
        a, b = int(d2[r]), int(-d1[r])
        if a % q == 0 and b % q == 0:
            bad[:] = True
        else:
            bad[int(cls(a, b))] = True
    # projective roots
    l1, l2 = G1[n] % q, G2[n] % q
    s1, s2 = G1[n - 1] % q, G2[n - 1] % q
    if l1 == 0 and l2 == 0:
        count += 1
        if s1 == 0 and s2 == 0:
            bad[:] = True
        else:
            bad[int(cls(s2, -s1))] = True
    else:
        pc = int(cls(l2, -l1))
        count[pc] += 1
        if (l2 * s1 - l1 * s2) % q == 0:
            bad[pc] = True
    # the class (if any) where the whole polynomial vanishes mod q
    nz = [i for i in range(n + 1) if G1[i] % q or G2[i] % q]
    if not nz:
        bad[:] = True
    else:
        a, b = G2[nz[0]] % q, -G1[nz[0]] % q
        if all((a * G1[i] + b * G2[i]) % q == 0 for i in range(n + 1)):
            bad[int(cls(a, b))] = True
    return count, bad


def _pencil_avg(G1, G2, n, lam1, lam2, q):
    count, bad = _pencil_tables(tuple(G1), tuple(G2), n, q)
    inv = _inv_table(q)
    a, b = lam1 % q, lam2 % q
    cand_cls = np.where(b != 0, (a * inv[b]) % q, q)
    avg = count[cand_cls] * (q / (q * q - 1.0))
    bad_idx = np.nonzero(bad[cand_cls])[0]
    if len(bad_idx):
        avg[bad_idx] = [_bad_class_avg(G1, G2, n, int(lam1[i]), int(lam2[i]), q) for i in bad_idx]
    return avg


def _bad_class_avg(G1, G2, n, l1, l2, q):
    return avg_valuation(poly(l1 * a + l2 * b for a, b in zip(G1, G2)), q)


# ---------------------------------------------------------------------------
# norm-size estimates (product of the norms, in bits)

METHODS = ("CONJ", "GJL", "JLSV1", "JLSV2")

# (Q decimal digits, Q bits, E bits)
E_TABLE = (
    (60, 200, 19), (80, 266, 20), (100, 333, 21), (120, 399, 23), (140, 466, 25),
    (160, 532, 27), (180, 598, 28), (204, 678, 29), (220, 731, 30),
)


def e_bits_for(q_bits: float) -> float:
    """Sieve-area bits from the table, linearly interpolated (clamped) in Q bits."""
    xs = [r[1] for r in E_TABLE]
    ys = [r[2] for r in E_TABLE]
    return float(np.interp(q_bits, xs, ys))


@dataclass(frozen=True)
class NormEstimate:
    method: str
    degF: int
    degG: int
    qBits: float
    eBits: float
    totalBits: float
    eCoeff: int
    qCoeff: object  # Fraction


def norm_exponents(method: str, n: int, degF: int, degG: int):
    """(coefficient of E bits, coefficient of Q bits) of the norm product."""
    from fractions import Fraction
    method = method.upper()
    if method == "CONJ":
        if degF != 2 * n or degG != n:
            raise DomainError("conjugation needs deg f = 2n, deg g = n")
        return 3 * n, Fraction(1, 2 * n)
    if method == "GJL":
        if degF != degG + 1 or degG < n:
            raise DomainError("GJL needs deg f = deg g + 1 >= n + 1")
        return degF + degG, Fraction(1, degG + 1)
    if method == "JLSV1":
        if degF != n or degG != n:
            raise DomainError("JLSV1 needs deg f = deg g = n")
        return 2 * n, Fraction(1, n)
    if method == "JLSV2":
        if degG != n or degF < n:
            raise DomainError("JLSV2 needs deg g = n <= deg f")
        return degF + n, Fraction(3, 2 * (degF + 1))
    raise DomainError(f"unknown method {method}")


def norm_size_estimate(method, n, degF, degG, qBits, eBits) -> NormEstimate:
    ec, qc = norm_exponents(method, n, degF, degG)
    total = ec * eBits + float(qc) * qBits
    return NormEstimate(method.upper(), degF, degG, qBits, eBits, total, ec, qc)


def method_rows(n: int):
    """The candidate (method, degF, degG) rows compared for F_{p^n}."""
    return [
        ("GJL", n + 1, n), ("GJL", n + 2, n + 1), ("CONJ", 2 * n, n), ("JLSV1", n, n),
        ("JLSV2", n, n), ("JLSV2", n + 1, n), ("JLSV2", n + 2, n), ("JLSV2", n + 3, n),
    ]


def curve_rows(n: int, q_dd_values):
    rows = []
    for dd in q_dd_values:
        qb = dd * math.log2(10)
        eb = e_bits_for(qb)
        for method, dF, dG in method_rows(n):
            est = norm_size_estimate(method, n, dF, dG, qb, eb)
            rows.append((dd, qb, eb, method, dF, dG, est.totalBits))
    return rows


def curves_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["q_dd", "q_bits", "e_bits", "method", "deg_f", "deg_g", "total_bits"])
    for dd, qb, eb, m, dF, dG, tot in rows:
        w.writerow([dd, f"{qb:.6g}", f"{eb:.6g}", m, dF, dG, f"{tot:.6g}"])
    return buf.getvalue()
