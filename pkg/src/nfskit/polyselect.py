"""Polynomial selection: JLSV1, JLSV2, generalized Joux-Lercier, conjugation,
and the lambda1*g1 + lambda2*g2 improvement driven by Murphy E."""
from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np
import sympy
from sympy import isprime

from .errors import (
    DomainError, NoReconstructionError, NoValidPhiError, SearchExhaustedError,
)
from .galois import FracAutomorphism
from .mathcore import (
    ModPoly, count_real_roots, degree, factor_mod, format_poly, lll_reduce, mmod, mmonic, mred,
    norm_inf, padd, parse_poly, pmul, poly, poly_is_irreducible_mod,
    poly_roots_mod, primitive, pscale, pshift, rational_reconstruction,
)
from . import quality

log = logging.getLogger(__name__)

METHODS = ("jlsv1", "jlsv2", "gjl", "conj")


@dataclass(frozen=True)
class PolyPair:
    p: int
    n: int
    f: tuple
    g: tuple
    phi: tuple  # monic, coefficients in [0, p)
    method: str
    aux: dict = field(default_factory=dict, compare=False, hash=False)

    @property
    def q_bits(self):
        return self.n * math.log2(self.p)


@dataclass(frozen=True)
class CyclicFamily:
    n: int
    g_v: tuple
    g_u: tuple
    automorphism: FracAutomorphism
    preferred_mu: tuple = ()

    def member(self, a):
        return padd(self.g_v, pscale(self.g_u, a))


# Cyclic families g_v + a*g_u with a fractional-linear automorphism.  The n = 4
# family is stored with g_u = x - x^3 (the family is symmetric in a -> -a).
TABLE3 = {
    2: (
        CyclicFamily(2, (1, 0, 1), (0, 1), FracAutomorphism(0, 1, 1, 0, 2), ((-2, 0, 1),)),
        CyclicFamily(2, (-1, 0, 1), (0, 1), FracAutomorphism(0, -1, 1, 0, 2)),
        CyclicFamily(2, (0, 0, 1), (1,), FracAutomorphism(-1, 0, 0, 1, 2)),
    ),
    3: (CyclicFamily(3, (-1, -3, 0, 1), (0, -1, -1), FracAutomorphism(-1, -1, 1, 0, 3),
                     ((1, -1, 1),)),),
    4: (CyclicFamily(4, (1, 0, -6, 0, 1), (0, 1, 0, -1), FracAutomorphism(-1, -1, 1, -1, 4)),),
    6: (CyclicFamily(6, (1, 0, -15, -20, 0, 6, 1), (0, -2, -5, 0, 5, 2),
                     FracAutomorphism(-2, -1, 1, -1, 6)),),
}


def default_family(n):
    fams = TABLE3.get(n)
    return fams[0] if fams else None


def binomial_family(n):
    """g_v = x^n, g_u = -1 (no automorphism)."""
    return CyclicFamily(n, (0,) * n + (1,), (-1,), None)


def normalize(g):
    return primitive(g)


def phi_divides(pair_phi, h, p) -> bool:
    return not mmod(list(h), list(pair_phi), p)


def check_pair(pair: PolyPair) -> None:
    p, phi = pair.p, list(pair.phi)
    if len(phi) - 1 != pair.n or phi[-1] != 1:
        raise DomainError("phi must be monic of degree n")
    if not poly_is_irreducible_mod(ModPoly(p, tuple(phi))):
        raise DomainError("phi is reducible mod p")
    if not (phi_divides(phi, pair.f, p) and phi_divides(phi, pair.g, p)):
        raise DomainError("phi does not divide f and g mod p")
    if not degree(pair.f) >= degree(pair.g) >= pair.n:
        raise DomainError("degree condition deg f >= deg g >= n violated")


# ---------------------------------------------------------------------------
# JLSV1

def select_jlsv1(p: int, n: int, family: CyclicFamily | None = None,
                 a_start: int | None = None, width: int = 100000) -> PolyPair:
    if not isprime(p):
        raise DomainError("p must be prime")
    family = family or default_family(n)
    if family is None:
        raise DomainError(f"no default family for n = {n}")
    if degree(family.g_v) != n:
        raise DomainError("family degree differs from n")
    a = max(a_start or 0, math.isqrt(p - 1) + 1)
    for a in range(a, a + width):
        f = family.member(a)
        if not poly_is_irreducible_mod(ModPoly(p, f)):
            continue
        try:
            u, v = rational_reconstruction(a % p, p)
        except NoReconstructionError:
            continue
        g = normalize(padd(pscale(family.g_v, v), pscale(family.g_u, u)))
        phi = tuple(mmonic(mred(list(f), p), p))
        pair = PolyPair(p, n, f, g, phi, "jlsv1", {"a": a, "u": u, "v": v})
        check_pair(pair)
        return pair
    raise SearchExhaustedError(f"no irreducible f_v + a f_u within {width} values of a")


# ---------------------------------------------------------------------------
# JLSV2

def divisible_lattice(h, p, d):
    """Rows p*x^i (i < deg h) then x^j*h: degree <= d polynomials divisible by h mod p."""
    n = degree(h)
    rows = []
    for i in range(n):
        r = [0] * (d + 1)
        r[i] = p
        rows.append(r)
    for j in range(d + 1 - n):
        r = [0] * (d + 1)
        for i, c in enumerate(h):
            r[i + j] = c
        rows.append(r)
    return rows


def select_jlsv2(p: int, n: int, d: int, g0, max_increments: int = 10000) -> PolyPair:
    g0 = poly(g0)
    if d < n or degree(g0) != n or g0[-1] != 1:
        raise DomainError("need monic g0 of degree n and d >= n")
    W = sympy.integer_nthroot(p, d + 1)[0] + 1
    for _ in range(max_increments):
        g = pshift(g0, W)
        if poly_is_irreducible_mod(ModPoly(p, g)):
            break
        W += 1
    else:
        raise SearchExhaustedError("no irreducible translate of g0 found")
    rows = lll_reduce(divisible_lattice(g, p, d))
    f = normalize(rows[0])
    phi = tuple(mmonic(mred(list(g), p), p))
    pair = PolyPair(p, n, f, g, phi, "jlsv2", {"W": W})
    check_pair(pair)
    return pair


# ---------------------------------------------------------------------------
# generalized Joux-Lercier

def gjl_lattice(phi, p, dprime):
    return divisible_lattice(phi, p, dprime)


def select_gjl(p: int, n: int, f) -> PolyPair:
    f = poly(f)
    dprime = degree(f) - 1
    if dprime < n:
        raise DomainError("GJL needs deg f >= n + 1")
    try:
        facs = factor_mod(ModPoly(p, f))
    except Exception as exc:
        raise NoValidPhiError(f"cannot factor f mod p: {exc}") from exc
    cands = [fa for fa in facs if len(fa) - 1 == n]
    if not cands:
        raise NoValidPhiError(f"f mod p has no irreducible factor of degree {n}")
    phi = cands[0]
    rows = lll_reduce(gjl_lattice(phi, p, dprime))
    g = normalize(rows[0])
    pair = PolyPair(p, n, f, g, tuple(phi), "gjl", {"dprime": dprime})
    check_pair(pair)
    return pair


def gjl_second_vector(pair: PolyPair):
    rows = lll_reduce(gjl_lattice(pair.phi, pair.p, degree(pair.g)))
    g1 = normalize(pair.g)
    for r in rows:
        if normalize(r) != g1:
            return normalize(r)
    raise DomainError("no independent second vector")


# ---------------------------------------------------------------------------
# conjugation

def conj_resultant(mu, gv, gu):
    """Res_Y(mu(Y), gv + Y*gu) for monic quadratic mu = Y^2 + b*Y + c."""
    c, b = mu[0], mu[1]
    return padd(padd(pmul(gv, gv), pscale(pmul(gv, gu), -b)), pscale(pmul(gu, gu), c))


def _squarefree(a):
    return a > 1 and all(a % (k * k) for k in range(2, math.isqrt(a) + 1))


def mu_candidates(preferred=(), max_a=200, max_coeff=10):
    """Monic quadratics irreducible over Q in a fixed search order."""
    seen = set()

    def ok(m):
        c, b = m[0], m[1]
        disc = b * b - 4 * c
        return disc < 0 or math.isqrt(disc) ** 2 != disc

    for m in preferred:
        m = tuple(m)
        if m not in seen and ok(m):
            seen.add(m)
            yield m
    for a in range(2, max_a + 1):
        m = (-a, 0, 1)
        if _squarefree(a) and m not in seen:
            seen.add(m)
            yield m
    for h in range(1, max_coeff + 1):
        for b in range(-h, h + 1):
            for c in range(-h, h + 1):
                if max(abs(b), abs(c)) != h:
                    continue
                m = (c, b, 1)
                if m not in seen and ok(m):
                    seen.add(m)
                    yield m


def select_conjugation(p: int, n: int, family=None, mu_search=None) -> PolyPair:
    if not isprime(p):
        raise DomainError("p must be prime")
    if family is None:
        family = default_family(n) or binomial_family(n)
    elif isinstance(family, tuple):
        gu, gv = family
        family = CyclicFamily(n, poly(gv), poly(gu), None)
    gv, gu = family.g_v, family.g_u
    if not degree(gu) < degree(gv) == n:
        raise DomainError("need deg g_u < deg g_v = n")
    if mu_search is None:
        mu_search = mu_candidates(family.preferred_mu)
    for mu in mu_search:
        mu = poly(mu)
        roots = poly_roots_mod(ModPoly(p, mu))
        for lam in sorted(roots, reverse=True):
            phi0 = padd(gv, pscale(gu, lam))
            if not poly_is_irreducible_mod(ModPoly(p, phi0)):
                continue
            try:
                u, v = rational_reconstruction(lam, p)
            except NoReconstructionError:
                continue
            f = normalize(conj_resultant(mu, gv, gu))
            if not sympy.Poly(list(reversed(f)), sympy.Symbol("x")).is_irreducible:
                break
            g = normalize(padd(pscale(gv, v), pscale(gu, u)))
            phi = tuple(mmonic(mred(list(phi0), p), p))
            aux = {"lambda": lam, "u": u, "v": v, "mu": mu, "gu": gu, "gv": gv}
            pair = PolyPair(p, n, f, g, phi, "conj", aux)
            check_pair(pair)
            log.debug(f"conjugation: mu={mu} lambda={lam} (u,v)=({u},{v})")
            return pair
    raise SearchExhaustedError("mu search exhausted")


def conj_second_vector(pair: PolyPair):
    """Second reduced vector of the lattice {(u, v) : u = lambda*v mod p}."""
    lam, gu, gv = pair.aux["lambda"], pair.aux["gu"], pair.aux["gv"]
    rows = lll_reduce([[pair.p, 0], [lam, 1]])
    g1 = normalize(pair.g)
    for u, v in rows:
        g = normalize(padd(pscale(gv, v), pscale(gu, u)))
        if g != g1:
            return g
    raise DomainError("reduced basis does not contain an independent vector")


def second_vector(pair: PolyPair):
    if pair.method == "conj":
        return conj_second_vector(pair)
    return gjl_second_vector(pair)


# ---------------------------------------------------------------------------
# improvement by linear combinations

def default_area_scale(pair: PolyPair) -> float:
    return 2.0 ** quality.e_bits_for(pair.q_bits)


def _grid(bound):
    """Representatives (lam1 < 0) of the grid up to the global sign."""
    l1, l2 = [], []
    for a in range(-bound + 1, 0):
        for b in range(-bound + 1, bound):
            if b != 0 and math.gcd(a, b) == 1:
                l1.append(a)
                l2.append(b)
    return np.array(l1, dtype=np.int64), np.array(l2, dtype=np.int64)


def _homog_values(h, n, thetas):
    c, s = np.cos(thetas), np.sin(thetas)
    acc = np.zeros_like(thetas)
    for i, coef in enumerate(h):
        acc = acc + float(coef) * c ** i * s ** (n - i)
    return acc


def _combine(g1, g2, n, a, b):
    return poly(a * x + b * y for x, y in zip(g1 + (0,) * (n + 1 - len(g1)),
                                              g2 + (0,) * (n + 1 - len(g2))))


def _no_real_roots(g):
    if degree(g) == 2:
        return g[1] * g[1] - 4 * g[0] * g[2] < 0
    return degree(g) % 2 == 0 and count_real_roots(g) == 0


def improve_linear_combination(pair: PolyPair, g2, bound: int = 200,
                               params: quality.MurphyParams = quality.MurphyParams(),
                               areaScale: float | None = None, threads: int = 1,
                               shortlist_rel: float = 1e-6,
                               totally_complex: bool = False) -> PolyPair:
    """Replace g by the combination lam1*g1 + lam2*g2 with the largest Murphy E.

    Candidates are screened with vectorized rho and pencil alpha, and the
    shortlist is rescored exactly.  With totally_complex, only combinations
    without real roots are kept (no units, hence no Schirokauer map on g).
    """
    g1 = poly(pair.g)
    g2 = poly(g2)
    p = pair.p
    if not phi_divides(pair.phi, g2, p):
        raise DomainError("g2 is not divisible by phi mod p")
    n = max(degree(g1), degree(g2))
    if degree(g2) == degree(g1) and all(a * g2[-1] == b * g1[-1] for a, b in zip(g1, g2)):
        raise DomainError("g2 is a multiple of g")
    s = default_area_scale(pair) if areaScale is None else areaScale
    th = quality.sample_angles(params.K)
    alpha_f = quality.murphy_alpha(pair.f, params)
    uf = (quality.homogeneous_log_abs(pair.f, th, s) + alpha_f) / math.log(params.Bf)
    rho_f = np.array([quality.dickman_rho(x) for x in uf.tolist()])

    lam1, lam2 = _grid(bound)
    lam1 = np.concatenate([[1], lam1])
    lam2 = np.concatenate([[0], lam2])
    if totally_complex:
        keep = np.array([_no_real_roots(_combine(g1, g2, n, int(a), int(b)))
                         for a, b in zip(lam1, lam2)], dtype=bool)
        if not keep.any():
            raise SearchExhaustedError("no totally complex combination in the grid")
        lam1, lam2 = lam1[keep], lam2[keep]
    H1 = _homog_values(g1, n, th)
    H2 = _homog_values(g2, n, th)
    lnB = math.log(params.Bg)
    shift = n * math.log(s)

    def score(lo, hi):
        a1, a2 = lam1[lo:hi], lam2[lo:hi]
        alpha = quality.pencil_alpha(g1, g2, a1, a2, params.alphaPrimeBound)
        vals = np.abs(a1[:, None] * H1[None, :] + a2[:, None] * H2[None, :])
        with np.errstate(divide="ignore"):
            ug = (np.log(vals) + shift + alpha[:, None]) / lnB
        return quality.dickman_rho_array(ug) @ rho_f

    chunk = 2048
    spans = [(i, min(i + chunk, len(lam1))) for i in range(0, len(lam1), chunk)]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            parts = list(ex.map(lambda t: score(*t), spans))
    else:
        parts = [score(*t) for t in spans]
    approx = np.concatenate(parts)
    top = np.nonzero(approx >= approx.max() * (1 - shortlist_rel))[0]
    best = None
    for i in top.tolist():
        a, b = int(lam1[i]), int(lam2[i])
        g = _combine(g1, g2, n, a, b)
        e = quality.murphy_e(pair.f, g, params, s, alpha_f=alpha_f)
        key = (-e, norm_inf(g), (a, b))
        if best is None or key < best[0]:
            best = (key, g, a, b, e)
    _, g, a, b, e = best
    aux = dict(pair.aux)
    aux.update({"lambda1": a, "lambda2": b, "murphy_e": e})
    log.info(f"improvement: (lambda1, lambda2) = ({a}, {b}), E = {e:.6g}")
    out = replace(pair, g=normalize(g), aux=aux)
    check_pair(out)
    return out


# ---------------------------------------------------------------------------
# poly file I/O

_AUX_INT = ("u", "v", "lambda", "W", "a", "lambda1", "lambda2", "dprime")
_AUX_POLY = ("mu", "gu", "gv")


def format_poly_file(pair: PolyPair) -> str:
    lines = [f"p: {pair.p}", f"n: {pair.n}", f"method: {pair.method}",
             f"f: {format_poly(pair.f)}", f"g: {format_poly(pair.g)}",
             f"phi: {format_poly(pair.phi)}"]
    for k in _AUX_INT:
        if k in pair.aux:
            lines.append(f"aux.{k}: {pair.aux[k]}")
    for k in _AUX_POLY:
        if k in pair.aux:
            lines.append(f"aux.{k}: {format_poly(pair.aux[k])}")
    return "\n".join(lines) + "\n"


def parse_poly_file(text: str) -> PolyPair:
    kv = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, _, val = line.partition(":")
        kv[key.strip()] = val.strip()
    try:
        p, n = int(kv["p"]), int(kv["n"])
        f, g, phi = parse_poly(kv["f"]), parse_poly(kv["g"]), parse_poly(kv["phi"])
        method = kv.get("method", "conj")
    except KeyError as exc:
        raise DomainError(f"poly file misses key {exc}") from exc
    if method not in METHODS:
        raise DomainError(f"unknown method {method}")
    aux = {}
    for k in _AUX_INT:
        if f"aux.{k}" in kv:
            aux[k] = int(kv[f"aux.{k}"])
    for k in _AUX_POLY:
        if f"aux.{k}" in kv:
            aux[k] = parse_poly(kv[f"aux.{k}"])
    return PolyPair(p, n, f, g, phi, method, aux)


def read_poly_file(path) -> PolyPair:
    with open(path, encoding="utf-8") as fh:
        return parse_poly_file(fh.read())


def write_poly_file(pair: PolyPair, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_poly_file(pair))
