"""Automorphisms of number fields, conjugate ideals, kappa and orbit tables."""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .errors import BadPrimeError, DescentError, DomainError
from .mathcore import (
    FiniteField, degree, discriminant, padd, pmul, poly, ppow, pscale,
    poly_to_str, qdivmod, qinvmod, qmulmod,
)

PROJ = "PROJ"


@dataclass(frozen=True)
class FracAutomorphism:
    """x -> (a x + b) / (c x + d)."""
    a: int
    b: int
    c: int
    d: int
    order: int = 0

    @property
    def numerator(self):
        return poly((self.b, self.a))

    @property
    def denominator(self):
        return poly((self.d, self.c))

    @property
    def det(self):
        return self.a * self.d - self.b * self.c

    def inverse(self) -> "FracAutomorphism":
        return FracAutomorphism(self.d, -self.b, -self.c, self.a, self.order)

    def is_identity(self):
        return self.b == 0 and self.c == 0 and self.a == self.d

    def compose(self, other: "FracAutomorphism") -> "FracAutomorphism":
        """self o other."""
        a = self.a * other.a + self.b * other.c
        b = self.a * other.b + self.b * other.d
        c = self.c * other.a + self.d * other.c
        d = self.c * other.b + self.d * other.d
        g = math.gcd(math.gcd(a, b), math.gcd(c, d)) or 1
        return FracAutomorphism(a // g, b // g, c // g, d // g, self.order)

    def apply_mod(self, r, q):
        """Image of r in P^1(F_q); PROJ stands for the point at infinity."""
        if r == PROJ:
            return PROJ if self.c % q == 0 else self.a * pow(self.c, -1, q) % q
        den = (self.c * r + self.d) % q
        if den == 0:
            return PROJ
        return (self.a * r + self.b) * pow(den, -1, q) % q

    def __str__(self):
        num, den = poly_to_str(self.numerator), poly_to_str(self.denominator)
        if den == "1":
            return f"x -> {num}"
        return f"x -> ({num})/({den})"


IDENTITY = FracAutomorphism(1, 0, 0, 1, 1)


def transformed_numerator(f, s: FracAutomorphism):
    """Numerator of f((ax+b)/(cx+d)) * (cx+d)^deg f."""
    n = degree(f)
    out = ()
    for i, c in enumerate(f):
        term = pmul(ppow(s.numerator, i), ppow(s.denominator, n - i))
        out = padd(out, pscale(term, c))
    return out


def admits(f, s: FracAutomorphism) -> bool:
    """True when the map permutes the roots of f."""
    if s.det == 0:
        return False
    num = transformed_numerator(f, s)
    if degree(num) != degree(f):
        return False
    return all(x * f[-1] == y * num[-1] for x, y in zip(num, f))


def image_of_generator(f, s: FracAutomorphism):
    """A(alpha) reduced modulo f, as a tuple of Fractions."""
    den = qinvmod(s.denominator, f)
    return qmulmod(s.numerator, den, f)


def _apply_poly_mod(elem, img, f):
    """elem(img) modulo f over Q."""
    r = ()
    for c in reversed(elem):
        r = padd(qmulmod(r, img, f), (Fraction(c),))
    return qdivmod(r, f)[1]


def automorphism_order(f, s: FracAutomorphism, limit=64) -> int:
    x = (Fraction(0), Fraction(1))
    img = image_of_generator(f, s)
    cur = img
    for k in range(1, limit + 1):
        if poly(cur) == poly(x):
            return k
        cur = _apply_poly_mod(cur, img, f)
    raise DomainError("automorphism order exceeds the search limit")


def _canonical_key(s):
    return (s.c != 0, max(abs(s.a), abs(s.b), abs(s.c), abs(s.d)), (s.a, s.b, s.c, s.d))


def find_automorphisms(f, maxCoeff: int = 3):
    """Fractional-linear automorphisms of Q[x]/(f) with coefficients in the box."""
    f = poly(f)
    rng = range(-maxCoeff, maxCoeff + 1)
    found = {}
    ident = poly((Fraction(0), Fraction(1)))
    for a, b, c, d in product(rng, repeat=4):
        if a * d - b * c == 0:
            continue
        g = math.gcd(math.gcd(a, b), math.gcd(c, d))
        if g != 1:
            continue
        s = FracAutomorphism(a, b, c, d)
        if not admits(f, s):
            continue
        try:
            img = poly(image_of_generator(f, s))
        except DomainError:
            continue
        if img == ident:
            continue
        cur = found.get(img)
        if cur is None or _canonical_key(s) < _canonical_key(cur):
            found[img] = s
    out = []
    for s in found.values():
        # normalize overall sign: first nonzero of (c, d) positive
        lead = s.c if s.c else s.d
        if lead < 0:
            s = FracAutomorphism(-s.a, -s.b, -s.c, -s.d)
        out.append(FracAutomorphism(s.a, s.b, s.c, s.d, automorphism_order(f, s)))
    return sorted(out, key=_canonical_key)


def apply_to_element(elem, s: FracAutomorphism, f):
    """sigma(elem) in Q[x]/(f) for elem given in the power basis."""
    return _apply_poly_mod(elem, image_of_generator(f, s), f)


# ---------------------------------------------------------------------------
# prime ideals of degree one

@dataclass(frozen=True, order=True)
class PrimeIdeal:
    side: str
    q: int
    r: object  # int in [0, q) or PROJ

    def sort_key(self):
        return (self.side, self.q, self.q if self.r == PROJ else self.r)

    @property
    def degree(self):
        return 1


def ideal_key(I: PrimeIdeal):
    return (I.q, I.q if I.r == PROJ else I.r)


def is_bad_prime(q, f, s: FracAutomorphism) -> bool:
    return f[-1] % q == 0 or discriminant(f) % q == 0 or s.det % q == 0


def conjugate_ideal(ideal: PrimeIdeal, sigma: FracAutomorphism, f) -> PrimeIdeal:
    """<q, alpha - A_{sigma^-1}(r)>."""
    q = ideal.q
    if sigma.is_identity():
        return ideal
    if is_bad_prime(q, f, sigma) or ideal.r == PROJ:
        raise BadPrimeError(f"prime {q} cannot be conjugated symbolically")
    inv = sigma.inverse()
    r2 = inv.apply_mod(ideal.r, q)
    if r2 == PROJ:
        raise BadPrimeError(f"denominator of the inverse map vanishes at {ideal.r} mod {q}")
    return PrimeIdeal(ideal.side, q, r2)


def compute_kappa(pair, sigma: FracAutomorphism, side: str = "F") -> int:
    """kappa with A_sigma(m) = m^(p^kappa) for a root m of phi in F_{p^n}."""
    p, n = pair.p, pair.n
    K = FiniteField(p, pair.phi)
    m = K.gen()
    den = K.eval_poly(sigma.denominator, m)
    if not den:
        raise DescentError("denominator of the automorphism vanishes at m")
    am = K.mul(K.eval_poly(sigma.numerator, m), K.inv(den))
    if K.eval_poly(pair.phi, am):
        raise DescentError("automorphism does not descend: A(m) is not a root of phi")
    cur = m
    order = sigma.order or n
    for k in range(1, max(order, n)):
        cur = K.pow(cur, p)
        if cur == am:
            return k
    raise DescentError("A(m) is m itself or not a Frobenius conjugate")


# ---------------------------------------------------------------------------
# orbits

@dataclass
class Orbit:
    orbit_id: int
    representative: PrimeIdeal
    members: list  # (ideal, power)
    fixed_by: int  # smallest k > 0 with sigma^k(rep) = rep


def orbit_partition(ideals, sigma: FracAutomorphism, f):
    """Deterministic <sigma>-orbits; bad ideals become singletons."""
    pool = sorted(set(ideals), key=lambda I: I.sort_key())
    todo = set(pool)
    orbits = []
    for I in pool:
        if I not in todo:
            continue
        members, fixed = [(I, 0)], 1
        if not sigma.is_identity():
            trail, cur = [], I
            try:
                while True:
                    cur = conjugate_ideal(cur, sigma, f)
                    if cur == I:
                        break
                    trail.append(cur)
                members += [(J, k + 1) for k, J in enumerate(trail)]
                fixed = len(trail) + 1
            except BadPrimeError:
                fixed = 0
        for J, _ in members:
            todo.discard(J)
        orbits.append(Orbit(len(orbits), I, members, fixed))
    # representatives are lexicographic minima by construction (sorted pool)
    return orbits


def orbit_table_csv(orbits_by_side) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["side", "q", "r", "orbit_id", "power"])
    for side, orbits in orbits_by_side:
        for o in orbits:
            for I, k in o.members:
                w.writerow([side, I.q, I.r, o.orbit_id, k])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# valuations at degree-one ideals

def hensel_root(f, r, q, k):
    """Lift a simple root r of f mod q to a root mod q^k."""
    from .mathcore import pderiv, peval
    mod = q
    df = pderiv(f)
    x = r % q
    while mod < q ** k:
        mod = min(mod * mod, q ** k)
        x = (x - peval(f, x) * pow(peval(df, x), -1, mod)) % mod
    return x


def ideal_valuation(f, ideal: PrimeIdeal, gamma) -> int:
    """v_I(gamma) for an unramified degree-one ideal <q, alpha - r>, gamma in Z[alpha]."""
    from .mathcore import peval, poly_resultant
    q = ideal.q
    N = poly_resultant(f, gamma) if gamma else 0
    if N == 0:
        raise DomainError("valuation of zero")
    vN = 0
    while N % q == 0:
        N //= q
        vN += 1
    if vN == 0:
        return 0
    root = hensel_root(f, ideal.r, q, vN + 1)
    val = peval(gamma, root) % q ** (vN + 1)
    v = 0
    while v < vN and val % q == 0:
        val //= q
        v += 1
    return v
