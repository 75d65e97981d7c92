"""Exact arithmetic primitives: integer and modular polynomials, resultants,
factorization mod p, rational reconstruction, LLL and real-root counting.

Polynomials over Z are plain tuples of ints in ascending degree order with no
trailing zeros; the zero polynomial is the empty tuple.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from sympy import isprime

from .errors import DomainError, NoReconstructionError, NotSquarefreeError, RankError

IntPoly = tuple
ZERO_DEGREE = -1  # degree reported for the zero polynomial


# ---------------------------------------------------------------------------
# polynomials over Z (and Q: the same helpers accept Fractions)

def poly(coeffs: Iterable) -> IntPoly:
    """Normalize a coefficient sequence (ascending) into an IntPoly."""
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def degree(a: Sequence) -> int:
    return len(a) - 1 if a else ZERO_DEGREE


def lc(a: Sequence):
    return a[-1] if a else 0


def norm_inf(a: Sequence) -> int:
    return max((abs(c) for c in a), default=0)


def content(a: Sequence) -> int:
    g = 0
    for c in a:
        g = math.gcd(g, c)
    return g


def primitive(a: Sequence) -> IntPoly:
    """Remove content and make the leading coefficient positive."""
    a = poly(a)
    if not a:
        return a
    g = content(a)
    if a[-1] < 0:
        g = -g
    return tuple(c // g for c in a)


def padd(a, b):
    n = max(len(a), len(b))
    return poly((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n))


def psub(a, b):
    n = max(len(a), len(b))
    return poly((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n))


def pscale(a, k):
    return poly(k * c for c in a)


def pmul(a, b):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return poly(out)


def ppow(a, e):
    r = (1,)
    for _ in range(e):
        r = pmul(r, a)
    return r


def peval(a, x):
    r = 0
    for c in reversed(a):
        r = r * x + c
    return r


def pderiv(a):
    return poly(i * a[i] for i in range(1, len(a)))


def pcompose(a, b):
    """a(b(x))."""
    r = ()
    for c in reversed(a):
        r = padd(pmul(r, b), (c,))
    return r


def pshift(a, w):
    """a(x + w)."""
    return pcompose(a, (w, 1))


def homogeneous_eval(a, x, y):
    """sum a_i x^i y^(deg-i)."""
    d = degree(a)
    return sum(c * x ** i * y ** (d - i) for i, c in enumerate(a))


def qdivmod(a, b):
    """Division over Q; inputs may hold ints or Fractions."""
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = [Fraction(c) for c in a]
    db = len(b) - 1
    inv = Fraction(1) / Fraction(b[-1])
    q = [Fraction(0)] * max(len(r) - db, 0)
    for i in range(len(r) - 1, db - 1, -1):
        c = r[i] * inv
        if c:
            q[i - db] = c
            for j in range(db + 1):
                r[i - db + j] -= c * b[j]
    return poly(q), poly(r[:db])


def qgcd(a, b):
    """Monic gcd over Q."""
    a, b = poly(a), poly(b)
    while b:
        a, b = b, qdivmod(a, b)[1]
    if not a:
        return a
    l = Fraction(a[-1])
    return tuple(Fraction(c) / l for c in a)


def qinvmod(a, m):
    """Inverse of a modulo m over Q (extended Euclid)."""
    r0, r1 = poly(m), qdivmod(a, m)[1]
    s0, s1 = (), (Fraction(1),)
    while r1:
        q, r = qdivmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, psub(s0, pmul(q, s1))
    if len(r0) != 1:
        raise DomainError("element is not invertible modulo the polynomial")
    return tuple(Fraction(c) / r0[0] for c in qdivmod(s0, m)[1])


def qmulmod(a, b, m):
    return qdivmod(pmul(a, b), m)[1]


def poly_to_str(a, var="x") -> str:
    if not a:
        return "0"
    terms = []
    for i in range(len(a) - 1, -1, -1):
        c = a[i]
        if c == 0:
            continue
        mag = abs(c)
        if i == 0:
            body = str(mag)
        else:
            mon = var if i == 1 else f"{var}^{i}"
            body = mon if mag == 1 else f"{mag}*{mon}"
        sign = "-" if c < 0 else "+"
        terms.append((sign, body))
    s = ("-" if terms[0][0] == "-" else "") + terms[0][1]
    for sign, body in terms[1:]:
        s += f" {sign} {body}"
    return s


# ---------------------------------------------------------------------------
# resultants

def _bareiss_det(m):
    n = len(m)
    if n == 0:
        return 1
    m = [row[:] for row in m]
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def sylvester(a, b):
    da, db = degree(a), degree(b)
    n = da + db
    rows = []
    for i in range(db):
        row = [0] * n
        for j, c in enumerate(reversed(a)):
            row[i + j] = c
        rows.append(row)
    for i in range(da):
        row = [0] * n
        for j, c in enumerate(reversed(b)):
            row[i + j] = c
        rows.append(row)
    return rows


def poly_resultant(a, b) -> int:
    """Res_x(a, b), equal to the determinant of the Sylvester matrix."""
    a, b = poly(a), poly(b)
    if not a or not b:
        raise DomainError("resultant of the zero polynomial")
    da, db = degree(a), degree(b)
    if da == 0:
        return a[0] ** db
    if db == 0:
        return b[0] ** da
    return _bareiss_det(sylvester(a, b))


def discriminant(a) -> int:
    d = degree(a)
    if d < 1:
        raise DomainError("discriminant needs positive degree")
    res = poly_resultant(a, pderiv(a))
    sign = -1 if (d * (d - 1) // 2) % 2 else 1
    q, r = divmod(sign * res, a[-1])
    assert r == 0
    return q


# ---------------------------------------------------------------------------
# polynomials over Z/mZ

@dataclass(frozen=True)
class ModPoly:
    modulus: int
    coeffs: tuple = field(default=())

    def __post_init__(self):
        if self.modulus <= 0:
            raise DomainError("modulus must be positive")
        c = [x % self.modulus for x in self.coeffs]
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @property
    def degree(self):
        return degree(self.coeffs)

    def monic(self) -> "ModPoly":
        if not self.coeffs:
            return self
        inv = pow(self.coeffs[-1], -1, self.modulus)
        return ModPoly(self.modulus, tuple(c * inv for c in self.coeffs))


def _check_prime(p):
    if not isprime(p):
        raise DomainError(f"modulus {p} is not prime")


def mtrim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def mred(a, p):
    return mtrim([c % p for c in a])


def madd(a, b, p):
    n = max(len(a), len(b))
    return mtrim([((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)) % p for i in range(n)])


def msub(a, b, p):
    n = max(len(a), len(b))
    return mtrim([((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n)])


def mmul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return mtrim([c % p for c in out])


def mdivmod(a, b, p):
    """Division in (Z/pZ)[x]; b must have an invertible leading coefficient."""
    a = mred(a, p)
    b = mred(b, p)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    db = len(b) - 1
    inv = pow(b[-1], -1, p)
    q = [0] * max(len(a) - db, 0)
    r = a[:]
    for i in range(len(r) - 1, db - 1, -1):
        c = r[i] * inv % p
        if c:
            q[i - db] = c
            for j in range(db + 1):
                r[i - db + j] = (r[i - db + j] - c * b[j]) % p
    return mtrim(q), mtrim(r[:db])


def mmod(a, b, p):
    return mdivmod(a, b, p)[1]


def mmonic(a, p):
    if not a:
        return []
    inv = pow(a[-1], -1, p)
    return [c * inv % p for c in a]


def mgcd(a, b, p):
    a, b = mred(a, p), mred(b, p)
    while b:
        a, b = b, mmod(a, b, p)
    return mmonic(a, p)


def mpowmod(base, e, m, p):
    result = [1]
    base = mmod(base, m, p)
    while e:
        if e & 1:
            result = mmod(mmul(result, base, p), m, p)
        e >>= 1
        if e:
            base = mmod(mmul(base, base, p), m, p)
    return result


def mderiv(a, p):
    return mtrim([i * a[i] % p for i in range(1, len(a))])


def meval(a, x, p):
    r = 0
    for c in reversed(a):
        r = (r * x + c) % p
    return r


def minvmod(a, m, p):
    """Inverse of a modulo m in (Z/pZ)[x], p prime."""
    r0, r1 = mred(m, p), mmod(a, m, p)
    s0, s1 = [], [1]
    while r1:
        q, r = mdivmod(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, msub(s0, mmul(q, s1, p), p)
    if len(r0) != 1:
        raise DomainError("element not invertible")
    inv = pow(r0[0], -1, p)
    return mmod([c * inv for c in s0], m, p)


def _squarefree_check(a, p):
    if len(a) < 2:
        return
    da = mderiv(a, p)
    if not da or len(mgcd(a, da, p)) > 1:
        raise NotSquarefreeError("polynomial is not squarefree modulo p")


def _ddf(a, p):
    """Distinct-degree factorization of a monic squarefree polynomial."""
    out = []
    f = mmonic(a, p)
    h = [0, 1]
    d = 0
    while len(f) - 1 >= 2 * (d + 1):
        d += 1
        h = mpowmod(h, p, f, p)
        g = mgcd(msub(h, [0, 1], p), f, p)
        if len(g) > 1:
            out.append((d, g))
            f = mdivmod(f, g, p)[0]
            h = mmod(h, f, p)
    if len(f) > 1:
        out.append((len(f) - 1, f))
    return out


def _edf(a, d, p, rng):
    """Split a monic product of distinct degree-d irreducibles."""
    n = len(a) - 1
    if n == d:
        return [a]
    while True:
        r = [rng.randrange(p) for _ in range(n)]
        r = mtrim(r)
        if len(r) < 2:
            continue
        if p == 2:
            t, s = r, r
            for _ in range(d - 1):
                s = mmod(mmul(s, s, p), a, p)
                t = madd(t, s, p)
            cand = t
        else:
            cand = msub(mpowmod(r, (p ** d - 1) // 2, a, p), [1], p)
        g = mgcd(cand, a, p)
        if 1 < len(g) < len(a):
            rest = mdivmod(a, g, p)[0]
            return _edf(g, d, p, rng) + _edf(mmonic(rest, p), d, p, rng)


def factor_mod(f: ModPoly, seed: int = 1):
    """Irreducible monic factors of a squarefree polynomial mod a prime, sorted."""
    p = f.modulus
    _check_prime(p)
    a = list(f.coeffs)
    if len(a) < 2:
        return []
    _squarefree_check(a, p)
    rng = random.Random(seed)
    out = []
    for d, g in _ddf(a, p):
        out.extend(_edf(g, d, p, rng))
    return sorted(tuple(x) for x in out)


def poly_factor_degrees_mod(f: ModPoly):
    """Sorted list of factor degrees of a squarefree polynomial mod a prime."""
    p = f.modulus
    _check_prime(p)
    a = list(f.coeffs)
    if len(a) < 2:
        return []
    _squarefree_check(a, p)
    degs = []
    for d, g in _ddf(a, p):
        degs.extend([d] * ((len(g) - 1) // d))
    return sorted(degs)


def poly_is_irreducible_mod(f: ModPoly) -> bool:
    """True iff f is irreducible over F_p; non-squarefree input is reducible."""
    p = f.modulus
    _check_prime(p)
    a = list(f.coeffs)
    if len(a) < 2:
        return False
    if len(a) == 2:
        return True
    try:
        return poly_factor_degrees_mod(f) == [len(a) - 1]
    except NotSquarefreeError:
        return False


def poly_roots_mod(f: ModPoly):
    """Sorted list of distinct roots in F_p."""
    p = f.modulus
    _check_prime(p)
    a = list(f.coeffs)
    if not a:
        raise DomainError("zero polynomial has every residue as a root")
    if len(a) == 1:
        return []
    if p < 50:
        return [r for r in range(p) if meval(a, r, p) == 0]
    a = mmonic(a, p)
    xp = mpowmod([0, 1], p, a, p)
    g = mgcd(msub(xp, [0, 1], p), a, p)
    if len(g) < 2:
        return []
    lin = _edf(g, 1, p, random.Random(1))
    return sorted((-x[0]) % p for x in lin)


# ---------------------------------------------------------------------------
# finite field F_p[t]/phi

class FiniteField:
    """Arithmetic in F_p[t]/(phi) with phi monic irreducible; elements are tuples."""

    def __init__(self, p: int, phi):
        self.p = p
        self.phi = mmonic(mred(phi, p), p)
        self.n = len(self.phi) - 1
        self.order = p ** self.n

    def elt(self, coeffs):
        return tuple(mmod(list(coeffs), self.phi, self.p))

    def one(self):
        return (1,)

    def gen(self):
        return self.elt([0, 1])

    def add(self, a, b):
        return tuple(madd(list(a), list(b), self.p))

    def sub(self, a, b):
        return tuple(msub(list(a), list(b), self.p))

    def mul(self, a, b):
        return tuple(mmod(mmul(list(a), list(b), self.p), self.phi, self.p))

    def pow(self, a, e):
        if e < 0:
            a, e = self.inv(a), -e
        return tuple(mpowmod(list(a), e, self.phi, self.p))

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("inverse of zero")
        return tuple(minvmod(list(a), self.phi, self.p))

    def eval_poly(self, f, x):
        """Evaluate an integer polynomial at field element x."""
        r = ()
        for c in reversed(f):
            r = self.add(self.mul(r, x), self.elt([c]))
        return r

    def random_element(self, rng):
        return self.elt([rng.randrange(self.p) for _ in range(self.n)])


# ---------------------------------------------------------------------------
# rational reconstruction

def rational_reconstruction(a: int, p: int, bound: int | None = None):
    """(u, v) with v*a = u mod p, v > 0, from the first Euclidean remainder <= bound."""
    a %= p
    if bound is None:
        bound = math.isqrt(p // 2)
    if bound < 1:
        raise NoReconstructionError("bound must be positive")
    r0, r1 = p, a
    t0, t1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        t0, t1 = t1, t0 - q * t1
    u, v = r1, t1
    if v == 0:
        raise NoReconstructionError(f"no reconstruction of {a} mod {p}")
    if v < 0:
        u, v = -u, -v
    if math.gcd(u, v) != 1 or (v * a - u) % p:
        raise NoReconstructionError(f"no reconstruction of {a} mod {p}")
    return u, v


# ---------------------------------------------------------------------------
# lattices

def lll_reduce(rows, delta: Fraction = Fraction(99, 100)):
    """Integral LLL (exact Gram-Schmidt via subdeterminants) on the rows."""
    b = [list(r) for r in rows]
    n = len(b)
    if n == 0:
        return []
    dot = lambda x, y: sum(i * j for i, j in zip(x, y))
    dn, dd = delta.numerator, delta.denominator
    d = [0] * (n + 1)
    lam = [[0] * n for _ in range(n)]
    d[0] = 1
    d[1] = dot(b[0], b[0])
    if d[1] == 0:
        raise RankError("zero row in lattice basis")

    def redi(k, l):
        if 2 * abs(lam[k][l]) > d[l + 1]:
            q = (2 * lam[k][l] + d[l + 1]) // (2 * d[l + 1])
            b[k] = [x - q * y for x, y in zip(b[k], b[l])]
            lam[k][l] -= q * d[l + 1]
            for i in range(l):
                lam[k][i] -= q * lam[l][i]

    def swapi(k, kmax):
        b[k], b[k - 1] = b[k - 1], b[k]
        for j in range(k - 1):
            lam[k][j], lam[k - 1][j] = lam[k - 1][j], lam[k][j]
        lm = lam[k][k - 1]
        bb = (d[k - 1] * d[k + 1] + lm * lm) // d[k]
        for i in range(k + 1, kmax + 1):
            t = lam[i][k]
            lam[i][k] = (d[k + 1] * lam[i][k - 1] - lm * t) // d[k]
            lam[i][k - 1] = (bb * t + lm * lam[i][k]) // d[k + 1]
        d[k] = bb

    k, kmax = 1, 0
    while k < n:
        if k > kmax:
            kmax = k
            for j in range(k + 1):
                u = dot(b[k], b[j])
                for i in range(j):
                    u = (d[i + 1] * u - lam[k][i] * lam[j][i]) // d[i]
                if j < k:
                    lam[k][j] = u
                else:
                    d[k + 1] = u
            if d[k + 1] == 0:
                raise RankError("lattice rows are linearly dependent")
        redi(k, k - 1)
        if dd * d[k + 1] * d[k - 1] < dn * d[k] * d[k] - dd * lam[k][k - 1] ** 2:
            swapi(k, kmax)
            k = max(1, k - 1)
        else:
            for l in range(k - 2, -1, -1):
                redi(k, l)
            k += 1
    return b


def hnf(rows):
    """Row-style Hermite normal form (echelon, positive pivots, reduced above)."""
    a = [list(r) for r in rows]
    ncols = len(a[0]) if a else 0
    out, pivcols = [], []
    for col in range(ncols):
        while True:
            nz = [i for i, r in enumerate(a) if r[col] != 0]
            if not nz:
                break
            i = min(nz, key=lambda k: abs(a[k][col]))
            if len(nz) == 1:
                h = a.pop(i)
                if h[col] < 0:
                    h = [-x for x in h]
                out.append(h)
                pivcols.append(col)
                break
            for j in nz:
                if j != i:
                    q = a[j][col] // a[i][col]
                    a[j] = [x - q * y for x, y in zip(a[j], a[i])]
    for i, c in enumerate(pivcols):
        for k in range(i):
            q = out[k][c] // out[i][c]
            out[k] = [x - q * y for x, y in zip(out[k], out[i])]
    return out


# ---------------------------------------------------------------------------
# signatures

@dataclass(frozen=True)
class Signature:
    r1: int
    r2: int

    @property
    def unit_rank(self):
        return self.r1 + self.r2 - 1

    def __iter__(self):
        return iter((self.r1, self.r2))


def _sign_at_inf(a, neg):
    s = 1 if a[-1] > 0 else -1
    if neg and (len(a) - 1) % 2:
        s = -s
    return s


def count_real_roots(f) -> int:
    """Distinct real roots of a squarefree polynomial via a Sturm sequence."""
    seq = [tuple(Fraction(c) for c in f), tuple(Fraction(c) for c in pderiv(f))]
    while seq[-1]:
        r = qdivmod(seq[-2], seq[-1])[1]
        if not r:
            break
        seq.append(tuple(-c for c in r))

    def changes(neg):
        signs = [_sign_at_inf(s, neg) for s in seq if s]
        return sum(1 for x, y in zip(signs, signs[1:]) if x != y)

    return changes(True) - changes(False)


def is_squarefree(f) -> bool:
    return len(qgcd(f, pderiv(f))) <= 1


def signature_of(f) -> Signature:
    f = poly(f)
    if degree(f) < 1:
        raise DomainError("signature needs positive degree")
    if not is_squarefree(f):
        raise NotSquarefreeError("polynomial not squarefree; deflate first")
    r1 = count_real_roots(f)
    return Signature(r1, (degree(f) - r1) // 2)


def parse_poly(text: str) -> IntPoly:
    text = text.strip()
    if not text:
        return ()
    return poly(int(x) for x in text.split(","))


def format_poly(a) -> str:
    return ",".join(str(c) for c in a) if a else "0"
