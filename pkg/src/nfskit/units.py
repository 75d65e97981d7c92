"""Units with vanishing virtual logarithms.

The classification table for fields of degree 4 and 6, the count for cyclic
fields of odd prime degree, the integer matrix of an automorphism acting on a
unit basis, and the eigenspace analysis modulo ell.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
import sympy
from sympy import isprime

from .errors import CertificationError, DomainError, UnclassifiedError
from .galois import FracAutomorphism, apply_to_element
from .mathcore import (
    Signature, degree, format_poly, parse_poly, poly, poly_resultant,
    poly_roots_mod, qinvmod, qmulmod, signature_of, ModPoly,
)
from .modlinalg import rank_mod


def _sig(s):
    if s is None or isinstance(s, Signature):
        return s
    return Signature(*s)


@dataclass(frozen=True)
class RClassEntry:
    degK: int
    ordSigma: int
    signK: Signature
    signSub: Signature | None
    muZ: tuple
    R: int
    r: int

    @property
    def r_minus_R(self):
        return self.r - self.R


def _row(d, o, sk, ss, mu, R, r):
    return RClassEntry(d, o, Signature(*sk), None if ss is None else Signature(*ss),
                       poly(mu), R, r)


# mu_Z,sigma as ascending coefficients
TABLE1 = (
    _row(4, 2, (4, 0), (2, 0), (-1, 0, 1), 1, 3),
    _row(4, 2, (2, 1), (2, 0), (-1, 0, 1), 1, 2),
    _row(4, 2, (0, 2), (0, 1), (1, 1), 0, 1),
    _row(4, 2, (0, 2), (2, 0), (-1, 1), 1, 1),
    _row(4, 4, (4, 0), None, (1, 1, 1, 1), 2, 3),
    _row(4, 4, (0, 2), None, (1, 1), 1, 1),
    _row(6, 2, (0, 3), (1, 1), (-1, 0, 1), 1, 2),
    _row(6, 2, (0, 3), (3, 0), (-1, 1), 2, 2),
    _row(6, 3, (6, 0), (2, 0), (-1, 0, 0, 1), 3, 5),
    _row(6, 3, (0, 3), (0, 1), (1, 1, 1), 1, 2),
    _row(6, 6, (6, 0), None, (1, 1, 1, 1, 1, 1), 4, 5),
    _row(6, 6, (0, 3), None, (1, 1, 1), 1, 2),
)


def r_from_classification(degK, ordSigma, signK, signSub=None) -> RClassEntry:
    signK, signSub = _sig(signK), _sig(signSub)
    for e in TABLE1:
        if (e.degK, e.ordSigma, e.signK, e.signSub) == (degK, ordSigma, signK, signSub):
            return e
    raise UnclassifiedError(
        f"no classified row for degree {degK}, order {ordSigma}, signatures {signK}, {signSub}")


def r_cyclic_prime(n: int) -> int:
    if n < 3 or n % 2 == 0 or not isprime(n):
        raise DomainError("n must be an odd prime")
    return n - 2


# ---------------------------------------------------------------------------
# unit bases

@dataclass(frozen=True)
class UnitBasis:
    field: tuple
    units: tuple
    rank: int

    @classmethod
    def make(cls, f, units, check: bool = True) -> "UnitBasis":
        f = poly(f)
        us = tuple(poly(u) for u in units)
        b = cls(f, us, len(us))
        if check:
            b.validate()
        return b

    def validate(self):
        sig = signature_of(self.field)
        if sig.unit_rank != self.rank:
            raise DomainError(f"{self.rank} units given, unit rank is {sig.unit_rank}")
        for u in self.units:
            if abs(element_norm(self.field, u)) != 1:
                raise DomainError(f"{format_poly(u)} is not a unit")


def element_norm(f, u) -> Fraction:
    """Norm of u(alpha) for alpha a root of f, u with integer coefficients."""
    u = poly(u)
    if not u:
        return Fraction(0)
    return Fraction(poly_resultant(f, u), f[-1] ** degree(u))


def format_unit_file(basis: UnitBasis) -> str:
    lines = [f"field: {format_poly(basis.field)}"]
    lines += [f"unit: {format_poly(u)}" for u in basis.units]
    return "\n".join(lines) + "\n"


def parse_unit_file(text: str, check: bool = True) -> UnitBasis:
    f, units = None, []
    for line in text.splitlines():
        key, _, val = line.partition(":")
        key = key.strip()
        if key == "field":
            f = parse_poly(val)
        elif key == "unit":
            units.append(parse_poly(val))
        elif key:
            raise DomainError(f"unknown key {key!r} in unit file")
    if f is None:
        raise DomainError("unit file lacks a field line")
    return UnitBasis.make(f, units, check)


# ---------------------------------------------------------------------------
# action of an automorphism on the units

@dataclass
class UnitActionReport:
    M_sigma: list
    torsion: list
    muZ: tuple = ()
    A: int | None = None
    ell: int | None = None
    dimEA: int | None = None
    R: int | None = None
    eigen_dims: dict = field(default_factory=dict)

    @property
    def r(self):
        return len(self.M_sigma)


def _embeddings(f, dps):
    """One root per archimedean place, with its weight (1 real, 2 complex)."""
    with mpmath.workdps(dps):
        roots = mpmath.polyroots([int(c) for c in reversed(f)], maxsteps=400, extraprec=4 * dps)
        tol = mpmath.mpf(10) ** (-dps // 2)
        places = [(z, 1) for z in roots if abs(mpmath.im(z)) < tol]
        places += [(z, 2) for z in roots if mpmath.im(z) >= tol]
        return places


def _eval(elem, z):
    acc = mpmath.mpc(0)
    for c in reversed(elem):
        acc = acc * z + mpmath.mpf(Fraction(c).numerator) / Fraction(c).denominator
    return acc


def _log_vector(elem, places):
    return [w * mpmath.log(abs(_eval(elem, z))) for z, w in places]


def _qpow(a, k, f):
    out = (Fraction(1),)
    for _ in range(k):
        out = qmulmod(out, a, f)
    return out


def _torsion_candidate(f, image, units, row):
    z = tuple(Fraction(c) for c in image)
    for u, e in zip(units, row):
        if e == 0:
            continue
        base = u if e < 0 else qinvmod(u, f)
        z = qmulmod(z, _qpow(base, abs(e), f), f)
    return z


def _torsion_order(z, f, bound):
    cur = z
    for k in range(1, bound + 1):
        if poly(cur) == (1,):
            return k
        cur = qmulmod(cur, z, f)
    return 0


def unit_action_matrix(basis: UnitBasis, sigma: FracAutomorphism,
                       start_bits: int = 128, max_bits: int = 1024) -> UnitActionReport:
    """Integer M with sigma(u_i) = zeta_i * prod_j u_j^M[i][j], zeta_i torsion."""
    f, units, r = basis.field, basis.units, basis.rank
    if r == 0:
        return UnitActionReport([], [])
    images = [apply_to_element(u, sigma, f) for u in units]
    d = degree(f)
    bits = start_bits
    while bits <= max_bits:
        dps = int(bits * math.log10(2)) + 5
        with mpmath.workdps(dps):
            places = _embeddings(f, dps)
            L = mpmath.matrix([_log_vector(u, places)[:r] for u in units])
            S = mpmath.matrix([_log_vector(im, places)[:r] for im in images])
            try:
                X = S * mpmath.inverse(L)
            except ZeroDivisionError as exc:
                raise DomainError("units are multiplicatively dependent") from exc
            M = [[int(mpmath.nint(X[i, j])) for j in range(r)] for i in range(r)]
            ok, torsion = True, []
            for i in range(r):
                z = _torsion_candidate(f, images[i], units, M[i])
                small = all(abs(abs(_eval(z, w)) - 1) < mpmath.mpf(10) ** -20 for w, _ in places)
                k = _torsion_order(z, f, 2 * d) if small else 0
                if not k:
                    ok = False
                    break
                torsion.append(poly(z))
        if ok:
            return UnitActionReport(M, torsion)
        bits *= 2
    raise CertificationError("could not certify the unit action matrix")


def minimal_polynomial(M) -> tuple:
    """Minimal polynomial over Z of a matrix of finite order (squarefree part of its
    characteristic polynomial), certified by evaluation at M."""
    x = sympy.Symbol("x")
    Ms = sympy.Matrix(M)
    mu = sympy.Poly(sympy.sqf_part(Ms.charpoly(x).as_expr()), x)
    acc = sympy.zeros(*Ms.shape)
    for c in mu.all_coeffs():
        acc = acc * Ms + c * sympy.eye(Ms.shape[0])
    if acc != sympy.zeros(*Ms.shape):
        raise CertificationError("matrix is not diagonalizable over Q")
    return poly(int(c) for c in reversed(mu.all_coeffs()))


def eigen_analysis(report: UnitActionReport, ell: int, A: int) -> UnitActionReport:
    """R = r - dim E_A, with the eigenspace dimension of every root of mu mod ell."""
    if not isprime(ell):
        raise DomainError("ell must be prime")
    M, r = report.M_sigma, report.r
    mu = minimal_polynomial(M) if r else (1,)

    def dim_eigen(c):
        shifted = [[(M[i][j] - (c if i == j else 0)) % ell for j in range(r)] for i in range(r)]
        return r - rank_mod(shifted, ell)

    dims = {}
    if degree(mu) >= 1:
        for c in poly_roots_mod(ModPoly(ell, tuple(x % ell for x in mu))):
            dims[c] = dim_eigen(c)
    dimEA = dim_eigen(A % ell) if r else 0
    return UnitActionReport(M, report.torsion, mu, A % ell, ell, dimEA, r - dimEA, dims)
