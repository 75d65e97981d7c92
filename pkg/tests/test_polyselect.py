import math
import random

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from nfskit import polyselect as ps
from nfskit import quality
from nfskit.errors import DomainError, NoValidPhiError
from nfskit.galois import admits, transformed_numerator
from nfskit.mathcore import (
    ModPoly, degree, discriminant, lll_reduce, mmod, norm_inf, padd, pscale,
    poly_is_irreducible_mod, poly_roots_mod,
)

P_JLSV1 = 1000001447
P_JLSV2 = 1125899906842783
P_CONJ3 = 2 ** 31 + 11


def reduces_to_multiple(h, phi, p):
    return not mmod(list(h), list(phi), p)


def assert_valid(pair):
    assert poly_is_irreducible_mod(ModPoly(pair.p, pair.phi))
    assert len(pair.phi) - 1 == pair.n and pair.phi[-1] == 1
    assert reduces_to_multiple(pair.f, pair.phi, pair.p)
    assert reduces_to_multiple(pair.g, pair.phi, pair.p)
    assert degree(pair.f) >= degree(pair.g) >= pair.n


def test_jlsv1_example():
    pair = ps.select_jlsv1(P_JLSV1, 4, a_start=44723)
    assert pair.f == (1, 44723, -6, -44723, 1)
    assert pair.g == (22360, 4833, -134160, -4833, 22360)
    assert_valid(pair)
    v = pair.aux["v"]
    assert all((v * a - b) % P_JLSV1 == 0 for a, b in zip(pair.f, pair.g))


def test_jlsv1_family_and_bound():
    rng = random.Random(5)
    fam = ps.default_family(4)
    for _ in range(8):
        p = sympy.nextprime(rng.randrange(2 ** 29, 2 ** 30))
        pair = ps.select_jlsv1(p, 4)
        assert norm_inf(pair.g) <= 6 * (math.isqrt(p) + 1)
        assert admits(pair.f, fam.automorphism) and admits(pair.g, fam.automorphism)
        assert_valid(pair)


def test_table3_families_admit_automorphism():
    for fams in ps.TABLE3.values():
        for fam in fams:
            for a in (-7, 0, 1, 12, 10 ** 6):
                h = fam.member(a)
                if fam.automorphism is not None and discriminant(h):
                    num = transformed_numerator(h, fam.automorphism)
                    assert all(x * h[-1] == y * num[-1] for x, y in zip(num, h))


def test_jlsv2_example():
    pair = ps.select_jlsv2(P_JLSV2, 4, 7, (1, 1, -6, -1, 1))
    assert pair.aux["W"] == 77
    assert pair.g == (34661012, 1807422, 35337, 307, 1)
    assert degree(pair.f) == 7
    Q = P_JLSV2 ** 4
    assert norm_inf(pair.f) <= 2 ** 3.5 * Q ** (1 / 8)
    assert_valid(pair)


def test_jlsv2_boundary_degree():
    rng = random.Random(11)
    done = 0
    while done < 5:
        p = sympy.nextprime(rng.randrange(2 ** 19, 2 ** 20))
        if p % 5 not in (2, 3):
            continue  # translates of x^2 + x - 1 keep discriminant 5
        done += 1
        pair = ps.select_jlsv2(p, 2, 2, (-1, 1, 1))
        assert degree(pair.f) == 2
        assert norm_inf(pair.f) <= 2 * p ** (2 / 3)
        assert_valid(pair)


def test_gjl_n1_matches_classic_joux_lercier():
    p = 1009
    f = next((c, 2, 0, 1) for c in range(7, 100) if poly_roots_mod(ModPoly(p, (c, 2, 0, 1))))
    m = sorted(poly_roots_mod(ModPoly(p, f)))[0]
    pair = ps.select_gjl(p, 1, f)
    classic = lll_reduce([[p, 0, 0], [-m, 1, 0], [0, -m, 1]])
    assert pair.g == ps.normalize(classic[0])
    assert_valid(pair)


def test_gjl_quadratic_bound_and_determinant():
    rng = random.Random(2)
    found = 0
    while found < 4:
        p = sympy.nextprime(rng.randrange(2 ** 29, 2 ** 30))
        f = tuple(rng.randrange(-5, 6) for _ in range(4)) + (1,)
        try:
            pair = ps.select_gjl(p, 2, f)
        except (NoValidPhiError, DomainError):
            continue
        found += 1
        assert norm_inf(pair.g) <= 2 ** 1.5 * p ** 0.5
        M = sympy.Matrix(ps.gjl_lattice(pair.phi, p, 3))
        assert abs(M.det()) == p ** 2
        assert_valid(pair)


def test_gjl_without_factor():
    with pytest.raises(NoValidPhiError):
        ps.select_gjl(7, 2, (-2, -2, 0, 0, 0, 1))  # irreducible mod 7


def test_conjugation_degree_11_example():
    pair = ps.select_conjugation(134217931, 11, ps.binomial_family(11), [(-5, 0, 1)])
    assert pair.f == (-5,) + (0,) * 21 + (1,)
    assert pair.g == (-1789,) + (0,) * 10 + (10393,)
    assert_valid(pair)


def test_conjugation_cubic_example():
    pair = ps.select_conjugation(P_CONJ3, 3)
    assert pair.aux["lambda"] == 2021977950
    assert pair.f == (1, 7, 14, 3, -6, -1, 1)
    # printed g with the sign of its constant term corrected
    assert pair.g == (-20413, -28609, 32630, 20413)
    assert pair.phi == (2147483658, 125505706, 125505709, 1)
    assert_valid(pair)


@settings(max_examples=15)
@given(st.integers(10 ** 6, 10 ** 12))
def test_conjugation_shape(start):
    p = sympy.nextprime(start)
    pair = ps.select_conjugation(p, 2)
    assert degree(pair.f) == 4 and degree(pair.g) == 2
    # |u| <= sqrt(p/2) from the stopping rule, and then |v| <= p/|r| < sqrt(2p)
    assert abs(pair.aux["u"]) <= math.isqrt(p // 2)
    assert norm_inf(pair.g) <= math.isqrt(2 * p) + 1
    assert_valid(pair)


def test_conjugation_automorphism_permutes_phi_roots():
    pair = ps.select_conjugation(P_CONJ3, 3)
    s = ps.default_family(3).automorphism
    from nfskit.mathcore import FiniteField
    K = FiniteField(pair.p, pair.phi)
    m = K.gen()
    img = K.mul(K.eval_poly(s.numerator, m), K.inv(K.eval_poly(s.denominator, m)))
    assert K.eval_poly(pair.phi, img) == ()


def test_poly_file_round_trip(tmp_path):
    for pair in (ps.select_conjugation(P_CONJ3, 3), ps.select_jlsv2(P_JLSV2, 4, 7, (1, 1, -6, -1, 1)),
                 ps.select_jlsv1(P_JLSV1, 4, a_start=44723)):
        path = tmp_path / "pair.poly"
        ps.write_poly_file(pair, path)
        back = ps.read_poly_file(path)
        assert back == pair and back.aux == pair.aux


def test_improvement_tiny_grid_is_exhaustive():
    pair = ps.select_conjugation(P_CONJ3, 3)
    g2 = ps.conj_second_vector(pair)
    params = quality.MurphyParams(K=200, alphaPrimeBound=100)
    out = ps.improve_linear_combination(pair, g2, bound=2, params=params)
    s = ps.default_area_scale(pair)
    best = max(((1, 0), (-1, 1), (-1, -1)),
               key=lambda ab: (quality.murphy_e(pair.f, ps._combine(pair.g, g2, 3, *ab), params, s),
                               -norm_inf(ps._combine(pair.g, g2, 3, *ab))))
    assert out.g == ps.normalize(ps._combine(pair.g, g2, 3, *best))
    assert reduces_to_multiple(out.g, pair.phi, pair.p)


def test_improvement_does_not_lower_e():
    pair = ps.select_conjugation(P_CONJ3, 3)
    params = quality.MurphyParams(K=300, alphaPrimeBound=200)
    s = ps.default_area_scale(pair)
    out = ps.improve_linear_combination(pair, ps.conj_second_vector(pair), bound=8, params=params)
    assert quality.murphy_e(out.f, out.g, params, s) >= quality.murphy_e(pair.f, pair.g, params, s)
    again = ps.improve_linear_combination(pair, ps.conj_second_vector(pair), bound=8, params=params,
                                          threads=3)
    assert again.g == out.g


def test_improvement_rejects_multiple():
    pair = ps.select_conjugation(P_CONJ3, 3)
    with pytest.raises(DomainError):
        ps.improve_linear_combination(pair, pscale(pair.g, 3), bound=3)
    with pytest.raises(DomainError):
        ps.improve_linear_combination(pair, padd(pair.g, (1,)), bound=3)


def test_totally_complex_filter():
    pair = ps.select_conjugation(10567, 2)
    params = quality.MurphyParams(K=200, alphaPrimeBound=100)
    out = ps.improve_linear_combination(pair, ps.conj_second_vector(pair), bound=10, params=params,
                                        totally_complex=True)
    a, b, c = out.g
    assert b * b - 4 * a * c < 0
