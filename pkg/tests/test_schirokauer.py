import random

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from nfskit import schirokauer as sm
from nfskit.errors import BadEllError, DomainError, NotInKellError, SingularUnitsError
from nfskit.galois import FracAutomorphism, IDENTITY, PrimeIdeal, hensel_root, ideal_valuation
from nfskit.mathcore import mmod, pmul

X4 = (1, 0, 0, 0, 1)
NEG = FracAutomorphism(-1, 0, 0, 1, 2)
INV = FracAutomorphism(0, 1, 1, 0, 2)
ELLS = (13, 23, 41)  # 5, 7 and 1 mod 8


def mulmod(a, b, ell):
    return tuple(c % (ell * ell) for c in mmod(list(pmul(a, b)), list(X4), ell * ell))


def test_epsilon_examples():
    assert sm.schirokauer_epsilon(X4, 13) == 168
    assert sm.schirokauer_epsilon(X4, 17) == 16
    assert sm.schirokauer_epsilon((-1, 1), 101) == 100
    assert sm.schirokauer_epsilon(X4, 23) == 23 ** 2 - 1


@pytest.mark.parametrize("ell", [13, 23, 41, 97, 101])
def test_epsilon_oracle(ell):
    x = sympy.Symbol("x")
    degs = [sympy.degree(fac, x) for fac, _ in sympy.factor_list(x**4 + 1, modulus=ell)[1]]
    from math import lcm
    assert sm.schirokauer_epsilon(X4, ell) == lcm(*(ell ** d - 1 for d in degs))


def test_epsilon_rejects():
    with pytest.raises(BadEllError):
        sm.schirokauer_epsilon(X4, 2)
    with pytest.raises(BadEllError):
        sm.schirokauer_epsilon(X4, 15)
    with pytest.raises(BadEllError):
        sm.schirokauer_epsilon((1, 0, 2), 7)


@pytest.mark.parametrize("ell", ELLS)
def test_linearity(ell):
    smap = sm.sm_build(X4, ell, 4)
    rng = random.Random(ell)
    for _ in range(300):
        a, b = sm.random_k_ell(X4, ell, rng), sm.random_k_ell(X4, ell, rng)
        lhs = sm.sm_evaluate(smap, mulmod(a, b, ell))
        rhs = [(x + y) % ell for x, y in zip(sm.sm_evaluate(smap, a), sm.sm_evaluate(smap, b))]
        assert lhs == rhs


@pytest.mark.parametrize("ell", ELLS)
def test_vanishes_on_powers(ell):
    smap = sm.sm_build(X4, ell, 4)
    rng = random.Random(1)
    assert sm.sm_evaluate(smap, (1,)) == [0, 0, 0, 0]
    for _ in range(20):
        d = sm.random_k_ell(X4, ell, rng)
        acc = (1,)
        for _ in range(ell):
            acc = mulmod(acc, d, ell)
        assert sm.sm_evaluate(smap, acc) == [0, 0, 0, 0]
        # rational integers only reach the constant coordinate
        assert sm.sm_evaluate(smap, (rng.randrange(1, ell),))[1:] == [0, 0, 0]


def test_not_in_k_ell():
    smap = sm.sm_build(X4, 41, 1)
    with pytest.raises(NotInKellError):
        sm.sm_evaluate(smap, (-3, 1))  # 3 is a root of x^4 + 1 mod 41
    with pytest.raises(NotInKellError):
        sm.sm_evaluate(smap, (41,))


@settings(max_examples=30)
@given(st.lists(st.integers(-10 ** 6, 10 ** 6), min_size=4, max_size=4),
       st.lists(st.integers(-50, 50), min_size=4, max_size=4))
def test_lifts_agree(g, h):
    ell = 23
    smap = sm.sm_build(X4, ell, 4)
    try:
        base = sm.sm_evaluate(smap, tuple(g))
    except NotInKellError:
        return
    lift = tuple(a + ell * ell * b for a, b in zip(g, h))
    assert sm.sm_evaluate(smap, lift) == base
    # a rational representative with denominator prime to ell
    from fractions import Fraction
    k = 7
    scaled = tuple(Fraction(a * k ** smap.epsilon, 1) for a in g)
    assert sm.sm_evaluate(smap, tuple(Fraction(c, k ** smap.epsilon) for c in scaled)) == base


@pytest.mark.parametrize("ell", [23, 31, 47])
def test_build_first_coordinate_for_seven_mod_eight(ell):
    smap = sm.sm_build(X4, ell, 1)
    assert smap.coordRows == ((1, 0, 0, 0),)
    assert sm.sample_rank(smap, 2 + 40) == 1


def test_build_rank_zero_and_full():
    assert sm.sm_build((1, 0, 1), 23, 0).r == 0
    assert sm.sm_evaluate(sm.sm_build((1, 0, 1), 23, 0), (3, 1)) == []
    full = sm.sm_build(X4, 41, 4)
    assert sm.sample_rank(full, 48) == 4
    with pytest.raises(DomainError):
        sm.sm_build(X4, 41, 5)


def test_dualize_zeta8_drops_the_only_map():
    unit = (1, 1, 0, -1)
    # the constant coordinate already vanishes on 1 + sqrt 2, so dualize the next one
    assert sm.sm_evaluate(sm.sm_build(X4, 23, 1), unit) == [0]
    with pytest.raises(SingularUnitsError):
        sm.sm_dualize(sm.sm_build(X4, 23, 1), [unit])
    smap = sm.SchirokauerMap(X4, 23, sm.schirokauer_epsilon(X4, 23), ((0, 1, 0, 0),))
    dual = sm.sm_dualize(smap, [unit])
    assert sm.sm_evaluate(dual, unit) == [1]
    assert sm.sm_dualize(smap, [unit], vanishing=1).r == 0


def test_dualize_cubic_keeps_one_map():
    f = (-1, -3, 0, 1)
    units = [(0, 1), (1, 1)]
    ell = 103
    smap = sm.sm_build(f, ell, 2)
    dual = sm.sm_dualize(smap, units)
    assert [sm.sm_evaluate(dual, u) for u in units] == [[1, 0], [0, 1]]
    kept = sm.sm_dualize(smap, units, vanishing=1)
    assert kept.r == 1
    assert [sm.sm_evaluate(kept, u) for u in units] == [[0], [1]]


def test_dualize_singular():
    smap = sm.sm_build((-1, -3, 0, 1), 103, 2)
    with pytest.raises(SingularUnitsError):
        sm.sm_dualize(smap, [(0, 1), (0, 1)])


def test_invariance_identity():
    smap = sm.sm_build(X4, 41, 4)
    rep = sm.sm_kernel_invariance_check(smap, IDENTITY, samples=20)
    assert rep.ok and rep.M == [[int(i == j) for j in range(4)] for i in range(4)]


def test_invariance_negation_pattern():
    smap = sm.sm_build(X4, 41, 4)
    rep = sm.sm_kernel_invariance_check(smap, NEG, samples=50)
    assert rep.ok
    assert rep.M == [[1, 0, 0, 0], [0, 40, 0, 0], [0, 0, 1, 0], [0, 0, 0, 40]]


@pytest.mark.parametrize("ell", ELLS)
@pytest.mark.parametrize("sigma", [NEG, INV])
def test_invariance_both_automorphisms(ell, sigma):
    smap = sm.sm_build(X4, ell, 1)
    assert sm.sm_kernel_invariance_check(smap, sigma, samples=50).ok


def counter_example(ell, q=41):
    """lambda_1 + v_I with I one prime above q: a linear form whose kernel sigma moves."""
    smap = sm.sm_build(X4, ell, 1)
    I = PrimeIdeal("F", q, 3)

    def ev(g):
        g = tuple(int(c) for c in g)
        return [(sm.sm_evaluate(smap, g)[0] + ideal_valuation(X4, I, g)) % ell]
    r = hensel_root(X4, 3, q, 2)
    extra = [(-r, 1), (-3, 1), (q - 3, 1)]
    return smap, ev, extra


@pytest.mark.parametrize("ell", [13, 23])
@pytest.mark.parametrize("sigma", [NEG, INV])
def test_counter_example_fails(ell, sigma):
    smap, ev, extra = counter_example(ell)
    rep = sm.sm_kernel_invariance_check(smap, sigma, samples=10, extra=extra, evaluate=ev)
    assert not rep.ok
