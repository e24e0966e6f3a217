"""Exact arithmetic in number fields, checked against high-precision mpmath."""
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from bracketwords import exactreal as er
from bracketwords.errors import (FieldMismatch, HypothesisViolated, MultipleRoots, NoRoot,
                                 PrecisionExhausted, Reducible)

K23 = er.sqrt_field(2, 3)
S2, S3 = K23.sqrt(2), K23.sqrt(3)

small = st.integers(-40, 40)


def oracle(c0, c1, c2, c3):
    mpmath.mp.dps = 80
    return c0 + c1 * mpmath.sqrt(2) + c2 * mpmath.sqrt(3) + c3 * mpmath.sqrt(6)


def elem(c0, c1, c2, c3):
    return c0 + c1 * S2 + c2 * S3 + c3 * S2 * S3


def test_field_validation():
    with pytest.raises(Reducible):
        er.NumberField((-4, 0, 1), (1, 3))
    with pytest.raises(NoRoot):
        er.NumberField((-2, 0, 1), (2, 3))
    with pytest.raises(MultipleRoots):
        er.NumberField((-2, 0, 1), (-2, 2))


def test_sqrt_relations():
    assert S2 * S2 == 2 and S3 * S3 == 3
    assert (S2 * S3) ** 2 == 6
    assert K23.sqrt(12) == 2 * S3
    assert er.sqrt_field(4) is None


def test_golden_ratio():
    phi = er.phi()
    assert phi * phi == phi + 1
    assert er.floor_exact(100 * phi) == 161


def test_parse_field_decl():
    name, K = er.parse_field_decl("field K : x^4-10*x^2+1 in [3,4]")
    assert name == "K" and K.degree == 4
    assert abs(float(K.theta) - (2 ** 0.5 + 3 ** 0.5)) < 1e-12


@settings(max_examples=150, deadline=None)
@given(small, small, small, small)
def test_sign_and_floor_match_oracle(c0, c1, c2, c3):
    x, ref = elem(c0, c1, c2, c3), oracle(c0, c1, c2, c3)
    assert er.sign(x) == (0 if ref == 0 else (1 if ref > 0 else -1))
    assert er.floor_exact(x) == int(mpmath.floor(ref))
    assert er.nint_exact(x) == int(mpmath.floor(ref + mpmath.mpf(1) / 2))


@settings(max_examples=80, deadline=None)
@given(small, small, small, small, small, small, small, small)
def test_field_ring_laws(a0, a1, a2, a3, b0, b1, b2, b3):
    x, y = elem(a0, a1, a2, a3), elem(b0, b1, b2, b3)
    assert (x + y) * (x - y) == x * x - y * y
    if not y.is_zero():
        assert (x / y) * y == x
        assert y.norm() * (1 / y).norm() == 1
    assert (x * y).norm() == x.norm() * y.norm()
    assert (x + y).trace() == x.trace() + y.trace()


@settings(max_examples=60, deadline=None)
@given(small, small, small, small, st.integers(1, 200))
def test_interval_encloses(c0, c1, c2, c3, k):
    lo, hi = er.interval_of(elem(c0, c1, c2, c3), k)
    assert hi - lo <= Fraction(1, 2 ** k)
    ref = oracle(c0, c1, c2, c3)
    assert mpmath.mpf(lo.numerator) / lo.denominator <= ref + mpmath.mpf(10) ** -70
    assert ref <= mpmath.mpf(hi.numerator) / hi.denominator + mpmath.mpf(10) ** -70


def test_bracket_identities():
    x = 7 * S2 - 3
    assert er.frac_exact(x) == x - er.floor_exact(x)
    assert er.ceil_exact(x) == er.floor_exact(x) + 1
    d = x - er.nint_exact(x)
    assert er.dist_exact(x) == (d if d >= 0 else -d)
    assert er.ceil_exact(Fraction(3)) == 3 and er.frac_exact(Fraction(-1, 3)) == Fraction(2, 3)


def test_field_mismatch():
    K5 = er.sqrt_field(5)
    with pytest.raises(FieldMismatch):
        K23.sqrt(2) + K5.sqrt(5)


def test_pi_effective():
    pi = er.pi_real()
    assert er.floor_exact(1000 * pi) == 3141
    assert er.sign(pi - Fraction(355, 113)) == -1


def test_precision_exhausted_on_zero_effective():
    zero = er.Effective(lambda k: (Fraction(-1, 2 ** k), Fraction(1, 2 ** k)), precision_cap=64)
    with pytest.raises(PrecisionExhausted):
        zero.sign()


def test_nested_real_validation_and_bounds():
    with pytest.raises(HypothesisViolated):
        er.construct_nested_real([10, 11], [Fraction(1, 4), Fraction(1, 4)])
    Ns = [3, 30, 300, 3000]
    eps = [Fraction(1, 4)] * 4
    x = er.construct_nested_real(Ns, eps)
    iv = x.interval(60)
    for N, e in zip(Ns, eps):
        assert er.dist_bound_holds(iv, N, e)
