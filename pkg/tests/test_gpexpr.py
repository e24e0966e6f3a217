"""Generalised-polynomial expressions: parsing, evaluation, normal forms."""
import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bracketwords import exactreal as er
from bracketwords import gpexpr as gp
from bracketwords.errors import GPSyntaxError, MissingParam, UnknownConstant



def mp_floor_nalpha(alpha_mp, n):
    return int(mpmath.floor(alpha_mp * n))


def test_sturmian_prefix_against_oracle():
    mpmath.mp.dps = 60
    e = gp.parse("floor(phi*n)")
    phi = (1 + mpmath.sqrt(5)) / 2
    got = [int(gp.eval_expr(e, n)) for n in range(200)]
    assert got == [mp_floor_nalpha(phi, n) for n in range(200)]
    assert list(gp.eval_floor_range(e, np.arange(200))) == got


def test_multi_sqrt_compositum():
    mpmath.mp.dps = 60
    e = gp.parse("floor(sqrt(2)*n)*frac(sqrt(3)*n)")
    for n in range(-30, 30):
        ref = mpmath.floor(mpmath.sqrt(2) * n) * mpmath.frac(mpmath.sqrt(3) * n)
        assert math.floor(float(gp.eval_expr(e, n)) * 1e6) == int(mpmath.floor(ref * 10 ** 6))


EXPRS = [
    "floor(sqrt(2)*n)",
    "n*floor(sqrt(3)*n) - floor(sqrt(2)*n^2)",
    "frac(phi*n)",
    "ceil(sqrt(5)*n) + nint(sqrt(2)*n)",
    "dist(sqrt(7)*n)",
    "floor(sqrt(2)*n*floor(sqrt(3)*n))",
    "(sqrt(5)-1)/2*n",
    "floor(pi*n)",
]


@pytest.mark.parametrize("src", EXPRS)
def test_format_round_trip(src):
    e = gp.parse(src)
    again = gp.parse(gp.format_expr(e))
    for n in range(-20, 21):
        assert gp.eval_expr(e, n) == gp.eval_expr(again, n)


@pytest.mark.parametrize("src", EXPRS[:-1])
def test_batch_matches_pointwise(src):
    e = gp.parse(src)
    ns = np.arange(-50, 300)
    vals = gp.eval_range(e, ns)
    if hasattr(vals, "lo"):
        for i, n in enumerate(ns):
            x = float(gp.eval_expr(e, int(n)))
            assert vals.lo[i] <= x <= vals.hi[i]
        return
    for n, v in zip(ns, vals):
        assert v == gp.eval_expr(e, int(n))


@pytest.mark.parametrize("src", EXPRS[:-1])
def test_sum_normal_form_agrees(src):
    e = gp.parse(src)
    snf = gp.sum_normal_form(e)
    f = snf.to_expr() if hasattr(snf, "to_expr") else snf.expr
    for n in range(-25, 26):
        assert gp.eval_expr(f, n) == gp.eval_expr(e, n)


def test_height():
    assert gp.height(gp.parse("n")) == 0
    assert gp.height(gp.parse("floor(sqrt(2)*n)")) == 1
    assert gp.height(gp.parse("floor(sqrt(2)*n*floor(sqrt(3)*n))")) == 2


@given(st.integers(-10 ** 6, 10 ** 6))
@settings(max_examples=100, deadline=None)
def test_bracket_identities_pointwise(n):
    x = gp.parse("sqrt(2)*n")
    fl = gp.eval_expr(gp.floor(x), n)
    fr = gp.eval_expr(gp.frac(x), n)
    assert gp.eval_expr(x, n) == fl + fr
    assert 0 <= fr < 1
    if n != 0:
        assert gp.eval_expr(gp.ceil(x), n) == fl + 1
    d = gp.eval_expr(gp.dist(x), n)
    assert d == min(fr, 1 - fr)


def test_syntax_errors_carry_position():
    with pytest.raises(GPSyntaxError) as info:
        gp.parse("floor(sqrt(2)*n")
    assert info.value.position is not None
    with pytest.raises(GPSyntaxError):
        gp.parse("n +* 2")


def test_unknown_constant():
    with pytest.raises(UnknownConstant):
        gp.parse("floor(gamma*n)")


def test_params_and_binding():
    e = gp.parse("floor(a0*n) + a1")
    assert gp.params_of(e) == {0, 1}
    with pytest.raises(MissingParam):
        gp.eval_expr(e, 3)
    b = gp.bind_params(e, {0: er.sqrt(2), 1: 5})
    assert gp.eval_expr(b, 10) == 14 + 5


def test_rational_division_stays_exact():
    e = gp.parse("n/3")
    assert gp.eval_expr(e, 2) == Fraction(2, 3)


@pytest.mark.parametrize("src", EXPRS)
def test_floor_expansion_agrees(src):
    e = gp.parse(src)
    f = gp.floor_expansion(e)
    for n in range(-100, 101):
        assert gp.eval_expr(f, n) == gp.eval_expr(e, n)


@pytest.mark.parametrize("src", [s for s in EXPRS if "n" in s])
def test_normal_form_components_drop_height(src):
    e = gp.parse(src)
    h = gp.height(e)
    if h == 0:
        return
    for term in gp.sum_normal_form(e).terms:
        assert all(gp.height(x) < h for x in term.floors)


def test_normal_form_on_long_range():
    e = gp.parse("floor(2*frac(sqrt(2)*n*floor(sqrt(3)*n)))")
    f = gp.sum_normal_form(e).to_expr()
    for n in range(501):
        assert gp.eval_expr(f, n) == gp.eval_expr(e, n)


def test_height_laws():
    a, b = gp.parse("floor(sqrt(2)*n)"), gp.parse("n*floor(sqrt(3)*floor(sqrt(5)*n))")
    assert gp.height(a + b) <= max(gp.height(a), gp.height(b))
    assert gp.height(gp.floor(b)) == gp.height(b) + 1


def test_running_example_value():
    e = gp.parse("floor(2*frac(sqrt(2)*n*floor(sqrt(3)*n)))")
    mpmath.mp.dps = 60
    for n in range(300):
        ref = mpmath.floor(2 * mpmath.frac(mpmath.sqrt(2) * n * mpmath.floor(mpmath.sqrt(3) * n)))
        assert gp.eval_expr(e, n) == int(ref)


def test_shift_check():
    base = gp.parse("floor(2*frac(sqrt(2)*n*floor(sqrt(3)*n)))")
    assert gp.shift_check(base, base, 0, {}, 200)


def test_shift_check_parametric_template():
    base = gp.parse("1 - floor(2*frac(sqrt(2)*n*floor(sqrt(3)*n)))")
    # floor(sqrt3 (n+1)) = floor(sqrt3 n) + 1 + floor(frac(sqrt3 n) + frac(sqrt3))
    tmpl = gp.parse("1 - floor(2*frac((sqrt(2)*n + a0)*(floor(sqrt(3)*n) + a1 + floor(frac(sqrt(3)*n) + a2))))")
    K = er.sqrt_field(2, 3)
    good = {0: K.sqrt(2), 1: 1, 2: K.sqrt(3) - 1}
    assert gp.shift_check(tmpl, base, 1, good, 200)
    bad = dict(good)
    bad[0] = K.sqrt(2) + Fraction(1, 2)
    assert not gp.shift_check(tmpl, base, 1, bad, 200)
