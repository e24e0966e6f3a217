"""Lattices, relations, half-space cuts and the prefix-counting experiment."""
import itertools
import math
from fractions import Fraction
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.optimize import linprog

from bracketwords import sclab as S
from bracketwords.errors import TooLarge
from bracketwords.exactreal import sqrt_field

K = sqrt_field(2, 3)
R2, R3 = K.sqrt(2), K.sqrt(3)

vec2 = st.tuples(st.integers(-9, 9), st.integers(-9, 9))


def test_relation_examples():
    assert S.enumerate_relations((1,), Fraction(1, 2), 3).members == [(0,)]
    assert set(S.enumerate_relations((1, 1), Fraction(1, 2), 2).members) == {(0, 0), (1, -1), (-1, 1)}


def test_relations_against_brute_force():
    R = S.enumerate_relations((1, R2), Fraction(1, 10), 10)
    import mpmath
    mpmath.mp.dps = 100
    s2 = mpmath.sqrt(2)
    ref = {(a, b) for a in range(-9, 10) for b in range(-9, 10) if abs(a + b * s2) < mpmath.mpf(1) / 10}
    assert set(R.members) == ref and (0, 0) in ref


def test_span_lattice_examples():
    lat = S.span_lattice([(1, -1)])
    assert lat.rank == 1 and lat.contains((5, -5)) and not lat.contains((1, 1))
    assert S.span_lattice([(2, 0), (0, 2), (1, 1)]).basis == [[1, 1], [0, 2]]
    assert S.span_lattice([], 3).rank == 0


@settings(max_examples=80, deadline=None)
@given(st.lists(vec2, min_size=1, max_size=5), st.lists(st.integers(-3, 3), min_size=5, max_size=5))
def test_lattice_properties(gens, coeffs):
    lat = S.span_lattice(gens, 2)
    combo = [sum(c * g[i] for c, g in zip(coeffs, gens)) for i in range(2)]
    assert lat.contains(combo)
    assert S.hnf(lat.basis, 2) == lat.basis
    assert S.span_lattice(lat.basis, 2) == lat
    # index of a full-rank 2d lattice is the gcd of the 2x2 minors
    minors = [a[0] * b[1] - a[1] * b[0] for a, b in itertools.combinations(gens, 2)]
    g = math.gcd(*minors) if minors else 0
    if g:
        assert lat.rank == 2 and abs(lat.basis[0][0] * lat.basis[1][1]) == g
    pts = S._box([-4, -4], [4, 4])
    assert lat.contains_many(pts).tolist() == [lat.contains(p) for p in pts.tolist()]


def test_lattice_approx_examples():
    lat, R, cert = S.lattice_approx((1, 1), Fraction(1, 2), 2)
    assert lat == S.span_lattice([(1, -1)]) and cert.inclusion_holds and cert.C_hat == 0
    lat, R, cert = S.lattice_approx((1, R2, R3), Fraction(1, 10 ** 6), 8)
    assert lat.rank == 0 and R.members == [(0, 0, 0)]
    lat, R, cert = S.lattice_approx((1, 1 + Fraction(1, 10 ** 5)), Fraction(1, 10 ** 4), 4)
    assert lat.contains((1, -1)) and cert.inclusion_holds


@settings(max_examples=20, deadline=None)
@given(st.integers(-5, 5), st.integers(-5, 5), st.integers(1, 4), st.integers(2, 6))
def test_sandwich_first_inclusion(a, b, k, N):
    alpha = (1, a + b * R2)
    eps = Fraction(1, 10 ** k)
    lat, R, cert = S.lattice_approx(alpha, eps, N)
    assert cert.inclusion_holds
    assert all(lat.contains(m) for m in R.members)


def test_relations_monotone_in_eps():
    alpha = (1, R2, R3)
    prev = None
    for k in range(1, 5):
        cur = set(S.enumerate_relations(alpha, Fraction(1, 10 ** k), 6).members)
        if prev is not None:
            assert cur <= prev
        prev = cur


def separable(points, subset):
    """Strict linear separability of subset from its complement (LP oracle)."""
    d = len(points[0])
    A, b = [], []
    for p in points:
        s = -1 if p in subset else 1  # want w.p - c >= 1 inside, <= -1 outside
        A.append([s * x for x in p] + [-s])
        b.append(-1)
    res = linprog(np.zeros(d + 1), A_ub=A, b_ub=b, bounds=[(None, None)] * (d + 1), method="highs")
    return res.status == 0


def lp_cuts(points):
    pts = [tuple(p) for p in points]
    out = set()
    for r in range(len(pts) + 1):
        for T in itertools.combinations(pts, r):
            if separable(pts, set(T)):
                out.add(frozenset(T))
    return out


def test_cut_examples():
    fam, bound, ok = S.halfspace_cuts([(0, 0), (1, 1), (2, 2)])
    assert len(fam) == 6 and bound == 8 and ok
    fam, bound, ok = S.halfspace_cuts([(3, 4)])
    assert fam == {frozenset(), frozenset({(3, 4)})} and bound == 2
    fam, bound, ok = S.halfspace_cuts([(0, 0), (1, 0), (0, 1), (3, 2)])
    assert bound == 14 and ok


@settings(max_examples=25, deadline=None)
@given(st.lists(vec2, min_size=1, max_size=7, unique=True))
def test_cuts_match_lp_oracle_2d(points):
    fam, bound, ok = S.halfspace_cuts(points)
    assert fam == lp_cuts(points)
    assert ok and bound == 2 * sum(comb(len(points) - 1, i) for i in range(3))


@settings(max_examples=15, deadline=None)
@given(st.lists(st.tuples(st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3)),
                min_size=1, max_size=6, unique=True))
def test_cuts_match_lp_oracle_3d(points):
    fam, bound, ok = S.halfspace_cuts(points)
    assert fam == lp_cuts(points) and ok


def test_half_lattice_pairs_small():
    count, M = S.half_lattice_pairs([-1, -1], [1, 1])
    assert M == 9 and count <= 10 * M ** 4
    count5, M5 = S.half_lattice_pairs([-2, -2], [2, 2])
    assert (count5, M5) == (1342, 25)


def test_too_large():
    with pytest.raises(TooLarge):
        S.enumerate_relations((1, R2, R3, R2 * R3), Fraction(1, 10), 10 ** 3)
    with pytest.raises(TooLarge):
        S.halfspace_cuts([(i, 0) for i in range(100)])


def test_prefix_count_examples():
    rep = S.prefix_count_experiment([[1]], 1, Fraction(1, 4))
    assert rep.grid_points == 8 and rep.count == 2
    counts = [S.prefix_count_experiment([list(range(10))], 1, Fraction(1, 2 ** k)).count for k in range(2, 9)]
    assert counts == sorted(counts) and counts[-1] <= 2 * 10 ** 2
    h = [list(range(16)), [math.isqrt(3 * n * n) for n in range(16)]]
    rep = S.prefix_count_experiment(h, 1, Fraction(1, 16))
    assert rep.count <= rep.envelope


@settings(max_examples=40, deadline=None)
@given(st.lists(st.fractions(-2, 2, max_denominator=50), min_size=2, max_size=2))
def test_reconstruction_reproduces_prefix(alpha):
    h = [list(range(12)), [math.isqrt(3 * n * n) for n in range(12)]]
    vals, rec = S.reconstruct_prefix(h, alpha)
    assert vals == S.g_alpha(h, alpha)
    assert sum(rec.cases) == 12
    assert all(abs(x - a + math.floor(a)) <= rec.eps for x, a in zip(rec.alpha_star, alpha))


def test_sample_rationals_deterministic():
    a = S.sample_rationals(2, 5, seed=3)
    assert a == S.sample_rationals(2, 5, seed=3)
    assert all(-1 <= x < 1 for t in a for x in t)
