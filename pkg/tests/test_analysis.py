"""Complexity, frequency, recurrence and counting measurements."""
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bracketwords import analysis as A
from bracketwords import words as W
from bracketwords.errors import InsufficientSamples

G = W.golden_conjugate()


def brute_complexity(seq, N):
    return len({tuple(seq[i:i + N]) for i in range(len(seq) - N + 1)})


def test_fibonacci_complexity():
    prof = A.subword_complexity(W.builtin("fib_sturmian"), range(1, 51), 10 ** 5)
    assert all(prof[N] == N + 1 for N in range(1, 51))
    assert isinstance(A.periodicity_check(prof), A.Aperiodic)


def test_periodic_and_constant():
    prof = A.subword_complexity(W.PeriodicWord([1, 0]), range(1, 20), 500)
    assert all(prof[N] == 2 for N in range(1, 20))
    c = A.subword_complexity(W.constant_word(1), range(1, 5), 100)
    assert isinstance(A.periodicity_check(c), A.EventuallyPeriodicEvidence)


def test_product_complexity():
    prof = A.subword_complexity(W.builtin("sturmian_product"), range(1, 31), 2 * 10 ** 5)
    assert all(prof[N] == (N + 1) ** 2 for N in range(1, 31))


def test_fibonacci_set_aperiodic():
    prof = A.subword_complexity(W.builtin("fibonacci_set"), range(1, 30), 10 ** 6)
    assert isinstance(A.periodicity_check(prof), A.Aperiodic)


random_words = st.tuples(
    st.lists(st.integers(0, 2), min_size=0, max_size=40),
    st.lists(st.integers(0, 2), min_size=1, max_size=12),
)


@settings(max_examples=60, deadline=None)
@given(random_words, st.integers(50, 300))
def test_complexity_matches_brute_force(parts, H):
    pre, pat = parts
    w = W.PeriodicWord(pat, preperiod=pre)
    seq = w.prefix(H)
    Ns = range(1, 15)
    prof = A.subword_complexity(w, Ns, H)
    for N in Ns:
        assert prof[N] == brute_complexity(seq, N)


@settings(max_examples=40, deadline=None)
@given(random_words)
def test_complexity_invariants(parts):
    pre, pat = parts
    w = W.PeriodicWord(pat, preperiod=pre)
    q = len(w.alphabet)
    H = 400
    prof = A.subword_complexity(w, range(1, 21), H)
    for N in range(1, 20):
        assert prof[N] <= prof[N + 1] or prof[N + 1] == H - N  # horizon edge
        assert prof[N + 1] <= q * prof[N]
    for N in range(1, 11):
        for M in range(1, 11):
            assert prof[N + M] <= prof[N] * prof[M]
    wide = A.subword_complexity(w, range(1, 21), 2 * H)
    assert all(prof[N] <= wide[N] for N in range(1, 21))


@settings(max_examples=30, deadline=None)
@given(random_words, random_words)
def test_coding_and_product_bounds(p1, p2):
    a = W.PeriodicWord(p1[1], preperiod=p1[0])
    b = W.PeriodicWord(p2[1], preperiod=p2[0])
    H, Ns = 300, range(1, 12)
    pa = A.subword_complexity(a, Ns, H)
    pb = A.subword_complexity(b, Ns, H)
    pab = A.subword_complexity(W.product_word(a, b), Ns, H)
    pc = A.subword_complexity(W.code_word(a, {s: s % 2 for s in a.alphabet}), Ns, H)
    for N in Ns:
        assert pab[N] <= pa[N] * pb[N]
        assert pc[N] <= pa[N]


@settings(max_examples=30, deadline=None)
@given(random_words, st.lists(st.integers(0, 2), min_size=1, max_size=3), st.integers(5, 300))
def test_extension_boundary(parts, w, N):
    a = W.PeriodicWord(parts[1], preperiod=parts[0])
    total = sum(A.factor_count(a, tuple(w) + (x,), N) for x in a.alphabet)
    assert 0 <= A.factor_count(a, tuple(w), N) - total <= 1


def test_block_complexity_relation():
    a = W.builtin("fib_sturmian")
    b = W.block_word(a, 2)
    pb = A.subword_complexity(b, range(1, 15), 20000)
    pa = A.subword_complexity(a, range(1, 31), 40000)
    assert all(pb[N] <= pa[2 * N] for N in range(1, 15))


def test_frequency_periodic_and_fibonacci():
    rep = A.frequency(W.PeriodicWord([1, 0]), (1,), [10, 100, 1000], Ms=(0, 2, 40))
    assert all(v == 0.5 for v in rep.estimates.values())
    fib = A.frequency(W.builtin("fib_sturmian"), (1,), [100, 1000, 10000], Ms=(0, 7, 1234))
    for (M, N), v in fib.estimates.items():
        assert abs(v - float(G)) <= 2 / N


def test_frequencies_sum_to_one():
    a = W.builtin("power_digit2")
    total = sum(A.frequency(a, (s,), [5000]).estimates[(0, 5000)] for s in a.alphabet)
    assert total == pytest.approx(1.0)


def test_recurrence():
    assert A.recurrence_function(W.PeriodicWord([1, 0]), (1,), 1000).value == 2
    fib = A.recurrence_function(W.builtin("fib_sturmian"), (1, 0, 1), 10 ** 4)
    assert fib.stable and math.isfinite(fib.value)
    fs = A.recurrence_function(W.builtin("fibonacci_set"), (1,), 10 ** 5)
    assert fs.value == math.inf
    assert A.frequency(W.builtin("fibonacci_set"), (1,), [10 ** 5]).estimates[(0, 10 ** 5)] < 1e-3


def test_counting_function():
    cnt = A.counting_function(W.builtin("fibonacci_set"), 1, 100)
    assert cnt[100] == 11
    assert (np.diff(cnt) >= 0).all() and (cnt <= np.arange(101)).all()


def test_sturmian_balance_and_deviation():
    a = W.builtin("fib_sturmian")
    ok, first = A.count_deviation_bounded(a, 1, G, 1, 10 ** 5)
    assert ok and first is None
    assert A.balance_constant(a, 1, 50, 20000) == 1
    # a bound of 0 must fail since alpha is irrational
    assert not A.count_deviation_bounded(a, 1, G, 0, 100)[0]


def test_discrepancy_constant_and_periodic():
    rep = A.counting_and_discrepancy(W.constant_word("x"), "x", [10, 100, 1000])
    assert rep.discrepancy == [0, 0, 0]
    per = W.PeriodicWord([0, 1, 1])
    rep = A.counting_and_discrepancy(per, 1, [3, 30, 300], freqs={0: Fraction(1, 3), 1: Fraction(2, 3)})
    assert rep.discrepancy == [0, 0, 0]
    rep = A.counting_and_discrepancy(per, 1, [4, 31], freqs={0: Fraction(1, 3), 1: Fraction(2, 3)})
    assert all(d > 0 for d in rep.discrepancy)


def test_growth_exponent_lambda_half():
    a = W.builtin("growth_half")
    Ns = [2 ** k for k in range(10, 21)]
    cnt = A.counting_function(a, 1, Ns[-1])
    fit = A.growth_exponent(Ns, [cnt[N] for N in Ns])
    assert fit.slope == pytest.approx(0.5, abs=0.1)


def test_growth_exponent_log_fibonacci():
    a = W.builtin("fibonacci_set")
    Ns = [10 ** k for k in range(2, 7)]
    cnt = A.counting_function(a, 1, Ns[-1])
    fit = A.growth_exponent(Ns, [cnt[N] for N in Ns], mode="semilog")
    assert fit.slope == pytest.approx(1 / math.log((1 + 5 ** 0.5) / 2), rel=0.1)


def test_growth_exponent_linear_and_errors():
    Ns = [10, 100, 1000, 10000]
    assert A.growth_exponent(Ns, Ns).slope == pytest.approx(1.0)
    with pytest.raises(InsufficientSamples):
        A.growth_exponent([10, 20, 30, 40], [1, 2, 3, 4])
    with pytest.raises(InsufficientSamples):
        A.growth_exponent([10, 1000, 10000], [1, 2, 3])


def test_surjection_coverage():
    probe = W.gA_probe(4)
    small = A.surjection_coverage(probe, 3, 20000)
    big = A.surjection_coverage(probe, 3, 40000)
    assert small.bounds_ok and big.bounds_ok
    assert set(small.first_hit) <= set(big.first_hit)
    assert (0, 0) in A.surjection_coverage(probe, 1, 10 ** 6).first_hit


def test_report_output():
    prof = A.subword_complexity(W.builtin("fib_sturmian"), [1, 2, 3], 1000)
    lines = A.to_jsonl(prof.records()).strip().splitlines()
    assert len(lines) == 3 and '"measure": "complexity"' in lines[0]
    assert A.profile_csv(prof).splitlines()[1].startswith("1,")
