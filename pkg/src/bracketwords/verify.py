"""Acceptance checks shared by ``bracketwords verify`` and the test suite.

Each check returns a :class:`CriterionResult` carrying the measured values, so
a failure says what was observed rather than only that something failed.
"""
from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import analysis as A
from . import gpexpr as gp
from . import pisot as PS
from . import sclab as SC
from . import words as W
from .errors import HypothesisViolated, PartitionViolation
from .exactreal import construct_nested_real, dist_bound_holds, sqrt_field

FIB_56 = "10101101011011010110101101101011011010110101101101011010"
POLY_55 = "1000101001111011101110111010011111011101111000111110111"


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    budget: float
    seconds: float = 0.0
    detail: dict = field(default_factory=dict)

    @property
    def in_time(self) -> bool:
        return self.seconds <= self.budget

    @property
    def ok(self) -> bool:
        return self.passed and self.in_time

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        extra = "" if self.in_time else f" (over budget {self.budget:.0f}s)"
        return f"[{status}] {self.number:2d} {self.name}: {self.seconds:.2f}s{extra} {self.detail}"


def c1_fibonacci_prefix():
    got = W.builtin("fib_sturmian").string(56)
    return got == FIB_56, {"prefix": got}


def c2_poly_prefix():
    got = W.builtin("poly_example").string(55)
    return got == POLY_55, {"prefix": got}


def c3_sturmian_complexity():
    prof = A.subword_complexity(W.builtin("fib_sturmian"), range(1, 201), 10 ** 6)
    bad = [N for N in range(1, 201) if prof[N] != N + 1]
    return not bad, {"mismatches": bad[:5], "p(200)": prof[200]}


def c4_sturmian_balance():
    a = W.builtin("fib_sturmian")
    holds, first = A.count_deviation_bounded(a, 1, W.golden_conjugate(), 1, 10 ** 5)
    bal = A.balance_constant(a, 1, 64, 10 ** 6)
    return holds and bal == 1, {"deviation_ok": holds, "first_failure": first, "balance": bal}


def c5_product_complexity():
    prof = A.subword_complexity(W.builtin("sturmian_product"), range(1, 61), 10 ** 6)
    bad = [N for N in range(1, 61) if prof[N] != (N + 1) ** 2]
    return not bad, {"mismatches": bad[:5], "p(60)": prof[60]}


def c6_power_digit():
    prof = A.subword_complexity(W.builtin("power_digit2"), range(1, 151), 10 ** 6)
    bad = [N for N in range(1, 151) if prof[N] < N + 1]
    return not bad, {"violations": bad[:5], "p(150)": prof[150]}


def power_oracle(a: int, b: int, bound: int, prec: int = 400) -> set[int]:
    """nint(beta^i) <= bound from certified mpmath interval powers of the real root."""
    import mpmath
    iv = mpmath.iv
    iv.prec = prec
    P = PS.make_pisot_unit(a, b)
    lo, hi = P.field.theta_interval(prec)
    beta = iv.mpf([mpmath.mpf(lo.numerator) / lo.denominator, mpmath.mpf(hi.numerator) / hi.denominator])
    out, x = set(), iv.mpf(1)
    while True:
        y = x + iv.mpf(0.5)
        f_lo, f_hi = int(mpmath.floor(y.a)), int(mpmath.floor(y.b))
        if f_lo != f_hi:
            raise ArithmeticError("oracle precision too low")
        if f_lo > bound:
            return out
        out.add(f_lo)
        x = x * beta


def c7_pisot_membership():
    detail, ok = {}, True
    for ab in PS.SHIPPED_UNITS:
        P = PS.make_pisot_unit(*ab)
        mask = PS.membership_mask(P, np.arange(0, 10 ** 5 + 1))
        got = set(np.flatnonzero(mask).tolist())
        want = power_oracle(*ab, 10 ** 5)
        diff = sorted(got ^ want)
        detail[str(ab)] = {"members": len(got), "disagreements": diff[:5]}
        ok &= not diff
    return ok, detail


def c8_trace_identity():
    detail, ok = {}, True
    for ab in PS.SHIPPED_UNITS:
        P = PS.make_pisot_unit(*ab)
        tr = PS.trace_sequence(P, 41)
        pw = PS.rounded_powers(P, 41)
        bad = [i for i in range(3, 41) if tr[i] != pw[i]]
        recon_bad = [n for n in range(-10 ** 4, 10 ** 4 + 1)
                     if PS.solve_ghh(P, n).trace_reconstruction != n]
        detail[str(ab)] = {"trace_mismatch_i": [(i, tr[i], pw[i]) for i in bad],
                           "reconstruction_failures": recon_bad[:5]}
        ok &= not bad and not recon_bad
    return ok, detail


def c9_growth_exponent():
    Ns = [2 ** k for k in range(10, 21)]
    c = A.counting_function(W.builtin("growth_half"), 1, Ns[-1])
    fit = A.growth_exponent(Ns, [int(c[N]) for N in Ns], "loglog")
    cf = A.counting_function(W.builtin("fibonacci_set"), 1, Ns[-1])
    fit2 = A.growth_exponent(Ns, [int(cf[N]) for N in Ns], "semilog")
    target = 1 / math.log((1 + math.sqrt(5)) / 2)
    ok = abs(fit.slope - 0.5) <= 0.1 and abs(fit2.slope - target) <= 0.1 * target
    return ok, {"lambda_half_slope": round(fit.slope, 4), "fib_log_slope": round(fit2.slope, 4),
                "target": round(target, 4)}


def _field_grid_value(rng, K):
    r2, r3 = K.sqrt(2), K.sqrt(3)
    p, q, r = (rng.randint(-4, 4) for _ in range(3))
    den = rng.randint(1, 8)
    return (p + q * r2 + r * r3) / den


def lattice_instances(count: int = 50, seed: int = 0):
    rng = random.Random(seed)
    K = sqrt_field(2, 3)
    out = []
    for _ in range(count):
        d = rng.randint(1, 3)
        N = rng.randint(2, 32 if d < 3 else 16)
        alpha = [_field_grid_value(rng, K) for _ in range(d)]
        eps = Fraction(1, 10 ** rng.randint(1, 5))
        out.append((alpha, eps, N))
    return out


def c10_lattice_sandwich():
    chats, incl = [], True
    for alpha, eps, N in lattice_instances():
        _, _, cert = SC.lattice_approx(alpha, eps, N)
        incl &= cert.inclusion_holds
        chats.append(cert.C_hat)
    finite = all(math.isfinite(c) for c in chats)
    return incl and finite, {"instances": len(chats), "max_C_hat": max(chats)}


def c11_harding():
    rng = random.Random(11)
    viol, sizes = 0, []
    for _ in range(200):
        d = rng.randint(1, 3)
        n = rng.randint(1, 12)
        pts = [tuple(rng.randint(-5, 5) for _ in range(d)) for _ in range(n)]
        fam, bound, ok = SC.halfspace_cuts(pts)
        viol += not ok
        sizes.append((len(fam), bound))
    return viol == 0, {"violations": viol, "max_ratio": round(max(f / b for f, b in sizes), 3)}


def c12_reconstruction():
    N = 16
    h = [list(range(N)), [math.isqrt(3 * n * n) for n in range(N)]]
    bad, cases = 0, [0, 0, 0]
    for a in SC.sample_rationals(2, 100, R=2, max_den=64, seed=12):
        g, rec = SC.reconstruct_prefix(h, a)
        bad += g != SC.g_alpha(h, a)
        cases = [x + y for x, y in zip(cases, rec.cases)]
    return bad == 0, {"failures": bad, "case_counts": cases}


def c13_closure_laws():
    names = ["fib_sturmian", "sqrt2_sturmian", "poly_example", "power_digit2", "fibonacci_set", "one_zero"]
    H, Ns = 20000, range(1, 16)
    detail, ok = {}, True
    profs = {n: A.subword_complexity(W.builtin(n), Ns, H) for n in names}
    for n in names:
        a = W.builtin(n)
        phi = {s: i % 2 for i, s in enumerate(a.alphabet)}
        pc = A.subword_complexity(W.code_word(a, phi), Ns, H)
        ok &= all(pc[N] <= profs[n][N] for N in Ns)
    detail["coding"] = ok
    prod_ok = True
    for x, y in [("fib_sturmian", "sqrt2_sturmian"), ("poly_example", "fibonacci_set")]:
        pp = A.subword_complexity(W.product_word(W.builtin(x), W.builtin(y)), Ns, H)
        prod_ok &= all(pp[N] <= profs[x][N] * profs[y][N] for N in Ns)
    detail["product"] = prod_ok
    st = W.builtin("fib_sturmian")
    sub = W.subsequence_word(st, 2 * gp.N)
    e = W.sturmian_expr(W.golden_conjugate())
    direct = [gp.eval_expr(e, 2 * n) for n in range(301)]
    sub_ok = sub.prefix(301) == direct
    detail["subsequence"] = sub_ok
    s = W.builtin("sqrt2_sturmian")
    comp = W.code_word(s, {0: 1, 1: 0})
    case_ok = W.case_word([s, comp], [st, st]).prefix(2000) == st.prefix(2000)
    try:
        W.case_word([s, s], [st, st]).prefix(10)
        case_ok = False
    except PartitionViolation:
        pass
    detail["case"] = case_ok
    return ok and prod_ok and sub_ok and case_ok, detail


def nested_cases(count: int = 10, seed: int = 14):
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        k = rng.randint(1, 4)
        Ns, eps = [rng.randint(1, 20)], []
        for i in range(k):
            e = Fraction(1, rng.randint(2, 16))
            eps.append(e)
            if i + 1 < k:
                Ns.append(math.ceil(2 * Ns[-1] / e) + rng.randint(0, 50))
        out.append((Ns, eps))
    return out


def c14_nested_real():
    ok = True
    for Ns, eps in nested_cases():
        a = construct_nested_real(Ns, eps)
        iv = a.interval(64 + 4 * len(Ns) * max(n.bit_length() for n in Ns))
        ok &= all(dist_bound_holds(iv, N, e) for N, e in zip(Ns, eps))
    rejected = 0
    for Ns, eps in [([1, 2], [Fraction(1, 2), Fraction(1, 2)]), ([3], [Fraction(3, 2)]),
                    ([0], [Fraction(1, 3)]), ([5, 20], [Fraction(1, 4), Fraction(1, 8)])]:
        try:
            construct_nested_real(Ns, eps)
        except HypothesisViolated:
            rejected += 1
    return ok and rejected == 4, {"valid_cases_ok": ok, "invalid_rejected": f"{rejected}/4"}


CRITERIA = [
    (1, "fibonacci word prefix", c1_fibonacci_prefix, 1),
    (2, "polynomial example prefix", c2_poly_prefix, 1),
    (3, "sturmian complexity", c3_sturmian_complexity, 30),
    (4, "sturmian balance and discrepancy", c4_sturmian_balance, 60),
    (5, "product complexity", c5_product_complexity, 60),
    (6, "power digit lower bound", c6_power_digit, 60),
    (7, "pisot recogniser", c7_pisot_membership, 60),
    (8, "trace identity", c8_trace_identity, 30),
    (9, "growth exponents", c9_growth_exponent, 300),
    (10, "lattice sandwich", c10_lattice_sandwich, 300),
    (11, "harding bound", c11_harding, 120),
    (12, "prefix reconstruction", c12_reconstruction, 120),
    (13, "closure laws", c13_closure_laws, 120),
    (14, "nested real construction", c14_nested_real, 10),
]

SUITES = {
    "sturmian": (1, 3, 4, 5),
    "words": (1, 2, 6, 13),
    "pisot": (7, 8),
    "growth": (9,),
    "lattice": (10, 11, 12),
    "exactreal": (14,),
    "all": tuple(range(1, 15)),
}


def run_criterion(number: int) -> CriterionResult:
    num, name, fn, budget = next(c for c in CRITERIA if c[0] == number)
    t = time.perf_counter()
    passed, detail = fn()
    return CriterionResult(num, name, bool(passed), budget, time.perf_counter() - t, detail)


def run_suite(name: str = "all"):
    if name in SUITES:
        nums = SUITES[name]
    else:
        nums = tuple(int(x) for x in name.split(","))
    return [run_criterion(n) for n in nums]
