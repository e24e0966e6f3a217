"""Recognising the powers of a cubic Pisot unit.

For a cubic Pisot unit beta with complex conjugates alpha, conj(alpha) and
minimal polynomial x^3 - a x^2 - b x - 1, the set E = {nint(beta^i) : i >= 0}
is decided exactly: from n, nint(beta n) and nint(beta^2 n) one solves a
linear system for g(n) in K = Q(beta). For large n, n lies in E exactly when
g(n) is an algebraic integer of norm 1 lying in [n - 1, n + 1).

Everything happens inside K with rational coordinates; the complex
conjugates are never materialised.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
import sympy

from . import gpexpr as gp
from .errors import NotPisot, Reducible
from .exactreal import FieldElem, NumberField, _det, nint_exact

EXCEPTION_BOUND = 1000
_X = sympy.Symbol("x")


def discriminant(a: int, b: int) -> int:
    return -4 * a ** 3 + a * a * b * b - 18 * a * b + 4 * b ** 3 - 27


def _traces(a: int, b: int, count: int) -> list[int]:
    t = [3, a, a * a + 2 * b]
    while len(t) < count:
        t.append(a * t[-1] + b * t[-2] + t[-3])
    return t[:count]


class CubicPisotUnit:
    """Cubic Pisot unit beta, the real root > 1 of x^3 - a x^2 - b x - 1.

    ``basis`` optionally gives an integral basis of the ring of integers as
    rows of coordinates in powers of beta; the default is Z[beta].
    """

    def __init__(self, a: int, b: int, basis=None):
        self.a, self.b = int(a), int(b)
        self.minpoly = (-1, -self.b, -self.a, 1)
        poly = sympy.Poly([1, -self.a, -self.b, -1], _X)
        if not poly.is_irreducible:
            raise Reducible(f"{poly.as_expr()} factors over Q")
        self.disc = discriminant(self.a, self.b)
        if self.disc >= 0:
            raise NotPisot(f"discriminant {self.disc} >= 0: all three roots are real")
        # one real root; product of roots is 1, so it exceeds 1 iff p(1) < 0
        if self.a + self.b <= 0:
            raise NotPisot(f"the real root of {poly.as_expr()} is not > 1")
        (lo, hi), = [iv for iv, _ in poly.intervals()]
        lo, hi = Fraction(int(lo.p), int(lo.q)), Fraction(int(hi.p), int(hi.q))
        k = math.floor(lo)
        if poly.count_roots(k, k + 1) == 1:
            lo, hi = Fraction(k), Fraction(k + 1)
        self.field = NumberField(self.minpoly, (lo, hi), name="beta")
        self.beta = self.field.gen()
        t = _traces(self.a, self.b, 5)
        self.hankel = [[t[i + j] for j in range(3)] for i in range(3)]
        self.hankel_det = int(_det([[Fraction(x) for x in r] for r in self.hankel]))
        self.hankel_adj = _adjugate(self.hankel)
        if basis is None:
            basis = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
        self.basis = [[Fraction(x) for x in r] for r in basis]
        if _det(self.basis) == 0:
            raise ValueError("integral basis is singular")
        beta = self.beta
        self._denominator = 2 * beta ** 2 - self.a * beta + 1 / beta
        if self._denominator.is_zero():
            raise ValueError("degenerate closed form")
        self.unit_index, self.root = _unit_index(self)
        self._table = None
        # g(n) = n c0 + nint(beta n) c1 + nint(beta^2 n) c2
        inv = 1 / self._denominator
        self._c = (inv / beta, -(self.a - beta) * inv, inv)
        self._encl = {1: beta.interval(96), 2: (beta ** 2).interval(96)}

    @property
    def exceptions(self) -> frozenset:
        """nint(beta^i) for every i with nint(beta^i) <= EXCEPTION_BOUND."""
        if self._table is None:
            out, x = set(), self.field.one()
            while True:
                v = nint_exact(x)
                if v > EXCEPTION_BOUND:
                    break
                out.add(v)
                x = x * self.beta
            self._table = frozenset(out)
        return self._table

    def __repr__(self):
        return f"CubicPisotUnit(a={self.a}, b={self.b}, beta~{float(self.beta):.7f})"


def _adjugate(m):
    (a, b, c), (d, e, f), (g, h, i) = m
    return [[e * i - f * h, c * h - b * i, b * f - c * e],
            [f * g - d * i, a * i - c * g, c * d - a * f],
            [d * h - e * g, b * g - a * h, a * e - b * d]]


def _unit_index(P: CubicPisotUnit):
    """(k, (a', b')) with beta = r^k, r the largest-k cubic Pisot unit root found.

    Candidates r are roots of x^3 - a' x^2 - b' x - 1 with r^k = beta; r lies
    in K because its minimal polynomial divides p(x^k). Any root above 1 of
    such a unit is at least the smallest Pisot number 1.3247.
    """
    beta = float(P.beta)
    p = sympy.Poly([1, -P.a, -P.b, -1], _X)
    best = (1, (P.a, P.b))
    kmax = int(math.log(beta) / math.log(1.3247)) if beta > 1.3247 else 1
    for k in range(2, kmax + 1):
        r = beta ** (1 / k)
        bound = int(r) + 3
        pk = sympy.Poly(p.as_expr().subs(_X, _X ** k), _X)
        for a2 in range(-bound, bound + 1):
            for b2 in range(-2 * bound, 2 * bound + 1):
                if a2 + b2 <= 0:
                    continue
                q = sympy.Poly([1, -a2, -b2, -1], _X)
                if not q.is_irreducible or not pk.rem(q).is_zero:
                    continue
                roots = [float(z) for z in q.real_roots()]
                if any(abs(z ** k - beta) < 1e-9 for z in roots):
                    best = (k, (a2, b2))
    return best


@lru_cache(maxsize=None)
def make_pisot_unit(a: int, b: int) -> CubicPisotUnit:
    return CubicPisotUnit(a, b)


SHIPPED_UNITS = ((1, 1), (2, -1), (1, 0))


@dataclass(frozen=True)
class GhhDecomposition:
    n: int
    nint_beta_n: int
    nint_beta2_n: int
    g: FieldElem
    u: Fraction
    v: Fraction
    w: Fraction

    @property
    def trace_reconstruction(self) -> Fraction:
        """Tr(g) = g + h + h*, which equals n."""
        return self.g.trace()

    @property
    def norm(self) -> Fraction:
        """N(g) = g h h*."""
        return self.g.norm()

    @property
    def h_sum(self):
        """h + h* = n - g."""
        return self.n - self.g

    @property
    def h_product(self):
        """h h* = N(g) / g."""
        return self.norm / self.g if not self.g.is_zero() else Fraction(0)


def solve_ghh(P: CubicPisotUnit, n: int) -> GhhDecomposition:
    """g(n) = (nint(beta^2 n) - nint(beta n)(a - beta) + n/beta) / (2 beta^2 - a beta + 1/beta).

    This is Cramer's rule for the Vandermonde system in (beta, alpha,
    conj(alpha)); the numerator is the negative of the form
    nint(beta n)(a - beta) - n/beta - nint(beta^2 n) sometimes quoted, which
    would give Tr(g(n)) = -n.
    """
    n = int(n)
    s1 = _nint_power_times(P, 1, n)
    s2 = _nint_power_times(P, 2, n)
    c0, c1, c2 = P._c
    u, v, w = (n * x + s1 * y + s2 * z for x, y, z in zip(c0.coords, c1.coords, c2.coords))
    g = FieldElem(P.field, (u, v, w))
    return GhhDecomposition(n, s1, s2, g, u, v, w)


def _nint_power_times(P: CubicPisotUnit, k: int, n: int) -> int:
    """nint(beta^k n), from a cached enclosure when it decides, else exactly."""
    lo, hi = P._encl[k]
    a, b = (lo * n, hi * n) if n >= 0 else (hi * n, lo * n)
    half = Fraction(1, 2)
    fa, fb = math.floor(a + half), math.floor(b + half)
    if fa == fb:
        return fa
    return nint_exact(P.beta ** k * n)


def _coeffs_from_sums(P: CubicPisotUnit, n, s1, s2) -> tuple:
    """(u, v, w) from the Hankel system sum_m c_m Tr(beta^(m+j)) = s_j."""
    adj, d = P.hankel_adj, P.hankel_det
    return tuple(Fraction(r[0] * n + r[1] * s1 + r[2] * s2, d) for r in adj)


def in_ring_of_integers(P: CubicPisotUnit, coords) -> bool:
    """(u, v, w) lies in the coordinate lattice of the ring of integers."""
    if P.basis == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]:
        return all(Fraction(c).denominator == 1 for c in coords)
    # solve x B = coords
    bt = [[P.basis[j][i] for j in range(3)] for i in range(3)]
    from .exactreal import _solve
    x = _solve(bt, [Fraction(c) for c in coords])
    return all(c.denominator == 1 for c in x)


def _is_power(P: CubicPisotUnit, g: FieldElem) -> bool:
    x = float(g)
    if x <= 0:
        return False
    i = round(math.log(x) / math.log(float(P.beta)))
    return i >= 0 and P.beta ** i == g


def _algebraic_test(P: CubicPisotUnit, n: int) -> bool:
    d = solve_ghh(P, n)
    if not in_ring_of_integers(P, (d.u, d.v, d.w)):
        return False
    if d.norm != 1:
        return False
    if not (n - 1 <= d.g < n + 1):
        return False
    # with a non-fundamental beta the three conditions also admit other units
    return P.unit_index == 1 or _is_power(P, d.g)


def membership_test(P: CubicPisotUnit, n: int) -> bool:
    """Is n = nint(beta^i) for some i >= 0?"""
    n = int(n)
    if n <= EXCEPTION_BOUND:
        return n in P.exceptions
    return _algebraic_test(P, n)


def _nint_exprs(P: CubicPisotUnit):
    b1 = gp.const(P.beta, "beta")
    b2 = gp.const(P.beta ** 2, "beta^2")
    return gp.nint(b1 * gp.N), gp.nint(b2 * gp.N)


def membership_mask(P: CubicPisotUnit, ns) -> np.ndarray:
    """Vectorised :func:`membership_test` over non-negative indices."""
    ns = np.asarray(ns, dtype=np.int64)
    out = np.zeros(len(ns), dtype=bool)
    small = ns <= EXCEPTION_BOUND
    if small.any():
        ex = np.array(sorted(P.exceptions), dtype=np.int64)
        out[small] = np.isin(ns[small], ex)
    big = ns[~small]
    if len(big) == 0:
        return out
    e1, e2 = _nint_exprs(P)
    s1 = gp.eval_floor_range(e1, big).astype(object)
    s2 = gp.eval_floor_range(e2, big).astype(object)
    nb = big.astype(object)
    adj, d = P.hankel_adj, P.hankel_det
    cand = np.ones(len(big), dtype=bool)
    if P.basis == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]:
        for r in adj:
            num = r[0] * nb + r[1] * s1 + r[2] * s2
            cand &= np.array([x % d == 0 for x in num], dtype=bool)
    idx_big = np.flatnonzero(~small)
    for j in np.flatnonzero(cand):
        out[idx_big[j]] = _algebraic_test(P, int(big[j]))
    return out


def trace_sequence(P: CubicPisotUnit, count: int) -> list[int]:
    """Tr(beta^i) for i < count: 3, a, a^2 + 2b, then t_{i+3} = a t_{i+2} + b t_{i+1} + t_i."""
    return _traces(P.a, P.b, count)


def rounded_powers(P: CubicPisotUnit, count: int) -> list[int]:
    """nint(beta^i) for i < count, computed exactly in K."""
    out, x = [], P.field.one()
    for _ in range(count):
        out.append(nint_exact(x))
        x = x * P.beta
    return out


def power_word(P: CubicPisotUnit, name=None):
    """Indicator word of {nint(beta^i)}."""
    from .words import PredicateWord
    return PredicateWord(lambda ns: membership_mask(P, ns), name=name or f"pisot({P.a},{P.b})")
