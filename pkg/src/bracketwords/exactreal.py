"""Exact real arithmetic.

Three kinds of real values flow through the library:

* plain rationals (``int`` and :class:`fractions.Fraction`),
* :class:`FieldElem`, an element of a real number field ``Q(theta)`` where
  ``theta`` is pinned down by a monic irreducible polynomial and a rational
  isolating interval,
* :class:`Effective`, a real known only through a procedure that returns
  nested rational enclosures of width at most ``2**-k``.

Signs and floors of rationals and field elements are always decided exactly.
For effective reals they are decided by refinement up to a precision cap, and
:class:`~bracketwords.errors.PrecisionExhausted` is raised instead of guessing.
"""
from __future__ import annotations

import math
import re
import threading
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence, Union

import mpmath
import sympy

from .errors import (FieldMismatch, HypothesisViolated, MultipleRoots, NoRoot,
                     PrecisionExhausted, Reducible)

DEFAULT_PRECISION_CAP = 4096

Interval = tuple  # (Fraction, Fraction)
RealValue = Union[int, Fraction, "FieldElem", "Effective"]

_X = sympy.Symbol("x")


def _horner(coeffs, x):
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _imul(a, b):
    ps = (a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1])
    return min(ps), max(ps)


def _iadd(a, b):
    return a[0] + b[0], a[1] + b[1]


def _squarefree_split(k: int) -> tuple[int, int]:
    """Return (s, m) with k = s*s*m and m square-free."""
    if k < 0:
        raise ValueError("sqrt of a negative integer")
    if k == 0:
        return 0, 1
    s, m = 1, 1
    for p, e in sympy.factorint(k).items():
        s *= p ** (e // 2)
        if e % 2:
            m *= p
    return s, m


def _mpf_to_fraction(x) -> Fraction:
    man, exp = mpmath.mpf(x).man_exp
    man = int(man)
    return Fraction(man * 2 ** exp) if exp >= 0 else Fraction(man, 2 ** -exp)


# ---------------------------------------------------------------------------
# number fields


class NumberField:
    """A real number field Q(theta).

    ``minpoly`` lists integer coefficients from the constant term upwards and
    must be monic and irreducible. ``interval`` is a rational interval that
    contains exactly one real root; that root is theta.
    """

    def __init__(self, minpoly: Sequence[int], interval, name: str | None = None):
        coeffs = tuple(int(c) for c in minpoly)
        if len(coeffs) < 2 or coeffs[-1] != 1:
            raise ValueError("minimal polynomial must be monic of degree >= 1")
        lo, hi = Fraction(interval[0]), Fraction(interval[1])
        if lo > hi:
            raise ValueError("isolating interval has lo > hi")
        poly = sympy.Poly(list(reversed(coeffs)), _X, domain="QQ")
        if len(coeffs) > 2 and not poly.is_irreducible:
            raise Reducible(f"{poly.as_expr()} factors over Q")
        if lo == hi:
            nroots = 1 if _horner(coeffs, lo) == 0 else 0
        else:
            nroots = poly.count_roots(sympy.Rational(lo.numerator, lo.denominator),
                                      sympy.Rational(hi.numerator, hi.denominator))
        if nroots == 0:
            raise NoRoot(f"no root of {poly.as_expr()} in [{lo}, {hi}]")
        if nroots > 1:
            raise MultipleRoots(f"{nroots} roots of {poly.as_expr()} in [{lo}, {hi}]")
        self.minpoly = coeffs
        self.degree = len(coeffs) - 1
        self.name = name
        self.isolating_interval = (lo, hi)
        if self.degree == 1:
            r = Fraction(-coeffs[0])
            self._levels = [(r, r)]
        else:
            self._levels = [(lo, hi)]
        self._lo_sign = 1 if _horner(coeffs, lo) > 0 else -1
        self._lock = threading.Lock()
        self._consts: dict = {}
        # text that denotes theta in expression source
        self.gen_label = name if name and re.fullmatch(r"[A-Za-z_]\w*", name) else "theta"

    # -- theta --------------------------------------------------------------
    def theta_interval(self, bits: int) -> Interval:
        """Enclosure of theta of width at most 2**-bits (bisection, exact)."""
        target = Fraction(1, 2 ** bits) if bits >= 0 else Fraction(2 ** -bits)
        levels = self._levels
        for lo, hi in levels:
            if hi - lo <= target:
                return lo, hi
        with self._lock:
            lo, hi = self._levels[-1]
            while hi - lo > target:
                mid = (lo + hi) / 2
                v = _horner(self.minpoly, mid)
                if v == 0:  # only possible for degree 1, handled above
                    lo = hi = mid
                elif (v > 0) == (self._lo_sign > 0):
                    lo = mid
                else:
                    hi = mid
                self._levels.append((lo, hi))
            return lo, hi

    @property
    def theta(self) -> "FieldElem":
        return self.gen()

    def gen(self) -> "FieldElem":
        if self.degree == 1:
            return FieldElem(self, (Fraction(-self.minpoly[0]),))
        return FieldElem(self, (0, 1) + (0,) * (self.degree - 2))

    def __call__(self, coords) -> "FieldElem":
        return FieldElem(self, coords)

    def one(self) -> "FieldElem":
        return FieldElem(self, (1,))

    # -- identity -----------------------------------------------------------
    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, NumberField) or other.minpoly != self.minpoly:
            return False
        a, b = self.theta_interval(40), other.theta_interval(40)
        lo, hi = max(a[0], b[0]), min(a[1], b[1])
        return lo <= hi

    def __hash__(self):
        return hash(self.minpoly)

    def __repr__(self):
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.minpoly[i]
            if c:
                terms.append(f"{c}*x^{i}" if i else str(c))
        lo, hi = self.isolating_interval
        return f"NumberField({' + '.join(terms)} in [{lo}, {hi}])"

    # -- helpers ------------------------------------------------------------
    def theta_mpf(self, dps: int):
        lo, hi = self.theta_interval(int(dps * 3.33) + 16)
        return mpmath.mpf(lo.numerator) / lo.denominator

    def identify(self, approx: Callable[[], object], check: Callable[["FieldElem"], bool],
                 what: str = "value") -> "FieldElem":
        """Find the element of this field equal to a real number.

        ``approx()`` returns an mpmath approximation at the current working
        precision; candidates come from an integer relation search and are
        accepted only if ``check`` confirms them exactly.
        """
        d = self.degree
        for dps in (40, 80, 160, 320):
            with mpmath.workdps(dps):
                t = self.theta_mpf(dps)
                vec = [approx()] + [t ** i for i in range(d)]
                rel = mpmath.pslq(vec, maxcoeff=10 ** (dps // 4), maxsteps=20000 * d)
            if rel and rel[0] != 0:
                cand = FieldElem(self, [Fraction(-r, rel[0]) for r in rel[1:]])
                if check(cand):
                    return cand
        raise FieldMismatch(f"{what} does not lie in {self!r}")

    def sqrt(self, k: int) -> RealValue:
        """The positive square root of the integer k as an element of the field."""
        s, m = _squarefree_split(k)
        if m == 1:
            return Fraction(s)
        key = ("sqrt", m)
        if key not in self._consts:
            root = self.identify(lambda: mpmath.sqrt(m),
                                 lambda y: y * y == m and sign(y) > 0, f"sqrt({m})")
            self._consts[key] = root
        return s * self._consts[key]

    def phi(self) -> "FieldElem":
        return (1 + self.sqrt(5)) / 2


def parse_poly(text: str) -> tuple[int, ...]:
    """Parse an integer polynomial in x (``x^4-10*x^2+1``), low degree first."""
    expr = sympy.sympify(text.replace("^", "**"), locals={"x": _X})
    poly = sympy.Poly(expr, _X)
    coeffs = [sympy.Integer(c) if c.is_integer else None for c in reversed(poly.all_coeffs())]
    if any(c is None for c in coeffs):
        raise ValueError(f"polynomial {text!r} must have integer coefficients")
    return tuple(int(c) for c in coeffs)


_FIELD_RE = re.compile(r"^\s*field\s+([A-Za-z_]\w*)\s*:\s*(.+?)\s+in\s+\[\s*([^,\]]+)\s*,\s*([^\]]+?)\s*\]\s*$")


def parse_field_decl(line: str) -> tuple[str, NumberField]:
    """Parse ``field K : x^4-10*x^2+1 in [3,4]``."""
    m = _FIELD_RE.match(line)
    if not m:
        raise ValueError(f"malformed field declaration: {line!r}")
    name, poly, lo, hi = m.groups()
    return name, NumberField(parse_poly(poly), (Fraction(lo), Fraction(hi)), name=name)


def define_field(minpoly, interval, name=None) -> NumberField:
    return NumberField(minpoly, interval, name)


@lru_cache(maxsize=None)
def _sqrt_field_cached(ms: tuple) -> NumberField:
    if len(ms) == 1:
        m = ms[0]
        r = math.isqrt(m)
        field = NumberField((-m, 0, 1), (r, r + 1), name=f"Q(sqrt({m}))")
        field.gen_label = f"sqrt({m})"
        return field
    s = sum(sympy.sqrt(m) for m in ms)
    mp = sympy.Poly(sympy.minimal_polynomial(s, _X), _X)
    approx = float(sum(math.sqrt(m) for m in ms))
    coeffs = tuple(int(c) for c in reversed(mp.all_coeffs()))
    name = "Q(" + "+".join(f"sqrt({m})" for m in ms) + ")"
    k = math.floor(approx)
    if mp.count_roots(k, k + 1) == 1:
        iv = (k, k + 1)
    else:
        iv = next((Fraction(int(lo.p), int(lo.q)), Fraction(int(hi.p), int(hi.q)))
                  for (lo, hi), _ in mp.intervals(eps=sympy.Rational(1, 10 ** 6))
                  if lo - 1e-9 <= approx <= hi + 1e-9)
    field = NumberField(coeffs, iv, name=name)
    field.gen_label = "(" + " + ".join(f"sqrt({m})" for m in ms) + ")"
    return field


def sqrt_field(*ks: int) -> NumberField | None:
    """Smallest field of the form Q(sum of sqrt(m)) holding sqrt(k) for every k.

    Returns ``None`` when every k is a perfect square.
    """
    ms = sorted({_squarefree_split(k)[1] for k in ks} - {1})
    if not ms:
        return None
    return _sqrt_field_cached(tuple(ms))


def golden_field() -> NumberField:
    return sqrt_field(5)


# ---------------------------------------------------------------------------
# field elements


class FieldElem:
    """Element sum(c_i * theta**i) of a :class:`NumberField`, with rational c_i."""

    __slots__ = ("field", "coords")

    def __init__(self, field: NumberField, coords):
        d = field.degree
        cs = [Fraction(c) for c in coords]
        if len(cs) > d:
            cs = _reduce(cs, field.minpoly)
        cs += [Fraction(0)] * (d - len(cs))
        self.field = field
        self.coords = tuple(cs)

    # -- predicates ---------------------------------------------------------
    def is_zero(self) -> bool:
        return not any(self.coords)

    def is_rational(self) -> bool:
        return not any(self.coords[1:])

    def as_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("not a rational element")
        return self.coords[0]

    # -- coercion -----------------------------------------------------------
    def _lift(self, other):
        if isinstance(other, FieldElem):
            if other.field is self.field or other.field == self.field:
                return other
            if other.is_rational():
                return FieldElem(self.field, (other.coords[0],))
            if self.is_rational():
                return None  # caller swaps roles
            raise FieldMismatch(f"{self.field!r} vs {other.field!r}")
        if isinstance(other, (int, Fraction)):
            return FieldElem(self.field, (other,))
        return NotImplemented

    def _binary(self, other, fn):
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        if o is None:  # self rational, other in a different field
            return fn(FieldElem(other.field, (self.coords[0],)), other)
        return fn(self, o)

    # -- arithmetic ---------------------------------------------------------
    def __add__(self, other):
        return self._binary(other, lambda a, b: FieldElem(a.field, [x + y for x, y in zip(a.coords, b.coords)]))

    __radd__ = __add__

    def __neg__(self):
        return FieldElem(self.field, [-c for c in self.coords])

    def __pos__(self):
        return self

    def __sub__(self, other):
        return self._binary(other, lambda a, b: FieldElem(a.field, [x - y for x, y in zip(a.coords, b.coords)]))

    def __rsub__(self, other):
        return self._binary(other, lambda a, b: FieldElem(a.field, [y - x for x, y in zip(a.coords, b.coords)]))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return FieldElem(self.field, [c * other for c in self.coords])
        return self._binary(other, _field_mul)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return FieldElem(self.field, [c / other for c in self.coords])
        if isinstance(other, FieldElem):
            return self * other.inverse()
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.inverse() * other
        return NotImplemented

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result, base = FieldElem(self.field, (1,)), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def mul_matrix(self) -> list[list[Fraction]]:
        """Matrix (column j = coords of self*theta**j) of multiplication by self."""
        d = self.field.degree
        cols, v = [], list(self.coords)
        for _ in range(d):
            cols.append(v)
            v = _reduce([Fraction(0)] + v, self.field.minpoly)
        return [[cols[j][i] for j in range(d)] for i in range(d)]

    def inverse(self) -> "FieldElem":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero field element")
        e0 = [Fraction(1)] + [Fraction(0)] * (self.field.degree - 1)
        return FieldElem(self.field, _solve(self.mul_matrix(), e0))

    def norm(self) -> Fraction:
        """Field norm N_{K/Q}; the determinant of multiplication by self."""
        return _det(self.mul_matrix())

    def trace(self) -> Fraction:
        m = self.mul_matrix()
        return sum(m[i][i] for i in range(len(m)))

    # -- order --------------------------------------------------------------
    def enclose(self, theta_bits: int) -> Interval:
        """Interval Horner evaluation with theta known to ``theta_bits`` bits."""
        if self.is_rational():
            c = self.coords[0]
            return c, c
        t = self.field.theta_interval(theta_bits)
        acc = (self.coords[-1], self.coords[-1])
        for c in reversed(self.coords[:-1]):
            acc = _imul(acc, t)
            acc = (acc[0] + c, acc[1] + c)
        return acc

    def interval(self, k: int) -> Interval:
        """Rational enclosure of width at most 2**-k."""
        if self.is_rational():
            c = self.coords[0]
            return c, c
        target = Fraction(1, 2 ** k) if k >= 0 else Fraction(2 ** -k)
        bits = max(k, 0) + 8
        while True:
            lo, hi = self.enclose(bits)
            if hi - lo <= target:
                return lo, hi
            bits *= 2

    def sign(self) -> int:
        if self.is_rational():
            c = self.coords[0]
            return (c > 0) - (c < 0)
        bits = 32
        while True:
            lo, hi = self.enclose(bits)
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            bits *= 2
            if bits > 1 << 20:  # a nonzero element always separates long before this
                raise PrecisionExhausted("field element sign undecided")

    def floor(self) -> int:
        if self.is_rational():
            return math.floor(self.coords[0])
        bits = 32
        while True:
            lo, hi = self.enclose(bits)
            fl = math.floor(lo)
            if fl == math.floor(hi):
                return fl
            bits *= 2
            if bits > 1 << 20:
                raise PrecisionExhausted("field element floor undecided")

    def _cmp(self, other) -> int:
        d = self - other
        if d is NotImplemented:
            return NotImplemented
        return sign(d)

    def __eq__(self, other):
        if isinstance(other, FieldElem):
            if other.field is self.field or other.field == self.field:
                return self.coords == other.coords
            return self.is_rational() and other.is_rational() and self.coords[0] == other.coords[0]
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coords[0] == other
        return NotImplemented

    def __hash__(self):
        if self.is_rational():
            return hash(self.coords[0])
        return hash((self.field.minpoly, self.coords))

    def __lt__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c < 0

    def __le__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c <= 0

    def __gt__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c > 0

    def __ge__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c >= 0

    def __float__(self):
        lo, hi = self.interval(60)
        return float((lo + hi) / 2)

    def __repr__(self):
        return f"FieldElem({self.format()})"

    def format(self, gen: str = "theta") -> str:
        parts = []
        for i, c in enumerate(self.coords):
            if c == 0:
                continue
            mono = "" if i == 0 else (gen if i == 1 else f"{gen}^{i}")
            if i == 0:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts) if parts else "0"


def _reduce(cs, minpoly):
    cs = [Fraction(c) for c in cs]
    d = len(minpoly) - 1
    for k in range(len(cs) - 1, d - 1, -1):
        c = cs[k]
        if c:
            for i in range(d):
                cs[k - d + i] -= c * minpoly[i]
        cs[k] = Fraction(0)
    return cs[:d]


def _field_mul(a: FieldElem, b: FieldElem) -> FieldElem:
    prod = [Fraction(0)] * (2 * len(a.coords) - 1)
    for i, x in enumerate(a.coords):
        if x:
            for j, y in enumerate(b.coords):
                if y:
                    prod[i + j] += x * y
    return FieldElem(a.field, _reduce(prod, a.field.minpoly))


def _det(m) -> Fraction:
    m = [list(map(Fraction, row)) for row in m]
    n, det = len(m), Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if m[r][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            m[c], m[p] = m[p], m[c]
            det = -det
        det *= m[c][c]
        for r in range(c + 1, n):
            f = m[r][c] / m[c][c]
            if f:
                for k in range(c, n):
                    m[r][k] -= f * m[c][k]
    return det


def _solve(m, rhs):
    """Solve m x = rhs exactly (m square, nonsingular)."""
    n = len(m)
    a = [list(map(Fraction, row)) + [Fraction(rhs[i])] for i, row in enumerate(m)]
    for c in range(n):
        p = next(r for r in range(c, n) if a[r][c] != 0)
        a[c], a[p] = a[p], a[c]
        piv = a[c][c]
        a[c] = [x / piv for x in a[c]]
        for r in range(n):
            if r != c and a[r][c]:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return [a[i][n] for i in range(n)]


# ---------------------------------------------------------------------------
# effective reals


class Effective:
    """A real given by nested rational enclosures.

    ``refiner(k)`` must return ``(lo, hi)`` containing the value with
    ``hi - lo <= 2**-k``. Results are cached; successive answers are
    intersected so the enclosures handed out are nested.
    """

    __slots__ = ("_refiner", "_cache", "precision_cap", "label", "_lock", "__weakref__")

    def __init__(self, refiner: Callable[[int], Interval], precision_cap: int = DEFAULT_PRECISION_CAP,
                 label: str | None = None):
        self._refiner = refiner
        self._cache: list[tuple[int, Interval]] = []
        self.precision_cap = precision_cap
        self.label = label
        self._lock = threading.Lock()

    def interval(self, k: int) -> Interval:
        if k > self.precision_cap:
            raise PrecisionExhausted(f"refinement depth {k} exceeds cap {self.precision_cap}")
        cache = self._cache
        for kk, iv in cache:
            if kk >= k:
                return iv
        with self._lock:
            lo, hi = self._refiner(k)
            lo, hi = Fraction(lo), Fraction(hi)
            if self._cache:
                plo, phi_ = self._cache[-1][1]
                lo, hi = max(lo, plo), min(hi, phi_)
                if lo > hi:
                    raise AssertionError("refiner produced disjoint enclosures")
            if not self._cache or k > self._cache[-1][0]:
                self._cache.append((k, (lo, hi)))
            return lo, hi

    def _decide(self, test):
        k = 16
        while True:
            kk = min(k, self.precision_cap)
            r = test(self.interval(kk))
            if r is not None:
                return r
            if kk >= self.precision_cap:
                raise PrecisionExhausted(f"undecided at {self.precision_cap} bits")
            k *= 2

    def sign(self) -> int:
        return self._decide(lambda iv: 1 if iv[0] > 0 else (-1 if iv[1] < 0 else None))

    def floor(self) -> int:
        def test(iv):
            fl = math.floor(iv[0])
            return fl if fl == math.floor(iv[1]) else None
        return self._decide(test)

    # arithmetic builds new refiners
    def __add__(self, other):
        o = to_effective(other)
        if o is NotImplemented:
            return NotImplemented
        x, y = self, o
        return Effective(lambda k: _iadd(x.interval(k + 1), y.interval(k + 1)),
                         min(x.precision_cap, y.precision_cap))

    __radd__ = __add__

    def __neg__(self):
        x = self
        return Effective(lambda k: (-x.interval(k)[1], -x.interval(k)[0]), self.precision_cap, None)

    def __sub__(self, other):
        o = to_effective(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = to_effective(other)
        if o is NotImplemented:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = to_effective(other)
        if o is NotImplemented:
            return NotImplemented
        x, y = self, o

        def refine(k):
            bx = max(abs(v) for v in x.interval(0))
            by = max(abs(v) for v in y.interval(0))
            shift = math.ceil(bx + by + 1).bit_length() + 1
            return _imul(x.interval(k + shift), y.interval(k + shift))
        return Effective(refine, min(x.precision_cap, y.precision_cap))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        result = to_effective(Fraction(1))
        for _ in range(k):
            result = result * self
        return result

    def __lt__(self, other):
        return sign(self - other) < 0

    def __le__(self, other):
        return sign(self - other) <= 0

    def __gt__(self, other):
        return sign(self - other) > 0

    def __ge__(self, other):
        return sign(self - other) >= 0

    def __float__(self):
        lo, hi = self.interval(60)
        return float((lo + hi) / 2)

    def __repr__(self):
        return f"Effective({self.label or '~' + format(float(self), '.12g')})"


def to_effective(x) -> Effective:
    if isinstance(x, Effective):
        return x
    if isinstance(x, (int, Fraction)):
        v = Fraction(x)
        return Effective(lambda k: (v, v), label=str(v))
    if isinstance(x, FieldElem):
        return Effective(x.interval, label=x.format())
    return NotImplemented


def _pi_refiner(k: int) -> Interval:
    with mpmath.workprec(k + 16):
        p = _mpf_to_fraction(+mpmath.pi)
    eps = Fraction(1, 2 ** (k + 2))
    return p - eps, p + eps


PI = Effective(_pi_refiner, label="pi")


def pi_real() -> Effective:
    return PI


# ---------------------------------------------------------------------------
# generic operations over RealValue


def sign(x) -> int:
    if isinstance(x, (int, Fraction)):
        return (x > 0) - (x < 0)
    if isinstance(x, (FieldElem, Effective)):
        return x.sign()
    raise TypeError(f"not a real value: {x!r}")


def floor_exact(x) -> int:
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return math.floor(x)
    if isinstance(x, (FieldElem, Effective)):
        return x.floor()
    raise TypeError(f"not a real value: {x!r}")


def ceil_exact(x) -> int:
    return -floor_exact(-x)


def frac_exact(x):
    return x - floor_exact(x)


def nint_exact(x) -> int:
    return floor_exact(x + Fraction(1, 2))


def dist_exact(x):
    d = x - nint_exact(x)
    return -d if sign(d) < 0 else d


def simplify(x):
    """Demote rational field elements to Fraction/int."""
    if isinstance(x, FieldElem) and x.is_rational():
        x = x.coords[0]
    if isinstance(x, Fraction) and x.denominator == 1:
        return int(x.numerator)
    return x


def arith(op: str, x, y=None):
    if op == "add":
        r = x + y
    elif op == "sub":
        r = x - y
    elif op == "mul":
        r = x * y
    elif op == "neg":
        r = -x
    else:
        raise ValueError(f"unknown operation {op!r}")
    return simplify(r)


def interval_of(x, k: int) -> Interval:
    """Rational enclosure of width <= 2**-k of any real value."""
    if isinstance(x, (int, Fraction)):
        v = Fraction(x)
        return v, v
    return x.interval(k)


def to_mpf(x, dps: int = 30):
    lo, hi = interval_of(x, int(dps * 3.33) + 8)
    mid = (lo + hi) / 2
    with mpmath.workdps(dps):
        return mpmath.mpf(mid.numerator) / mid.denominator


def sqrt(k: int, field: NumberField | None = None) -> RealValue:
    """Positive square root of an integer, in ``field`` or in Q(sqrt(k))."""
    if field is None:
        field = sqrt_field(k)
        if field is None:
            return math.isqrt(k)
    return simplify(field.sqrt(k))


def phi(field: NumberField | None = None) -> RealValue:
    """The golden ratio (1 + sqrt 5)/2."""
    return (1 + sqrt(5, field)) / 2


# ---------------------------------------------------------------------------
# nested-interval reals


def _golden_bit(j: int) -> int:
    # j-th letter of the Fibonacci word, used to steer the interval choices
    def fl(n):  # floor(n * phi) for n >= 0
        return (n + math.isqrt(5 * n * n)) // 2
    return fl(j + 2) - fl(j + 1) - 1


class NestedReal(Effective):
    """Real number built by the nested-interval walk for ||N_i alpha|| <= eps_i.

    Stage j keeps an interval ``[(m - eps_j)/N_j, (m + eps_j)/N_j]`` inside the
    previous one. Past the declared stages the walk continues with
    ``N' = ceil(2N/eps)`` and ``eps' = 1/4``, so enclosures shrink forever
    while never degenerating to a point.
    """

    __slots__ = ("Ns", "eps", "stages")

    def __init__(self, Ns, eps, precision_cap=DEFAULT_PRECISION_CAP):
        Ns = [int(n) for n in Ns]
        eps = [Fraction(e) for e in eps]
        if not Ns or len(Ns) != len(eps):
            raise ValueError("Ns and eps must be non-empty and of equal length")
        for e in eps:
            if not 0 < e < 1:
                raise HypothesisViolated(f"eps value {e} outside (0, 1)")
        if Ns[0] < 1:
            raise HypothesisViolated("N_1 must be a positive integer")
        for i in range(len(Ns) - 1):
            if Ns[i + 1] < 2 * Ns[i] / eps[i]:
                raise HypothesisViolated(
                    f"N_{i + 2}={Ns[i + 1]} < 2*N_{i + 1}/eps_{i + 1}={2 * Ns[i] / eps[i]}")
        self.Ns, self.eps = tuple(Ns), tuple(eps)
        N1, e1 = Ns[0], eps[0]
        m = min(_golden_bit(0), N1 - 1)
        self.stages = [(N1, e1, m, ((m - e1) / N1, (m + e1) / N1))]
        super().__init__(self._refine, precision_cap, label=f"nested{self.Ns}")

    def _stage(self, j: int):
        while len(self.stages) <= j:
            i = len(self.stages)
            N, e, _, (lo, hi) = self.stages[-1]
            if i < len(self.Ns):
                N2, e2 = self.Ns[i], self.eps[i]
            else:
                N2, e2 = math.ceil(2 * N / e), Fraction(1, 4)
            m_lo = math.ceil(lo * N2 + e2)
            m_hi = math.floor(hi * N2 - e2)
            if m_lo > m_hi:
                raise AssertionError("nested-interval walk ran out of room")
            m = min(m_lo + _golden_bit(i), m_hi)
            self.stages.append((N2, e2, m, ((m - e2) / N2, (m + e2) / N2)))
        return self.stages[j]

    def _refine(self, k: int) -> Interval:
        target = Fraction(1, 2 ** k) if k >= 0 else Fraction(2 ** -k)
        j = 0
        while True:
            lo, hi = self._stage(j)[3]
            if hi - lo <= target:
                return lo, hi
            j += 1


def construct_nested_real(Ns, eps, precision_cap: int = DEFAULT_PRECISION_CAP) -> NestedReal:
    return NestedReal(Ns, eps, precision_cap)


def dist_bound_holds(iv: Interval, N: int, eps) -> bool:
    """True iff ||N x|| <= eps for every x in the closed interval ``iv``."""
    lo, hi = Fraction(iv[0]) * N, Fraction(iv[1]) * N
    m = math.floor((lo + hi) / 2 + Fraction(1, 2))
    return m - eps <= lo and hi <= m + eps
