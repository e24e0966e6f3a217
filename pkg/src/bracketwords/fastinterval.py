"""Vectorised float enclosures with outward rounding.

Used to evaluate expressions over long index ranges quickly. Each operation
widens its result by one ulp on both sides, so an enclosure always contains
the true real value. Callers fall back to exact arithmetic wherever an
enclosure is too wide to decide a floor or a comparison.
"""
from __future__ import annotations

from fractions import Fraction

import numpy as np

EXACT_FLOAT_INT = 2 ** 53
SAFE_INT64 = 2 ** 62


class Box:
    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi):
        self.lo = lo
        self.hi = hi

    def __len__(self):
        return len(self.lo)


def _down(x):
    return np.nextafter(x, -np.inf)


def _up(x):
    return np.nextafter(x, np.inf)


def _clean(lo, hi):
    bad = np.isnan(lo) | np.isnan(hi)
    if bad.any():
        lo = np.where(bad, -np.inf, lo)
        hi = np.where(bad, np.inf, hi)
    return Box(lo, hi)


def fraction_bounds(q: Fraction) -> tuple[float, float]:
    """Floats lo <= q <= hi, as tight as possible."""
    try:
        f = float(q)
    except OverflowError:
        return (-np.inf, -np.finfo(float).max) if q < 0 else (np.finfo(float).max, np.inf)
    fq = Fraction(f)
    lo = f if fq <= q else float(np.nextafter(f, -np.inf))
    hi = f if fq >= q else float(np.nextafter(f, np.inf))
    return lo, hi


def scalar_box(lo: float, hi: float, n: int) -> Box:
    return Box(np.full(n, lo), np.full(n, hi))


def ints_to_box(a: np.ndarray) -> Box:
    f = a.astype(np.float64)
    if a.dtype != object and (len(a) == 0 or np.abs(f).max() < EXACT_FLOAT_INT):
        return Box(f, f.copy())
    big = np.abs(f) >= EXACT_FLOAT_INT
    return Box(np.where(big, _down(f), f), np.where(big, _up(f), f))


def add(x: Box, y: Box) -> Box:
    return _clean(_down(x.lo + y.lo), _up(x.hi + y.hi))


def neg(x: Box) -> Box:
    return Box(-x.hi, -x.lo)


def mul(x: Box, y: Box) -> Box:
    with np.errstate(invalid="ignore", over="ignore"):
        p1, p2, p3, p4 = x.lo * y.lo, x.lo * y.hi, x.hi * y.lo, x.hi * y.hi
        lo = np.minimum(np.minimum(p1, p2), np.minimum(p3, p4))
        hi = np.maximum(np.maximum(p1, p2), np.maximum(p3, p4))
    return _clean(_down(lo), _up(hi))


def sqr(x: Box) -> Box:
    with np.errstate(over="ignore"):
        a, b = x.lo * x.lo, x.hi * x.hi
    lo = np.where(x.lo >= 0, a, np.where(x.hi <= 0, b, 0.0))
    hi = np.maximum(a, b)
    return _clean(np.where(lo > 0, _down(lo), lo), _up(hi))


def power(x: Box, k: int) -> Box:
    if k == 0:
        return Box(np.ones_like(x.lo), np.ones_like(x.lo))
    if k == 1:
        return x
    half = power(x, k // 2)
    sq = sqr(half)
    return mul(sq, x) if k % 2 else sq


def absolute(x: Box) -> Box:
    lo = np.where(x.lo >= 0, x.lo, np.where(x.hi <= 0, -x.hi, 0.0))
    hi = np.maximum(np.abs(x.lo), np.abs(x.hi))
    return Box(lo, hi)


def int_add(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.dtype == object or b.dtype == object:
        return a.astype(object) + b.astype(object)
    if len(a) and (np.abs(a).max() >= SAFE_INT64 // 2 or np.abs(b).max() >= SAFE_INT64 // 2):
        return a.astype(object) + b.astype(object)
    return a + b


def int_mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.dtype == object or b.dtype == object:
        return a.astype(object) * b.astype(object)
    if len(a):
        est = np.abs(a.astype(np.float64)).max() * np.abs(b.astype(np.float64)).max()
        if est >= SAFE_INT64:
            return a.astype(object) * b.astype(object)
    return a * b
