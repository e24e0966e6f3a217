"""Bracket words and the operations that build new ones from old.

A :class:`Word` is an infinite sequence over a finite alphabet. Symbols are
generated lazily in blocks and stored as integer codes (indices into
``alphabet``); ``prefix(N)`` translates them back to symbols.
"""
from __future__ import annotations

import itertools
import math
import re
import threading
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from . import gpexpr as gp
from .errors import (HypothesisViolated, NegativeIndex, NonUniformMorphism,
                     PartitionViolation, TooLarge, UncodedValue)
from .exactreal import FieldElem, sign, simplify, sqrt_field

_BLOCK = 1 << 20


class Word:
    """Lazily generated infinite word with a memoised prefix."""

    kind = "word"

    def __init__(self, alphabet: Sequence, name: str | None = None):
        self.alphabet = tuple(alphabet)
        self.name = name
        self._index = {s: i for i, s in enumerate(self.alphabet)}
        self._cache = np.zeros(0, dtype=np.int64)
        self._lock = threading.Lock()

    # subclasses implement this
    def _generate(self, start: int, stop: int) -> np.ndarray:
        raise NotImplementedError

    def codes(self, N: int) -> np.ndarray:
        """Integer codes of the first N symbols (read-only view)."""
        if N > len(self._cache):
            with self._lock:
                cur = len(self._cache)
                if N > cur:
                    target = max(N, min(2 * cur, cur + _BLOCK))
                    block = np.asarray(self._generate(cur, target), dtype=np.int64)
                    self._cache = np.concatenate([self._cache, block])
                    self._cache.setflags(write=False)
        return self._cache[:N]

    def prefix(self, N: int) -> list:
        return [self.alphabet[c] for c in self.codes(N)]

    def string(self, N: int, sep: str = "") -> str:
        return sep.join(str(s) for s in self.prefix(N))

    def __getitem__(self, n: int):
        return self.alphabet[int(self.codes(n + 1)[n])]

    def code_of(self, symbol) -> int:
        return self._index[symbol]

    def __repr__(self):
        return f"<{type(self).__name__} {self.name or ''} over {len(self.alphabet)} symbols>"


def _ns(start, stop):
    return np.arange(start, stop, dtype=np.int64)


# ---------------------------------------------------------------------------
# codings and interval sets


class Coding:
    """Finite table from exact values to symbols."""

    def __init__(self, table: Mapping):
        self.table = {simplify(k): v for k, v in table.items()}
        seen = []
        for v in self.table.values():
            if v not in seen:
                seen.append(v)
        self.symbols = tuple(seen)

    @classmethod
    def identity(cls, values: Iterable):
        return cls({v: v for v in values})

    def __repr__(self):
        return f"Coding({self.table!r})"


class ExprWord(Word):
    """a_n = c(g(n))."""

    kind = "expr"

    def __init__(self, expr, coding: Coding, name=None):
        super().__init__(coding.symbols, name)
        self.expr = expr
        self.coding = coding
        sym_code = {s: i for i, s in enumerate(self.alphabet)}
        self._value_code = {k: sym_code[v] for k, v in coding.table.items()}
        int_keys = [k for k in coding.table if isinstance(k, int)]
        self._int_only = len(int_keys) == len(coding.table)
        keys = sorted(int_keys)
        self._keys = np.array(keys, dtype=np.int64) if keys else np.zeros(0, dtype=np.int64)
        self._key_codes = np.array([self._value_code[k] for k in keys], dtype=np.int64)

    def _generate(self, start, stop):
        ns = _ns(start, stop)
        v = gp.eval_range(self.expr, ns)
        if isinstance(v, np.ndarray) and v.dtype != object and len(self._keys):
            pos = np.searchsorted(self._keys, v)
            pos_c = np.minimum(pos, len(self._keys) - 1)
            ok = self._keys[pos_c] == v
            if not ok.all():
                i = int(np.flatnonzero(~ok)[0])
                raise UncodedValue(int(ns[i]), int(v[i]))
            return self._key_codes[pos_c]
        out = np.empty(len(ns), dtype=np.int64)
        for i, n in enumerate(ns):
            if isinstance(v, np.ndarray):
                x = int(v[i])
            elif isinstance(v, gp.RatVec):
                x = simplify(Fraction(int(v.num[i]), v.den))
            else:
                x = gp.eval_expr(self.expr, int(n))
            code = self._value_code.get(x)
            if code is None:
                raise UncodedValue(int(n), x)
            out[i] = code
        return out


_INF = float("inf")


class IntervalSet:
    """Finite union of real intervals with exact endpoints.

    Each interval is ``(lo, hi, lo_closed, hi_closed)``; ``lo`` may be
    ``-inf`` and ``hi`` may be ``inf``. Intervals are kept sorted and merged.
    """

    def __init__(self, intervals: Iterable):
        items = []
        for lo, hi, lc, hc in intervals:
            lo = lo if lo == -_INF else simplify(lo)
            hi = hi if hi == _INF else simplify(hi)
            if lo == -_INF:
                lc = False
            if hi == _INF:
                hc = False
            c = _cmp(lo, hi)
            if c > 0 or (c == 0 and not (lc and hc)):
                continue
            items.append((lo, hi, bool(lc), bool(hc)))
        items.sort(key=_SortKey)
        merged = []
        for iv in items:
            if merged:
                plo, phi_, plc, phc = merged[-1]
                c = _cmp(iv[0], phi_)
                if c < 0 or (c == 0 and (phc or iv[2])):
                    ch = _cmp(iv[1], phi_)
                    if ch > 0:
                        merged[-1] = (plo, iv[1], plc, iv[3])
                    elif ch == 0:
                        merged[-1] = (plo, phi_, plc, phc or iv[3])
                    continue
            merged.append(iv)
        self.intervals = tuple(merged)

    @classmethod
    def parse(cls, text: str, field=None, constants=None) -> "IntervalSet":
        """Parse e.g. ``[0,1/4) | (3/4,1)``; ``∪`` and ``U`` also separate pieces."""
        pieces = re.split(r"\s*(?:\||∪|\bU\b)\s*", text.strip())
        out = []
        for p in pieces:
            m = re.fullmatch(r"([\[(])\s*(.+?)\s*,\s*(.+?)\s*([\])])", p)
            if not m:
                raise ValueError(f"malformed interval {p!r}")
            lb, a, b, rb = m.groups()
            out.append((_endpoint(a, field, constants), _endpoint(b, field, constants), lb == "[", rb == "]"))
        return cls(out)

    def contains(self, x) -> bool:
        for lo, hi, lc, hc in self.intervals:
            a = 1 if lo == -_INF else sign(x - lo)
            b = -1 if hi == _INF else sign(x - hi)
            if (a > 0 or (a == 0 and lc)) and (b < 0 or (b == 0 and hc)):
                return True
        return False

    def mask(self, expr, ns) -> np.ndarray:
        """Exact membership of expr(n) for each n in ns."""
        ns = np.asarray(ns, dtype=np.int64)
        v = gp.eval_range(expr, ns)
        out = np.zeros(len(ns), dtype=bool)
        for lo, hi, lc, hc in self.intervals:
            ok = np.ones(len(ns), dtype=bool)
            if lo != -_INF:
                s = gp.compare_values(expr, ns, v, lo)
                ok &= (s > 0) | ((s == 0) & lc)
            if hi != _INF:
                s = gp.compare_values(expr, ns, v, hi)
                ok &= (s < 0) | ((s == 0) & hc)
            out |= ok
        return out

    def __repr__(self):
        parts = []
        for lo, hi, lc, hc in self.intervals:
            parts.append(f"{'[' if lc else '('}{_fmt_end(lo)},{_fmt_end(hi)}{']' if hc else ')'}")
        return " | ".join(parts) or "{}"


def _fmt_end(x):
    if x == _INF:
        return "inf"
    if x == -_INF:
        return "-inf"
    return gp.describe(x)


def _endpoint(text, field, constants):
    t = text.strip()
    if t in ("inf", "+inf", "∞", "+∞"):
        return _INF
    if t in ("-inf", "-∞"):
        return -_INF
    e = gp.parse_expr(t, field, constants)
    if not isinstance(e, gp.Const):
        raise ValueError(f"interval endpoint {text!r} is not constant")
    return e.value


def _cmp(a, b) -> int:
    if a == b and (isinstance(a, float) or isinstance(b, float)):
        return 0
    if a == -_INF or b == _INF:
        return -1
    if a == _INF or b == -_INF:
        return 1
    return sign(a - b)


class _SortKey:
    def __init__(self, iv):
        self.iv = iv

    def __lt__(self, other):
        c = _cmp(self.iv[0], other.iv[0])
        if c:
            return c < 0
        return self.iv[2] and not other.iv[2]


class IndicatorWord(Word):
    """a_n = [e(n) in I]; positions below ``start`` emit 0."""

    kind = "indicator"

    def __init__(self, expr, iset: IntervalSet, start: int = 0, name=None):
        super().__init__((0, 1), name)
        self.expr, self.iset, self.start = expr, iset, start

    def _generate(self, start, stop):
        out = np.zeros(stop - start, dtype=np.int64)
        lo = max(start, self.start)
        if lo < stop:
            out[lo - start:] = self.iset.mask(self.expr, _ns(lo, stop))
        return out


class ZeroWord(Word):
    """a_n = [e(n) = 0], decided exactly."""

    kind = "zero"

    def __init__(self, expr, name=None):
        super().__init__((0, 1), name)
        self.expr = expr

    def _generate(self, start, stop):
        return gp.zero_range(self.expr, _ns(start, stop)).astype(np.int64)


def word_from_expr(e, c: Coding | Mapping, name=None) -> ExprWord:
    return ExprWord(e, c if isinstance(c, Coding) else Coding(c), name)


def interval_indicator(e, I: IntervalSet, start: int = 0, name=None) -> IndicatorWord:
    return IndicatorWord(e, I, start, name)


def zero_indicator(e, name=None) -> ZeroWord:
    return ZeroWord(e, name)


# ---------------------------------------------------------------------------
# enumerated words


class SetWord(Word):
    """Indicator word of a set of non-negative integers.

    ``members(N)`` must return the sorted members below N.
    """

    kind = "set"

    def __init__(self, members: Callable[[int], Sequence[int]], name=None):
        super().__init__((0, 1), name)
        self._members = members

    def _generate(self, start, stop):
        out = np.zeros(stop - start, dtype=np.int64)
        m = np.asarray(self._members(stop), dtype=np.int64)
        m = m[(m >= start) & (m < stop)]
        out[m - start] = 1
        return out


class PredicateWord(Word):
    """Indicator word of ``{n : pred(n)}`` where ``pred`` maps an index array to booleans."""

    kind = "predicate"

    def __init__(self, pred: Callable[[np.ndarray], np.ndarray], name=None):
        super().__init__((0, 1), name)
        self._pred = pred

    def _generate(self, start, stop):
        return np.asarray(self._pred(_ns(start, stop)), dtype=np.int64)


class PeriodicWord(Word):
    kind = "periodic"

    def __init__(self, pattern: Sequence, preperiod: Sequence = (), name=None):
        alph = []
        for s in list(preperiod) + list(pattern):
            if s not in alph:
                alph.append(s)
        super().__init__(alph, name)
        self.pre = np.array([self.code_of(s) for s in preperiod], dtype=np.int64)
        self.per = np.array([self.code_of(s) for s in pattern], dtype=np.int64)

    def _generate(self, start, stop):
        ns = _ns(start, stop)
        out = self.per[np.maximum(ns - len(self.pre), 0) % len(self.per)]
        head = ns < len(self.pre)
        out[head] = self.pre[ns[head]]
        return out


def constant_word(symbol, name=None) -> PeriodicWord:
    return PeriodicWord([symbol], name=name)


# ---------------------------------------------------------------------------
# combinators


class ProductWord(Word):
    kind = "product"

    def __init__(self, a: Word, b: Word, name=None):
        super().__init__([(x, y) for x in a.alphabet for y in b.alphabet], name)
        self.a, self.b = a, b

    def _generate(self, start, stop):
        ca, cb = self.a.codes(stop)[start:], self.b.codes(stop)[start:]
        return ca * len(self.b.alphabet) + cb


class CodeWord(Word):
    kind = "code"

    def __init__(self, a: Word, phi, name=None):
        f = phi if callable(phi) else (lambda s, _m=dict(phi): _m[s])
        images = [f(s) for s in a.alphabet]
        alph = []
        for s in images:
            if s not in alph:
                alph.append(s)
        super().__init__(alph, name)
        self.a = a
        self.lut = np.array([alph.index(s) for s in images], dtype=np.int64)

    def _generate(self, start, stop):
        return self.lut[self.a.codes(stop)[start:]]


class CaseWord(Word):
    """a_n = branch_i(n) where selector i is the unique one showing 1 at n."""

    kind = "case"

    def __init__(self, selectors: Sequence[Word], branches: Sequence[Word], name=None):
        if len(selectors) != len(branches) or not selectors:
            raise ValueError("need one branch per selector")
        alph = []
        for b in branches:
            for s in b.alphabet:
                if s not in alph:
                    alph.append(s)
        super().__init__(alph, name)
        self.selectors, self.branches = list(selectors), list(branches)
        self.luts = [np.array([alph.index(s) for s in b.alphabet], dtype=np.int64) for b in branches]
        self.ones = []
        for s in selectors:
            if set(s.alphabet) - {0, 1}:
                raise ValueError("selectors must be words over {0, 1}")
            self.ones.append(s.code_of(1) if 1 in s.alphabet else -1)

    def _generate(self, start, stop):
        hits = np.zeros(stop - start, dtype=np.int64)
        out = np.zeros(stop - start, dtype=np.int64)
        for sel, one, br, lut in zip(self.selectors, self.ones, self.branches, self.luts):
            on = sel.codes(stop)[start:] == one
            hits += on
            if on.any():
                out[on] = lut[br.codes(stop)[start:][on]]
        bad = np.flatnonzero(hits != 1)
        if len(bad):
            i = int(bad[0])
            raise PartitionViolation(start + i, int(hits[i]))
        return out


class SubsequenceWord(Word):
    """a'_n = a_{h(n)} for an integer-valued expression h."""

    kind = "subsequence"

    def __init__(self, a: Word, h, name=None):
        super().__init__(a.alphabet, name)
        self.a, self.h = a, h

    def _generate(self, start, stop):
        ns = _ns(start, stop)
        idx = gp.eval_floor_range(self.h, ns)
        if len(idx):
            neg = np.flatnonzero(idx < 0)
            if len(neg):
                raise NegativeIndex(int(ns[neg[0]]), int(idx[neg[0]]))
            top = int(idx.max())
            if top > 1 << 31:
                raise TooLarge(f"index {top} is beyond the materialisable range")
            return self.a.codes(top + 1)[idx.astype(np.int64)]
        return np.zeros(0, dtype=np.int64)


class RearrangeWord(Word):
    """Arithmetic-progression, dilution and block-permutation rearrangements.

    * ``progression``: a'_n = a_{A n + B}
    * ``dilute``: a'_n = a_{n/A} if A divides n, else the pad symbol
    * ``block_permute``: a'_n = a_{A floor(n/A) + pi(n mod A)}
    """

    kind = "rearrange"

    def __init__(self, a: Word, mode: str, A: int, B: int = 0, pad="◇", perm=None, name=None):
        if A < 1:
            raise ValueError("A must be a positive integer")
        alph = list(a.alphabet)
        if mode == "dilute" and pad not in alph:
            alph.append(pad)
        super().__init__(alph, name)
        if mode == "progression" and B < 0:
            raise NegativeIndex(0, B)
        if mode == "block_permute":
            perm = tuple(perm)
            if sorted(perm) != list(range(A)):
                raise ValueError(f"{perm} is not a permutation of range({A})")
        elif mode not in ("progression", "dilute"):
            raise ValueError(f"unknown rearrangement {mode!r}")
        self.a, self.mode, self.A, self.B, self.pad, self.perm = a, mode, A, B, pad, perm

    def _generate(self, start, stop):
        ns = _ns(start, stop)
        A = self.A
        if self.mode == "progression":
            idx = A * ns + self.B
            return self.a.codes(int(idx[-1]) + 1 if len(idx) else 0)[idx]
        if self.mode == "dilute":
            out = np.full(len(ns), self.code_of(self.pad), dtype=np.int64)
            hit = ns % A == 0
            src = ns[hit] // A
            if len(src):
                out[hit] = self.a.codes(int(src[-1]) + 1)[src]
            return out
        perm = np.array(self.perm, dtype=np.int64)
        idx = A * (ns // A) + perm[ns % A]
        return self.a.codes(int(idx.max()) + 1 if len(idx) else 0)[idx]


class MorphismWord(Word):
    """Image of a word under a k-uniform morphism."""

    kind = "morphism"

    def __init__(self, a: Word, sigma: Mapping, name=None):
        images = {s: tuple(sigma[s]) for s in a.alphabet}
        lengths = {len(v) for v in images.values()}
        if len(lengths) != 1 or 0 in lengths:
            raise NonUniformMorphism(f"image lengths {sorted(lengths)} are not a single positive k")
        alph = []
        for v in images.values():
            for s in v:
                if s not in alph:
                    alph.append(s)
        super().__init__(alph, name)
        self.a, self.k = a, lengths.pop()
        self.table = np.array([[alph.index(s) for s in images[x]] for x in a.alphabet], dtype=np.int64)

    def _generate(self, start, stop):
        ns = _ns(start, stop)
        src = ns // self.k
        ca = self.a.codes(int(src[-1]) + 1 if len(src) else 0)[src]
        return self.table[ca, ns % self.k]


class BlockWord(Word):
    """a'_n = a_{kn} a_{kn+1} ... a_{kn+k-1}, symbols are k-tuples."""

    kind = "block"

    def __init__(self, a: Word, k: int, name=None):
        size = len(a.alphabet) ** k
        if size > 1 << 20:
            raise TooLarge(f"block alphabet of size {size}")
        super().__init__(list(itertools.product(a.alphabet, repeat=k)), name)
        self.a, self.k = a, k

    def _generate(self, start, stop):
        k, q = self.k, len(self.a.alphabet)
        ca = self.a.codes(k * stop)[k * start:].reshape(-1, k)
        weights = q ** np.arange(k - 1, -1, -1, dtype=np.int64)
        return ca @ weights


def product_word(a, b, name=None):
    return ProductWord(a, b, name)


def code_word(a, phi, name=None):
    return CodeWord(a, phi, name)


def case_word(selectors, branches, name=None):
    return CaseWord(selectors, branches, name)


def subsequence_word(a, h, name=None):
    return SubsequenceWord(a, h, name)


def rearrange_word(a, mode, A, B=0, pad="◇", perm=None, name=None):
    return RearrangeWord(a, mode, A, B, pad, perm, name)


def morphism_word(a, sigma, name=None):
    return MorphismWord(a, sigma, name)


def block_word(a, k, name=None):
    return BlockWord(a, k, name)


# ---------------------------------------------------------------------------
# constructor catalogue


def _field_for(*values):
    for v in values:
        if isinstance(v, FieldElem) and not v.is_rational():
            return v.field
    return None


def _c(v):
    return gp.const(v, gp.describe(v))


def sturmian_expr(alpha, beta=0, variant: str = "floor"):
    """floor(n a + b) - floor((n-1) a + b), or the same with ceil."""
    f = gp.floor if variant == "floor" else gp.ceil
    if variant not in ("floor", "ceil"):
        raise ValueError("variant must be 'floor' or 'ceil'")
    a, b = _c(alpha), _c(beta)
    return f(gp.N * a + b) - f((gp.N - 1) * a + b)


def sturmian(alpha, beta=0, variant: str = "floor", name=None) -> ExprWord:
    return ExprWord(sturmian_expr(alpha, beta, variant), Coding.identity([0, 1]), name)


def poly_interval(p, I: IntervalSet, name=None) -> IndicatorWord:
    """a_n = [{p(n)} in I]."""
    return IndicatorWord(gp.frac(p), I, 0, name)


def littlewood(alpha, beta, eps, name=None) -> IndicatorWord:
    """a_n = [n ||alpha n|| ||beta n|| < eps] for n >= 1, a_0 = 0."""
    e = gp.N * gp.dist(_c(alpha) * gp.N) * gp.dist(_c(beta) * gp.N) - _c(eps)
    return IndicatorWord(e, IntervalSet([(-_INF, 0, False, False)]), start=1, name=name)


def recurrence_values(coeffs: Sequence[int], initial: Sequence[int], bound: int) -> list[int]:
    """Sorted distinct non-negative terms below ``bound`` of x_{k+d} = sum a_j x_{k+d-j}."""
    d = len(coeffs)
    if len(initial) != d:
        raise ValueError("need as many initial terms as coefficients")
    state = list(initial)
    vals = {x for x in state if 0 <= x < bound}
    seen = set()
    for _ in range(10 ** 6):
        if all(x >= bound for x in state[-d:]) and all(c >= 0 for c in coeffs):
            break
        key = tuple(state[-d:])
        if key in seen:
            break
        seen.add(key)
        nxt = sum(c * x for c, x in zip(coeffs, reversed(state[-d:])))
        state.append(nxt)
        if 0 <= nxt < bound:
            vals.add(nxt)
    return sorted(vals)


def recset(coeffs: Sequence[int], initial: Sequence[int], name=None) -> SetWord:
    """Indicator of the set of values of an integer linear recurrence."""
    coeffs, initial = tuple(coeffs), tuple(initial)
    return SetWord(lambda N: recurrence_values(coeffs, initial, N), name)


def sparse(terms, count: int | None = None, min_ratio: float = 1.05, name=None) -> SetWord:
    """Indicator of a very sparse set n_0 < n_1 < ... .

    ``terms`` is a list or a callable ``i -> n_i`` (then ``count`` terms are
    taken). The growth condition liminf log n_{i+1} / log n_i > 1 is checked
    on the second half of the provided terms against ``min_ratio``.
    """
    seq = [int(terms(i)) for i in range(count)] if callable(terms) else [int(t) for t in terms]
    if len(seq) < 2:
        raise HypothesisViolated("need at least two terms to check the growth condition")
    if any(b <= a for a, b in zip(seq, seq[1:])):
        raise HypothesisViolated("terms must be strictly increasing")
    big = [x for x in seq if x >= 2]
    ratios = [math.log(b) / math.log(a) for a, b in zip(big, big[1:])]
    tail = ratios[len(ratios) // 2:]
    if not tail or min(tail) < min_ratio:
        raise HypothesisViolated(
            f"log n_(i+1)/log n_i drops to {min(tail) if tail else float('nan'):.4f} < {min_ratio}")
    arr = np.array(seq, dtype=object)
    return SetWord(lambda N: [int(x) for x in arr if x < N], name)


def fibonacci_numbers(bound: int) -> list[int]:
    out, a, b = [], 0, 1
    while a < bound:
        out.append(a)
        a, b = b, a + b
    return sorted(set(out))


def tracked_sparse(f, C: int, name=None) -> SetWord:
    """Greedy set E inside F + [C] (F the Fibonacci numbers) with |E cap [n]| tracking f.

    Walking through F + [C] in increasing order, n joins E exactly when
    f(n) > |E cap [n]|. ``f`` is a callable or a table indexed by n and must be
    non-decreasing where tabulated.
    """
    if not callable(f):
        table = list(f)
        if any(b < a for a, b in zip(table, table[1:])):
            raise HypothesisViolated("target function must be non-decreasing")
        fn = lambda n: table[n] if n < len(table) else table[-1]  # noqa: E731
    else:
        fn = f

    def members(N):
        cand = sorted({x + c for x in fibonacci_numbers(N) for c in range(C) if x + c < N})
        out = []
        for n in cand:
            if fn(n) > len(out):
                out.append(n)
        return out
    return SetWord(members, name)


def heisenberg(alpha, beta, c=0, name=None) -> ExprWord:
    """a_n = floor(10 {n beta {n alpha} - n^2 alpha beta / 2 + c n})."""
    a, b, cc = _c(alpha), _c(beta), _c(c)
    inner = gp.N * b * gp.frac(gp.N * a) - gp.N ** 2 * _c(Fraction(1, 2) * alpha * beta) + cc * gp.N
    return ExprWord(gp.floor(10 * gp.frac(inner)), Coding.identity(range(10)), name)


def power_digit(alpha, d: int, name=None) -> ExprWord:
    """a_n = floor(10 {alpha n^d})."""
    return ExprWord(gp.floor(10 * gp.frac(_c(alpha) * gp.N ** d)), Coding.identity(range(10)), name)


class GAProbe:
    """The pair sequence g_A(n) = (floor({sqrt2 n}^A n), floor({sqrt3 n}^A n))."""

    def __init__(self, A: int):
        if A < 1:
            raise ValueError("A must be positive")
        self.A = A
        self.exprs = tuple(gp.parse_expr(f"floor(frac(sqrt({k})*n)^{A}*n)") for k in (2, 3))

    def values(self, N: int) -> tuple[np.ndarray, np.ndarray]:
        ns = _ns(0, N)
        return tuple(gp.eval_floor_range(e, ns) for e in self.exprs)


def gA_probe(A: int) -> GAProbe:
    return GAProbe(A)


def growth_lambda_expr(lam):
    lam = Fraction(lam)
    p, q = lam.numerator, lam.denominator
    phi = (1 + sqrt_field(5).sqrt(5)) / 2
    d = gp.dist(gp.N * gp.const(phi, "phi")) ** q
    if q > p:
        return d * gp.N ** (q - p) - 1
    return d - gp.N ** (p - q)


def growth_lambda(lam, name=None) -> IndicatorWord:
    """Indicator of E = {n >= 1 : ||n phi|| <= n^(lam - 1)}.

    With lam = p/q the test is ||n phi||^q * n^(q - p) <= 1, all in integers
    and Q(sqrt 5).
    """
    return IndicatorWord(growth_lambda_expr(lam), IntervalSet([(-_INF, 0, False, True)]), start=1, name=name)


def golden_conjugate():
    """(sqrt 5 - 1)/2."""
    return (sqrt_field(5).sqrt(5) - 1) / 2


def make_builtin(kind: str, **params):
    """Build a catalogue word by constructor name."""
    ctors = {
        "sturmian": sturmian, "poly_interval": poly_interval, "littlewood": littlewood,
        "recset": recset, "sparse": sparse, "tracked_sparse": tracked_sparse,
        "heisenberg": heisenberg, "power_digit": power_digit, "gA_probe": gA_probe,
        "growth_lambda": growth_lambda,
    }
    if kind not in ctors:
        raise KeyError(f"unknown constructor {kind!r}")
    return ctors[kind](**params)


def _catalogue():
    g = golden_conjugate()
    r2 = sqrt_field(2).sqrt(2)
    phi = 1 + g
    poly_I = IntervalSet([(0, Fraction(1, 4), True, False), (Fraction(3, 4), 1, False, False)])
    K = sqrt_field(2, 3)
    return {
        "fib_sturmian": lambda: sturmian(g, 0, "floor", name="fib_sturmian"),
        "fib_sturmian_ceil": lambda: sturmian(g, 0, "ceil", name="fib_sturmian_ceil"),
        "sqrt2_sturmian": lambda: sturmian(r2 - 1, 0, "floor", name="sqrt2_sturmian"),
        "sturmian_product": lambda: product_word(sturmian(g), sturmian(r2 - 1), name="sturmian_product"),
        "poly_example": lambda: poly_interval(_c(phi) * gp.N ** 2, poly_I, name="poly_example"),
        "one_zero": lambda: ExprWord(gp.floor(1 - gp.frac(_c(r2) * gp.N)), Coding.identity([0, 1]), "one_zero"),
        "fibonacci_set": lambda: recset((1, 1), (0, 1), name="fibonacci_set"),
        "tribonacci_set": _tribonacci_set,
        "power_digit2": lambda: power_digit(r2, 2, name="power_digit2"),
        "heisenberg": lambda: heisenberg(K.sqrt(2), K.sqrt(3), 0, name="heisenberg"),
        "growth_half": lambda: growth_lambda(Fraction(1, 2), name="growth_half"),
        "littlewood": lambda: littlewood(K.sqrt(2), K.sqrt(3), Fraction(1, 10), name="littlewood"),
        "doubly_exponential": lambda: sparse([2 ** 2 ** i for i in range(7)], name="doubly_exponential"),
    }


def _tribonacci_set():
    from .pisot import make_pisot_unit, power_word
    return power_word(make_pisot_unit(1, 1), name="tribonacci_set")


def catalogue_names() -> list[str]:
    return sorted(_catalogue())


def builtin(name: str) -> Word:
    """A named example word (see :func:`catalogue_names`)."""
    cat = _catalogue()
    if name not in cat:
        raise KeyError(f"unknown word {name!r}; known: {', '.join(sorted(cat))}")
    return cat[name]()
