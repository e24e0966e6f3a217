"""Generalised-polynomial expressions.

An expression is an immutable tree built from constants, the variable ``n``,
parameter slots ``a1, a2, ...``, sums, products, integer powers and the five
bracket functions ``floor``, ``frac``, ``ceil``, ``nint`` and ``dist``.

Text syntax::

    expr   := term (("+" | "-") term)*
    term   := factor (("*" | "/") factor)*
    factor := "-" factor | atom ("^" uint)?
    atom   := rational | "n" | "a" uint | fn "(" expr ")" | "(" expr ")" | constname
    fn     := "floor" | "frac" | "ceil" | "nint" | "dist"
    constname := "sqrt(" uint ")" | "phi" | "pi" | "theta" | identifier

Unary minus and division by a nonzero algebraic constant are accepted as a
convenience. Constant subexpressions are folded
at construction time, so ``2*sqrt(2)*n`` becomes a product of one constant and
``n``; the folded constant remembers its source text for printing.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Callable, Mapping

import numpy as np

from . import fastinterval as fi
from .errors import FieldMismatch, GPSyntaxError, MissingParam, UnknownConstant
from .exactreal import (PI, Effective, FieldElem, NumberField, floor_exact,
                        interval_of, sign, simplify, sqrt_field)

HALF = Fraction(1, 2)


# ---------------------------------------------------------------------------
# nodes


class Expr:
    __slots__ = ()

    def __add__(self, other):
        head = self.terms if isinstance(self, Add) else (self,)
        return add(*head, wrap(other))

    def __radd__(self, other):
        return add(wrap(other), self)

    def __sub__(self, other):
        return self + neg(wrap(other))

    def __rsub__(self, other):
        return add(wrap(other), neg(self))

    def __mul__(self, other):
        head = self.factors if isinstance(self, Mul) else (self,)
        return mul(*head, wrap(other))

    def __rmul__(self, other):
        return mul(wrap(other), self)

    def __neg__(self):
        return neg(self)

    def __pow__(self, k):
        return power(self, k)

    def __str__(self):
        return format_expr(self)

    def __repr__(self):
        return f"{type(self).__name__}<{format_expr(self)}>"


@dataclass(frozen=True, repr=False)
class Const(Expr):
    value: object
    label: str | None = dc_field(default=None, compare=False)


@dataclass(frozen=True, repr=False)
class Var(Expr):
    pass


@dataclass(frozen=True, repr=False)
class Param(Expr):
    index: int


@dataclass(frozen=True, repr=False)
class Add(Expr):
    terms: tuple


@dataclass(frozen=True, repr=False)
class Mul(Expr):
    factors: tuple


@dataclass(frozen=True, repr=False)
class Pow(Expr):
    base: Expr
    exp: int


@dataclass(frozen=True, repr=False)
class Floor(Expr):
    arg: Expr


@dataclass(frozen=True, repr=False)
class Frac(Expr):
    arg: Expr


@dataclass(frozen=True, repr=False)
class Ceil(Expr):
    arg: Expr


@dataclass(frozen=True, repr=False)
class Nint(Expr):
    arg: Expr


@dataclass(frozen=True, repr=False)
class Dist(Expr):
    arg: Expr


BRACKETS = {"floor": Floor, "frac": Frac, "ceil": Ceil, "nint": Nint, "dist": Dist}
_BRACKET_NAME = {v: k for k, v in BRACKETS.items()}
N = Var()


@dataclass(frozen=True)
class ParamGPExpr:
    """An expression with parameter slots, i.e. a map from parameter vectors to GP maps."""
    expr: Expr
    index_set: frozenset

    def __str__(self):
        return format_expr(self.expr)


# ---------------------------------------------------------------------------
# smart constructors (fold constant subtrees)


def _foldable(e) -> bool:
    return isinstance(e, Const) and not isinstance(e.value, Effective)


def wrap(x) -> Expr:
    if isinstance(x, Expr):
        return x
    if isinstance(x, (int, Fraction, FieldElem, Effective)):
        return Const(simplify(x))
    raise TypeError(f"cannot use {x!r} in an expression")


def const(value, label: str | None = None) -> Const:
    return Const(simplify(value), label)


def _fold_group(nodes, combine, raw_cls):
    idx = [i for i, x in enumerate(nodes) if _foldable(x)]
    if len(idx) < 2:
        return list(nodes)
    group = [nodes[i] for i in idx]
    value = group[0].value
    for g in group[1:]:
        value = combine(value, g.value)
    folded = Const(simplify(value), format_expr(raw_cls(tuple(group))))
    out = list(nodes)
    out[idx[0]] = folded
    for i in reversed(idx[1:]):
        del out[i]
    return out


def add(*xs) -> Expr:
    xs = [wrap(x) for x in xs]
    if len(xs) == 1:
        return xs[0]
    xs = _fold_group(xs, lambda a, b: a + b, Add)
    return xs[0] if len(xs) == 1 else Add(tuple(xs))


def mul(*xs) -> Expr:
    xs = [wrap(x) for x in xs]
    if len(xs) == 1:
        return xs[0]
    xs = _fold_group(xs, lambda a, b: a * b, Mul)
    return xs[0] if len(xs) == 1 else Mul(tuple(xs))


def neg(x) -> Expr:
    x = wrap(x)
    if _foldable(x):
        lab = _const_text(x)
        return Const(simplify(-x.value), "-" + (lab if _is_atomic(lab) else f"({lab})"))
    return Mul((Const(-1), x))


def power(x, k: int) -> Expr:
    x = wrap(x)
    if not isinstance(k, int) or k < 0:
        raise ValueError("only non-negative integer powers are allowed")
    if _foldable(x):
        return Const(simplify(x.value ** k), format_expr(Pow(x, k)))
    return Pow(x, k)


def _bracket(cls, x) -> Expr:
    x = wrap(x)
    if _foldable(x):
        return Const(simplify(_apply_bracket(cls, x.value)), format_expr(cls(x)))
    return cls(x)


def floor(x):
    return _bracket(Floor, x)


def frac(x):
    return _bracket(Frac, x)


def ceil(x):
    return _bracket(Ceil, x)


def nint(x):
    return _bracket(Nint, x)


def dist(x):
    return _bracket(Dist, x)


def _apply_bracket(cls, v):
    if cls is Floor:
        return floor_exact(v)
    if cls is Frac:
        return v - floor_exact(v)
    if cls is Ceil:
        return -floor_exact(-v)
    if cls is Nint:
        return floor_exact(v + HALF)
    d = v - floor_exact(v + HALF)
    return -d if sign(d) < 0 else d


# ---------------------------------------------------------------------------
# formatting


_NUM_RE = re.compile(r"\d+(?:\.\d+)?(?:/\d+)?")
_IDENT_RE = re.compile(r"[A-Za-z_]\w*")


def _wrapped(s: str) -> bool:
    """True if s is '(...)' with the outer parentheses matching each other."""
    if not (s.startswith("(") and s.endswith(")")):
        return False
    depth = 0
    for i, ch in enumerate(s):
        depth += ch == "("
        depth -= ch == ")"
        if depth == 0 and i < len(s) - 1:
            return False
    return True


def _is_atomic(s: str) -> bool:
    if _NUM_RE.fullmatch(s) or _IDENT_RE.fullmatch(s) or _wrapped(s):
        return True
    m = _IDENT_RE.match(s)
    return bool(m) and _wrapped(s[m.end():])


def _neg_atomic(s: str) -> bool:
    return s.startswith("-") and _is_atomic(s[1:])


def describe(v) -> str:
    """Source text for a real value."""
    v = simplify(v)
    if isinstance(v, (int, Fraction)):
        return str(v)
    if isinstance(v, Effective):
        return v.label or "pi"
    g = v.field.gen_label
    parts = []
    for i, c in enumerate(v.coords):
        if c == 0:
            continue
        mono = "" if i == 0 else (g if i == 1 else f"{g}^{i}")
        mag = abs(c)
        if i == 0:
            body = str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{mag}*{mono}"
        if not parts:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append((" - " if c < 0 else " + ") + body)
    return "".join(parts)


def _const_text(c: Const) -> str:
    return c.label if c.label is not None else describe(c.value)


def _negative_form(e):
    """Return x when e prints as '-x', else None."""
    if isinstance(e, Mul) and len(e.factors) == 2 and isinstance(e.factors[0], Const) \
            and not isinstance(e.factors[0].value, Effective) and e.factors[0].value == -1:
        return e.factors[1]
    return None


def format_expr(e) -> str:
    if isinstance(e, ParamGPExpr):
        e = e.expr
    if isinstance(e, Const):
        return _const_text(e)
    return _fmt_expr(e)


def _fmt_expr(e) -> str:
    if not isinstance(e, Add):
        return _fmt_term(e)
    out = [_fmt_term(e.terms[0])]
    for t in e.terms[1:]:
        x = _negative_form(t)
        if x is not None:
            out.append(" - " + _fmt_term(x))
        elif isinstance(t, Const) and _neg_atomic(_const_text(t)):
            out.append(" - " + _const_text(t)[1:])
        else:
            out.append(" + " + _fmt_term(t))
    return "".join(out)


def _fmt_term(e) -> str:
    if isinstance(e, Const):
        s = _const_text(e)
        return s if _is_atomic(s) or _neg_atomic(s) else f"({s})"
    if isinstance(e, Mul):
        x = _negative_form(e)
        if x is not None:
            return "-" + _fmt_factor(x)
        return "*".join(_fmt_factor(f) for f in e.factors)
    if isinstance(e, Add):
        return f"({_fmt_expr(e)})"
    return _fmt_factor(e)


def _fmt_factor(e) -> str:
    if isinstance(e, Pow):
        return f"{_fmt_atom(e.base)}^{e.exp}"
    return _fmt_atom(e)


def _fmt_atom(e) -> str:
    if isinstance(e, Var):
        return "n"
    if isinstance(e, Param):
        return f"a{e.index}"
    if isinstance(e, Const):
        s = _const_text(e)
        return s if _is_atomic(s) else f"({s})"
    if type(e) in _BRACKET_NAME:
        return f"{_BRACKET_NAME[type(e)]}({_fmt_expr(e.arg)})"
    if isinstance(e, Add):
        return f"({_fmt_expr(e)})"
    return f"({_fmt_term(e)})"


# ---------------------------------------------------------------------------
# parsing


_TOKEN_RE = re.compile(r"\s*(?:(\d+(?:\.\d+)?(?:/\d+)?)|([A-Za-z_]\w*)|(.))")


def _wrapped_label(c: Const) -> str:
    t = _const_text(c)
    return t if _is_atomic(t) else f"({t})"


def _tokenize(src: str):
    toks, pos = [], 0
    while pos < len(src):
        m = _TOKEN_RE.match(src, pos)
        if m.group(0).strip() == "":
            break
        start = m.start(m.lastindex)
        if m.group(1):
            toks.append(("num", m.group(1), start))
        elif m.group(2):
            toks.append(("id", m.group(2), start))
        else:
            ch = m.group(3)
            if ch not in "+-*/^()":
                raise GPSyntaxError(start, f"unexpected character {ch!r}")
            toks.append(("op", ch, start))
        pos = m.end()
    toks.append(("eof", "", len(src)))
    return toks


def _resolve_field(src: str, field, constants):
    if field is not None:
        return field
    fields = {v.field for v in constants.values() if isinstance(v, FieldElem) and not v.is_rational()}
    if len(fields) > 1:
        raise FieldMismatch("named constants come from different fields")
    if fields:
        return fields.pop()
    ks = [int(k) for k in re.findall(r"sqrt\s*\(\s*(\d+)\s*\)", src)]
    if re.search(r"\bphi\b", src) and "phi" not in constants:
        ks.append(5)
    return sqrt_field(*ks) if ks else None


class _Parser:
    def __init__(self, src, field, constants):
        self.src = src
        self.toks = _tokenize(src)
        self.i = 0
        self.field = field
        self.constants = constants
        self.params = set()

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, text):
        t = self.take()
        if t[1] != text or t[0] == "eof":
            raise GPSyntaxError(t[2], f"expected {text!r}, found {t[1] or 'end of input'!r}")
        return t

    def expr(self):
        terms = [self.term()]
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            t = self.term()
            terms.append(neg(t) if op == "-" else t)
        return add(*terms)

    def term(self):
        fs = [self.factor()]
        while self.peek()[0] == "op" and self.peek()[1] in "*/":
            op, pos = self.take()[1:]
            f = self.factor()
            if op == "/":
                if not isinstance(f, Const) or isinstance(f.value, Effective) or sign(f.value) == 0:
                    raise GPSyntaxError(pos, "can only divide by a nonzero algebraic constant")
                f = Const(simplify(Fraction(1) / f.value), f"1/{_wrapped_label(f)}")
            fs.append(f)
        return mul(*fs)

    def factor(self):
        if self.peek()[:2] == ("op", "-"):
            self.take()
            return neg(self.factor())
        a = self.atom()
        if self.peek()[:2] == ("op", "^"):
            self.take()
            t = self.take()
            if t[0] != "num" or not t[1].isdigit():
                raise GPSyntaxError(t[2], "exponent must be a non-negative integer")
            return power(a, int(t[1]))
        return a

    def atom(self):
        kind, text, pos = self.take()
        if kind == "num":
            return Const(simplify(Fraction(text)), text)
        if kind == "op" and text == "(":
            e = self.expr()
            self.expect(")")
            return e
        if kind != "id":
            raise GPSyntaxError(pos, f"unexpected {text or 'end of input'!r}")
        if text == "n":
            return N
        if re.fullmatch(r"a\d+", text):
            idx = int(text[1:])
            self.params.add(idx)
            return Param(idx)
        if text in BRACKETS:
            self.expect("(")
            e = self.expr()
            self.expect(")")
            return _bracket(BRACKETS[text], e)
        if text == "sqrt" and self.peek()[:2] == ("op", "("):
            self.take()
            t = self.take()
            if t[0] != "num" or not t[1].isdigit():
                raise GPSyntaxError(t[2], "sqrt takes a non-negative integer")
            self.expect(")")
            k = int(t[1])
            return Const(self._sqrt(k), f"sqrt({k})")
        if text in self.constants:
            return Const(simplify(self.constants[text]), text)
        if text == "phi":
            return Const(simplify((1 + self._sqrt(5)) / 2), "phi")
        if text == "pi":
            return Const(PI, "pi")
        if self.field is not None and text in ("theta", self.field.gen_label):
            return Const(self.field.gen(), text)
        raise UnknownConstant(f"unknown constant {text!r} at position {pos}")

    def _sqrt(self, k):
        r = math.isqrt(k)
        if r * r == k:
            return r
        if self.field is None:
            raise FieldMismatch(f"sqrt({k}) needs a number field")
        return simplify(self.field.sqrt(k))


def parse_expr(src: str, field: NumberField | None = None,
               constants: Mapping[str, object] | None = None):
    """Parse expression text.

    Without an explicit ``field`` the smallest field generated by the square
    roots mentioned in ``src`` is used, so ``sqrt(2)`` and ``sqrt(3)`` may be
    mixed freely; with one, every constant must lie in it.
    """
    constants = dict(constants or {})
    field = _resolve_field(src, field, constants)
    p = _Parser(src, field, constants)
    e = p.expr()
    t = p.peek()
    if t[0] != "eof":
        raise GPSyntaxError(t[2], f"unexpected {t[1]!r}")
    for c in constants_of(e):
        v = c.value
        if isinstance(v, FieldElem) and not v.is_rational() and field is not None and v.field != field:
            raise FieldMismatch(f"constant {_const_text(c)} is not in {field!r}")
    if p.params:
        return ParamGPExpr(e, frozenset(p.params))
    return e


def parse(src, field=None, constants=None):
    return parse_expr(src, field, constants)


# ---------------------------------------------------------------------------
# traversal helpers


def children(e) -> tuple:
    if isinstance(e, Add):
        return e.terms
    if isinstance(e, Mul):
        return e.factors
    if isinstance(e, Pow):
        return (e.base,)
    if type(e) in _BRACKET_NAME:
        return (e.arg,)
    return ()


def rebuild(e, kids) -> Expr:
    if isinstance(e, Add):
        return add(*kids)
    if isinstance(e, Mul):
        return mul(*kids)
    if isinstance(e, Pow):
        return power(kids[0], e.exp)
    if type(e) in _BRACKET_NAME:
        return _bracket(type(e), kids[0])
    return e


def constants_of(e):
    if isinstance(e, Const):
        yield e
    for c in children(e):
        yield from constants_of(c)


def field_of(e):
    for c in constants_of(e):
        if isinstance(c.value, FieldElem) and not c.value.is_rational():
            return c.value.field
    return None


def params_of(e) -> set:
    if isinstance(e, ParamGPExpr):
        return set(e.index_set)
    if isinstance(e, Param):
        return {e.index}
    out = set()
    for c in children(e):
        out |= params_of(c)
    return out


# ---------------------------------------------------------------------------
# exact evaluation


def eval_expr(e, n: int):
    """Exact value of the expression at the integer n."""
    if isinstance(e, ParamGPExpr):
        raise MissingParam(f"unbound parameters {sorted(e.index_set)}")
    if isinstance(e, Const):
        return e.value
    if isinstance(e, Var):
        return n
    if isinstance(e, Add):
        acc = 0
        for t in e.terms:
            acc = acc + eval_expr(t, n)
        return simplify(acc)
    if isinstance(e, Mul):
        acc = 1
        for f in e.factors:
            acc = acc * eval_expr(f, n)
        return simplify(acc)
    if isinstance(e, Pow):
        return simplify(eval_expr(e.base, n) ** e.exp)
    if type(e) in _BRACKET_NAME:
        return simplify(_apply_bracket(type(e), eval_expr(e.arg, n)))
    if isinstance(e, Param):
        raise MissingParam(f"parameter a{e.index} is unbound")
    raise TypeError(f"not an expression: {e!r}")


# ---------------------------------------------------------------------------
# vectorised evaluation


class RatVec:
    """Exact rationals num/den sharing one positive denominator."""
    __slots__ = ("num", "den")

    def __init__(self, num, den):
        self.num, self.den = num, den


def _normal(num, den):
    if den == 1:
        return num
    if len(num):
        if num.dtype == object:
            g = 0
            for x in num:
                g = math.gcd(g, int(x))
        else:
            g = int(np.gcd.reduce(np.abs(num)))
        g = math.gcd(g, den)
        if g > 1:
            num, den = num // g, den // g
    return num if den == 1 else RatVec(num, den)


def _value_bounds(v):
    lo, hi = interval_of(v, 64)
    return fi.fraction_bounds(lo)[0], fi.fraction_bounds(hi)[1]


def _to_box(x, size):
    if isinstance(x, fi.Box):
        return x
    if isinstance(x, RatVec):
        num = x.num.astype(np.float64)
        q = float(x.den)
        f = num / q
        return fi.Box(np.nextafter(f, -np.inf), np.nextafter(f, np.inf))
    return fi.ints_to_box(x)


def _rat_scale(x, den):
    """x (ints or RatVec) as a numerator over den (den a multiple of x's)."""
    if isinstance(x, RatVec):
        return fi.int_mul(x.num, np.full(len(x.num), den // x.den, dtype=np.int64))
    return fi.int_mul(x, np.full(len(x), den, dtype=np.int64))


def _vadd(x, y, size):
    if isinstance(x, fi.Box) or isinstance(y, fi.Box):
        return fi.add(_to_box(x, size), _to_box(y, size))
    if isinstance(x, RatVec) or isinstance(y, RatVec):
        dx = x.den if isinstance(x, RatVec) else 1
        dy = y.den if isinstance(y, RatVec) else 1
        den = dx * dy // math.gcd(dx, dy)
        return _normal(fi.int_add(_rat_scale(x, den), _rat_scale(y, den)), den)
    return fi.int_add(x, y)


def _vmul(x, y, size):
    if isinstance(x, fi.Box) or isinstance(y, fi.Box):
        return fi.mul(_to_box(x, size), _to_box(y, size))
    if isinstance(x, RatVec) or isinstance(y, RatVec):
        nx, dx = (x.num, x.den) if isinstance(x, RatVec) else (x, 1)
        ny, dy = (y.num, y.den) if isinstance(y, RatVec) else (y, 1)
        return _normal(fi.int_mul(nx, ny), dx * dy)
    return fi.int_mul(x, y)


def _vneg(x):
    if isinstance(x, fi.Box):
        return fi.neg(x)
    if isinstance(x, RatVec):
        return RatVec(-x.num, x.den)
    return -x


def _is_exact(x):
    return not isinstance(x, fi.Box)


class _Batch:
    def __init__(self, ns):
        self.ns = ns
        self.size = len(ns)
        self.memo = {}

    def floor_box(self, box, exact: Callable[[int], object]):
        fl, fh = np.floor(box.lo), np.floor(box.hi)
        ok = (fl == fh) & (np.abs(fl) < fi.EXACT_FLOAT_INT)
        out = np.where(ok, fl, 0).astype(np.int64)
        bad = np.flatnonzero(~ok)
        if len(bad):
            vals = [floor_exact(exact(int(self.ns[i]))) for i in bad]
            if any(abs(v) >= fi.SAFE_INT64 for v in vals):
                out = out.astype(object)
            out[bad] = vals
        return out

    def floor(self, v, exact):
        if isinstance(v, RatVec):
            return v.num // v.den
        if isinstance(v, fi.Box):
            return self.floor_box(v, exact)
        return v

    def ev(self, e):
        key = id(e)
        hit = self.memo.get(key)
        if hit is not None and hit[0] is e:
            return hit[1]
        r = self._ev(e)
        self.memo[key] = (e, r)
        return r

    def _ev(self, e):
        size = self.size
        if isinstance(e, Var):
            return self.ns.copy()
        if isinstance(e, Const):
            v = e.value
            if isinstance(v, int):
                if abs(v) >= fi.SAFE_INT64:
                    return np.full(size, v, dtype=object)
                return np.full(size, v, dtype=np.int64)
            if isinstance(v, Fraction):
                if abs(v.numerator) >= fi.SAFE_INT64 or v.denominator >= fi.SAFE_INT64:
                    lo, hi = _value_bounds(v)
                    return fi.scalar_box(lo, hi, size)
                return RatVec(np.full(size, v.numerator, dtype=np.int64), v.denominator)
            lo, hi = _value_bounds(v)
            return fi.scalar_box(lo, hi, size)
        if isinstance(e, Add):
            acc = self.ev(e.terms[0])
            for t in e.terms[1:]:
                acc = _vadd(acc, self.ev(t), size)
            return acc
        if isinstance(e, Mul):
            acc = self.ev(e.factors[0])
            for f in e.factors[1:]:
                acc = _vmul(acc, self.ev(f), size)
            return acc
        if isinstance(e, Pow):
            b = self.ev(e.base)
            if isinstance(b, fi.Box):
                return fi.power(b, e.exp)
            acc = np.ones(size, dtype=np.int64)
            for _ in range(e.exp):
                acc = _vmul(acc, b, size)
            return acc
        if isinstance(e, Param):
            raise MissingParam(f"parameter a{e.index} is unbound")
        arg = e.arg
        v = self.ev(arg)
        if isinstance(e, Floor):
            return self.floor(v, lambda n: eval_expr(arg, n))
        if isinstance(e, Ceil):
            return _vneg(self.floor(_vneg(v), lambda n: -eval_expr(arg, n)))
        shifted = _vadd(v, RatVec(np.ones(size, dtype=np.int64), 2), size)
        if isinstance(e, Nint):
            return self.floor(shifted, lambda n: eval_expr(arg, n) + HALF)
        if isinstance(e, Frac):
            return _vadd(v, _vneg(self.floor(v, lambda n: eval_expr(arg, n))), size)
        # Dist
        r = _vadd(v, _vneg(self.floor(shifted, lambda n: eval_expr(arg, n) + HALF)), size)
        if isinstance(r, fi.Box):
            return fi.absolute(r)
        if isinstance(r, RatVec):
            return RatVec(np.abs(r.num), r.den)
        return np.abs(r)


def eval_range(e, ns):
    """Evaluate over an integer array.

    Returns an integer array when every value is an integer, a :class:`RatVec`
    for exact rationals, or a :class:`fastinterval.Box` of certified float
    enclosures otherwise. Floors inside the expression are always exact.
    """
    ns = np.asarray(ns, dtype=np.int64)
    if isinstance(e, ParamGPExpr):
        raise MissingParam(f"unbound parameters {sorted(e.index_set)}")
    return _Batch(ns).ev(e)


def eval_floor_range(e, ns) -> np.ndarray:
    """Exact values of an integer-valued expression over ``ns``.

    Values that are not provably integers are evaluated exactly one by one.
    Returns an int64 (or object) array; raises ValueError on a non-integer.
    """
    ns = np.asarray(ns, dtype=np.int64)
    v = eval_range(e, ns)
    if isinstance(v, np.ndarray):
        return v
    if isinstance(v, RatVec):
        if np.any(v.num % v.den != 0):
            i = int(np.flatnonzero(v.num % v.den != 0)[0])
            raise ValueError(f"non-integer value at n={int(ns[i])}")
        return v.num // v.den
    out = []
    for n in ns:
        x = eval_expr(e, int(n))
        if not isinstance(x, int):
            raise ValueError(f"non-integer value {x!r} at n={int(n)}")
        out.append(x)
    return np.array(out, dtype=object if any(abs(x) >= fi.SAFE_INT64 for x in out) else np.int64)


def compare_range(e, ns, threshold) -> np.ndarray:
    """Exact sign of e(n) - threshold for each n, as an int8 array."""
    ns = np.asarray(ns, dtype=np.int64)
    return compare_values(e, ns, eval_range(e, ns), threshold)


def compare_values(e, ns, v, threshold) -> np.ndarray:
    """Like :func:`compare_range` with ``v = eval_range(e, ns)`` already computed."""
    t = simplify(threshold)
    if isinstance(t, (int, Fraction)) and not isinstance(v, fi.Box):
        p, q = Fraction(t).numerator, Fraction(t).denominator
        num, den = (v.num, v.den) if isinstance(v, RatVec) else (v, 1)
        left = fi.int_mul(num, np.full(len(ns), q, dtype=np.int64))
        right = p * den
        if left.dtype != object and abs(right) < fi.SAFE_INT64:
            return np.sign(left - right).astype(np.int8)
        return np.array([(x > right) - (x < right) for x in left], dtype=np.int8)
    box = _to_box(v, len(ns))
    tlo, thi = _value_bounds(t)
    out = np.zeros(len(ns), dtype=np.int8)
    out[box.lo > thi] = 1
    out[box.hi < tlo] = -1
    for i in np.flatnonzero((box.lo <= thi) & (box.hi >= tlo)):
        out[i] = sign(eval_expr(e, int(ns[i])) - t)
    return out


def zero_range(e, ns) -> np.ndarray:
    """Boolean array: e(n) == 0 exactly."""
    return compare_range(e, ns, 0) == 0


# ---------------------------------------------------------------------------
# height and the sum-of-products normal form


def height(e) -> int:
    """Structural floor-nesting depth (an upper bound for the minimal one)."""
    if isinstance(e, ParamGPExpr):
        e = e.expr
    if type(e) in _BRACKET_NAME:
        return height(e.arg) + 1
    return max((height(c) for c in children(e)), default=0)


def floor_expansion(e) -> Expr:
    """Rewrite frac, ceil, nint and dist in terms of floor alone.

    frac(x) = x - floor(x), ceil(x) = -floor(-x), nint(x) = floor(x + 1/2) and
    dist(x) = (x - floor(x + 1/2)) * (-2 floor(x + 1/2) - 2 floor(-x) - 1).
    """
    kids = [floor_expansion(c) for c in children(e)]
    if isinstance(e, Floor):
        return Floor(kids[0])
    if isinstance(e, Frac):
        x = kids[0]
        return Add((x, neg(Floor(x))))
    if isinstance(e, Ceil):
        return neg(Floor(neg(kids[0])))
    if isinstance(e, Nint):
        return Floor(add(kids[0], Const(HALF)))
    if isinstance(e, Dist):
        x = kids[0]
        r = Floor(add(x, Const(HALF)))
        return Mul((Add((x, neg(r))), Add((Mul((Const(-2), r)), Mul((Const(-2), Floor(neg(x)))), Const(-1)))))
    if isinstance(e, (Add, Mul, Pow)):
        return rebuild(e, kids)
    return e


def _padd(p, q):
    out = [0] * max(len(p), len(q))
    for i, c in enumerate(p):
        out[i] = out[i] + c
    for i, c in enumerate(q):
        out[i] = out[i] + c
    return tuple(simplify(c) for c in out)


def _pmul(p, q):
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] = out[i + j] + a * b
    return tuple(simplify(c) for c in out)


def _pzero(p):
    return all(isinstance(c, (int, Fraction)) and c == 0 or (isinstance(c, FieldElem) and c.is_zero()) for c in p)


def _poly_of(e):
    if isinstance(e, Const):
        return (e.value,)
    if isinstance(e, Var):
        return (0, 1)
    if isinstance(e, Add):
        acc = (0,)
        for t in e.terms:
            acc = _padd(acc, _poly_of(t))
        return acc
    if isinstance(e, Mul):
        acc = (1,)
        for f in e.factors:
            acc = _pmul(acc, _poly_of(f))
        return acc
    if isinstance(e, Pow):
        acc, b = (1,), _poly_of(e.base)
        for _ in range(e.exp):
            acc = _pmul(acc, b)
        return acc
    raise TypeError("not a polynomial node")


def poly_to_expr(p) -> Expr:
    terms = []
    for k, c in enumerate(p):
        if _pzero((c,)):
            continue
        mono = N if k == 1 else (Pow(N, k) if k > 1 else None)
        if mono is None:
            terms.append(const(c))
        elif isinstance(c, int) and c == 1:
            terms.append(mono)
        else:
            terms.append(Mul((const(c), mono)))
    if not terms:
        return Const(0)
    return terms[0] if len(terms) == 1 else Add(tuple(terms))


@dataclass(frozen=True)
class SNFTerm:
    poly: tuple
    floors: tuple


@dataclass(frozen=True)
class SumNormalForm:
    """g = sum_i p_i(n) * prod_j floor(h_ij(n))."""
    terms: tuple

    @property
    def s(self) -> int:
        return len(self.terms)

    @property
    def r(self) -> list:
        return [len(t.floors) for t in self.terms]

    def to_expr(self) -> Expr:
        parts = []
        for t in self.terms:
            fs = [Floor(h) for h in t.floors]
            if not (t.poly == (1,) and fs):
                fs.insert(0, poly_to_expr(t.poly))
            parts.append(fs[0] if len(fs) == 1 else Mul(tuple(fs)))
        if not parts:
            return Const(0)
        return parts[0] if len(parts) == 1 else Add(tuple(parts))


def _terms(e):
    if height(e) == 0:
        return [((_poly_of(e)), ())]
    if isinstance(e, Add):
        return [t for c in e.terms for t in _terms(c)]
    if isinstance(e, Mul):
        acc = [((1,), ())]
        for f in e.factors:
            acc = [(_pmul(p, q), hs + ks) for p, hs in acc for q, ks in _terms(f)]
        return acc
    if isinstance(e, Pow):
        return _terms(Mul((e.base,) * e.exp)) if e.exp else [((1,), ())]
    if isinstance(e, Floor):
        return [((1,), (e.arg,))]
    if isinstance(e, Frac):
        return _terms(e.arg) + [((-1,), (e.arg,))]
    if isinstance(e, Ceil):
        return [((-1,), (neg(e.arg),))]
    if isinstance(e, Nint):
        return [((1,), (add(e.arg, Const(HALF)),))]
    if isinstance(e, Dist):
        return _terms(floor_expansion(Dist(e.arg)))
    raise TypeError(f"unexpected node {e!r}")


def sum_normal_form(e) -> SumNormalForm:
    """Write e as a sum of polynomials times products of floors of lower height."""
    merged: dict = {}
    order = []
    for p, hs in _terms(e):
        key = tuple(sorted(hs, key=format_expr))
        if key not in merged:
            merged[key] = (0,)
            order.append(key)
        merged[key] = _padd(merged[key], p)
    terms = []
    for key in order:
        p = merged[key]
        while len(p) > 1 and _pzero(p[-1:]):
            p = p[:-1]
        if not _pzero(p):
            terms.append(SNFTerm(p, key))
    return SumNormalForm(tuple(terms))


# ---------------------------------------------------------------------------
# parameters


def bind_params(e, assignment: Mapping[int, object]) -> Expr:
    """Substitute values for parameter slots. Values may be reals or constants."""
    expr = e.expr if isinstance(e, ParamGPExpr) else e
    needed = params_of(expr)
    missing = sorted(needed - set(assignment))
    if missing:
        raise MissingParam(f"no value for parameters {['a%d' % i for i in missing]}")

    def sub(x):
        if isinstance(x, Param):
            v = assignment[x.index]
            return v if isinstance(v, Const) else Const(simplify(v))
        kids = children(x)
        if not kids:
            return x
        return rebuild(x, [sub(c) for c in kids])
    return sub(expr)


def shift_check(template, base, m: int, assignment, N: int) -> bool:
    """True iff the bound template at n equals base at n + m for all n in [0, N)."""
    bound = bind_params(template, assignment)
    ns = np.arange(N, dtype=np.int64)
    a, b = eval_range(bound, ns), eval_range(base, ns + m)
    if isinstance(a, np.ndarray) and isinstance(b, np.ndarray):
        return bool(np.array_equal(a, b))
    return all(eval_expr(bound, n) == eval_expr(base, n + m) for n in range(N))
