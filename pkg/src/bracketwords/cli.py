"""Command-line interface.

Exit codes: 0 success, 2 usage error, 3 precision exhausted, 4 domain error.
Errors are written to stderr as one JSON object.
"""
from __future__ import annotations

import argparse
import json
import re
import sys

from . import analysis as A
from . import gpexpr as gp
from . import pisot as PS
from . import sclab as SC
from . import words as W
from .errors import BracketError
from .exactreal import parse_field_decl

EXIT = {"usage": 2, "precision": 3, "domain": 4}


class Session:
    """Named fields, constants and words loaded from a definitions file.

    Lines look like::

        field K : x^2 - 2 in [1, 2]
        const a = (sqrt(5) - 1)/2
        word w = sturmian a
        word v = indicator frac(phi*n^2) in [0,1/4) | (3/4,1)
        word p = product w v
    """

    def __init__(self):
        self.fields: dict = {}
        self.constants: dict = {}
        self.macros: dict = {}
        self.words: dict = {}
        self.field = None

    # -- loading ------------------------------------------------------------
    def load(self, text: str):
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            try:
                self._line(line)
            except (ValueError, KeyError) as exc:
                raise ValueError(f"line {lineno}: {exc}") from None
        return self

    def _line(self, line: str):
        kw = line.split(None, 1)[0]
        if kw == "field":
            name, K = parse_field_decl(line)
            self.fields[name] = K
            self.field = K
            self.constants[name] = K.gen()
            return
        m = re.fullmatch(r"(const|word)\s+([A-Za-z_]\w*)\s*=\s*(.+)", line)
        if not m:
            raise ValueError(f"cannot parse {line!r}")
        kind, name, body = m.groups()
        if name in self.constants or name in self.macros or name in self.words:
            raise ValueError(f"name {name!r} defined twice")
        if kind == "const":
            e = self.expr(body)
            if not isinstance(e, gp.Const):
                raise ValueError(f"constant {name} depends on n")
            # kept as source text so later expressions can combine it with
            # other square roots in one field
            self.macros[name] = f"({self._expand(body)})"
        else:
            self.words[name] = self.build_word(body, name)

    # -- resolution ---------------------------------------------------------
    def _expand(self, src: str) -> str:
        if not self.macros:
            return src
        pat = r"\b(" + "|".join(map(re.escape, self.macros)) + r")\b"
        return re.sub(pat, lambda m: self.macros[m.group(1)], src)

    def _scope(self, src: str):
        # only named constants that actually occur decide the field, so a
        # declared field does not capture unrelated square roots
        used = {k: v for k, v in self.constants.items() if re.search(rf"\b{re.escape(k)}\b", src)}
        return used or None

    def expr(self, src: str):
        src = self._expand(src)
        return gp.parse_expr(src, None, self._scope(src))

    def value(self, src: str):
        e = self.expr(src)
        if not isinstance(e, gp.Const):
            raise ValueError(f"{src!r} is not a constant")
        return e.value

    def word(self, name: str) -> W.Word:
        if name in self.words:
            return self.words[name]
        return W.builtin(name)

    def build_word(self, body: str, name=None) -> W.Word:
        head, _, rest = body.strip().partition(" ")
        rest = rest.strip()
        if head == "builtin":
            return W.builtin(rest)
        if head == "expr":
            src, _, table = rest.rpartition(" code ")
            return W.word_from_expr(self.expr(src), _parse_table(table, self), name)
        if head == "indicator":
            src, _, iv = rest.rpartition(" in ")
            return W.interval_indicator(self.expr(src), W.IntervalSet.parse(self._expand(iv), None, self._scope(self._expand(iv))), 0, name)
        if head == "zero":
            return W.zero_indicator(self.expr(rest), name)
        if head == "sturmian":
            parts = rest.split()
            variant = parts.pop() if parts and parts[-1] in ("floor", "ceil") else "floor"
            alpha = self.value(parts[0])
            beta = self.value(parts[1]) if len(parts) > 1 else 0
            return W.sturmian(alpha, beta, variant, name)
        if head == "product":
            a, b = rest.split()
            return W.product_word(self.word(a), self.word(b), name)
        if head == "code":
            a, _, table = rest.partition(" ")
            src = self.word(a)
            mp = _parse_table(table, None)
            lut = {s: mp.table.get(s, mp.table.get(str(s))) for s in src.alphabet}
            return W.code_word(src, lut, name)
        if head == "subseq":
            a, _, src = rest.partition(" ")
            return W.subsequence_word(self.word(a), self.expr(src), name)
        if head in ("progression", "dilute", "block_permute"):
            parts = rest.split()
            a, A_ = self.word(parts[0]), int(parts[1])
            if head == "progression":
                return W.rearrange_word(a, "progression", A_, int(parts[2]) if len(parts) > 2 else 0, name=name)
            if head == "dilute":
                return W.rearrange_word(a, "dilute", A_, pad=parts[2] if len(parts) > 2 else "◇", name=name)
            return W.rearrange_word(a, "block_permute", A_, perm=[int(x) for x in parts[2].split(",")], name=name)
        if head == "block":
            a, k = rest.split()
            return W.block_word(self.word(a), int(k), name)
        if head == "morphism":
            a, _, table = rest.partition(" ")
            src = self.word(a)
            mp = _parse_table(table, None, raw_values=True).table
            sigma = {s: [_literal(c) for c in mp.get(s, mp.get(str(s), ""))] for s in src.alphabet}
            return W.morphism_word(src, sigma, name)
        if head == "recset":
            coeffs, _, init = rest.partition(";")
            return W.recset([int(x) for x in coeffs.split(",")], [int(x) for x in init.split(",")], name)
        if head == "pisot":
            a, b = rest.split()
            return PS.power_word(PS.make_pisot_unit(int(a), int(b)), name)
        raise ValueError(f"unknown word constructor {head!r}")


def _parse_table(text: str, session, raw_values: bool = False) -> W.Coding:
    text = text.strip()
    if not (text.startswith("{") and text.endswith("}")):
        raise ValueError(f"coding table must look like {{0:a, 1:b}}, got {text!r}")
    table = {}
    for item in filter(None, (s.strip() for s in text[1:-1].split(","))):
        k, _, v = item.partition(":")
        k, v = k.strip(), v.strip()
        key = session.value(k) if session is not None else _literal(k)
        table[key] = v if raw_values else _literal(v)
    return W.Coding(table)


def _literal(s: str):
    try:
        return int(s)
    except ValueError:
        return s


def _symbols(word: W.Word, text: str):
    """Interpret a factor given on the command line, character by character."""
    by_str = {str(s): s for s in word.alphabet}
    if "," in text:
        return tuple(by_str[t.strip()] for t in text.split(","))
    return tuple(by_str[c] for c in text)


def _emit_json(obj, out):
    out.write(json.dumps(obj, default=str) + "\n")


# ---------------------------------------------------------------------------
# subcommands


def cmd_parse(args, S: Session, out):
    e = S.expr(args.expr)
    if isinstance(e, gp.ParamGPExpr):
        _emit_json({"expr": gp.format_expr(e.expr), "params": sorted(gp.params_of(e.expr))}, out)
        return
    rec = {"expr": gp.format_expr(e), "height": gp.height(e)}
    if args.normal_form:
        snf = gp.sum_normal_form(e)
        rec["normal_form"] = gp.format_expr(snf.to_expr())
        rec["terms"] = len(snf.terms)
    _emit_json(rec, out)


def cmd_eval(args, S: Session, out):
    e = S.expr(args.expr)
    stop = args.to if args.to is not None else args.n
    for n in range(args.n, stop + 1):
        out.write(gp.describe(gp.eval_expr(e, n)) + "\n")


def cmd_gen(args, S: Session, out):
    w = S.word(args.word)
    if args.raw:
        codes = w.codes(args.range)
        out.flush()
        sys.stdout.buffer.write(bytes(int(c) % 256 for c in codes))
        return
    syms = [str(s) for s in w.prefix(args.range)]
    if args.lines or any(len(s) != 1 for s in syms):
        out.write("".join(s + "\n" for s in syms))
    else:
        out.write("".join(syms) + "\n")


def _int_list(text: str) -> list[int]:
    out = []
    for part in text.split(","):
        if "-" in part.strip()[1:]:
            a, b = part.split("-", 1)
            out.extend(range(int(a), int(b) + 1))
        else:
            out.append(int(part))
    return out


def cmd_analyze(args, S: Session, out):
    w = S.word(args.word)
    m = args.measure
    H = args.horizon
    if m == "complexity":
        prof = A.subword_complexity(w, _int_list(args.N), H)
        if args.csv:
            out.write(A.profile_csv(prof))
        else:
            out.write(A.to_jsonl(prof.records()))
    elif m == "freq":
        rep = A.frequency(w, _symbols(w, args.factor), _int_list(args.N))
        out.write(A.to_jsonl(rep.records()))
    elif m == "rec":
        r = A.recurrence_function(w, _symbols(w, args.factor), H)
        _emit_json({"measure": "rec", "factor": args.factor, "value": r.value if r.stable else "inf",
                    "horizon": H}, out)
    elif m in ("count", "discrepancy"):
        x = _symbols(w, args.symbol)[0]
        rep = A.counting_and_discrepancy(w, x, _int_list(args.N), H)
        out.write(A.to_jsonl(r for r in rep.records() if r["measure"] == m))
    elif m == "balance":
        x = _symbols(w, args.symbol)[0]
        _emit_json({"measure": "balance", "L_max": args.L, "value": A.balance_constant(w, x, args.L, H),
                    "horizon": H}, out)


def cmd_pisot(args, S: Session, out):
    P = PS.make_pisot_unit(args.a, args.b)
    if args.test is not None:
        _emit_json({"n": args.test, "member": PS.membership_test(P, args.test)}, out)
    if args.word is not None:
        out.write(PS.power_word(P).string(args.word) + "\n")
    if args.traces is not None:
        _emit_json({"traces": PS.trace_sequence(P, args.traces),
                    "rounded_powers": PS.rounded_powers(P, args.traces)}, out)
    if args.ghh is not None:
        d = PS.solve_ghh(P, args.ghh)
        _emit_json({"n": d.n, "nint_beta_n": d.nint_beta_n, "nint_beta2_n": d.nint_beta2_n,
                    "u": str(d.u), "v": str(d.v), "w": str(d.w), "norm": str(d.norm),
                    "trace": str(d.trace_reconstruction)}, out)
    if args.test is None and args.word is None and args.traces is None and args.ghh is None:
        _emit_json({"a": P.a, "b": P.b, "disc": P.disc, "beta": float(P.beta),
                    "unit_index": P.unit_index}, out)


def cmd_lattice(args, S: Session, out):
    if args.lattice_cmd == "approx":
        alpha = [S.value(x) for x in _split_top(args.alpha)]
        eps = S.value(args.eps)
        lat, R, cert = SC.lattice_approx(alpha, eps, args.N)
        _emit_json({"basis": lat.basis, "rank": lat.rank, "relations": len(R.members),
                    "inclusion_holds": cert.inclusion_holds, "lattice_points_in_box": cert.box_points,
                    "C_hat": cert.C_hat}, out)
    else:
        with open(args.points) as fh:
            pts = [tuple(int(x) for x in re.split(r"[,\s]+", ln.strip()) if x)
                   for ln in fh if ln.strip() and not ln.lstrip().startswith("#")]
        fam, bound, ok = SC.halfspace_cuts(pts)
        _emit_json({"points": len(set(pts)), "cuts": len(fam), "bound": bound, "within_bound": ok}, out)


def _split_top(text: str) -> list[str]:
    """Split on commas that are not inside parentheses."""
    parts, depth, cur = [], 0, ""
    for ch in text:
        if ch == "," and depth == 0:
            parts.append(cur)
            cur = ""
            continue
        depth += ch == "("
        depth -= ch == ")"
        cur += ch
    parts.append(cur)
    return [p.strip() for p in parts if p.strip()]


def cmd_verify(args, S: Session, out):
    from .verify import run_suite
    results = run_suite(args.suite)
    for r in results:
        out.write(r.line() + "\n")
    return 0 if all(r.ok for r in results) else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bracketwords", description="Bracket words: exact generation and analysis.")
    p.add_argument("--defs", help="definitions file (fields, constants, words)")
    p.add_argument("--seed", type=int, default=0, help="seed for randomised sampling")
    sub = p.add_subparsers(dest="cmd", required=True)

    s = sub.add_parser("parse", help="parse and pretty-print an expression")
    s.add_argument("--expr", required=True)
    s.add_argument("--normal-form", action="store_true")
    s.set_defaults(func=cmd_parse)

    s = sub.add_parser("eval", help="evaluate an expression exactly")
    s.add_argument("--expr", required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--to", type=int)
    s.set_defaults(func=cmd_eval)

    s = sub.add_parser("gen", help="generate a word prefix")
    s.add_argument("--word", required=True)
    s.add_argument("--range", type=int, required=True)
    g = s.add_mutually_exclusive_group()
    g.add_argument("--raw", action="store_true", help="one byte per symbol code")
    g.add_argument("--lines", action="store_true", help="one symbol per line")
    s.set_defaults(func=cmd_gen)

    s = sub.add_parser("analyze", help="measure a word")
    s.add_argument("--word", required=True)
    s.add_argument("--measure", required=True,
                   choices=["complexity", "freq", "rec", "count", "discrepancy", "balance"])
    s.add_argument("--N", default="1-20", help="lengths, e.g. 1-50 or 10,100,1000")
    s.add_argument("--horizon", type=int, default=10 ** 5)
    s.add_argument("--factor", default="1")
    s.add_argument("--symbol", default="1")
    s.add_argument("--L", type=int, default=64)
    s.add_argument("--csv", action="store_true")
    s.set_defaults(func=cmd_analyze)

    s = sub.add_parser("pisot", help="cubic Pisot unit recogniser")
    s.add_argument("--a", type=int, required=True)
    s.add_argument("--b", type=int, required=True)
    s.add_argument("--test", type=int)
    s.add_argument("--word", type=int)
    s.add_argument("--traces", type=int)
    s.add_argument("--ghh", type=int)
    s.set_defaults(func=cmd_pisot)

    s = sub.add_parser("lattice", help="relation lattices and half-space cuts")
    lsub = s.add_subparsers(dest="lattice_cmd", required=True)
    la = lsub.add_parser("approx")
    la.add_argument("--alpha", required=True, help="comma-separated constants, e.g. 1,sqrt(2),sqrt(3)")
    la.add_argument("--eps", required=True)
    la.add_argument("--N", type=int, required=True)
    lc = lsub.add_parser("cuts")
    lc.add_argument("--points", required=True, help="file with one integer point per line")
    s.set_defaults(func=cmd_lattice)

    s = sub.add_parser("verify", help="run acceptance checks")
    s.add_argument("--suite", default="all")
    s.set_defaults(func=cmd_verify)
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        S = Session()
        if args.defs:
            with open(args.defs, encoding="utf-8") as fh:
                S.load(fh.read())
        rc = args.func(args, S, out)
        return int(rc or 0)
    except BracketError as exc:
        sys.stderr.write(json.dumps(exc.record()) + "\n")
        return EXIT[exc.category]
    except (ValueError, KeyError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else str(exc)
        sys.stderr.write(json.dumps({"error": type(exc).__name__, "message": str(msg)}) + "\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
