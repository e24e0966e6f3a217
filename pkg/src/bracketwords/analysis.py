"""Measurements on words: subword complexity, frequencies, recurrence,
counting functions, discrepancy, balance and growth exponents.

Every quantity is computed over a finite horizon and reported with it. Nothing
here extrapolates to a limit.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import gpexpr as gp
from .errors import InsufficientSamples
from .words import Word


# ---------------------------------------------------------------------------
# subword complexity


def _factor_ranks(codes: np.ndarray, q: int, Nmax: int):
    """Yield (N, number of distinct factors of length N) for N = 1..Nmax.

    rank_N[i] identifies the factor of length N at position i; rank_{N+1} is
    obtained from the pair (rank_N[i], codes[i+N]) through a dense
    presence table, so each step is linear in the horizon.
    """
    H = len(codes)
    rank = codes.astype(np.int64)
    distinct = q
    # compress the alphabet to what actually occurs
    present = np.zeros(max(q, 1), dtype=bool)
    present[rank] = True
    remap = np.cumsum(present) - 1
    rank = remap[rank]
    distinct = int(present.sum())
    yield 1, distinct
    for N in range(2, Nmax + 1):
        if N > H:
            return
        nxt = codes[N - 1:].astype(np.int64)
        key = rank[: H - N + 1] * q + nxt
        table = np.zeros(distinct * q, dtype=bool)
        table[key] = True
        remap = np.cumsum(table) - 1
        rank = remap[key]
        distinct = int(table.sum())
        yield N, distinct


@dataclass
class ComplexityProfile:
    table: dict
    horizon: int
    slope: float | None = None
    fit_window: tuple | None = None

    def __getitem__(self, N):
        return self.table[N]

    def records(self):
        for N, p in sorted(self.table.items()):
            yield {"measure": "complexity", "N": N, "value": p, "horizon": self.horizon}


def subword_complexity(a: Word, Ns: Iterable[int], horizon: int) -> ComplexityProfile:
    """p_a(N) counted over the positions [0, horizon - N] (a lower bound for the true value)."""
    Ns = sorted(set(int(n) for n in Ns))
    want = set(Ns)
    codes = a.codes(horizon)
    q = len(a.alphabet)
    table = {}
    if Ns and Ns[-1] >= 1:
        for N, p in _factor_ranks(codes, q, Ns[-1]):
            if N in want:
                table[N] = p
    if 0 in want:
        table[0] = 1
    prof = ComplexityProfile(table, horizon)
    pts = [(N, p) for N, p in table.items() if N >= 1]
    if len(pts) >= 2:
        x = np.log([N for N, _ in pts])
        y = np.log([p for _, p in pts])
        if np.ptp(x) > 0:
            prof.slope = float(np.polyfit(x, y, 1)[0])
            prof.fit_window = (pts[0][0], pts[-1][0])
    return prof


@dataclass(frozen=True)
class EventuallyPeriodicEvidence:
    N: int
    p: int


@dataclass(frozen=True)
class Aperiodic:
    N_witness: int


def periodicity_check(profile: ComplexityProfile):
    """Morse-Hedlund: p(N) <= N for some N forces eventual periodicity."""
    for N in sorted(profile.table):
        if N >= 1 and profile.table[N] <= N:
            return EventuallyPeriodicEvidence(N, profile.table[N])
    return Aperiodic(max(profile.table) if profile.table else 0)


# ---------------------------------------------------------------------------
# occurrences, frequencies, recurrence


def _pattern_codes(a: Word, w) -> np.ndarray:
    return np.array([a.code_of(s) for s in w], dtype=np.int64)


def occurrences(a: Word, w, horizon: int) -> np.ndarray:
    """Boolean array: w occurs starting at i, for i in [0, horizon - |w|]."""
    codes = a.codes(horizon)
    try:
        pat = _pattern_codes(a, w)
    except KeyError:
        return np.zeros(max(horizon - len(w) + 1, 0), dtype=bool)
    L = len(pat)
    if L == 0:
        return np.ones(horizon + 1, dtype=bool)
    m = horizon - L + 1
    if m <= 0:
        return np.zeros(0, dtype=bool)
    ok = np.ones(m, dtype=bool)
    for j, c in enumerate(pat):
        ok &= codes[j:j + m] == c
    return ok


def factor_count(a: Word, w, N: int) -> int:
    """Occurrences of w lying entirely inside a_0 ... a_{N-1}."""
    return int(occurrences(a, w, N).sum())


@dataclass
class FrequencyReport:
    word: tuple
    horizon: int
    estimates: dict  # (M, N) -> cnt(w; [M, M+N)) / N
    spread: dict     # N -> max_M estimate - min_M estimate

    def records(self):
        for (M, N), v in sorted(self.estimates.items()):
            yield {"measure": "freq", "M": M, "N": N, "value": v, "horizon": self.horizon}


def frequency(a: Word, w, Ns: Sequence[int], Ms: Sequence[int] = (0,)) -> FrequencyReport:
    """Empirical frequency of w over the windows [M, M+N) (occurrences starting there)."""
    w = tuple(w)
    horizon = max(Ms) + max(Ns) + len(w)
    occ = occurrences(a, w, horizon)
    cs = np.concatenate([[0], np.cumsum(occ, dtype=np.int64)])
    est, spread = {}, {}
    for N in Ns:
        vals = []
        for M in Ms:
            v = int(cs[M + N] - cs[M]) / N
            est[(M, N)] = v
            vals.append(v)
        spread[N] = max(vals) - min(vals)
    return FrequencyReport(w, horizon, est, spread)


@dataclass(frozen=True)
class RecurrenceResult:
    value: float  # math.inf when unbounded on the horizon or absent
    horizon: int
    stable: bool


def _rec_on(occ: np.ndarray, L: int):
    pos = np.flatnonzero(occ)
    if len(pos) == 0:
        return None
    worst = int(pos[0])
    if len(pos) > 1:
        worst = max(worst, int(np.diff(pos).max()) - 1)
    return worst + L


def recurrence_function(a: Word, w, horizon: int) -> RecurrenceResult:
    """Least r such that every segment of length r inside the horizon contains w.

    Computed as max(first position, largest gap - 1) + |w|. When the value
    on the full horizon differs from the value on its first half, the
    gaps are still growing and the result is reported as infinite.
    """
    w = tuple(w)
    occ = occurrences(a, w, horizon)
    full = _rec_on(occ, len(w))
    half = _rec_on(occ[: max(horizon // 2 - len(w) + 1, 0)], len(w))
    if full is None:
        return RecurrenceResult(math.inf, horizon, False)
    if half != full:
        return RecurrenceResult(math.inf, horizon, False)
    return RecurrenceResult(full, horizon, True)


# ---------------------------------------------------------------------------
# counting function, discrepancy, balance


def counting_function(a: Word, x, N: int) -> np.ndarray:
    """cnt(a, x; n) for n = 0..N."""
    codes = a.codes(N)
    hit = codes == a.code_of(x) if x in a.alphabet else np.zeros(N, dtype=bool)
    return np.concatenate([[0], np.cumsum(hit, dtype=np.int64)])


@dataclass
class GrowthReport:
    symbol: object
    horizon: int
    Ns: list
    counts: list
    freq: dict          # symbol -> frequency used for the discrepancy
    freq_exact: bool
    discrepancy: list
    balance: int | None = None
    balance_lengths: int | None = None

    def records(self):
        for N, c, dlt in zip(self.Ns, self.counts, self.discrepancy):
            yield {"measure": "count", "N": N, "value": c, "horizon": self.horizon}
            yield {"measure": "discrepancy", "N": N, "value": dlt, "horizon": self.horizon}


def counting_and_discrepancy(a: Word, x, Ns: Sequence[int], horizon: int | None = None,
                             freqs: dict | None = None) -> GrowthReport:
    """cnt(a, x; N) and Delta(a; N) = max_y |cnt(a, y; N) - N freq(y)|.

    Without ``freqs`` the frequencies are the end-of-horizon estimates,
    recorded in the report.
    """
    Ns = [int(n) for n in Ns]
    H = horizon or max(Ns)
    H = max(H, max(Ns))
    codes = a.codes(H)
    exact = freqs is not None
    if freqs is None:
        counts_all = np.bincount(codes, minlength=len(a.alphabet))
        freqs = {s: counts_all[i] / H for i, s in enumerate(a.alphabet)}
    cum = {s: np.concatenate([[0], np.cumsum(codes == i, dtype=np.int64)]) for i, s in enumerate(a.alphabet)}
    disc = []
    for N in Ns:
        disc.append(max(abs(float(cum[s][N]) - N * float(freqs.get(s, 0))) for s in a.alphabet))
    cx = cum[x] if x in cum else np.zeros(H + 1, dtype=np.int64)
    return GrowthReport(x, H, Ns, [int(cx[N]) for N in Ns], dict(freqs), exact, disc)


def count_deviation_bounded(a: Word, x, alpha, bound: int, N_max: int) -> tuple[bool, int | None]:
    """Exact check of |cnt(a, x; N) - alpha N| <= bound for all 0 <= N <= N_max.

    Returns (holds, first failing N or None). alpha may be irrational; the
    comparison uses exact floors of alpha N.
    """
    cnt = counting_function(a, x, N_max)
    ns = np.arange(N_max + 1, dtype=np.int64)
    c = gp.const(alpha, gp.describe(alpha))
    fl = gp.eval_floor_range(gp.floor(c * gp.N), ns)
    ce = -gp.eval_floor_range(gp.floor(-c * gp.N), ns)
    # for integers k: alpha N >= k iff floor(alpha N) >= k, alpha N <= k iff ceil(alpha N) <= k
    ok = (fl >= cnt - bound) & (ce <= cnt + bound)
    bad = np.flatnonzero(~ok)
    return (len(bad) == 0, int(bad[0]) if len(bad) else None)


def balance_constant(a: Word, x, L_max: int, horizon: int) -> int:
    """max over lengths l <= L_max of (max - min) count of x in windows of length l."""
    codes = a.codes(horizon)
    hit = codes == a.code_of(x) if x in a.alphabet else np.zeros(horizon, dtype=bool)
    cs = np.concatenate([[0], np.cumsum(hit, dtype=np.int64)])
    best = 0
    for l in range(1, min(L_max, horizon) + 1):
        w = cs[l:] - cs[:-l]
        best = max(best, int(w.max() - w.min()))
    return best


# ---------------------------------------------------------------------------
# growth exponents


@dataclass(frozen=True)
class GrowthFit:
    slope: float
    intercept: float
    max_residual: float
    mode: str
    window: tuple


def growth_exponent(Ns: Sequence[int], values: Sequence[float], mode: str = "loglog") -> GrowthFit:
    """Least-squares slope of log(value) vs log N (``loglog``) or value vs log N (``semilog``)."""
    Ns = np.asarray(Ns, dtype=float)
    vals = np.asarray(values, dtype=float)
    if len(Ns) < 4 or Ns.min() <= 0 or Ns.max() / Ns.min() < 100:
        raise InsufficientSamples("need at least 4 samples spanning two decades of N")
    x = np.log(Ns)
    if mode == "loglog":
        if (vals <= 0).any():
            raise InsufficientSamples("log-log fit needs positive values")
        y = np.log(vals)
    elif mode == "semilog":
        y = vals
    else:
        raise ValueError("mode must be 'loglog' or 'semilog'")
    slope, icpt = np.polyfit(x, y, 1)
    res = float(np.max(np.abs(y - (slope * x + icpt))))
    return GrowthFit(float(slope), float(icpt), res, mode, (int(Ns.min()), int(Ns.max())))


def profile_exponent(profile: ComplexityProfile) -> GrowthFit:
    Ns = sorted(N for N in profile.table if N >= 1)
    return growth_exponent(Ns, [profile.table[N] for N in Ns])


# ---------------------------------------------------------------------------
# surjectivity probe


@dataclass
class CoverageTable:
    K: int
    horizon: int
    first_hit: dict
    unhit: list
    bounds_ok: bool


def surjection_coverage(probe, K: int, horizon: int) -> CoverageTable:
    """First n < horizon with g_A(n) = (k, l), for every (k, l) in [K]^2."""
    g1, g2 = probe.values(horizon)
    ns = np.arange(horizon, dtype=np.int64)
    bounds_ok = bool(((g1 >= 0) & (g2 >= 0) & (g1 <= ns) & (g2 <= ns)).all())
    m = (g1 < K) & (g2 < K)
    key = g1[m] * K + g2[m]
    uniq, first = np.unique(key, return_index=True)
    idx = ns[m][first]
    hits = {(int(k // K), int(k % K)): int(n) for k, n in zip(uniq, idx)}
    unhit = [(k, l) for k in range(K) for l in range(K) if (k, l) not in hits]
    return CoverageTable(K, horizon, hits, unhit, bounds_ok)


# ---------------------------------------------------------------------------
# report output


def to_jsonl(records: Iterable[dict]) -> str:
    return "".join(json.dumps(r, sort_keys=False, default=str) + "\n" for r in records)


def profile_csv(profile: ComplexityProfile) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["N", "p"])
    for N, p in sorted(profile.table.items()):
        w.writerow([N, p])
    return buf.getvalue()
