"""Lattice laboratory: Diophantine relations, lattice approximation,
half-space cuts and prefix counting for floor(sum alpha_i h_i(n)).

All membership decisions are exact. Floats only prefilter candidates, and
every borderline case is rechecked in exact arithmetic.
"""
from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import TooLarge
from .exactreal import interval_of, sign, simplify

MAX_BOX = 5 * 10 ** 7


# ---------------------------------------------------------------------------
# Hermite normal form


def hnf(rows: Sequence[Sequence[int]], dim: int | None = None) -> list[list[int]]:
    """Row-style Hermite normal form of the integer row span.

    Rows are returned in echelon form with positive pivots; entries above
    each pivot are reduced into [0, pivot). Zero rows are dropped.
    """
    A = [[int(x) for x in r] for r in rows]
    if dim is None:
        dim = len(A[0]) if A else 0
    out: list[list[int]] = []
    col = 0
    while A and col < dim:
        nz = [r for r in A if r[col] != 0]
        rest = [r for r in A if r[col] == 0]
        if not nz:
            col += 1
            continue
        # Euclid on column col
        while len(nz) > 1:
            nz.sort(key=lambda r: abs(r[col]))
            piv = nz[0]
            nxt = [piv]
            for r in nz[1:]:
                q = r[col] // piv[col]
                r = [x - q * y for x, y in zip(r, piv)]
                (nxt if r[col] != 0 else rest).append(r)
            nz = nxt
        piv = nz[0]
        if piv[col] < 0:
            piv = [-x for x in piv]
        out.append(piv)
        A = [r for r in rest if any(r)]
        col += 1
    # reduce above pivots
    for i, r in enumerate(out):
        p = next(j for j, x in enumerate(r) if x)
        for k in range(i):
            q = out[k][p] // r[p]
            if q:
                out[k] = [x - q * y for x, y in zip(out[k], r)]
    return out


class IntLattice:
    """Sublattice of Z^dim given by an HNF basis (rows generate)."""

    def __init__(self, basis: Sequence[Sequence[int]], dim: int):
        self.dim = dim
        self.basis = [list(r) for r in hnf(basis, dim)]
        self.rank = len(self.basis)
        self._pivots = [next(j for j, x in enumerate(r) if x) for r in self.basis]

    def __eq__(self, other):
        return isinstance(other, IntLattice) and self.dim == other.dim and self.basis == other.basis

    def __hash__(self):
        return hash((self.dim, tuple(map(tuple, self.basis))))

    def __repr__(self):
        return f"IntLattice(rank={self.rank}, basis={self.basis})"

    def contains(self, v: Sequence[int]) -> bool:
        v = [int(x) for x in v]
        for r, p in zip(self.basis, self._pivots):
            if any(v[:p]):
                return False
            q, rem = divmod(v[p], r[p])
            if rem:
                return False
            v = [x - q * y for x, y in zip(v, r)]
        return not any(v)

    def contains_many(self, V: np.ndarray) -> np.ndarray:
        """Vectorised membership for the rows of an int64 array."""
        V = np.array(V, dtype=np.int64, copy=True)
        ok = np.ones(len(V), dtype=bool)
        col = 0
        for r, p in zip(self.basis, self._pivots):
            ok &= ~(V[:, col:p] != 0).any(axis=1)
            q, rem = np.divmod(V[:, p], r[p])
            ok &= rem == 0
            V -= q[:, None] * np.array(r, dtype=np.int64)[None, :]
            col = p + 1
        ok &= ~(V != 0).any(axis=1)
        return ok

    def points_in_box(self, lo: Sequence[int], hi: Sequence[int]) -> np.ndarray:
        """All lattice points m with lo <= m <= hi componentwise."""
        pts = _box(lo, hi)
        return pts[self.contains_many(pts)]


def span_lattice(vectors, dim: int | None = None) -> IntLattice:
    vecs = [list(map(int, v)) for v in vectors]
    if dim is None:
        if not vecs:
            raise ValueError("dimension needed for an empty generating set")
        dim = len(vecs[0])
    # grow incrementally, only adding vectors not yet in the span
    lat = IntLattice([], dim)
    if not vecs:
        return lat
    arr = np.array(vecs, dtype=np.int64)
    while True:
        miss = np.flatnonzero(~lat.contains_many(arr))
        if len(miss) == 0:
            return lat
        lat = IntLattice(lat.basis + [arr[miss[0]].tolist()], dim)
        arr = arr[miss]


def _box(lo, hi) -> np.ndarray:
    sizes = [h - l + 1 for l, h in zip(lo, hi)]
    total = math.prod(sizes)
    if total > MAX_BOX:
        raise TooLarge(f"box with {total} points")
    axes = [np.arange(l, h + 1, dtype=np.int64) for l, h in zip(lo, hi)]
    return np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, len(lo))


# ---------------------------------------------------------------------------
# relations


@dataclass
class RelationSet:
    alpha: tuple
    eps: object
    N: int
    members: list = field(default_factory=list)


def _float_bounds(x):
    lo, hi = interval_of(x, 64)
    return float(lo), float(hi)


def _values(alpha, pts: np.ndarray):
    """Float value and a rigorous error bound of pts @ alpha."""
    mids, rads = [], []
    for a in alpha:
        lo, hi = _float_bounds(a)
        mids.append((lo + hi) / 2)
        rads.append((hi - lo) / 2 + abs(lo + hi) * 2.0 ** -52)
    mids, rads = np.array(mids), np.array(rads)
    P = pts.astype(np.float64)
    v = P @ mids
    absP = np.abs(P)
    err = absP @ rads + (absP @ np.abs(mids)) * (len(alpha) + 2) * 2.0 ** -52 + 1e-300
    return v, err


def _exact_value(alpha, m):
    s = 0
    for mi, a in zip(m, alpha):
        if mi:
            s = s + int(mi) * a
    return s


def _all_rational(alpha) -> bool:
    return all(isinstance(simplify(a), (int, Fraction)) for a in alpha)


def _abs_less(alpha, pts, bound) -> np.ndarray:
    """Exact |pts @ alpha| < bound for every row."""
    if _all_rational(alpha) and isinstance(simplify(bound), (int, Fraction)):
        qs = [Fraction(simplify(a)) for a in alpha] + [Fraction(simplify(bound))]
        den = math.lcm(*(q.denominator for q in qs))
        coef = np.array([int(q * den) for q in qs[:-1]], dtype=object)
        b = int(qs[-1] * den)
        big = max((abs(int(c)) for c in coef), default=0) * (int(np.abs(pts).max()) if len(pts) else 0) * len(alpha)
        if big < 2 ** 62:
            v = pts @ coef.astype(np.int64)
        else:
            v = pts.astype(object) @ coef
        return np.abs(v) < b
    v, err = _values(alpha, pts)
    blo, bhi = _float_bounds(bound)
    out = np.abs(v) + err < blo
    unsure = np.flatnonzero(~out & (np.abs(v) - err < bhi))
    for i in unsure:
        x = _exact_value(alpha, pts[i])
        out[i] = sign(x - bound) < 0 and sign(x + bound) > 0
    return out


def enumerate_relations(alpha, eps, N: int) -> RelationSet:
    """R_N(alpha, eps) = {n in Z^d : |n|_inf < N, |sum n_i alpha_i| < eps}."""
    d = len(alpha)
    if (2 * N - 1) ** d > MAX_BOX:
        raise TooLarge(f"(2N-1)^d = {(2 * N - 1) ** d} points")
    pts = _box([-(N - 1)] * d, [N - 1] * d)
    keep = _abs_less(alpha, pts, eps)
    return RelationSet(tuple(alpha), eps, N, [tuple(int(x) for x in r) for r in pts[keep]])


@dataclass
class SandwichCertificate:
    inclusion_holds: bool
    box_points: int
    max_value: float
    C_hat: float


def lattice_approx(alpha, eps, N: int):
    """Lattice spanned by R_N(alpha, eps) with a two-sided check.

    Returns (lattice, relations, certificate). The certificate checks
    R_N(alpha, eps) inside Lambda cap (-N, N)^d exactly and measures
    C_hat = max |m . alpha| / (N^d eps) over Lambda cap (-N, N)^d.
    """
    d = len(alpha)
    R = enumerate_relations(alpha, eps, N)
    lat = span_lattice(R.members, d)
    inside = lat.points_in_box([-(N - 1)] * d, [N - 1] * d)
    have = {tuple(int(x) for x in r) for r in inside}
    incl = all(m in have for m in R.members)
    vmax = 0.0
    if len(inside):
        v, err = _values(alpha, inside)
        vmax = float(np.max(np.abs(v)))
    e = float(Fraction(simplify(eps))) if isinstance(simplify(eps), (int, Fraction)) else float(eps)
    cert = SandwichCertificate(incl, len(inside), vmax, vmax / (N ** d * e))
    return lat, R, cert


# ---------------------------------------------------------------------------
# half-space cuts


def harding_bound(n: int, d: int) -> int:
    """2 sum_{i<=d} C(n-1, i)."""
    if n == 0:
        return 1
    return 2 * sum(math.comb(n - 1, i) for i in range(d + 1))


def _rank_basis(vectors):
    """Indices of a maximal independent subset (exact, Fractions)."""
    rows, idx = [], []
    for k, v in enumerate(vectors):
        r = [Fraction(x) for x in v]
        for piv_col, b in rows:
            if r[piv_col]:
                f = r[piv_col] / b[piv_col]
                r = [x - f * y for x, y in zip(r, b)]
        nzc = next((j for j, x in enumerate(r) if x), None)
        if nzc is not None:
            rows.append((nzc, r))
            idx.append(k)
    return idx


def _nullvec(rows, dim):
    """A nonzero vector orthogonal to the given (dim-1) independent rows."""
    import sympy
    M = sympy.Matrix(rows) if rows else sympy.zeros(0, dim)
    ns = M.nullspace() if rows else [sympy.Matrix([1] + [0] * (dim - 1))]
    v = ns[0]
    den = math.lcm(*(int(sympy.fraction(x)[1]) for x in v))
    return [Fraction(int(x * den)) for x in v]


def _local_coords(points):
    """Affine coordinates of points in their affine hull, plus its dimension."""
    p0 = points[0]
    diffs = [[Fraction(a - b) for a, b in zip(p, p0)] for p in points]
    basis_idx = _rank_basis(diffs)
    k = len(basis_idx)
    if k == 0:
        return [()] * len(points), 0
    B = [diffs[i] for i in basis_idx]
    # project onto coordinates: choose k columns where B is invertible
    cols = _rank_basis([[B[i][j] for i in range(k)] for j in range(len(p0))])
    import sympy
    Bs = sympy.Matrix([[B[i][j] for j in cols] for i in range(k)])
    inv = Bs.inv()
    out = []
    for v in diffs:
        vs = sympy.Matrix([[v[j] for j in cols]])
        c = vs * inv
        out.append(tuple(Fraction(int(sympy.fraction(x)[0]), int(sympy.fraction(x)[1])) for x in c))
    return out, k


def _cuts_local(pts: list, ids: tuple) -> set:
    """Cuts of the points (given in coordinates spanning R^k) as frozensets of ids."""
    coords, k = _local_coords(pts)
    allset = frozenset(ids)
    res = {frozenset(), allset}
    if k == 0:
        return res
    seen_planes = set()
    for combo in itertools.combinations(range(len(pts)), k):
        base = coords[combo[0]]
        rows = [[a - b for a, b in zip(coords[j], base)] for j in combo[1:]]
        if len(_rank_basis(rows)) != k - 1:
            continue
        w = _nullvec(rows, k) if k > 1 else [Fraction(1)]
        s = [sum(wi * (x - b) for wi, x, b in zip(w, c, base)) for c in coords]
        on = tuple(i for i in range(len(pts)) if s[i] == 0)
        if on in seen_planes:
            continue
        seen_planes.add(on)
        pos = frozenset(ids[i] for i in range(len(pts)) if s[i] > 0)
        neg = frozenset(ids[i] for i in range(len(pts)) if s[i] < 0)
        sub = _cuts_local([pts[i] for i in on], tuple(ids[i] for i in on))
        for A in sub:
            res.add(pos | A)
            res.add(neg | A)
    return res


def halfspace_cuts(points, max_points: int = 64):
    """All distinct sets S cap H over half-spaces H, as a set of frozensets of points.

    Returns (family, bound, ok) where bound = 2 sum_{i<=d} C(n-1, i) and
    ok records |family| <= bound.
    """
    S = sorted({tuple(int(x) for x in p) for p in points})
    if len(S) > max_points:
        raise TooLarge(f"{len(S)} points")
    if not S:
        return {frozenset()}, 1, True
    d = len(S[0])
    fam_ids = _cuts_local(S, tuple(range(len(S))))
    fam = {frozenset(S[i] for i in f) for f in fam_ids}
    bound = harding_bound(len(S), d)
    return fam, bound, len(fam) <= bound


def half_lattice_pairs(box_lo, box_hi) -> tuple[int, int]:
    """Count pairs (Lambda cap B, Lambda cap B cap H) with Lambda spanned by <= d points of B.

    Returns (pair count, M) with M = |B cap Z^d|.
    """
    pts = _box(box_lo, box_hi)
    d = len(box_lo)
    M = len(pts)
    pairs = set()
    seen = set()
    for r in range(d + 1):
        for combo in itertools.combinations(range(M), r):
            lat = span_lattice([pts[i].tolist() for i in combo], d)
            if lat in seen:
                continue
            seen.add(lat)
            inside = lat.contains_many(pts)
            members = frozenset(tuple(int(x) for x in p) for p in pts[inside])
            fam, _, _ = halfspace_cuts(list(members))
            for f in fam:
                pairs.add((members, f))
    return len(pairs), M


# ---------------------------------------------------------------------------
# prefix counting


def _as_matrix(h_list) -> np.ndarray:
    return np.array([[int(x) for x in h] for h in h_list], dtype=np.int64)


def g_alpha(h_list, alpha) -> list[int]:
    """floor(sum alpha_i h_i(n)) for n in [N], exact for rational alpha."""
    H = _as_matrix(h_list)
    qs = [Fraction(a) for a in alpha]
    den = math.lcm(*(q.denominator for q in qs))
    coef = np.array([int(q * den) for q in qs], dtype=object)
    num = H.T.astype(object) @ coef
    return [int(x) // den for x in num]


@dataclass
class PrefixCountReport:
    d: int
    N: int
    H: int
    R: int
    step: Fraction
    grid_points: int
    count: int
    envelope: int
    lower_bound: bool = True


def prefix_count_experiment(h_list, R: int, step) -> PrefixCountReport:
    """Distinct prefixes g_alpha|[N] over the grid alpha in (step Z)^d cap [-R, R)^d.

    The count is a lower bound for the number over all real alpha.
    """
    H = _as_matrix(h_list)
    d, N = H.shape
    step = Fraction(step)
    k = int(2 * R / step)
    if k ** d > 10 ** 7:
        raise TooLarge(f"{k ** d} grid points")
    den = step.denominator
    grid = np.arange(k, dtype=np.int64) * step.numerator - R * den
    pts = np.stack(np.meshgrid(*([grid] * d), indexing="ij"), axis=-1).reshape(-1, d)
    vals = np.floor_divide(pts @ H, den)
    count = len(np.unique(vals, axis=0))
    Hmax = int(np.abs(H).max()) if H.size else 0
    return PrefixCountReport(d, N, Hmax, R, step, len(pts), count, R ** d * max(Hmax, 1) ** (3 * d * d))


@dataclass
class Reconstruction:
    alpha_star: tuple
    eps: Fraction
    box: tuple
    lattice: IntLattice
    lattice_in_box: frozenset
    positive_in_box: frozenset
    values: list
    cases: tuple = (0, 0, 0)  # outside Lambda, in Lambda+, in Lambda minus Lambda+


def _reconstruct_unit(H: np.ndarray, alpha: Sequence[Fraction], max_rounds: int = 40) -> Reconstruction:
    d, N = H.shape
    Hm = int(np.abs(H).max()) if H.size else 0
    Hm = max(Hm, 1)
    dH = d * Hm
    lo = [-dH] + [-Hm] * d
    hi = [dH] + [Hm] * d
    one_alpha = [Fraction(1)] + list(alpha)
    box = _box(lo, hi)
    eps = Fraction(1, 100 * dH ** d)
    for _ in range(max_rounds):
        # alpha* on the grid (eps / dH) Z, within eps / dH of alpha
        g = eps / dH
        a_star = tuple(math.floor(a / g) * g for a in alpha)
        # relations inside the box; B is within (-(dH+1), dH+1)^(d+1)
        keep = _abs_less(one_alpha, box, eps)
        lat = span_lattice(box[keep].tolist(), d + 1)
        in_lat = box[lat.contains_many(box)]
        vals = _exact_dot(one_alpha, in_lat)
        if all(abs(v) < Fraction(1, 2) for v in vals):
            break
        eps /= 10
    else:
        raise TooLarge("no admissible eps found")
    lam = frozenset(tuple(int(x) for x in r) for r in in_lat)
    pos = frozenset(tuple(int(x) for x in r) for r, v in zip(in_lat, vals) if v >= 0)
    out, cases = [], [0, 0, 0]
    for n in range(N):
        s = sum(a * int(H[i, n]) for i, a in enumerate(a_star))
        h0 = -math.floor(s + Fraction(1, 2))
        hv = (h0,) + tuple(int(H[i, n]) for i in range(d))
        case = 0 if hv not in lam else (1 if hv in pos else 2)
        cases[case] += 1
        out.append(math.floor(s + (0, Fraction(1, 2), Fraction(-1, 2))[case]))
    return Reconstruction(a_star, eps, (tuple(lo), tuple(hi)), lat, lam, pos, out, tuple(cases))


def _exact_dot(alpha, pts):
    qs = [Fraction(a) for a in alpha]
    den = math.lcm(*(q.denominator for q in qs))
    coef = np.array([int(q * den) for q in qs], dtype=object)
    num = pts.astype(object) @ coef if len(pts) else []
    return [Fraction(int(x), den) for x in num]


def reconstruct_prefix(h_list, alpha) -> tuple[list[int], Reconstruction]:
    """Rebuild g_alpha|[N] from (alpha*, Lambda cap B, Lambda+ cap B).

    alpha is split as floor(alpha) + frac(alpha); the fractional part goes
    through the three-case formula and the integer part adds
    sum floor(alpha_i) h_i(n) back.
    """
    H = _as_matrix(h_list)
    alpha = [Fraction(a) for a in alpha]
    ip = [math.floor(a) for a in alpha]
    fp = [a - i for a, i in zip(alpha, ip)]
    rec = _reconstruct_unit(H, fp)
    shift = (np.array(ip, dtype=np.int64) @ H).tolist() if len(ip) else [0] * H.shape[1]
    return [v + int(s) for v, s in zip(rec.values, shift)], rec


def sample_rationals(d: int, count: int, R: int = 1, max_den: int = 1000, seed: int = 0):
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        out.append(tuple(Fraction(rng.randrange(-R * q, R * q), q)
                         for q in (rng.randint(1, max_den) for _ in range(d))))
    return out
