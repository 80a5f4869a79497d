"""Structural machinery on fully known sequences.

Scales and slack cuts of c-gap tuples, the cut sets ``A_t(ell, U)``, the
density ``v(ell, U) = sum_t |A_t| / 2**t``, the greedy interval sweep, and
exact verifiers for growing-suffix and splittable certificates.

Tuple positions ``c`` are 1-based: the c-gap sits between ``tup[c-1]`` and
``tup[c]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .exact import DisjointFamily, PatternWitness, verify_witness
from .sequence import InvalidInput, Sequence

GAMMA = Fraction(1, 3)


def segment(a: int, t: int, n: int) -> range:
    """``S_t(a) = [a + 2**(t-1), a + 2**t)`` clipped to ``[0, n)``."""
    return range(min(a + (1 << (t - 1)), n), min(a + (1 << t), n))


def num_segments(a: int, n: int) -> int:
    """``ceil(log2(n - a))``: the segments ``S_1 .. S_eta`` cover ``(a, n)``."""
    return (n - a - 1).bit_length() if n - a > 1 else 0


def scale(tup, c: int) -> int:
    """Scale t of a c-gap tuple, with ``2**t < gap <= 2**(t+1)`` (t = 0 for gap 1).

    Both neighbouring scales satisfy the closed inequality when the gap is a
    power of two; the upper one is chosen because it keeps the integer
    count of slack cuts at least ``2**t / 3`` for every gap of 2 or more.
    """
    gap = tup[c] - tup[c - 1]
    return max(0, (gap - 1).bit_length() - 1)


def _check_c(tup, c):
    if not 1 <= c < len(tup):
        raise InvalidInput(f"c={c} outside [1, {len(tup) - 1}]")


def cuts_with_slack(ell: int, tup, c: int, gamma=GAMMA) -> bool:
    tup = tuple(tup)
    _check_c(tup, c)
    gamma = Fraction(gamma)
    if not 0 < gamma < Fraction(1, 2):
        raise InvalidInput("gamma must lie in (0, 1/2)")
    lo, hi = tup[c - 1], tup[c]
    gap = hi - lo
    return lo + gamma * gap <= ell <= hi - gamma * gap


def slack_range(tup, c: int, gamma=GAMMA) -> tuple[int, int]:
    """Integer pivots ``[first, last]`` that cut ``tup`` at c with slack (empty if first > last)."""
    lo, hi = tup[c - 1], tup[c]
    gap = hi - lo
    return math.ceil(lo + gamma * gap), math.floor(hi - gamma * gap)


@dataclass
class CutSets:
    ell: int
    c: int
    gamma: Fraction = GAMMA
    A: dict[int, list[PatternWitness]] = field(default_factory=dict)

    def size(self, t: int) -> int:
        return len(self.A.get(t, ()))

    def scales(self) -> list[int]:
        return sorted(t for t, ts in self.A.items() if ts)


def cut_sets(ell: int, U: DisjointFamily, c: int, gamma=GAMMA) -> CutSets:
    out = CutSets(ell, c, Fraction(gamma))
    for tup in U:
        if cuts_with_slack(ell, tup.indices, c, gamma):
            out.A.setdefault(scale(tup.indices, c), []).append(tup)
    return out


def v_value(ell: int, U: DisjointFamily, c: int, gamma=GAMMA) -> Fraction:
    cs = cut_sets(ell, U, c, gamma)
    return sum((Fraction(len(ts), 1 << t) for t, ts in cs.A.items()), Fraction(0))


def v_profile(n: int, U: DisjointFamily, c: int, gamma=GAMMA) -> list[Fraction]:
    """``v(ell, U)`` for every ``ell`` in ``[0, n)``, exactly.

    Each tuple adds ``1 / 2**scale`` on its integer slack range; the sums are
    accumulated as integers over a common denominator.
    """
    if not len(U):
        return [Fraction(0)] * n
    top = max(scale(t.indices, c) for t in U)
    diff = [0] * (n + 1)
    for t in U:
        first, last = slack_range(t.indices, c, Fraction(gamma))
        first, last = max(first, 0), min(last, n - 1)
        if first > last:
            continue
        w = 1 << (top - scale(t.indices, c))
        diff[first] += w
        diff[last + 1] -= w
    out, run = [], 0
    den = 1 << top
    for ell in range(n):
        run += diff[ell]
        out.append(Fraction(run, den))
    return out


def mean_v_value(n: int, U: DisjointFamily, c: int, gamma=GAMMA) -> Fraction:
    return sum(v_profile(n, U, c, gamma), Fraction(0)) / n


def check_cut_bounds(cs: CutSets, k: int) -> bool:
    """Every tuple in ``A_t`` has its c-prefix in ``[ell-(k-1)2^(t+1), ell-gamma 2^t]``
    and its suffix in ``[ell+gamma 2^t, ell+(k-1)2^(t+1)]``."""
    ell, c, g = cs.ell, cs.c, cs.gamma
    for t, ts in cs.A.items():
        span = (k - 1) * (1 << (t + 1))
        for tup in ts:
            pre, suf = tup.indices[:c], tup.indices[c:]
            if not all(ell - span <= i <= ell - g * (1 << t) for i in pre):
                return False
            if not all(ell + g * (1 << t) <= i <= ell + span for i in suf):
                return False
            if len(ts) > 1 << (t + 1):
                return False
    return True


def check_scale_separation(f: Sequence, cs: CutSets, gamma=GAMMA) -> bool:
    """Across scales ``t1 >= t2 + 1 + log(1/gamma) + log(c+1)``, the (c+1)-th
    entries of the larger-scale tuples carry larger values."""
    c = cs.c
    sep = 1 + math.log2(1 / float(gamma)) + math.log2(c + 1)
    vals = f.values
    for t1 in cs.scales():
        for t2 in cs.scales():
            if t1 < t2 + sep:
                continue
            for a in cs.A[t1]:
                for b in cs.A[t2]:
                    if not vals[b.indices[c]] < vals[a.indices[c]]:
                        return False
    return True


@dataclass
class GrowingSuffixCertificate:
    a: int
    alpha: Fraction
    beta: Fraction
    D: dict[int, list[int]] = field(default_factory=dict)


def verify_growing_suffix(f: Sequence, cert: GrowingSuffixCertificate) -> bool:
    n = f.n
    if not 0 <= cert.a < n:
        return False
    eta = num_segments(cert.a, n)
    total = Fraction(0)
    for t, members in cert.D.items():
        if not members:
            continue
        if not 1 <= t <= eta:
            return False
        seg = segment(cert.a, t, n)
        if len(set(members)) != len(members) or any(b not in seg for b in members):
            return False
        density = Fraction(len(members), len(seg))
        if density > cert.alpha:
            return False
        total += density
    if total < cert.beta:
        return False
    vals = f.values
    ts = sorted(t for t, m in cert.D.items() if m)
    # neighbouring segments suffice: max D_t < min D_t' chains transitively
    for lo, hi in zip(ts, ts[1:]):
        if not vals[list(cert.D[lo])].max() < vals[list(cert.D[hi])].min():
            return False
    return True


@dataclass
class SplittablePair:
    """An interval with a family split into a prefix zone L and a suffix zone R.

    Intervals are half-open ``(start, stop)`` pairs.
    """

    I: tuple[int, int]
    T: DisjointFamily
    c: int
    L: tuple[int, int]
    M: tuple[int, int]
    R: tuple[int, int]


def _size(iv):
    return max(0, iv[1] - iv[0])


def _inside(i, iv):
    return iv[0] <= i < iv[1]


def verify_splittable(f: Sequence, p: SplittablePair, alpha, beta) -> bool:
    alpha, beta = Fraction(alpha), Fraction(beta)
    I, L, M, R = p.I, p.L, p.M, p.R
    size = _size(I)
    if size == 0 or I[0] < 0 or I[1] > f.n:
        return False
    if not (L[0] == I[0] and L[1] == M[0] and M[1] == R[0] and R[1] == I[1]):
        return False
    if min(_size(L), _size(M), _size(R)) < alpha * size:
        return False
    if Fraction(len(p.T), size) < beta:
        return False
    c = p.c
    if not 1 <= c < p.T.k0:
        return False
    vals = f.values
    for t in p.T:
        if not verify_witness(f, t):
            return False
        if not all(_inside(i, L) for i in t.indices[:c]):
            return False
        if not all(_inside(i, R) for i in t.indices[c:]):
            return False
    if len(p.T):
        top_prefix = max(vals[t.indices[c - 1]] for t in p.T)
        low_suffix = min(vals[t.indices[c]] for t in p.T)
        if not top_prefix < low_suffix:
            return False
    return True


def density_bucket_bounds(k: int, delta, C: float = 48.0) -> tuple[int, int]:
    """``(b0, b1)``: largest b0 with ``2**b0 <= 12 C k log k`` and smallest b1 with
    ``2**-b1 <= delta / (12 k**2)``."""
    logk = max(math.log2(k), 1.0)
    b0 = math.floor(math.log2(12 * C * k * logk))
    b1 = math.ceil(-math.log2(float(delta) / (12 * k * k)))
    return b0, b1


def density_buckets(n: int, V: DisjointFamily, c: int, k: int, delta, C: float = 48.0) -> dict[int, list[int]]:
    """``B_j = {ell : 2**-j <= v(ell, V) < 2**(-j+1)}`` for ``-b0 <= j <= b1``."""
    b0, b1 = density_bucket_bounds(k, delta, C)
    out: dict[int, list[int]] = {j: [] for j in range(-b0, b1 + 1)}
    for ell, v in enumerate(v_profile(n, V, c)):
        if v <= 0:
            continue
        j = 0
        while Fraction(2) ** (-j) > v:
            j += 1
        while Fraction(2) ** (-j + 1) <= v:
            j -= 1
        if j in out:
            out[j].append(ell)
    return out


def _recombine(f: Sequence, tuples: list[PatternWitness], c: int) -> list[PatternWitness]:
    """Median split: prefixes ending at or below the lower median, suffixes starting above it."""
    if not tuples:
        return []
    vals = f.values
    heads = sorted(vals[t.indices[c - 1]] for t in tuples)
    nu = heads[(len(heads) - 1) // 2]
    prefixes = sorted(t.indices[:c] for t in tuples if vals[t.indices[c - 1]] <= nu)
    suffixes = sorted(t.indices[c:] for t in tuples if vals[t.indices[c]] > nu)
    return [PatternWitness(p + s) for p, s in zip(prefixes, suffixes)]


@dataclass
class IntervalSweepResult:
    """Either the growing-suffix candidates ``H`` or a splittable collection."""

    H: list[int] | None = None
    collection: list[SplittablePair] | None = None
    q: dict[int, int | None] = field(default_factory=dict)


def greedy_disjoint_intervals(f: Sequence, B, j: int, V: DisjointFamily, c: int,
                              C_const: float = 48.0, k: int | None = None) -> IntervalSweepResult:
    n = f.n
    k = V.k0 if k is None else k
    if k < 2:
        raise InvalidInput("k must be at least 2")
    B = sorted(set(int(b) for b in B))
    if not B:
        return IntervalSweepResult(collection=[])
    lo_v, hi_v = Fraction(2) ** (-j), Fraction(2) ** (-j + 1)
    cuts = {}
    for ell in B:
        cs = cut_sets(ell, V, c)
        v = sum((Fraction(len(ts), 1 << t) for t, ts in cs.A.items()), Fraction(0))
        if not lo_v <= v <= hi_v:
            raise InvalidInput(f"v({ell}) = {v} outside [2^-{j}, 2^-{j - 1}]")
        cuts[ell] = cs
    threshold = Fraction(2) ** (-j) / Fraction(C_const * k * max(math.log2(k), 1.0))
    q: dict[int, int | None] = {}
    for ell, cs in cuts.items():
        good = [t for t, ts in cs.A.items() if Fraction(len(ts), 1 << t) >= threshold]
        q[ell] = max(good) if good else None
    H = [ell for ell in B if q[ell] is None]
    if 2 * len(H) >= len(B):
        return IntervalSweepResult(H=H, q=q)
    D = {ell for ell in B if q[ell] is not None}
    collection = []
    while D:
        ell = min(D, key=lambda x: (-q[x], x))
        t = q[ell]
        reach = k * (1 << (t + 1))
        I = (max(ell - reach, 0), min(ell + reach, n - 1) + 1)
        third = Fraction(1 << t, 3)
        l_end = math.floor(ell - third) + 1
        r_start = math.ceil(ell + third)
        L = (I[0], max(I[0], l_end))
        R = (min(max(r_start, L[1]), I[1]), I[1])
        M = (L[1], R[0])
        pairs = _recombine(f, cuts[ell].A[t], c)
        collection.append(SplittablePair(I, DisjointFamily(V.k0, pairs), c, L, M, R))
        D = {x for x in D if abs(x - ell) > 2 * reach}
    return IntervalSweepResult(collection=collection, q=q)
