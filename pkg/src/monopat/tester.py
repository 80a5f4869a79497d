"""Non-adaptive one-sided testers for length-k increasing subsequences.

Every tester here first draws its complete set of query positions from the
random stream, then asks the oracle for all of them in one batch, and only
then searches the answers.  Nothing that is queried depends on an answer, and
a witness is reported only when the queried values actually increase, so a
free sequence always yields ``fail``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .exact import PatternWitness, find_increasing
from .sequence import InvalidInput, QueryOracle, RandomStream
from .structure import num_segments


@dataclass
class TesterConfig:
    """Parameters of the combined tester.

    ``rho`` and ``q`` are derived from the other fields unless given.  The
    default constants were calibrated on hard instances (see
    ``notebooks/calibrate_constants.py``); they are tunables, not theory.
    """

    __test__ = False

    k: int
    epsilon: float
    seed: int = 0
    rho: float | None = None
    q: int | None = None
    # growing-suffix stage: extra rounds beyond ceil(log2(1/eps)), probe
    # multiplier, and the power of (1 + log2(1/eps)) inside the probe count
    suffix_round_constant: int = 0
    suffix_probe_constant: float = 1.0
    suffix_polylog_power: int = 0
    # splittable stage: rho = splittable_constant * eps, capped at 1/2
    splittable_constant: float = 3.2
    query_cap_constant: float = 100.0

    def __post_init__(self):
        if self.k < 2:
            raise InvalidInput("k must be at least 2")
        if not 0 < self.epsilon < 1:
            raise InvalidInput("epsilon must lie in (0, 1)")
        if self.rho is not None and not 0 < self.rho:
            raise InvalidInput("rho must be positive")
        if self.q is not None and self.q < 1:
            raise InvalidInput("q must be a positive integer")
        if self.suffix_probe_constant <= 0 or self.splittable_constant <= 0:
            raise InvalidInput("constants must be positive")
        if self.suffix_round_constant < 0:
            raise InvalidInput("suffix_round_constant must be non-negative")

    @property
    def r(self) -> int:
        return self.k.bit_length() - 1

    @property
    def log_inv_eps(self) -> float:
        return math.log2(1 / self.epsilon)

    def resolved_rho(self) -> float:
        if self.rho is not None:
            return float(self.rho)
        return min(0.5, self.splittable_constant * self.epsilon)

    def query_cap(self, n: int) -> int:
        if self.q is not None:
            return int(self.q)
        inv = 1 / self.resolved_rho()
        levels = max(1, (n - 1).bit_length())
        return math.ceil(self.query_cap_constant * inv * (levels * inv) ** self.r)

    def suffix_rounds(self) -> int:
        return math.ceil(self.log_inv_eps) + self.suffix_round_constant

    def probes_in_round(self, j: int) -> int:
        poly = (1 + self.log_inv_eps) ** self.suffix_polylog_power
        return math.ceil(self.suffix_probe_constant * 2.0 ** -j * poly / self.epsilon)


@dataclass
class TesterReport:
    __test__ = False

    outcome: PatternWitness | None
    queries_used: int
    planned_queries: np.ndarray
    round_trace: list[dict] = field(default_factory=list)

    @property
    def found(self) -> bool:
        return self.outcome is not None


def _levels(n: int) -> int:
    return (n - 1).bit_length()


# ---------------------------------------------------------------- growing suffix

def plan_growing_suffix(n: int, alpha0, a: int, rng: RandomStream) -> np.ndarray:
    """``ceil(1/alpha0)`` uniform draws, with replacement, from each segment after ``a``."""
    if not 0 < alpha0 <= 1:
        raise InvalidInput("alpha0 must lie in (0, 1]")
    if not 0 <= a < n - 1:
        raise InvalidInput(f"a={a} must lie in [0, n-1)")
    per = math.ceil(1 / alpha0)
    eta = num_segments(a, n)
    t = np.arange(1, eta + 1)
    lo = a + (1 << (t - 1))
    hi = np.minimum(a + (1 << t), n)
    lo = np.repeat(lo, per)
    span = np.repeat(hi, per) - lo
    return lo + np.floor(rng.random(lo.size) * span).astype(np.int64)


def growing_suffix_probe(oracle: QueryOracle, alpha0, a: int, k: int, rng: RandomStream) -> PatternWitness | None:
    pos = plan_growing_suffix(oracle.n, alpha0, a, rng)
    return find_increasing(pos, oracle.query_many(pos), k)


def plan_suffix(n: int, cfg: TesterConfig, rng: RandomStream) -> tuple[np.ndarray, list[dict]]:
    chunks, trace = [], []
    if n < 2:
        return np.empty(0, dtype=np.int64), trace
    for j in range(1, cfg.suffix_rounds() + 1):
        probes = cfg.probes_in_round(j)
        starts = rng.integers(0, n - 1, size=probes)
        drawn = 0
        for a in starts.tolist():
            pos = plan_growing_suffix(n, 2.0 ** -j, a, rng)
            chunks.append(pos)
            drawn += pos.size
        trace.append({"stage": "suffix", "round": j, "probes": probes, "samples": drawn})
    pos = np.concatenate(chunks) if chunks else np.empty(0, dtype=np.int64)
    return pos, trace


def sample_suffix(oracle: QueryOracle, cfg: TesterConfig, rng: RandomStream) -> PatternWitness | None:
    """Growing-suffix probes at random starts, over geometrically shrinking densities.

    All probe positions are drawn up front and queried as one batch; the
    union of the answers is searched once, which finds everything a per-probe
    search would.
    """
    pos, _ = plan_suffix(oracle.n, cfg, rng)
    if pos.size == 0:
        return None
    return find_increasing(pos, oracle.query_many(pos), cfg.k)


# ---------------------------------------------------------------- splittable

def _bernoulli(lo, hi, p, rng, wlo, whi):
    """Each position of ``[lo, hi) ∩ [wlo, whi)`` independently with probability ``p``."""
    lo, hi = max(lo, wlo), min(hi, whi)
    if hi <= lo:
        return np.empty(0, dtype=np.int64)
    if p >= 1:
        return np.arange(lo, hi, dtype=np.int64)
    m = hi - lo
    count = int(rng.binomial(m, p))
    if count == 0:
        return np.empty(0, dtype=np.int64)
    return lo + rng.choice(m, size=count, replace=False).astype(np.int64)


class _Helper:
    def __init__(self, n, rho, rng):
        self.n, self.rho, self.rng = n, rho, rng
        self.radii = 1 << np.arange(1, _levels(n) + 1, dtype=np.int64)

    def prob(self, size):
        return min(1.0, 1.0 / (self.rho * size))

    def run(self, r, lo, hi, wlo, whi):
        # Only the part of the output inside the window [wlo, whi) can survive
        # the intersections taken by the callers, so level-0 leaves sample
        # just that part; seeds still range over the whole interval.
        seeds = _bernoulli(lo, hi, self.prob(hi - lo), self.rng, lo, hi)
        wlo, whi = max(wlo, lo), min(whi, hi)
        parts = [seeds[(seeds >= wlo) & (seeds < whi)]]
        if r == 0 or seeds.size == 0:
            return parts[0]
        blo = np.maximum(seeds[:, None] - self.radii[None, :], 0)
        bhi = np.minimum(seeds[:, None] + self.radii[None, :] + 1, self.n)
        live = (np.maximum(blo, wlo) < np.minimum(bhi, whi))
        if r == 1:
            parts.append(self._leaves(blo, bhi, live, wlo, whi))
        else:
            # once the window is fully covered more sampling cannot change the result
            covered = np.zeros(whi - wlo, dtype=bool)
            covered[parts[0] - wlo] = True
            for b_lo, b_hi, ok in zip(blo.ravel().tolist(), bhi.ravel().tolist(), live.ravel().tolist()):
                if ok:
                    got = self.run(r - 1, b_lo, b_hi, wlo, whi)
                    parts.append(got)
                    covered[got - wlo] = True
                    if covered.all():
                        break
        return np.unique(np.concatenate(parts))

    def _leaves(self, blo, bhi, live, wlo, whi):
        # level-0 calls on every B_{a,j}, batched: counts first, then positions
        size = bhi - blo
        p = np.minimum(1.0, 1.0 / (self.rho * size))
        clo = np.maximum(blo, wlo)
        cnt = np.where(live, np.minimum(bhi, whi) - clo, 0)
        full = p >= 1
        counts = np.where(full, cnt, self.rng.binomial(cnt, np.where(full, 0.0, p))).ravel()
        clo, cnt, full = clo.ravel(), cnt.ravel(), full.ravel()
        out = [np.repeat(clo[full], cnt[full]) + _ramp(cnt[full])]
        part = ~full & (counts > 0)
        out.append(_distinct_draws(clo[part], cnt[part], counts[part], self.rng))
        return np.concatenate(out)


def _ramp(lengths):
    """``0, 1, .., m-1`` for every m in ``lengths``, concatenated."""
    total = int(lengths.sum())
    if total == 0:
        return np.empty(0, dtype=np.int64)
    starts = np.repeat(np.cumsum(lengths) - lengths, lengths)
    return np.arange(total, dtype=np.int64) - starts


def _sparse_draws(m, c, rng):
    """Entry index and offset of ``c`` distinct uniform offsets in ``[0, m)`` per entry.

    Draws with replacement and tops up the shortfall until every entry has
    its count.  The distinct values of an exchangeable draw sequence stopped
    at a given number of distinct values form a uniform subset.  Meant for
    ``c <= m / 2``, where few top-up rounds are needed.
    """
    span = int(m.max()) + 1
    keys = np.empty(0, dtype=np.int64)
    entry = np.arange(m.size, dtype=np.int64)
    need = c.astype(np.int64)
    while need.any():
        who = np.repeat(entry, need)
        draw = np.floor(rng.random(who.size) * m[who]).astype(np.int64)
        keys = np.unique(np.concatenate([keys, who * span + draw]))
        need = c - np.bincount(keys // span, minlength=m.size)
    return np.divmod(keys, span)


def _distinct_draws(lo, m, c, rng):
    """For each entry, ``c`` distinct positions drawn uniformly from ``[lo, lo + m)``."""
    if lo.size == 0:
        return np.empty(0, dtype=np.int64)
    out = []
    sparse = 2 * c <= m
    if sparse.any():
        who, off = _sparse_draws(m[sparse], c[sparse], rng)
        out.append(lo[sparse][who] + off)
    dense = ~sparse
    if dense.any():
        # drop a uniform (m - c)-subset from the full range
        dl, dm = lo[dense], m[dense]
        who, off = _sparse_draws(dm, dm - c[dense], rng)
        span = int(dm.max()) + 1
        every = np.repeat(np.arange(dm.size), dm) * span + _ramp(dm)
        kept = np.setdiff1d(every, who * span + off, assume_unique=True)
        w, o = np.divmod(kept, span)
        out.append(dl[w] + o)
    return np.concatenate(out)


def sample_helper(r: int, I, rho, rng: RandomStream, n: int | None = None) -> np.ndarray:
    """Recursive interval sampling; returns the sorted distinct positions drawn inside ``I``.

    ``I`` is a half-open ``(start, stop)`` pair inside ``[0, n)``; ``n``
    defaults to ``stop``.  Each position of ``I`` becomes a seed with
    probability ``min(1, 1/(rho |I|))``; for ``r > 0`` every seed ``a`` spawns
    a depth ``r-1`` call on ``[a - 2**j, a + 2**j] ∩ [0, n)`` for each
    ``j = 1 .. ceil(log2 n)``.
    """
    lo, hi = int(I[0]), int(I[1])
    n = hi if n is None else int(n)
    if r < 0:
        raise InvalidInput("r must be non-negative")
    if not 0 <= lo < hi <= n:
        raise InvalidInput(f"interval {I} is not a non-empty part of [0, {n})")
    if not rho > 0:
        raise InvalidInput("rho must be positive")
    return _Helper(n, float(rho), rng).run(r, lo, hi, lo, hi)


def expected_helper_bound(r: int, n: int, rho) -> float:
    """``(1/rho) * (ceil(log2 n) / rho) ** r``."""
    return (1 / rho) * (_levels(n) / rho) ** r


def plan_splittable(n: int, cfg: TesterConfig, rng: RandomStream) -> np.ndarray:
    return sample_helper(cfg.r, (0, n), cfg.resolved_rho(), rng, n)


def sample_splittable(oracle: QueryOracle, cfg: TesterConfig, rng: RandomStream) -> PatternWitness | None:
    A = plan_splittable(oracle.n, cfg, rng)
    if A.size > cfg.query_cap(oracle.n) or A.size == 0:
        return None
    return find_increasing(A, oracle.query_many(A), cfg.k)


# ---------------------------------------------------------------- combined

def plan_sampler(n: int, cfg: TesterConfig, rng: RandomStream):
    """Both stages' query positions, from independent child streams."""
    suffix, trace = plan_suffix(n, cfg, rng.spawn(1))
    split = plan_splittable(n, cfg, rng.spawn(2))
    cap = cfg.query_cap(n)
    trace.append({"stage": "splittable", "samples": int(split.size), "cap": cap,
                  "over_cap": bool(split.size > cap)})
    return suffix, split, trace


def sampler(oracle: QueryOracle, cfg: TesterConfig, rng: RandomStream | None = None) -> TesterReport:
    """Run both stages; a witness from either one is returned.

    ``rng`` defaults to a stream seeded by ``cfg.seed``.
    """
    rng = RandomStream(cfg.seed) if rng is None else rng
    n = oracle.n
    suffix, split, trace = plan_sampler(n, cfg, rng)
    queried_split = split if not trace[-1]["over_cap"] else np.empty(0, dtype=np.int64)
    planned = np.unique(np.concatenate([suffix, queried_split]))
    before = oracle.query_count

    found = None
    if suffix.size:
        found = find_increasing(suffix, oracle.query_many(suffix), cfg.k)
    suffix_queries = oracle.query_count - before
    if queried_split.size:
        hit = find_increasing(queried_split, oracle.query_many(queried_split), cfg.k)
        found = found if found is not None else hit
    trace.append({"stage": "totals", "suffix_queries": suffix_queries,
                  "splittable_queries": oracle.query_count - before - suffix_queries})
    return TesterReport(found, oracle.query_count - before, planned, trace)


def run_tester(seq, cfg: TesterConfig, trial: int | None = None) -> TesterReport:
    """Convenience wrapper: fresh oracle over ``seq``, stream from ``cfg.seed`` (and ``trial``)."""
    rng = RandomStream(cfg.seed) if trial is None else RandomStream.for_trial(cfg.seed, trial)
    return sampler(QueryOracle(seq), cfg, rng)
