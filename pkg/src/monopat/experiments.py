"""Instance generators with checked far-ness certificates, and the experiment runners.

Every generated instance comes with a family of disjoint length-k
increasing tuples; each one needs its own edit, so ``|T| / n`` lower-bounds
the distance to pattern-freeness.  Generators refuse an ``epsilon`` that the
certificate cannot back.
"""

from __future__ import annotations

import csv
import itertools
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from fractions import Fraction
from pathlib import Path

import numpy as np
from scipy.stats import binomtest

from .exact import (
    DisjointFamily,
    PatternWitness,
    TupleArray,
    c_gap,
    find_pattern_exact,
    lis_length,
    maximal_disjoint_family,
    verify_family,
    verify_witness,
)
from .hardness import (
    _log2_exact,
    bin_prof,
    hard_copy_array,
    hard_instance,
    pad_instance,
    padding_layout,
    random_flip_set,
    verify_copy_profile_equivalence,
)
from .sequence import InvalidInput, QueryOracle, RandomStream, Sequence, read_sequence
from .structure import (
    GrowingSuffixCertificate,
    SplittablePair,
    segment,
    verify_growing_suffix,
    verify_splittable,
)
from .tester import TesterConfig, plan_sampler, sampler

KINDS = ("success-rate", "query-scaling", "adversary-score", "profile-bound", "oracle-validate")
SOURCES = ("hard", "planted-suffix", "planted-splittable", "file")
ROW_FIELDS = ["n", "k", "epsilon", "seed", "instance_id", "outcome", "queries_used", "wall_time_ms"]


@dataclass
class ExperimentSpec:
    kind: str = "success-rate"
    n: list[int] = field(default_factory=lambda: [1 << 12])
    k: int = 2
    epsilon: float = 0.25
    trials: int = 100
    seed: int = 0
    source: str = "hard"
    file: str | None = None
    flips: tuple[int, ...] | None = None
    alpha: float = 1 / 64
    block: int | None = None
    overrides: dict = field(default_factory=dict)
    out: str | None = None
    workers: int = 1

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidInput(f"unknown experiment kind {self.kind!r}")
        if self.source not in SOURCES:
            raise InvalidInput(f"unknown instance source {self.source!r}")
        if self.trials < 1:
            raise InvalidInput("trials must be at least 1")
        self.n = [int(x) for x in self.n]
        if not self.n or any(n < self.k for n in self.n):
            raise InvalidInput("every n must be at least k")
        if self.source == "file":
            if not self.file:
                raise InvalidInput("file source needs a path")
            self.n = [_read_cached(self.file).n]

    def tester_config(self) -> TesterConfig:
        return TesterConfig(self.k, self.epsilon, seed=self.seed, **self.overrides)


@dataclass
class ExperimentRow:
    n: int
    k: int
    epsilon: float
    seed: int
    instance_id: str
    outcome: int
    queries_used: int
    wall_time_ms: float

    def __post_init__(self):
        if self.outcome not in (0, 1):
            raise InvalidInput("outcome must be 0 or 1")
        if self.queries_used < 0:
            raise InvalidInput("queries_used must be non-negative")


@dataclass
class Instance:
    seq: Sequence
    certificate: DisjointFamily
    instance_id: str
    descriptor: dict = field(default_factory=dict)
    structure: list = field(default_factory=list)


# ---------------------------------------------------------------- generators

def padded_hard_instance(n: int, k: int, rng: RandomStream, flips=None) -> Instance:
    """Hard instance for any ``n >= k >= 2``; powers of two need no padding."""
    kp, n_prime, t, sizes = padding_layout(n, k)
    h = kp.bit_length() - 1
    flips = random_flip_set(n_prime, h, rng) if flips is None else tuple(flips)
    base = hard_instance(n_prime, flips)
    copies = hard_copy_array(n_prime, flips).rows
    seq = base if n == n_prime else pad_instance(base, n, k)
    # copy i continues with the i-th entry of every padding block
    starts = np.array(list(itertools.accumulate([n_prime] + sizes))[:-1], dtype=np.int64)
    extra = starts[None, :] + np.arange(len(copies), dtype=np.int64)[:, None]
    cert = TupleArray(k, np.hstack([copies, extra]))
    desc = {"source": "hard", "n": n, "k": k, "flip_indices": ",".join(map(str, flips))}
    return Instance(seq, cert, f"hard-{'-'.join(map(str, flips))}", desc)


def planted_suffix_instance(n: int, k: int, alpha: float, rng: RandomStream, block: int | None = None) -> Instance:
    """Blocks of size ``block``, each opening with a planted growing suffix.

    Inside a block starting at ``a`` every segment ``S_t(a)`` large enough
    receives ``floor(alpha |S_t|)`` marked positions, chosen at random; the
    marked values rise from one segment to the next and fall inside a
    segment.  Unmarked positions are decreasing and below the marks of their
    block.  Blocks occupy descending value bands, so no pattern crosses two
    blocks.
    """
    if not 0 < alpha <= 1:
        raise InvalidInput("alpha must lie in (0, 1]")
    block = n if block is None else int(block)
    if block < 2 or n % block:
        raise InvalidInput("block must divide n and be at least 2")
    vals = np.empty(n, dtype=np.int64)
    certs = []
    nb = n // block
    for b in range(nb):
        a = b * block
        marks = {}
        for t in range(1, (block - 1).bit_length() + 1):
            seg = segment(a, t, a + block)
            m = math.floor(alpha * len(seg))
            if m:
                marks[t] = sorted(rng.choice(np.arange(seg.start, seg.stop), size=m, replace=False).tolist())
        marked = [i for t in sorted(marks) for i in marks[t]]
        base = (nb - 1 - b) * block
        plain = [i for i in range(a, a + block) if i not in set(marked)]
        vals[plain] = base + np.arange(len(plain) - 1, -1, -1)
        top = base + len(plain)
        for t in sorted(marks):
            ms = marks[t]
            vals[ms] = top + np.arange(len(ms) - 1, -1, -1)
            top += len(ms)
        beta = sum((Fraction(len(ms), len(segment(a, t, a + block))) for t, ms in marks.items()), Fraction(0))
        certs.append(GrowingSuffixCertificate(a, Fraction(alpha), beta, marks))
    seq = Sequence(vals)
    cert = maximal_disjoint_family(seq, k)
    desc = {"source": "planted-suffix", "n": n, "k": k, "alpha": alpha, "block": block}
    return Instance(seq, cert, f"suffix-a{alpha:g}-b{block}", desc, certs)


def _splittable_block(k: int, size: int, cuts) -> tuple[list[int], list[tuple[int, ...]], tuple]:
    """Relative ranks and tuples for one block, split recursively.

    ``cuts[k]`` is the split point c used for patterns of length k.  The
    block is cut into thirds L, M, R; L holds the c-prefixes (built the same
    way for length c) in a low band, R the suffixes in a high band, and M is
    a decreasing filler below both.
    """
    if k == 1 or size < 3:
        return list(range(size - 1, -1, -1)), [(i,) for i in range(size)] if k == 1 else [], ()
    c = cuts.get(k, k // 2)
    if not 1 <= c < k:
        raise InvalidInput(f"split point {c} invalid for length {k}")
    third = size // 3
    sl, sm, sr = third, third, size - 2 * third
    lv, lt, _ = _splittable_block(c, sl, cuts)
    rv, rt, _ = _splittable_block(k - c, sr, cuts)
    mv = list(range(sm - 1, -1, -1))
    vals = [v + sm for v in lv] + mv + [v + sm + sl for v in rv]
    shift = sl + sm
    tuples = [p + tuple(x + shift for x in s) for p, s in zip(lt, rt)]
    return vals, tuples, (c, sl, sm)


def planted_splittable_instance(n: int, k: int, block: int | None = None, cuts=None) -> Instance:
    """Blocks in descending value bands, each a recursively splittable layout."""
    block = n if block is None else int(block)
    if block < 3 or n % block:
        raise InvalidInput("block must divide n and be at least 3")
    cuts = dict(cuts or {})
    vals = np.empty(n, dtype=np.int64)
    tuples = []
    pairs = []
    nb = n // block
    for b in range(nb):
        a = b * block
        bv, bt, (c, sl, sm) = _splittable_block(k, block, cuts)
        vals[a:a + block] = np.asarray(bv) + (nb - 1 - b) * block
        mine = [tuple(x + a for x in t) for t in bt]
        tuples += mine
        pairs.append(SplittablePair((a, a + block), DisjointFamily(k, mine), c,
                                    (a, a + sl), (a + sl, a + sl + sm), (a + sl + sm, a + block)))
    seq = Sequence(vals)
    cert = DisjointFamily(k, tuples)
    desc = {"source": "planted-splittable", "n": n, "k": k, "block": block}
    return Instance(seq, cert, f"splittable-b{block}", desc, pairs)


def planted_cgap_family(n: int, k0: int, c: int, count: int, rng: RandomStream, min_gap: int = 2) -> DisjointFamily:
    """Random disjoint length-``k0`` tuples whose first largest gap sits at ``c``.

    Each tuple is drawn in a fresh window to the right of the previous one:
    the c-gap is drawn first, the other gaps strictly smaller.
    """
    if not 1 <= c < k0:
        raise InvalidInput("c must lie in [1, k0-1]")
    if min_gap < 2:
        raise InvalidInput("min_gap must be at least 2")
    out = []
    pos = 0
    for _ in range(count):
        big = int(rng.integers(min_gap, min_gap + 64))
        # gaps before c strictly smaller than the c-gap, gaps after it at most equal
        gaps = [int(rng.integers(1, big if j < c - 1 else big + 1)) for j in range(k0 - 1)]
        gaps[c - 1] = big
        start = pos + int(rng.integers(0, 4))
        tup = list(itertools.accumulate([start] + gaps))
        if tup[-1] >= n:
            break
        out.append(PatternWitness(tup))
        pos = tup[-1] + 1
    fam = DisjointFamily(k0, out)
    assert all(c_gap(t.indices) == c for t in fam)
    return fam


def _validate(inst: Instance, k: int) -> Instance:
    if not verify_family(inst.seq, inst.certificate):
        raise AssertionError(f"certificate of {inst.instance_id} failed verification")
    for s in inst.structure:
        if isinstance(s, GrowingSuffixCertificate) and not verify_growing_suffix(inst.seq, s):
            raise AssertionError(f"growing-suffix certificate at {s.a} failed")
        if isinstance(s, SplittablePair):
            alpha = Fraction(min(s.L[1] - s.L[0], s.M[1] - s.M[0], s.R[1] - s.R[0]), s.I[1] - s.I[0])
            beta = Fraction(len(s.T), s.I[1] - s.I[0])
            if not verify_splittable(inst.seq, s, alpha, beta):
                raise AssertionError(f"splittable certificate on {s.I} failed")
    return inst


_FILE_CACHE: dict[str, Sequence] = {}


def _read_cached(path) -> Sequence:
    key = str(Path(path).resolve())
    if key not in _FILE_CACHE:
        _FILE_CACHE[key] = read_sequence(path)
    return _FILE_CACHE[key]


def generate_instance(spec: ExperimentSpec, trial: int, n: int | None = None) -> Instance:
    """The trial's instance; its certificate is checked against the full sequence."""
    n = spec.n[0] if n is None else n
    rng = RandomStream(spec.seed, (n, trial, 0))
    if spec.source == "file":
        seq = _read_cached(spec.file)
        cert = maximal_disjoint_family(seq, spec.k)
        return _validate(Instance(seq, cert, Path(spec.file).name, {"source": "file", "path": spec.file}), spec.k)
    if spec.source == "hard":
        inst = padded_hard_instance(n, spec.k, rng, spec.flips)
    elif spec.source == "planted-suffix":
        inst = planted_suffix_instance(n, spec.k, spec.alpha, rng, spec.block)
    else:
        inst = planted_splittable_instance(n, spec.k, spec.block)
    inst = _validate(inst, spec.k)
    if len(inst.certificate) < spec.epsilon * n:
        raise InvalidInput(
            f"{inst.instance_id} certifies distance {len(inst.certificate)}/{n}, below epsilon={spec.epsilon}"
        )
    return inst


# ---------------------------------------------------------------- statistics & io

def wilson_interval(successes: int, trials: int, confidence: float = 0.95) -> tuple[float, float]:
    ci = binomtest(successes, trials).proportion_ci(confidence_level=confidence, method="wilson")
    return float(ci.low), float(ci.high)


def fit_log_log_slope(ns, queries) -> float:
    """Slope of ``log(queries)`` against ``log(log2 n)``."""
    x = np.log(np.log2(np.asarray(ns, dtype=float)))
    y = np.log(np.asarray(queries, dtype=float))
    return float(np.polyfit(x, y, 1)[0])


def write_csv(path, header, rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for r in rows:
            w.writerow([getattr(r, h) for h in header] if not isinstance(r, (list, tuple, dict)) else
                       ([r[h] for h in header] if isinstance(r, dict) else r))


def _summary_path(out) -> Path:
    p = Path(out)
    return p.with_name(p.stem + ".summary" + p.suffix)


def parse_config(path) -> dict[str, str]:
    """``key=value`` lines; blank lines and ``#`` comments ignored."""
    out = {}
    for num, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InvalidInput(f"{path}:{num}: expected key=value")
        key, value = line.split("=", 1)
        out[key.strip()] = value.strip()
    return out


_TESTER_FIELDS = {f.name for f in fields(TesterConfig)} - {"k", "epsilon", "seed"}


def spec_from_mapping(values: dict, base: ExperimentSpec | None = None) -> ExperimentSpec:
    """Build a spec from string values (config file or CLI), on top of ``base``."""
    d = asdict(base) if base is not None else asdict(ExperimentSpec())
    overrides = dict(d.pop("overrides"))
    for key, raw in values.items():
        if raw is None:
            continue
        raw = str(raw)
        key = {"eps": "epsilon", "instance": "source"}.get(key, key)
        if key in _TESTER_FIELDS:
            overrides[key] = float(raw) if key in ("rho", "suffix_probe_constant", "splittable_constant",
                                                   "query_cap_constant") else int(raw)
        elif key == "n":
            d["n"] = [int(eval_pow(x)) for x in raw.split(",") if x.strip()]
        elif key in ("k", "trials", "seed", "workers", "block"):
            d[key] = int(raw)
        elif key in ("epsilon", "alpha"):
            d[key] = float(Fraction(raw))
        elif key == "flips":
            d[key] = tuple(int(x) for x in raw.split(",") if x.strip())
        elif key in ("kind", "source", "file", "out"):
            d[key] = raw
        else:
            raise InvalidInput(f"unknown setting {key!r}")
    if d["source"] not in SOURCES:
        d["file"], d["source"] = d["source"], "file"
    return ExperimentSpec(overrides=overrides, **d)


def eval_pow(text: str) -> int:
    """``4096``, ``2^12`` or ``2**12``."""
    text = text.strip().replace("**", "^")
    if "^" in text:
        b, e = text.split("^")
        return int(b) ** int(e)
    return int(text)


# ---------------------------------------------------------------- runners

def _one_trial(args):
    spec, n, trial = args
    inst = generate_instance(spec, trial, n)
    cfg = spec.tester_config()
    t0 = time.perf_counter()
    oracle = QueryOracle(inst.seq)
    rep = sampler(oracle, cfg, RandomStream(spec.seed, (n, trial, 1)))
    ms = (time.perf_counter() - t0) * 1000
    if rep.outcome is not None and not _witness_ok(inst.seq, rep.outcome, spec.k):
        raise AssertionError("tester returned an invalid witness")
    return ExperimentRow(n, spec.k, spec.epsilon, spec.seed, inst.instance_id, int(rep.found),
                         rep.queries_used, round(ms, 3))


def _witness_ok(seq, w, k):
    return w.k == k and verify_witness(seq, w)


def _run_trials(spec: ExperimentSpec, n: int) -> list[ExperimentRow]:
    jobs = [(spec, n, t) for t in range(spec.trials)]
    if spec.workers > 1:
        with ProcessPoolExecutor(spec.workers) as pool:
            return list(pool.map(_one_trial, jobs, chunksize=max(1, len(jobs) // (4 * spec.workers))))
    return [_one_trial(j) for j in jobs]


def run_success_rate(spec: ExperimentSpec) -> tuple[list[ExperimentRow], list[dict]]:
    """One row per trial, plus a summary per n with the Wilson 95% interval.

    With ``spec.out`` set, rows go to that CSV and the summary to
    ``<stem>.summary.csv`` next to it.
    """
    rows, summary = [], []
    for n in spec.n:
        probe = generate_instance(spec, 0, n)
        got = _run_trials(spec, n)
        rows += got
        s = sum(r.outcome for r in got)
        lo, hi = wilson_interval(s, len(got))
        # generated sources are far by construction; a file is only when its certificate says so
        far = len(probe.certificate) >= spec.epsilon * n
        summary.append({"n": n, "k": spec.k, "epsilon": spec.epsilon, "trials": len(got), "successes": s,
                        "fraction": s / len(got), "wilson_low": lo, "wilson_high": hi,
                        "far": far, "pattern_present": len(probe.certificate) > 0})
    if spec.out:
        write_csv(spec.out, ROW_FIELDS, rows)
        write_csv(_summary_path(spec.out), list(summary[0]), summary)
    return rows, summary


def run_query_scaling(spec: ExperimentSpec) -> tuple[list[ExperimentRow], dict]:
    """Median queries per n and the fitted exponent against ``log2 n``."""
    if len(spec.n) < 4:
        raise InvalidInput("query scaling needs at least four values of n")
    rows, medians = [], []
    for n in spec.n:
        got = _run_trials(spec, n)
        rows += got
        medians.append(float(np.median([r.queries_used for r in got])))
    slope = fit_log_log_slope(spec.n, medians)
    summary = {"n": spec.n, "median_queries": medians, "slope": slope}
    if spec.out:
        write_csv(spec.out, ROW_FIELDS, rows)
        write_csv(_summary_path(spec.out), ["n", "median_queries"], list(zip(spec.n, medians)))
    return rows, summary


ADVERSARY_FIELDS = ["n", "k", "candidate", "q_size", "profiles", "success", "bound", "bound_ok"]


def run_adversary_score(spec: ExperimentSpec, sizes=(2, 5, 10, 20, 50)) -> list[dict]:
    """Score random query sets and the tester's own planned sets against the hard distribution."""
    rows = []
    for n in spec.n:
        L = _log2_exact(n)
        h = _log2_exact(spec.k)
        total = math.comb(L, h)
        cands = []
        for trial in range(spec.trials):
            rng = RandomStream(spec.seed, (n, trial, 2))
            for m in sizes:
                if m <= n:
                    cands.append((f"random-{m}", rng.choice(n, size=m, replace=False)))
            suffix, split, _ = plan_sampler(n, spec.tester_config(), RandomStream(spec.seed, (n, trial, 1)))
            cands.append(("tester", np.unique(np.concatenate([suffix, split]))))
        for name, Q in cands:
            prof = len(bin_prof(Q.tolist(), h, n, backend="levels"))
            success = Fraction(prof, total)
            bound = Fraction(len(Q), total)
            rows.append({"n": n, "k": spec.k, "candidate": name, "q_size": len(Q), "profiles": prof,
                         "success": float(success), "bound": float(bound), "bound_ok": success < bound})
    if spec.out:
        write_csv(spec.out, ADVERSARY_FIELDS, rows)
    return rows


PROFILE_FIELDS = ["n", "h", "q_size", "profiles", "bound_ok"]


def run_profile_bound(spec: ExperimentSpec, max_size: int = 50) -> list[dict]:
    """Random query sets of size ``1 .. max_size``; raises on any ``|prof| > |Q| - 1``."""
    rows = []
    h = _log2_exact(spec.k)
    for n in spec.n:
        for trial in range(spec.trials):
            rng = RandomStream(spec.seed, (n, trial, 3))
            m = int(rng.integers(1, min(max_size, n) + 1))
            Q = rng.choice(n, size=m, replace=False).tolist()
            prof = len(bin_prof(Q, h, n, backend="levels"))
            ok = prof <= m - 1
            rows.append({"n": n, "h": h, "q_size": m, "profiles": prof, "bound_ok": ok})
            if not ok:
                if spec.out:
                    write_csv(spec.out, PROFILE_FIELDS, rows)
                raise AssertionError(f"|bin_prof(Q)| = {prof} exceeds |Q| - 1 = {m - 1} at n={n}")
    if spec.out:
        write_csv(spec.out, PROFILE_FIELDS, rows)
    return rows


VALIDATE_FIELDS = ["check", "n", "k", "cases", "agree"]


def _brute_has_pattern(vals, k):
    return any(all(vals[a] < vals[b] for a, b in zip(t, t[1:])) for t in itertools.combinations(range(len(vals)), k))


def run_oracle_validation(spec: ExperimentSpec) -> list[dict]:
    """Cross-check the exact oracles against brute force on small inputs."""
    rows = []
    rng = RandomStream(spec.seed, (4,))
    # pattern search against subset enumeration
    agree = 0
    for _ in range(spec.trials):
        m = int(rng.integers(1, 10))
        vals = rng.integers(0, 6, size=m).tolist()
        k = int(rng.integers(1, 5))
        fast = find_pattern_exact(Sequence(vals), k) is not None
        agree += fast == _brute_has_pattern(vals, k)
        agree += (lis_length(vals) >= k) == fast
    rows.append({"check": "pattern-search", "n": 10, "k": "1-4", "cases": 2 * spec.trials, "agree": agree})
    # profile backends against each other
    agree = cases = 0
    for n, h in ((16, 1), (16, 2), (32, 2)):
        for _ in range(max(1, spec.trials // 10)):
            Q = rng.choice(n, size=int(rng.integers(1, 9)), replace=False).tolist()
            ref = bin_prof(Q, h, n, "enumerate")
            agree += bin_prof(Q, h, n, "chain") == ref == bin_prof(Q, h, n, "levels")
            cases += 1
    rows.append({"check": "profile-backends", "n": "16-32", "k": "2-4", "cases": cases, "agree": agree})
    # hard instances: copies are exactly the profiled tuples
    agree = cases = 0
    for n, h in ((16, 1), (16, 2), (64, 1), (64, 2)):
        L = _log2_exact(n)
        for flips in itertools.combinations(range(1, L + 1), h):
            agree += verify_copy_profile_equivalence(n, flips)
            cases += 1
    rows.append({"check": "copy-profile", "n": "16-64", "k": "2-4", "cases": cases, "agree": agree})
    if spec.out:
        write_csv(spec.out, VALIDATE_FIELDS, rows)
    return rows
