"""End-to-end acceptance checks, one test per criterion.

Each test records a PASS/FAIL line that the terminal summary prints at the end.
"""

import itertools
import time
from fractions import Fraction

import numpy as np

from conftest import ACCEPTANCE
from monopat.exact import DisjointFamily, check_rematching, greedy_disjoint_tuples, maximal_disjoint_family, verify_witness
from monopat.experiments import ExperimentSpec, planted_cgap_family, run_query_scaling, run_success_rate
from monopat.hardness import all_flip_sets, bin_prof, verify_copy_profile_equivalence
from monopat.sequence import QueryOracle, RandomStream, Sequence, decreasing_perm, descending_runs
from monopat.structure import mean_v_value
from monopat.tester import TesterConfig, expected_helper_bound, sample_helper, sample_splittable, sampler


def record(num, ok, detail):
    ACCEPTANCE[num] = (bool(ok), detail)
    print(f"criterion {num}: {'PASS' if ok else 'FAIL'}  {detail}")
    assert ok, detail


def test_soundness_on_free_inputs():
    start = time.perf_counter()
    runs = found = bad = 0
    sizes = (16, 64, 256, 1024, 4096)
    for k in (2, 3, 4):
        for n in sizes:
            inputs = [decreasing_perm(n), descending_runs(n, k - 1)]
            for trial in range(10_000 // (3 * len(sizes) * 2) + 1):
                for seq in inputs:
                    cfg = TesterConfig(k=k, epsilon=0.25, seed=trial)
                    rep = sampler(QueryOracle(seq), cfg, RandomStream(11, (k, n, trial)))
                    runs += 1
                    if rep.found:
                        found += 1
                        bad += not verify_witness(seq, rep.outcome)
    # witnesses on inputs that do contain the pattern must verify too
    rng = RandomStream(12)
    witnesses = 0
    for trial in range(300):
        n = int(rng.integers(8, 300))
        k = int(rng.integers(2, 5))
        seq = Sequence(rng.generator.permutation(n))
        rep = sampler(QueryOracle(seq), TesterConfig(k=k, epsilon=0.25), RandomStream(13, (trial,)))
        if rep.found:
            witnesses += 1
            bad += not (rep.outcome.k == k and verify_witness(seq, rep.outcome))
    took = time.perf_counter() - start
    record(1, runs >= 10_000 and found == 0 and bad == 0 and took < 120,
           f"{runs} free runs, {found} false witnesses, {witnesses} witnesses checked, {bad} invalid, {took:.0f}s")


def _completeness(num, k, eps, limit):
    start = time.perf_counter()
    spec = ExperimentSpec(kind="success-rate", n=[1 << 12], k=k, epsilon=eps, trials=400, seed=2024)
    _, summary = run_success_rate(spec)
    s = summary[0]
    took = time.perf_counter() - start
    record(num, s["fraction"] >= 0.86 and took < limit,
           f"k={k} eps={eps}: {s['successes']}/400 = {s['fraction']:.3f} "
           f"(Wilson [{s['wilson_low']:.3f}, {s['wilson_high']:.3f}]), {took:.0f}s")


def test_completeness_k2():
    _completeness(2, 2, 0.25, 300)


def test_completeness_k4():
    _completeness(3, 4, 0.125, 900)


def test_query_scaling_exponent():
    ns = [1 << e for e in range(10, 21, 2)]
    out = []
    ok = True
    for k, (lo, hi) in ((4, (1.5, 2.5)), (2, (0.5, 1.5))):
        spec = ExperimentSpec(kind="query-scaling", n=ns, k=k, epsilon=0.125, trials=15, seed=7)
        _, summary = run_query_scaling(spec)
        slope = summary["slope"]
        ok &= lo <= slope <= hi
        out.append(f"k={k} exponent {slope:.2f} in [{lo}, {hi}]")
    record(4, ok, "; ".join(out))


def test_splittable_query_cap():
    worst = 0.0
    runs = 0
    over = 0
    for k in (2, 4, 8):
        for n in (256, 1024, 4096):
            for q in (None, 5, 50, 500):
                cfg = TesterConfig(k=k, epsilon=0.125, q=q)
                cap = cfg.query_cap(n)
                for trial in range(20):
                    oracle = QueryOracle(Sequence(np.arange(n)))
                    sample_splittable(oracle, cfg, RandomStream(5, (k, n, trial)))
                    runs += 1
                    over += oracle.query_count > cap
                    worst = max(worst, oracle.query_count / cap)
    record(5, over == 0, f"{runs} runs, {over} over the cap, largest queries/cap {worst:.2f}")


def test_profile_counting_bound():
    start = time.perf_counter()
    violations = checked = disagree = 0
    for n, h in itertools.product((1 << 8, 1 << 10), (1, 2)):
        rng = RandomStream(6, (n, h))
        for _ in range(1000):
            m = int(rng.integers(1, 51))
            Q = rng.choice(n, size=m, replace=False).tolist()
            # exhaustive search over all captured tuples, deduplicated by state
            prof = bin_prof(Q, h, n, backend="chain")
            violations += len(prof) > m - 1
            disagree += prof != bin_prof(Q, h, n, backend="levels")
            checked += 1
    took = time.perf_counter() - start
    record(6, violations == 0 and disagree == 0 and took < 300,
           f"{checked} query sets, {violations} violations, {disagree} backend disagreements, {took:.0f}s")


def test_hard_instance_structure():
    start = time.perf_counter()
    cases = failures = 0
    for n, k in itertools.product((16, 64, 256), (2, 4)):
        for flips in all_flip_sets(n, k.bit_length() - 1):
            cases += 1
            failures += not verify_copy_profile_equivalence(n, flips)
    took = time.perf_counter() - start
    record(7, failures == 0 and took < 300, f"{cases} flip sets, {failures} failures, {took:.0f}s")


def test_greedy_rematching():
    rng = RandomStream(8)
    failures = 0
    for _ in range(500):
        n = int(rng.integers(2, 65))
        k0 = int(rng.integers(1, 5))
        f = Sequence(rng.integers(0, n, size=n))
        full = list(maximal_disjoint_family(f, k0))
        keep = rng.random(len(full)) < rng.random()
        T0 = DisjointFamily(k0, [t for t, x in zip(full, keep) if x])
        T = greedy_disjoint_tuples(f, k0, T0)
        failures += not all(check_rematching(f, T0, T).values())
    record(8, failures == 0, f"500 random (f, T0), {failures} failures")


def test_expected_helper_size():
    n = 1 << 10
    lines = []
    ok = True
    for r, rho in itertools.product((0, 1, 2), (0.5, 0.125)):
        sizes = np.array([sample_helper(r, (0, n), rho, RandomStream(9, (r, rho, t))).size for t in range(1000)])
        mean = sizes.mean()
        se = sizes.std(ddof=1) / np.sqrt(sizes.size)
        bound = expected_helper_bound(r, n, rho)
        ok &= mean <= bound + 3 * se
        lines.append(f"r={r} rho={rho}: {mean:.3f} (se {se:.3f}) vs {bound:.4g}")
    record(9, ok, "; ".join(lines))


def test_density_of_planted_families():
    n = 1 << 12
    worst = None
    cases = 0
    ok = True
    for k0 in (2, 3, 4, 6):
        for c in range(1, k0):
            for seed in range(3):
                U = planted_cgap_family(n, k0, c, n, RandomStream(10, (k0, c, seed)))
                ratio = mean_v_value(n, U, c) / Fraction(len(U), 3 * n)
                ok &= ratio >= 1
                worst = ratio if worst is None else min(worst, ratio)
                cases += 1
    record(10, ok, f"{cases} families at n={n}, smallest mean v / (|U|/3n) = {float(worst):.3f}")
