"""Run the tester on a few inputs and look at where its queries go.

Run:  python notebooks/tester_walkthrough.py
"""

import numpy as np

from monopat.experiments import planted_suffix_instance
from monopat.hardness import hard_instance
from monopat.sequence import QueryOracle, RandomStream, decreasing_perm
from monopat.tester import TesterConfig, expected_helper_bound, sample_helper, sampler

n = 1 << 12
cfg = TesterConfig(k=4, epsilon=1 / 8)
print(f"rho={cfg.resolved_rho()}  cap q={cfg.query_cap(n)}  suffix rounds={cfg.suffix_rounds()}")

# Far input: a hard instance with flips (3, 9).
seq = hard_instance(n, (3, 9))
rep = sampler(QueryOracle(seq), cfg, RandomStream(1))
print("hard instance ->", rep.outcome, "using", rep.queries_used, "queries")
for row in rep.round_trace:
    print("   ", row)

# Free input: the answer is always fail, whatever the randomness.
hits = sum(sampler(QueryOracle(decreasing_perm(n)), cfg, RandomStream(2, (t,))).found for t in range(50))
print("decreasing input, 50 runs, witnesses:", hits)

# Planted growing suffixes: dense copies to the right of each block start.
# Half of every segment is marked, which makes the input 1/16-far.
inst = planted_suffix_instance(n, 4, 1 / 2, RandomStream(3), block=256)
far = TesterConfig(k=4, epsilon=1 / 16)
wins = sum(sampler(QueryOracle(inst.seq), far, RandomStream(4, (t,))).found for t in range(50))
print(f"planted suffix instance ({len(inst.certificate)} disjoint copies): {wins}/50 found")

# The splittable stage's sampler: its size against the closed-form bound.
for r in (0, 1, 2):
    sizes = [sample_helper(r, (0, 1024), 0.5, RandomStream(5, (r, t))).size for t in range(200)]
    print(f"r={r}: mean size {np.mean(sizes):.1f}, bound {expected_helper_bound(r, 1024, 0.5):.0f}")
