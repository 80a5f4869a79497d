"""The counting argument behind the lower bound, checked numerically.

A query set Q captures at most |Q| - 1 flip profiles, so against a uniformly
random hard instance any Q succeeds with probability below |Q| / C(log n, h).

Run:  python notebooks/lower_bound.py
"""

import math

from monopat.experiments import ExperimentSpec, run_adversary_score
from monopat.hardness import bin_prof
from monopat.sequence import RandomStream

n, h = 1 << 10, 2
rng = RandomStream(0)
worst = 0.0
for _ in range(300):
    m = int(rng.integers(2, 60))
    Q = rng.choice(n, size=m, replace=False).tolist()
    worst = max(worst, len(bin_prof(Q, h, n, backend="levels")) / (m - 1))
print(f"largest |prof(Q)| / (|Q| - 1) over 300 random sets: {worst:.3f}")

# The densest way to capture profiles: all of a small aligned block.
for size in (4, 8, 16, 32):
    prof = bin_prof(range(size), h, n)
    print(f"Q = [0, {size}): {len(prof)} profiles of {math.comb(10, h)}")

rows = run_adversary_score(ExperimentSpec(kind="adversary-score", n=[n], k=4, epsilon=1 / 8, trials=5))
for row in rows[-6:]:
    print(f"{row['candidate']:>10} |Q|={row['q_size']:5d} success={row['success']:.3f} bound={row['bound']:.3f}")
