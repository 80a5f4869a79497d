"""How the tester's default constants were chosen.

Two quantities pull against each other.  A larger 1/rho makes the
splittable stage more reliable but grows its sample like (log n / rho)^r with
a larger leading factor, which at moderate n shows up as a steeper fitted
exponent.  This script sweeps the splittable constant and the suffix round
and probe constants and reports both effects.

Run:  python notebooks/calibrate_constants.py [--quick]
"""

import sys

import numpy as np

from monopat.experiments import ExperimentSpec, fit_log_log_slope, run_success_rate
from monopat.hardness import hard_instance
from monopat.sequence import QueryOracle, RandomStream
from monopat.tester import TesterConfig, plan_sampler, sample_splittable

quick = "--quick" in sys.argv
trials = 200 if quick else 1000
n = 1 << 12
seq = hard_instance(n, (2, 7))

print("splittable stage alone on flips (2, 7), k=4, eps=1/8")
for const in (2.4, 3.2, 4.0):
    cfg = TesterConfig(k=4, epsilon=1 / 8, splittable_constant=const)
    hits = sum(sample_splittable(QueryOracle(seq), cfg, RandomStream(1, (t,))) is not None for t in range(trials))
    print(f"  splittable_constant={const} (rho={cfg.resolved_rho():.3f}): {hits / trials:.3f}")

print("fitted exponent of planned queries, k=4")
ns = [1 << e for e in range(10, 19 if quick else 21, 2)]
for const in (3.2, 4.0):
    cfg = TesterConfig(k=4, epsilon=1 / 8, splittable_constant=const)
    med = [np.median([sum(p.size for p in plan_sampler(m, cfg, RandomStream(2, (m, t)))[:2]) for t in range(9)]) for m in ns]
    print(f"  splittable_constant={const}: {fit_log_log_slope(ns, med):.2f}")

print("combined tester, suffix constants")
for rounds, probe in ((0, 1.0), (4, 1.0), (0, 0.5)):
    spec = ExperimentSpec(kind="success-rate", n=[n], k=4, epsilon=1 / 8, trials=trials // 5, seed=3,
                          overrides={"suffix_round_constant": rounds, "suffix_probe_constant": probe})
    _, summary = run_success_rate(spec)
    s = summary[0]
    print(f"  extra rounds={rounds} probe constant={probe}: {s['fraction']:.3f}")
