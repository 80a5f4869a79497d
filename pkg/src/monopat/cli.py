"""Command-line driver for instance generation and the experiments.

Exit status: 0 when the run meets its acceptance check, 1 when it does not,
2 on invalid input.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .experiments import (
    ExperimentSpec,
    generate_instance,
    parse_config,
    run_adversary_score,
    run_oracle_validation,
    run_profile_bound,
    run_query_scaling,
    run_success_rate,
    spec_from_mapping,
)
from .sequence import InvalidInput, write_sequence

DEFAULT_N = {
    "generate": "4096",
    "test": "4096",
    "scale": ",".join(str(1 << e) for e in range(10, 21, 2)),
    "adversary": "1024",
    "profiles": "256,1024",
    "validate-oracles": "16",
}
KIND = {
    "generate": "success-rate",
    "test": "success-rate",
    "scale": "query-scaling",
    "adversary": "adversary-score",
    "profiles": "profile-bound",
    "validate-oracles": "oracle-validate",
}
TARGET = 0.9


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="monopat", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    for name, text in [
        ("generate", "write an instance and its descriptor"),
        ("test", "success rate of the tester over many trials"),
        ("scale", "median query count as n grows"),
        ("adversary", "score query sets against the hard distribution"),
        ("profiles", "check the captured-profile counting bound on random query sets"),
        ("validate-oracles", "cross-check exact oracles against brute force"),
    ]:
        s = sub.add_parser(name, help=text)
        s.add_argument("--n", help="comma-separated sizes; 2^12 notation accepted")
        s.add_argument("--k", type=int)
        s.add_argument("--eps", help="distance parameter, e.g. 0.25 or 1/8")
        s.add_argument("--trials", type=int)
        s.add_argument("--seed", type=int)
        s.add_argument("--instance", help="hard | planted-suffix | planted-splittable | path to a sequence file")
        s.add_argument("--out", help="output path (CSV, or sequence file for generate)")
        s.add_argument("--config", help="key=value file; command-line flags take precedence")
        s.add_argument("--workers", type=int, help="parallel trial processes")
    return p


def _spec(args) -> ExperimentSpec:
    values = {"n": DEFAULT_N[args.command], "kind": KIND[args.command]}
    if args.command == "scale":
        values.update(k="4", eps="1/8", trials="20")
    if args.command in ("adversary", "profiles"):
        values.update(trials="20" if args.command == "adversary" else "1000")
    if args.command == "validate-oracles":
        values.update(trials="500")
    if args.config:
        values.update(parse_config(args.config))
    for key in ("n", "k", "eps", "trials", "seed", "instance", "out", "workers"):
        v = getattr(args, key)
        if v is not None:
            values[key] = v
    return spec_from_mapping(values)


def _generate(spec: ExperimentSpec) -> int:
    n = spec.n[0]
    inst = generate_instance(spec, 0, n)
    print(f"{inst.instance_id}: n={n} k={spec.k} disjoint copies={len(inst.certificate)}")
    if spec.out:
        write_sequence(inst.seq, spec.out)
        meta = dict(inst.descriptor, seed=spec.seed)
        Path(spec.out + ".meta").write_text("".join(f"{k}={v}\n" for k, v in meta.items()))
        print(f"wrote {spec.out} and {spec.out}.meta")
    return 0


def _test(spec: ExperimentSpec) -> int:
    _, summary = run_success_rate(spec)
    status = 0
    for s in summary:
        print(f"n={s['n']} k={s['k']} eps={s['epsilon']:g}: {s['successes']}/{s['trials']} = {s['fraction']:.3f}"
              f" (95% Wilson [{s['wilson_low']:.3f}, {s['wilson_high']:.3f}])")
        if s["far"] and s["wilson_high"] < TARGET:
            status = 1
        if not s["pattern_present"] and s["successes"]:
            status = 1
    return status


def _scale(spec: ExperimentSpec) -> int:
    _, summary = run_query_scaling(spec)
    for n, m in zip(summary["n"], summary["median_queries"]):
        print(f"n={n}: median queries {m:g}")
    r = spec.k.bit_length() - 1
    print(f"fitted exponent {summary['slope']:.3f} (expected near {r})")
    return 0 if abs(summary["slope"] - r) <= 0.5 else 1


def _adversary(spec: ExperimentSpec) -> int:
    rows = run_adversary_score(spec)
    worst = max(rows, key=lambda r: r["success"] - r["bound"])
    print(f"{len(rows)} query sets scored; largest success {max(r['success'] for r in rows):.4f}")
    print(f"tightest: {worst['candidate']} |Q|={worst['q_size']} success={worst['success']:.4f} bound={worst['bound']:.4f}")
    return 0 if all(r["bound_ok"] for r in rows) else 1


def _profiles(spec: ExperimentSpec) -> int:
    try:
        rows = run_profile_bound(spec)
    except AssertionError as exc:
        print(exc)
        return 1
    print(f"{len(rows)} query sets, no violation of |prof| <= |Q| - 1")
    return 0


def _validate(spec: ExperimentSpec) -> int:
    rows = run_oracle_validation(spec)
    for r in rows:
        print(f"{r['check']}: {r['agree']}/{r['cases']} agree")
    return 0 if all(r["agree"] == r["cases"] for r in rows) else 1


COMMANDS = {
    "generate": _generate,
    "test": _test,
    "scale": _scale,
    "adversary": _adversary,
    "profiles": _profiles,
    "validate-oracles": _validate,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        spec = _spec(args)
        return COMMANDS[args.command](spec)
    except (InvalidInput, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
