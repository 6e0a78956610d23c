"""Closed-form bounds against exact LP optima on sampled response profiles.

    python scripts/run_verification.py --trials 10000 --workers 4

Trials are split into contiguous index ranges; each worker rebuilds the same
deterministic stream, so the merged report does not depend on ``--workers``.
"""
import argparse
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from fractions import Fraction

from probcause.report import render_verification
from probcause.sampler import REGIMES, SamplerConfig, VerificationReport, verify_bounds_trial


def _chunk(args):
    config, start, stop = args
    return verify_bounds_trial(config, start=start, stop=stop)


def run_regime(config: SamplerConfig, workers: int) -> VerificationReport:
    if workers <= 1:
        return verify_bounds_trial(config)
    step = -(-config.count // workers)
    jobs = [(config, lo, min(lo + step, config.count)) for lo in range(0, config.count, step)]
    merged = VerificationReport(regime=config.constraints.label, seed=config.seed)
    with ProcessPoolExecutor(workers) as pool:
        for part in pool.map(_chunk, jobs):
            merged.merge(part)
    return merged


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--trials", type=int, default=1000)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--floor", type=Fraction, default=Fraction(1, 100))
    parser.add_argument("--mode", choices=("rational", "float"), default="rational")
    parser.add_argument("--workers", type=int, default=1)
    parser.add_argument("--regimes", default=",".join(REGIMES))
    args = parser.parse_args()

    base = SamplerConfig(seed=args.seed, count=args.trials, floor=args.floor, mode=args.mode)
    reports = []
    for name in args.regimes.split(","):
        start = time.perf_counter()
        report = run_regime(replace(base, constraints=REGIMES[name]), args.workers)
        print(f"# {name}: {time.perf_counter() - start:.1f}s", file=sys.stderr)
        reports.append(report)
    sys.stdout.buffer.write(render_verification(reports))
    return 0 if all(r.passed for r in reports) else 3


if __name__ == "__main__":
    sys.exit(main())
