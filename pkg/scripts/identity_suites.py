"""Identity, feasibility and threshold suites at configurable sizes.

    python scripts/identity_suites.py --count 10000
"""
import argparse
import sys
import time

from probcause import bounds, lp
from probcause.model import ResponseProfile, causation_of, lemma1_residual, observables_of
from probcause.sampler import REGIMES, SamplerConfig, feasibility_trial, sample_profile, threshold_trial


def decomposition_failures(count: int, seed: int) -> int:
    config = SamplerConfig(seed=seed, count=count)
    return sum(lemma1_residual(sample_profile(config, i)) != 0 for i in range(count))


def strong_exogeneity_failures(count: int, seed: int) -> int:
    config = SamplerConfig(seed=seed, count=count, constraints=REGIMES["strong_exogeneity"])
    bad = 0
    for i in range(count):
        profile = sample_profile(config, i)
        joint, _ = observables_of(profile)
        truth = causation_of(profile)
        if any(profile.strong_exogeneity_residuals()):
            bad += 1
        elif bounds.strong_exo_relations(truth.pns, joint) != (truth.pn, truth.ps):
            bad += 1
    return bad


def exo_mono_vertex_failures(count: int, seed: int) -> int:
    assume = REGIMES["exogeneity+monotonicity"]
    config = SamplerConfig(seed=seed, count=count, constraints=assume)
    bad = 0
    for i in range(count):
        joint, _ = observables_of(sample_profile(config, i))
        for v in lp.build_polytope(joint, None, assume).vertices:
            if any(ResponseProfile(v).strong_exogeneity_residuals()):
                bad += 1
                break
    return bad


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--count", type=int, default=10_000)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    failures = 0
    for label, fn in (
        ("PNS decomposition residuals", decomposition_failures),
        ("strong-exogeneity PN/PS relations", strong_exogeneity_failures),
        ("mono+exo vertices not strongly exogenous", exo_mono_vertex_failures),
    ):
        start = time.perf_counter()
        bad = fn(args.count, args.seed)
        failures += bad
        print(f"{label:<42} {bad:>6} of {args.count}  ({time.perf_counter() - start:.1f}s)")

    f = feasibility_trial(args.seed, args.count)
    failures += f.compatibility_disagreements + f.monotonicity_disagreements
    print(f"feasibility disagreements (plain / monotone)  {f.compatibility_disagreements} / "
          f"{f.monotonicity_disagreements} of {f.trials} ({f.feasible_pairs} feasible)")

    t = threshold_trial(args.seed, min(args.count, 1000))
    failures += t.violations
    print(f"RR > 2 with PN lower <= 1/2                  {t.violations} of {t.trials} "
          f"(smallest lower bound {t.smallest_pn_lower})")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
