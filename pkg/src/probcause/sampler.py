"""Random response profiles and the property suites run against them.

Profiles are deterministic functions of ``(seed, index)``. In the default
rational mode every coordinate is a ratio of small integers, so all checks
below are exact comparisons with no tolerance.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Callable, Iterable, Optional

from . import bounds, diagnostics, lp
from .errors import FloorUnsatisfiable, ProbCauseError
from .model import (
    NO_ASSUMPTIONS,
    ONE,
    ZERO,
    AssumptionSet,
    CausalEffects,
    JointDistribution,
    PROFILE_INDEX,
    ResponseProfile,
    as_fraction,
    causation_of,
    lemma1_residual,
    observables_of,
)

MAX_ATTEMPTS = 10_000

REGIMES: dict[str, AssumptionSet] = {
    "none": AssumptionSet(),
    "exogeneity": AssumptionSet(exogeneity=True),
    "monotonicity": AssumptionSet(monotonicity=True),
    "strong_exogeneity": AssumptionSet(strong_exogeneity=True),
    "exogeneity+monotonicity": AssumptionSet(exogeneity=True, monotonicity=True),
}


@dataclass(frozen=True)
class SamplerConfig:
    seed: int = 0
    count: int = 1000
    constraints: AssumptionSet = NO_ASSUMPTIONS
    floor: Fraction = Fraction(1, 100)
    mode: str = "rational"
    # integer compositions draw parts from 0..resolution
    resolution: int = 100

    def __post_init__(self):
        if isinstance(self.count, bool) or not isinstance(self.count, int) or self.count < 1:
            raise ValueError("count must be a positive integer")
        floor = as_fraction(self.floor)
        object.__setattr__(self, "floor", floor)
        if not ZERO <= floor < Fraction(1, 4):
            raise ValueError("floor must lie in [0, 1/4)")
        if self.mode not in ("rational", "float"):
            raise ValueError("mode is 'rational' or 'float'")
        if self.resolution < 2:
            raise ValueError("resolution must be at least 2")


class _Draw:
    """Per-profile random source producing exact fractions."""

    def __init__(self, config: SamplerConfig, index: int):
        self.rng = random.Random(f"probcause:{config.seed}:{index}")
        self.mode = config.mode
        self.res = config.resolution

    def simplex(self, n: int) -> list[Fraction]:
        if self.mode == "float":
            # uniform Dirichlet through exponential spacings
            while True:
                w = [Fraction(repr(self.rng.expovariate(1.0))) for _ in range(n)]
                total = sum(w)
                if total > 0:
                    return [x / total for x in w]
        while True:
            w = [self.rng.randint(0, self.res) for _ in range(n)]
            total = sum(w)
            if total:
                return [Fraction(x, total) for x in w]

    def unit(self, lo: Fraction = ZERO, hi: Fraction = ONE) -> Fraction:
        """A point of [lo, hi]."""
        if self.mode == "float":
            t = Fraction(repr(self.rng.random()))
        else:
            t = Fraction(self.rng.randint(0, self.res), self.res)
        return lo + (hi - lo) * t

    def interior(self) -> Fraction:
        """A point of the open interval (0, 1)."""
        if self.mode == "float":
            while True:
                t = Fraction(repr(self.rng.random()))
                if t:
                    return t
        return Fraction(self.rng.randint(1, self.res - 1), self.res)


def _table_with_margins(draw: _Draw, a: Fraction, b: Fraction) -> dict:
    """Distribution of (Y_x, Y_x') with P(Y_x=1)=a, P(Y_x'=1)=b."""
    t = draw.unit(max(ZERO, a + b - 1), min(a, b))
    return {(1, 1): t, (1, 0): a - t, (0, 1): b - t, (0, 0): 1 - a - b + t}


def _from_strata(q: Fraction, treated: dict, untreated: dict) -> ResponseProfile:
    mapping = {}
    for (i, j) in product((1, 0), repeat=2):
        mapping[(i, j, 1)] = q * treated[(i, j)]
        mapping[(i, j, 0)] = (1 - q) * untreated[(i, j)]
    return ResponseProfile.from_mapping(mapping)


def _raw_profile(draw: _Draw, assume: AssumptionSet) -> ResponseProfile:
    if assume.exogeneity and assume.monotonicity:
        # monotone pairs are fixed by their margins, so both strata coincide
        a = draw.unit()
        b = draw.unit(ZERO, a)
        table = {(1, 1): b, (1, 0): a - b, (0, 1): ZERO, (0, 0): 1 - a}
        return _from_strata(draw.interior(), table, table)
    if assume.strong_exogeneity:
        w = draw.simplex(4)
        table = dict(zip(product((1, 0), repeat=2), w))
        return _from_strata(draw.interior(), table, table)
    if assume.exogeneity:
        a, b = draw.unit(), draw.unit()
        return _from_strata(
            draw.interior(), _table_with_margins(draw, a, b), _table_with_margins(draw, a, b)
        )
    if assume.monotonicity:
        w = iter(draw.simplex(6))
        return ResponseProfile.from_mapping(
            {key: (ZERO if key[:2] == (0, 1) else next(w)) for key in PROFILE_INDEX}
        )
    return ResponseProfile(tuple(draw.simplex(8)))


def sample_profile(config: SamplerConfig, index: int) -> ResponseProfile:
    """Profile number ``index`` of the stream defined by ``config``."""
    draw = _Draw(config, index)
    for _ in range(MAX_ATTEMPTS):
        profile = _raw_profile(draw, config.constraints)
        joint, _ = observables_of(profile)
        if joint.xy >= config.floor and joint.x_prime_y_prime >= config.floor:
            return profile
    raise FloorUnsatisfiable(
        f"no profile met the positivity floor {config.floor} after {MAX_ATTEMPTS} draws"
    )


def sample_profiles(config: SamplerConfig) -> Iterable[ResponseProfile]:
    for index in range(config.count):
        yield sample_profile(config, index)


def witness_for_bound(joint, effects, assume, target) -> ResponseProfile:
    """Profile attaining a reported bound; ``target`` is e.g. ``("pn", "lower")``."""
    measure, side = target
    return lp.witness_for_bound(joint, effects, assume, measure, side)


# ---------------------------------------------------------------- verification


@dataclass
class VerificationReport:
    regime: str
    seed: int
    trials: int = 0
    containment_failures: int = 0
    sharpness_mismatches: int = 0
    identity_failures: int = 0
    # kind -> (largest discrepancy, profile index)
    worst: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)

    max_logged = 20

    @property
    def passed(self) -> bool:
        return not (self.containment_failures or self.sharpness_mismatches or self.identity_failures)

    def record(self, kind: str, index: int, message: str, discrepancy: Fraction = ONE) -> None:
        counter = {
            "containment": "containment_failures",
            "sharpness": "sharpness_mismatches",
            "identity": "identity_failures",
        }[kind]
        setattr(self, counter, getattr(self, counter) + 1)
        discrepancy = abs(Fraction(discrepancy))
        best = self.worst.get(kind)
        if best is None or discrepancy > best[0]:
            self.worst[kind] = (discrepancy, index)
        if len(self.failures) < self.max_logged:
            self.failures.append(f"index {index}: {kind}: {message}")

    def merge(self, other: "VerificationReport") -> None:
        self.trials += other.trials
        self.containment_failures += other.containment_failures
        self.sharpness_mismatches += other.sharpness_mismatches
        self.identity_failures += other.identity_failures
        for kind, (d, i) in other.worst.items():
            if kind not in self.worst or d > self.worst[kind][0]:
                self.worst[kind] = (d, i)
        room = self.max_logged - len(self.failures)
        self.failures.extend(other.failures[:max(room, 0)])


def _weaker(assume: AssumptionSet) -> list[AssumptionSet]:
    """All assumption sets implied by ``assume``, including itself."""
    out = []
    for exo, strong, mono in product((False, True), repeat=3):
        candidate = AssumptionSet(exo or strong, strong, mono)
        if assume.implies(candidate) and candidate not in out:
            out.append(candidate)
    return out


def _distance(interval, value: Fraction) -> Fraction:
    if value < interval.lower:
        return interval.lower - value
    return value - interval.upper


def _compare(report, name, closed, oracle, index, label) -> None:
    if closed is None and oracle is None:
        return
    if closed is None or oracle is None:
        report.record("sharpness", index, f"{label} {name}: one side undefined ({closed} vs {oracle})")
        return
    if not closed.same_bounds(oracle):
        gap = max(abs(closed.lower - oracle.lower), abs(closed.upper - oracle.upper))
        report.record(
            "sharpness",
            index,
            f"{label} {name}: closed form [{closed.lower}, {closed.upper}] "
            f"!= optimum [{oracle.lower}, {oracle.upper}]",
            gap,
        )


def check_profile(
    profile: ResponseProfile,
    assume: AssumptionSet,
    report: VerificationReport,
    index: int = 0,
    engine: Callable = bounds.evaluate,
    oracle: Callable = lp.sharp_bounds,
) -> None:
    """Run containment, sharpness and identity checks for one profile."""
    report.trials += 1
    joint, effects = observables_of(profile)
    truth = causation_of(profile)

    if truth.pn is not None and truth.ps is not None:
        residual = lemma1_residual(profile)
        if residual != 0:
            report.record("identity", index, f"PNS decomposition residual {residual}", residual)

    strongly_exogenous = assume.strong_exogeneity or (assume.exogeneity and assume.monotonicity)
    if strongly_exogenous:
        residuals = profile.strong_exogeneity_residuals()
        if any(residuals):
            report.record("identity", index, f"strong exogeneity residuals {residuals}", max(map(abs, residuals)))
        elif joint.py_given_x > 0 and joint.py_given_x_prime < 1:
            pn, ps = bounds.strong_exo_relations(truth.pns, joint)
            if (truth.pn, truth.ps) != (pn, ps):
                report.record("identity", index, f"PN/PS relations give {pn}, {ps} vs {truth.pn}, {truth.ps}")

    if assume.monotonicity:
        try:
            point = bounds.identify_monotone(joint, effects)
        except ProbCauseError as exc:
            report.record("identity", index, f"monotone identification raised {exc!r}")
        else:
            for name in bounds.MEASURES:
                got, want = point.get(name), truth.get(name)
                got = None if got is None else got.lower
                if got != want:
                    report.record("identity", index, f"monotone {name} {got} != true {want}",
                                  ONE if None in (got, want) else got - want)
            attribution = point.attribution
            if attribution.cerr is not None and attribution.cerr != point.pn.lower:
                report.record("identity", index, f"CERR {attribution.cerr} != PN {point.pn.lower}")

    if assume.exogeneity and assume.monotonicity:
        system = lp.build_polytope(joint, None, assume)
        for vertex in system.vertices:
            if any(ResponseProfile(vertex).strong_exogeneity_residuals()):
                report.record("identity", index, f"vertex {vertex} violates strong exogeneity")

    evidence = [("combined", joint, effects), ("observational", joint, None), ("experimental", None, effects)]
    for label, j, e in evidence:
        if assume.strong_exogeneity and j is None:
            continue
        try:
            closed = engine(j, e, assume)
        except ProbCauseError as exc:
            report.record("containment", index, f"{label}: engine raised {exc!r}")
            continue

        for weaker in _weaker(assume):
            if weaker.strong_exogeneity and j is None:
                continue
            outer = closed if weaker == assume else engine(j, e, weaker)
            for name in bounds.MEASURES:
                interval, value = outer.get(name), truth.get(name)
                if interval is not None and value is not None and not interval.contains(value):
                    report.record(
                        "containment", index,
                        f"{label} [{weaker.label}] true {name}={value} outside "
                        f"[{interval.lower}, {interval.upper}]",
                        _distance(interval, value),
                    )
                inner = closed.get(name)
                if inner is not None and interval is not None and not inner.within(interval):
                    report.record(
                        "containment", index,
                        f"{label} {name}: [{assume.label}] interval not inside [{weaker.label}] interval",
                    )

        try:
            sharp = oracle(j, e, assume)
        except ProbCauseError as exc:
            report.record("sharpness", index, f"{label}: oracle raised {exc!r}")
            continue
        _compare(report, "pns", closed.pns, sharp.pns, index, label)
        if assume.exogeneity and j is None:
            # PN and PS are not linear objectives without P(x, y)
            continue
        _compare(report, "pn", closed.pn, sharp.pn, index, label)
        _compare(report, "ps", closed.ps, sharp.ps, index, label)
        if closed.effect_bounds is not None or sharp.effect_bounds is not None:
            for k, name in enumerate(("P(y_x)", "P(y_x')")):
                _compare(
                    report, name,
                    None if closed.effect_bounds is None else closed.effect_bounds[k],
                    None if sharp.effect_bounds is None else sharp.effect_bounds[k],
                    index, label,
                )


def verify_bounds_trial(
    config: SamplerConfig,
    engine: Callable = bounds.evaluate,
    oracle: Callable = lp.sharp_bounds,
    start: int = 0,
    stop: Optional[int] = None,
) -> VerificationReport:
    """Check closed forms against true measures and LP optima on sampled profiles."""
    report = VerificationReport(regime=config.constraints.label, seed=config.seed)
    stop = config.count if stop is None else stop
    for index in range(start, stop):
        check_profile(sample_profile(config, index), config.constraints, report, index, engine, oracle)
    return report


def verify_profiles(
    profiles: Iterable[ResponseProfile],
    assume: AssumptionSet = NO_ASSUMPTIONS,
    engine: Callable = bounds.evaluate,
    oracle: Callable = lp.sharp_bounds,
) -> VerificationReport:
    report = VerificationReport(regime=assume.label, seed=0)
    for index, profile in enumerate(profiles):
        check_profile(profile, assume, report, index, engine, oracle)
    return report


# ------------------------------------------------------- evidence-pair suites


def sample_evidence_pair(seed: int, index: int, resolution: int = 20) -> tuple[JointDistribution, CausalEffects]:
    """A random joint and unrelated effects; roughly half are incompatible.

    A quarter of draws put each effect exactly on one of its candidate
    boundaries so ties are exercised.
    """
    rng = random.Random(f"probcause-pair:{seed}:{index}")
    while True:
        w = [rng.randint(0, resolution) for _ in range(4)]
        if sum(w):
            break
    joint = JointDistribution(*(Fraction(x, sum(w)) for x in w))
    if rng.random() < 0.25:
        yx = rng.choice([joint.xy, joint.py, 1 - joint.xy_prime])
        yx_ = rng.choice([joint.x_prime_y, joint.py, 1 - joint.x_prime_y_prime])
    else:
        yx = Fraction(rng.randint(0, resolution), resolution)
        yx_ = Fraction(rng.randint(0, resolution), resolution)
    return joint, CausalEffects(yx, yx_)


@dataclass
class FeasibilityReport:
    trials: int = 0
    feasible_pairs: int = 0
    monotone_feasible_pairs: int = 0
    compatibility_disagreements: int = 0
    monotonicity_disagreements: int = 0


def feasibility_trial(seed: int, count: int) -> FeasibilityReport:
    """Closed-form feasibility tests against LP feasibility, with and without monotonicity."""
    mono = AssumptionSet(monotonicity=True)
    out = FeasibilityReport()
    for index in range(count):
        joint, effects = sample_evidence_pair(seed, index)
        out.trials += 1
        lp_ok = lp.feasible(lp.build_polytope(joint, effects))
        lp_mono_ok = lp.feasible(lp.build_polytope(joint, effects, mono))
        out.feasible_pairs += lp_ok
        out.monotone_feasible_pairs += lp_mono_ok
        if diagnostics.check_compatibility(joint, effects).passed != lp_ok:
            out.compatibility_disagreements += 1
        if diagnostics.test_monotonicity_compatibility(joint, effects).passed != lp_mono_ok:
            out.monotonicity_disagreements += 1
    return out


def exogenous_high_risk_joint(seed: int, index: int, resolution: int = 100) -> JointDistribution:
    """A joint with 0 < P(x) < 1 and relative risk P(y|x)/P(y|x') > 2."""
    rng = random.Random(f"probcause-rr:{seed}:{index}")
    q = Fraction(rng.randint(1, resolution - 1), resolution)
    while True:
        b = Fraction(rng.randint(1, resolution // 2), resolution)
        a = Fraction(rng.randint(1, resolution), resolution)
        if a > 2 * b:
            break
    return JointDistribution(q * a, q * (1 - a), (1 - q) * b, (1 - q) * (1 - b))


@dataclass
class ThresholdReport:
    trials: int = 0
    violations: int = 0
    smallest_pn_lower: Optional[Fraction] = None


def threshold_trial(seed: int, count: int) -> ThresholdReport:
    """Under exogeneity, RR > 2 must push the PN lower bound above 1/2."""
    out = ThresholdReport()
    for index in range(count):
        joint = exogenous_high_risk_joint(seed, index)
        report = bounds.bounds_exogenous(joint)
        out.trials += 1
        lower = report.pn.lower
        if not (report.attribution.rr_exceeds_two and lower > Fraction(1, 2)):
            out.violations += 1
        if out.smallest_pn_lower is None or lower < out.smallest_pn_lower:
            out.smallest_pn_lower = lower
    return out
