"""Closed-form bounds and point identification for PNS, PN and PS.

Every function takes exact :class:`~probcause.model.JointDistribution` and/or
:class:`~probcause.model.CausalEffects` values and returns a
:class:`BoundsReport` whose intervals are exact rationals.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Optional

from .errors import (
    InconsistentExogeneityDeclaration,
    Infeasible,
    MissingEvidence,
    MonotonicityIncompatible,
    UndefinedConditional,
)
from .model import (
    NO_ASSUMPTIONS,
    ONE,
    ZERO,
    AssumptionSet,
    CausalEffects,
    Interval,
    JointDistribution,
)

MEASURES = ("pns", "pn", "ps")

VACUOUS = "vacuous"
UNDEFINED = "undefined"
OBSERVATIONAL = "observational bounds"
EXPERIMENTAL = "experimental bounds"
COMBINED = "combined bounds"
MONOTONE_EFFECTS = "monotone effect bounds"
THEOREM_1 = "Theorem 1"
THEOREM_2 = "Theorem 2"
THEOREM_3 = "Theorem 3"
THEOREM_4 = "Theorem 4"
MONOTONE_EXPERIMENTAL = "monotone experimental identification"


@dataclass(frozen=True)
class AttributionMeasures:
    """Epidemiological attribution measures; ``None`` where a denominator vanishes.

    ``rr``, ``err`` and ``relative_difference`` use the observational
    conditionals P(y|x), P(y|x') when a joint distribution is available and
    fall back to the experimental rates otherwise. ``experimental_err`` is
    always (P(y_x) - P(y_x')) / P(y_x), the naive trial-based figure.
    """

    rr: Optional[Fraction] = None
    err: Optional[Fraction] = None
    cerr: Optional[Fraction] = None
    relative_difference: Optional[Fraction] = None
    experimental_rr: Optional[Fraction] = None
    experimental_err: Optional[Fraction] = None

    @property
    def rr_exceeds_two(self) -> Optional[bool]:
        """Courtroom threshold; under exogeneity RR > 2 forces PN > 1/2."""
        return None if self.rr is None else self.rr > 2


@dataclass(frozen=True)
class BoundsReport:
    pns: Interval
    pn: Optional[Interval]
    ps: Optional[Interval]
    provenance: dict = field(default_factory=dict)
    effect_bounds: Optional[tuple[Interval, Interval]] = None
    attribution: Optional[AttributionMeasures] = None

    def get(self, name: str) -> Optional[Interval]:
        return getattr(self, name)

    def with_attribution(self, attribution: Optional[AttributionMeasures]) -> "BoundsReport":
        return replace(self, attribution=attribution)


def _ratio(num: Fraction, den: Fraction) -> Optional[Fraction]:
    return None if den == 0 else num / den


def _scaled(interval: Interval, den: Fraction, *, identified: bool = False) -> Optional[Interval]:
    if den == 0:
        return None
    return Interval(interval.lower / den, interval.upper / den, identified=identified)


def _ratio_interval(lo_num, hi_num, den: Fraction) -> Optional[Interval]:
    """[max(0, lo_num/den), min(1, hi_num/den)], or None for a zero denominator."""
    if den == 0:
        return None
    return Interval(max(ZERO, lo_num / den), min(ONE, hi_num / den))


def _point(value: Optional[Fraction]) -> Optional[Interval]:
    return None if value is None else Interval.point(value)


def _provenance(report_kind: dict, **components: Optional[Interval]) -> dict:
    prov = dict(report_kind)
    for name, interval in components.items():
        if interval is None:
            prov[name] = UNDEFINED
        elif interval.vacuous:
            prov[name] = VACUOUS
    return prov


def _conditionals(joint: JointDistribution) -> tuple[Fraction, Fraction]:
    if joint.px == 0 or joint.px_prime == 0:
        raise UndefinedConditional("exogeneity formulas need 0 < P(x) < 1")
    return joint.py_given_x, joint.py_given_x_prime


def compatibility_violation(joint: JointDistribution, effects: CausalEffects) -> Optional[str]:
    """First violated inequality of the cross-study constraint, or None."""
    checks = (
        (joint.xy <= effects.py_x, "P(x,y) <= P(y_x)"),
        (effects.py_x <= 1 - joint.xy_prime, "P(y_x) <= 1 - P(x,y')"),
        (joint.x_prime_y <= effects.py_x_prime, "P(x',y) <= P(y_x')"),
        (effects.py_x_prime <= 1 - joint.x_prime_y_prime, "P(y_x') <= 1 - P(x',y')"),
    )
    for ok, text in checks:
        if not ok:
            return text
    return None


def monotonicity_violation(joint: JointDistribution, effects: CausalEffects) -> Optional[str]:
    """First violated inequality of the monotone cross-study constraint, or None."""
    checks = (
        (joint.py <= effects.py_x, "P(y) <= P(y_x)"),
        (effects.py_x <= 1 - joint.xy_prime, "P(y_x) <= 1 - P(x,y')"),
        (joint.x_prime_y <= effects.py_x_prime, "P(x',y) <= P(y_x')"),
        (effects.py_x_prime <= joint.py, "P(y_x') <= P(y)"),
    )
    for ok, text in checks:
        if not ok:
            return text
    return None


def attribution_measures(
    joint: Optional[JointDistribution], effects: Optional[CausalEffects]
) -> AttributionMeasures:
    rates = None
    if joint is not None and joint.px > 0 and joint.px_prime > 0:
        rates = (joint.py_given_x, joint.py_given_x_prime)
    elif joint is None and effects is not None:
        rates = (effects.py_x, effects.py_x_prime)
    rr = err = rd = cerr = None
    if rates is not None:
        a, b = rates
        rr = _ratio(a, b)
        err = _ratio(a - b, a)
        rd = _ratio(a - b, 1 - b)
    exp_rr = exp_err = None
    if effects is not None:
        exp_rr = _ratio(effects.py_x, effects.py_x_prime)
        exp_err = _ratio(effects.py_x - effects.py_x_prime, effects.py_x)
        if joint is not None and err is not None:
            cerr = err + (joint.py_given_x_prime - effects.py_x_prime) / joint.xy
    return AttributionMeasures(rr, err, cerr, rd, exp_rr, exp_err)


def bounds_observational(joint: JointDistribution) -> BoundsReport:
    """Bounds from P(X, Y) alone: PNS <= P(x,y) + P(x',y'); PN and PS unconstrained."""
    pns = Interval(ZERO, joint.xy + joint.x_prime_y_prime)
    effects = (
        Interval(joint.xy, 1 - joint.xy_prime),
        Interval(joint.x_prime_y, 1 - joint.x_prime_y_prime),
    )
    # unconstrained, but still undefined when the conditioning cell is empty
    pn = Interval.unit() if joint.xy else None
    ps = Interval.unit() if joint.x_prime_y_prime else None
    prov = _provenance(
        {"pns": OBSERVATIONAL, "effects": OBSERVATIONAL}, pns=pns, pn=pn, ps=ps
    )
    return BoundsReport(pns, pn, ps, prov, effect_bounds=effects)


def bounds_experimental(effects: CausalEffects) -> BoundsReport:
    pns = Interval(
        max(ZERO, effects.py_x - effects.py_x_prime),
        min(effects.py_x, effects.py_prime_x_prime),
    )
    pn, ps = Interval.unit(), Interval.unit()
    prov = _provenance({"pns": EXPERIMENTAL}, pns=pns, pn=pn, ps=ps)
    return BoundsReport(pns, pn, ps, prov)


def bounds_combined(joint: JointDistribution, effects: CausalEffects) -> BoundsReport:
    """Sharp bounds from observational and experimental data with no assumptions."""
    violation = compatibility_violation(joint, effects)
    if violation is not None:
        raise Infeasible(f"evidence is incompatible: {violation} fails")
    py = joint.py
    yx, yx_ = effects.py_x, effects.py_x_prime
    pns = Interval(
        max(ZERO, yx - yx_, py - yx_, yx - py),
        min(
            yx,
            effects.py_prime_x_prime,
            joint.xy + joint.x_prime_y_prime,
            yx - yx_ + joint.xy_prime + joint.x_prime_y,
        ),
    )
    pn = _ratio_interval(py - yx_, effects.py_prime_x_prime - joint.x_prime_y_prime, joint.xy)
    ps = _ratio_interval(yx - py, yx - joint.xy, joint.x_prime_y_prime)
    prov = _provenance({m: COMBINED for m in MEASURES}, pns=pns, pn=pn, ps=ps)
    return BoundsReport(pns, pn, ps, prov)


def _exogenous_from_rates(a: Fraction, b: Fraction, label: str) -> BoundsReport:
    pns = Interval(max(ZERO, a - b), min(a, 1 - b))
    pn = _scaled(pns, a)
    ps = _scaled(pns, 1 - b)
    prov = _provenance({m: label for m in MEASURES}, pns=pns, pn=pn, ps=ps)
    return BoundsReport(pns, pn, ps, prov)


def bounds_exogenous(joint: JointDistribution) -> BoundsReport:
    """Bounds when the exposure is unconfounded; PN and PS are PNS rescaled."""
    a, b = _conditionals(joint)
    report = _exogenous_from_rates(a, b, THEOREM_1)
    return report.with_attribution(attribution_measures(joint, None))


def strong_exo_relations(pns, joint: JointDistribution) -> tuple[Fraction, Fraction]:
    """PN and PS implied by a PNS value under strong exogeneity."""
    a, b = _conditionals(joint)
    if a == 0:
        raise UndefinedConditional("PN undefined: P(y|x) = 0")
    if b == 1:
        raise UndefinedConditional("PS undefined: P(y'|x') = 0")
    pns = Fraction(pns)
    return pns / a, pns / (1 - b)


def effect_bounds_monotone(joint: JointDistribution) -> tuple[Interval, Interval]:
    return (
        Interval(joint.py, 1 - joint.xy_prime),
        Interval(joint.x_prime_y, joint.py),
    )


def identify_monotone(joint: JointDistribution, effects: CausalEffects) -> BoundsReport:
    """Point values of PNS, PN, PS when Y cannot be prevented by X."""
    violation = compatibility_violation(joint, effects)
    if violation is not None:
        raise Infeasible(f"evidence is incompatible: {violation} fails")
    violation = monotonicity_violation(joint, effects)
    if violation is not None:
        raise MonotonicityIncompatible(f"monotonicity refuted: {violation} fails")
    py = joint.py
    pns = Interval.point(effects.py_x - effects.py_x_prime)
    pn = _point(_ratio(py - effects.py_x_prime, joint.xy))
    ps = _point(_ratio(effects.py_x - py, joint.x_prime_y_prime))
    prov = _provenance({m: THEOREM_3 for m in MEASURES}, pns=pns, pn=pn, ps=ps)
    return BoundsReport(pns, pn, ps, prov, attribution=attribution_measures(joint, effects))


def _exo_monotone_from_rates(a: Fraction, b: Fraction) -> BoundsReport:
    if a < b:
        raise MonotonicityIncompatible("monotonicity refuted: P(y|x) < P(y|x')")
    pns = Interval.point(a - b)
    pn = _point(_ratio(a - b, a))
    ps = _point(_ratio(a - b, 1 - b))
    prov = _provenance({m: THEOREM_4 for m in MEASURES}, pns=pns, pn=pn, ps=ps)
    return BoundsReport(pns, pn, ps, prov)


def identify_exo_monotone(joint: JointDistribution) -> BoundsReport:
    """Point values when X is exogenous and Y monotone: risk difference, ERR, relative difference."""
    a, b = _conditionals(joint)
    report = _exo_monotone_from_rates(a, b)
    return report.with_attribution(attribution_measures(joint, None))


def evaluate(
    joint: Optional[JointDistribution],
    effects: Optional[CausalEffects],
    assume: AssumptionSet = NO_ASSUMPTIONS,
    exogeneity_tolerance: Optional[Fraction] = None,
) -> BoundsReport:
    """Dispatch to the sharpest closed form available for the evidence and assumptions.

    Under exogeneity with both data sources the effects must match the
    observational conditionals (within ``exogeneity_tolerance``, default 0
    for exact inputs and 1e-6 otherwise); the joint's conditionals are then used.
    """
    if joint is None and effects is None:
        raise MissingEvidence("need a joint distribution, causal effects, or both")

    if joint is not None and effects is not None:
        violation = compatibility_violation(joint, effects)
        if violation is not None:
            raise Infeasible(f"evidence is incompatible: {violation} fails")

    if assume.exogeneity:
        if joint is not None:
            a, b = _conditionals(joint)
            if effects is not None:
                tol = exogeneity_tolerance
                if tol is None:
                    tol = ZERO if (joint.exact and effects.exact) else Fraction(1, 10**6)
                if abs(effects.py_x - a) > tol or abs(effects.py_x_prime - b) > tol:
                    raise InconsistentExogeneityDeclaration(
                        "exogeneity declared but P(y_x), P(y_x') differ from P(y|x), P(y|x')"
                    )
        else:
            a, b = effects.py_x, effects.py_x_prime
        if assume.monotonicity:
            report = _exo_monotone_from_rates(a, b)
        else:
            label = THEOREM_2 if assume.strong_exogeneity else THEOREM_1
            report = _exogenous_from_rates(a, b, label)
        return report.with_attribution(attribution_measures(joint, effects))

    if assume.monotonicity:
        if joint is not None and effects is not None:
            return identify_monotone(joint, effects)
        if joint is not None:
            base = bounds_observational(joint)
            prov = dict(base.provenance, effects=MONOTONE_EFFECTS)
            return replace(
                base,
                provenance=prov,
                effect_bounds=effect_bounds_monotone(joint),
                attribution=attribution_measures(joint, None),
            )
        if effects.py_x < effects.py_x_prime:
            raise MonotonicityIncompatible("monotonicity refuted: P(y_x) < P(y_x')")
        pns = Interval.point(effects.py_x - effects.py_x_prime)
        pn, ps = Interval.unit(), Interval.unit()
        prov = _provenance({"pns": MONOTONE_EXPERIMENTAL}, pns=pns, pn=pn, ps=ps)
        return BoundsReport(pns, pn, ps, prov, attribution=attribution_measures(None, effects))

    if joint is not None and effects is not None:
        report = bounds_combined(joint, effects)
    elif joint is not None:
        report = bounds_observational(joint)
    else:
        report = bounds_experimental(effects)
    return report.with_attribution(attribution_measures(joint, effects))
