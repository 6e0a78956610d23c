"""Data-driven checks of the causal assumptions, and PN estimator guidance."""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .bounds import compatibility_violation, monotonicity_violation
from .errors import MissingEvidence, UndefinedConditional
from .model import AssumptionSet, CausalEffects, JointDistribution, ZERO

FLOAT_TOLERANCE = Fraction(1, 10**6)


class Verdict(str, enum.Enum):
    PASS = "pass"
    FAIL = "fail"
    NOT_APPLICABLE = "not-applicable"


@dataclass(frozen=True)
class Check:
    verdict: Verdict
    violated: Optional[str] = None
    # |P(y_x) - P(y|x)| and |P(y_x') - P(y|x')| for the exogeneity test
    discrepancies: Optional[tuple[Fraction, Fraction]] = None
    tolerance: Optional[Fraction] = None

    @property
    def passed(self) -> bool:
        return self.verdict is Verdict.PASS


NOT_APPLICABLE = Check(Verdict.NOT_APPLICABLE)


def check_compatibility(joint: JointDistribution, effects: CausalEffects) -> Check:
    """Can the two studies describe one population? Exact comparison."""
    violated = compatibility_violation(joint, effects)
    return Check(Verdict.FAIL if violated else Verdict.PASS, violated)


def default_tolerance(joint: JointDistribution, effects: CausalEffects) -> Fraction:
    return ZERO if (joint.exact and effects.exact) else FLOAT_TOLERANCE


def test_exogeneity(
    joint: JointDistribution, effects: CausalEffects, tolerance=None
) -> Check:
    """Compare interventional effects with observational conditionals."""
    if joint.px == 0 or joint.px_prime == 0:
        raise UndefinedConditional("exogeneity test needs 0 < P(x) < 1")
    tol = default_tolerance(joint, effects) if tolerance is None else Fraction(tolerance)
    if tol < 0:
        raise ValueError("tolerance must be nonnegative")
    d1 = abs(effects.py_x - joint.py_given_x)
    d0 = abs(effects.py_x_prime - joint.py_given_x_prime)
    ok = d1 <= tol and d0 <= tol
    violated = None
    if not ok:
        violated = "P(y_x) = P(y|x)" if d1 > tol else "P(y_x') = P(y|x')"
    return Check(Verdict.PASS if ok else Verdict.FAIL, violated, (d1, d0), tol)


# not a pytest test despite the name
test_exogeneity.__test__ = False


def test_monotonicity_compatibility(joint: JointDistribution, effects: CausalEffects) -> Check:
    """Necessary condition for a monotone response; passing does not prove monotonicity.

    Boundary equalities pass.
    """
    violated = monotonicity_violation(joint, effects)
    return Check(Verdict.FAIL if violated else Verdict.PASS, violated)


test_monotonicity_compatibility.__test__ = False


# (exogeneity, monotonicity) -> estimator per data source
_PN_GUIDE = {
    (True, True): {"experimental": "ERR", "observational": "ERR", "combined": "ERR"},
    (True, False): {"experimental": "bounds", "observational": "bounds", "combined": "bounds"},
    (False, True): {"experimental": "vacuous", "observational": "vacuous", "combined": "CERR"},
    (False, False): {"experimental": "vacuous", "observational": "vacuous", "combined": "bounds"},
}

_ESTIMATOR_TEXT = {
    "ERR": "PN is identified by the excess-risk-ratio",
    "CERR": "PN is identified by the corrected excess-risk-ratio",
    "bounds": "PN is partially identified by informative bounds",
    "vacuous": "bounds are vacuous for PN (0 <= PN <= 1)",
}


@dataclass(frozen=True)
class Guidance:
    """Which PN estimator applies for the usable assumptions and the available data."""

    exogeneity: bool
    monotonicity: bool
    data: str
    estimator: str

    @property
    def description(self) -> str:
        flags = (
            f"exogeneity {'+' if self.exogeneity else '-'}, "
            f"monotonicity {'+' if self.monotonicity else '-'}, {self.data} data"
        )
        return f"{flags}: {_ESTIMATOR_TEXT[self.estimator]}"


def guidance_for(exogeneity: bool, monotonicity: bool, data: str) -> Guidance:
    return Guidance(exogeneity, monotonicity, data, _PN_GUIDE[(exogeneity, monotonicity)][data])


def data_kind(joint: Optional[JointDistribution], effects: Optional[CausalEffects]) -> str:
    if joint is not None and effects is not None:
        return "combined"
    if joint is not None:
        return "observational"
    if effects is not None:
        return "experimental"
    raise MissingEvidence("need a joint distribution, causal effects, or both")


@dataclass(frozen=True)
class DiagnosticReport:
    compatibility: Check
    exogeneity: Check
    monotonicity_compatibility: Check
    declared: AssumptionSet
    contradictions: tuple[str, ...]
    recommendation: Guidance

    @property
    def contradicted(self) -> frozenset[str]:
        """Names of declared assumptions the data refute."""
        return frozenset(c.split(":", 1)[0] for c in self.contradictions)


def assumption_report(
    joint: Optional[JointDistribution],
    effects: Optional[CausalEffects],
    declared: AssumptionSet,
    tolerance=None,
) -> DiagnosticReport:
    kind = data_kind(joint, effects)
    compat = exo = mono = NOT_APPLICABLE
    contradictions = []
    if kind == "combined":
        compat = check_compatibility(joint, effects)
        if compat.verdict is Verdict.FAIL:
            contradictions.append(f"evidence: {compat.violated} fails")
        if joint.px > 0 and joint.px_prime > 0:
            exo = test_exogeneity(joint, effects, tolerance)
        mono = test_monotonicity_compatibility(joint, effects)
        if declared.exogeneity and exo.verdict is Verdict.FAIL:
            contradictions.append(f"exogeneity: {exo.violated} fails")
        if declared.monotonicity and mono.verdict is Verdict.FAIL:
            contradictions.append(f"monotonicity: {mono.violated} fails")
    elif declared.monotonicity:
        # a single source can still refute monotonicity (with exogeneity for a joint)
        if effects is not None and effects.py_x < effects.py_x_prime:
            contradictions.append("monotonicity: P(y_x) >= P(y_x') fails")
        elif (
            joint is not None
            and declared.exogeneity
            and joint.px > 0
            and joint.px_prime > 0
            and joint.py_given_x < joint.py_given_x_prime
        ):
            contradictions.append("monotonicity: P(y|x) >= P(y|x') fails")

    refuted = {c.split(":", 1)[0] for c in contradictions}
    usable_exo = declared.exogeneity and "exogeneity" not in refuted
    usable_mono = declared.monotonicity and "monotonicity" not in refuted
    return DiagnosticReport(
        compat,
        exo,
        mono,
        declared,
        tuple(contradictions),
        guidance_for(usable_exo, usable_mono, kind),
    )
