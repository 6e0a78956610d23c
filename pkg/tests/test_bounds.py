from fractions import Fraction as F

import pytest
from hypothesis import given, settings

from probcause import bounds, lp
from probcause.bounds import (
    THEOREM_1,
    THEOREM_3,
    THEOREM_4,
    attribution_measures,
    bounds_combined,
    bounds_experimental,
    bounds_exogenous,
    bounds_observational,
    effect_bounds_monotone,
    evaluate,
    identify_exo_monotone,
    identify_monotone,
    strong_exo_relations,
)
from probcause.errors import (
    InconsistentExogeneityDeclaration,
    Infeasible,
    MissingEvidence,
    MonotonicityIncompatible,
    UndefinedConditional,
)
from probcause.model import (
    AssumptionSet,
    CausalEffects,
    Interval,
    JointDistribution,
    causation_of,
    format_decimal,
    observables_of,
)

from conftest import profiles

UNIFORM = JointDistribution(F(1, 4), F(1, 4), F(1, 4), F(1, 4))
MONO = AssumptionSet(monotonicity=True)
EXO = AssumptionSet(exogeneity=True)


def shown(interval, digits=3):
    return format_decimal(interval.lower, digits), format_decimal(interval.upper, digits)


def test_golden_combined(table2_joint, table2_effects):
    r = bounds_combined(table2_joint, table2_effects)
    assert r.pns == Interval(F(1, 500), F(2, 125))
    assert (r.pn.lower, r.pn.upper) == (1, 1)
    assert (r.ps.lower, r.ps.upper) == (F(1, 486), F(5, 162))
    assert shown(r.pns) == ("0.002", "0.016")
    assert shown(r.pn) == ("1.0", "1.0")
    assert shown(r.ps) == ("0.002", "0.031")


def test_golden_monotone(table2_joint, table2_effects):
    r = identify_monotone(table2_joint, table2_effects)
    assert r.pns.lower == r.pns.upper == F(1, 500) and r.pns.identified
    assert r.pn.lower == 1 and r.ps.lower == F(1, 486)
    assert r.provenance["pn"] == THEOREM_3
    assert format_decimal(r.ps.lower, 3) == "0.002"
    assert r.attribution.experimental_err == F(1, 8)
    assert r.attribution.cerr == 1


def test_golden_observational_only(table2_joint):
    r = bounds_observational(table2_joint)
    assert r.pns == Interval(0, F(487, 1000))
    assert r.pn.vacuous and r.ps.vacuous
    assert r.effect_bounds == (Interval(F(1, 1000), F(501, 1000)), Interval(F(14, 1000), F(514, 1000)))


def test_golden_monotone_effect_bounds(table2_joint):
    assert effect_bounds_monotone(table2_joint) == (
        Interval(F(15, 1000), F(501, 1000)),
        Interval(F(14, 1000), F(15, 1000)),
    )


def test_golden_exogeneity_refused(table2_joint, table2_effects):
    with pytest.raises(InconsistentExogeneityDeclaration):
        evaluate(table2_joint, table2_effects, EXO)


def test_experimental_only():
    r = bounds_experimental(CausalEffects(F(7, 10), F(3, 10)))
    assert r.pns == Interval(F(2, 5), F(7, 10))
    assert r.pn.vacuous and r.ps.vacuous


def test_uniform_joint_with_effects_derived_example():
    r = bounds_combined(UNIFORM, CausalEffects(F(7, 10), F(3, 10)))
    assert r.pns == Interval(F(2, 5), F(1, 2))
    assert r.pn == Interval(F(4, 5), 1)
    assert r.ps == Interval(F(4, 5), 1)
    sharp = lp.sharp_bounds(UNIFORM, CausalEffects(F(7, 10), F(3, 10)))
    for name in ("pns", "pn", "ps"):
        assert r.get(name).same_bounds(sharp.get(name))


def test_incompatible_evidence_raises():
    j = JointDistribution(F(1, 2), 0, 0, F(1, 2))
    with pytest.raises(Infeasible) as info:
        bounds_combined(j, CausalEffects(F(1, 4), F(1, 4)))
    assert "P(x,y) <= P(y_x)" in str(info.value)


def test_exogenous_bounds_example():
    j = JointDistribution(F(7, 20), F(3, 20), F(3, 20), F(7, 20))  # P(y|x)=0.7, P(y|x')=0.3
    r = bounds_exogenous(j)
    assert r.pns == Interval(F(2, 5), F(7, 10))
    assert r.pn == Interval(F(4, 7), 1)
    assert r.ps == Interval(F(4, 7), 1)
    assert r.provenance["pn"] == THEOREM_1
    exact = identify_exo_monotone(j)
    assert exact.pns.lower == F(2, 5) and exact.pn.lower == F(4, 7) and exact.ps.lower == F(4, 7)
    assert exact.provenance["pns"] == THEOREM_4
    assert exact.attribution.err == F(4, 7)


def test_exogenous_needs_both_arms():
    with pytest.raises(UndefinedConditional):
        bounds_exogenous(JointDistribution(F(1, 2), F(1, 2), 0, 0))


def test_strong_exo_relations():
    j = JointDistribution(F(7, 20), F(3, 20), F(3, 20), F(7, 20))
    assert strong_exo_relations(F(1, 2), j) == (F(5, 7), F(5, 7))
    with pytest.raises(UndefinedConditional):
        strong_exo_relations(0, JointDistribution(0, F(1, 2), F(1, 4), F(1, 4)))


def test_monotone_violation():
    j = JointDistribution(F(1, 4), F(1, 4), F(1, 4), F(1, 4))
    with pytest.raises(MonotonicityIncompatible):
        identify_monotone(j, CausalEffects(F(3, 10), F(7, 10)))
    with pytest.raises(MonotonicityIncompatible):
        evaluate(None, CausalEffects(F(3, 10), F(7, 10)), MONO)


def test_evaluate_dispatch():
    e = CausalEffects(F(7, 10), F(3, 10))
    assert evaluate(UNIFORM, e).provenance["pns"] == bounds.COMBINED
    assert evaluate(UNIFORM, None).provenance["pns"] == bounds.OBSERVATIONAL
    assert evaluate(None, e).provenance["pns"] == bounds.EXPERIMENTAL
    r = evaluate(None, e, MONO)
    assert r.pns == Interval.point(F(2, 5)) and r.pn.vacuous
    r = evaluate(None, e, EXO)
    assert r.pns == Interval(F(2, 5), F(7, 10)) and r.pn == Interval(F(4, 7), 1)
    with pytest.raises(MissingEvidence):
        evaluate(None, None)


def test_exogeneity_tolerance_for_inexact_inputs():
    j = JointDistribution.from_probabilities([0.35, 0.15, 0.15, 0.35])
    e = CausalEffects.from_probabilities(0.7 + 1e-9, 0.3)
    assert evaluate(j, e, EXO).pns.lower == F(2, 5)
    with pytest.raises(InconsistentExogeneityDeclaration):
        evaluate(j, CausalEffects.from_probabilities(0.71, 0.3), EXO)


def test_attribution_measures():
    j = JointDistribution(F(7, 20), F(3, 20), F(3, 20), F(7, 20))
    a = attribution_measures(j, None)
    assert a.rr == F(7, 3) and a.rr_exceeds_two
    assert a.err == F(4, 7) and a.relative_difference == F(4, 7)
    assert a.cerr is None
    a = attribution_measures(j, CausalEffects(F(7, 10), F(3, 10)))
    assert a.cerr == a.err  # no confounding: the correction term vanishes


def _assert_profile_contained(profile, assume):
    joint, effects = observables_of(profile)
    truth = causation_of(profile)
    for j, e in ((joint, effects), (joint, None), (None, effects)):
        if assume.exogeneity and j is None:
            continue
        r = evaluate(j, e, assume)
        assert r.pns.contains(truth.pns)
        for name in ("pn", "ps"):
            interval = r.get(name)
            if interval is not None and truth.get(name) is not None:
                assert interval.contains(truth.get(name))


@settings(max_examples=300, deadline=None)
@given(profiles())
def test_true_measures_lie_in_bounds(profile):
    _assert_profile_contained(profile, AssumptionSet())


@settings(max_examples=300, deadline=None)
@given(profiles(monotone=True))
def test_monotone_identification_recovers_truth(profile):
    joint, effects = observables_of(profile)
    truth = causation_of(profile)
    r = identify_monotone(joint, effects)
    assert r.pns.lower == truth.pns
    if truth.pn is not None:
        assert r.pn.lower == truth.pn
        if r.attribution.cerr is not None:
            assert r.attribution.cerr == truth.pn
    if truth.ps is not None:
        assert r.ps.lower == truth.ps
    _assert_profile_contained(profile, MONO)


@settings(max_examples=200, deadline=None)
@given(profiles())
def test_closed_forms_are_sharp(profile):
    joint, effects = observables_of(profile)
    for j, e in ((joint, effects), (joint, None), (None, effects)):
        closed = evaluate(j, e)
        sharp = lp.sharp_bounds(j, e)
        for name in ("pns", "pn", "ps"):
            a, b = closed.get(name), sharp.get(name)
            assert (a is None) == (b is None)
            if a is not None:
                assert a.same_bounds(b), (name, a, b)


@settings(max_examples=200, deadline=None)
@given(profiles(monotone=True))
def test_monotone_bounds_within_unrestricted(profile):
    joint, effects = observables_of(profile)
    for j, e in ((joint, effects), (joint, None), (None, effects)):
        strong, weak = evaluate(j, e, MONO), evaluate(j, e)
        for name in ("pns", "pn", "ps"):
            if strong.get(name) is not None:
                assert strong.get(name).within(weak.get(name))
