import random
from fractions import Fraction as F

import pytest

from probcause import lp
from probcause.bounds import compatibility_violation, evaluate, monotonicity_violation
from probcause.errors import InconsistentExogeneityDeclaration, InfeasibleSystem, MissingEvidence
from probcause.model import (
    AssumptionSet,
    CausalEffects,
    JointDistribution,
    ResponseProfile,
    causation_of,
    observables_of,
)

from conftest import random_profile

MONO = AssumptionSet(monotonicity=True)
UNIFORM = JointDistribution(F(1, 4), F(1, 4), F(1, 4), F(1, 4))


def test_row_counts(table2_joint, table2_effects):
    assert lp.build_polytope(table2_joint).n_rows == 4
    assert lp.build_polytope(table2_joint, table2_effects, MONO).n_rows == 8
    strong = lp.build_polytope(UNIFORM, None, AssumptionSet(strong_exogeneity=True))
    assert strong.n_rows == 1 + 3 + 2 + 4


def test_simplex_only():
    system = lp.build_polytope(None, CausalEffects(F(1, 2), F(1, 2)))
    pair = lp.optimize(system, lp.OBJECTIVES["pns"])
    assert (pair.min, pair.max) == (0, F(1, 2))
    assert system.satisfied_by(pair.witness_max.values)


def test_golden_sharp(table2_joint, table2_effects):
    r = lp.sharp_bounds(table2_joint, table2_effects)
    assert (r.pns.lower, r.pns.upper) == (F(1, 500), F(2, 125))
    assert (r.pn.lower, r.pn.upper) == (1, 1)
    assert (r.ps.lower, r.ps.upper) == (F(1, 486), F(5, 162))
    m = lp.sharp_bounds(table2_joint, table2_effects, MONO)
    assert m.pns.lower == m.pns.upper == F(1, 500)
    assert m.ps.lower == m.ps.upper == F(1, 486)


def test_infeasible_evidence():
    j = JointDistribution(F(1, 2), 0, 0, F(1, 2))
    system = lp.build_polytope(j, CausalEffects(F(1, 4), F(1, 4)))
    assert not lp.feasible(system)
    with pytest.raises(InfeasibleSystem):
        lp.sharp_bounds(j, CausalEffects(F(1, 4), F(1, 4)))


def test_monotone_rows_exclude_prevention():
    assert not lp.feasible(lp.build_polytope(UNIFORM, CausalEffects(F(3, 10), F(7, 10)), MONO))
    assert lp.feasible(lp.build_polytope(UNIFORM, CausalEffects(F(3, 10), F(7, 10))))


def test_exogeneity_encoding():
    j = JointDistribution(F(7, 20), F(3, 20), F(3, 20), F(7, 20))
    exo = AssumptionSet(exogeneity=True)
    r = lp.sharp_bounds(j, None, exo)
    assert (r.pns.lower, r.pns.upper) == (F(2, 5), F(7, 10))
    assert (r.pn.lower, r.pn.upper) == (F(4, 7), 1)
    with pytest.raises(InconsistentExogeneityDeclaration):
        lp.build_polytope(j, CausalEffects(F(1, 2), F(3, 10)), exo)
    with pytest.raises(MissingEvidence):
        lp.build_polytope(None, CausalEffects(F(1, 2), F(1, 2)), AssumptionSet(strong_exogeneity=True))


def test_exo_monotone_vertices_are_strongly_exogenous():
    j = JointDistribution(F(7, 20), F(3, 20), F(3, 20), F(7, 20))
    system = lp.build_polytope(j, None, AssumptionSet(exogeneity=True, monotonicity=True))
    assert system.vertices
    strong = lp.build_polytope(j, None, AssumptionSet(strong_exogeneity=True))
    for v in system.vertices:
        assert strong.satisfied_by(v)


@pytest.mark.parametrize("measure", ["pns", "pn", "ps"])
@pytest.mark.parametrize("side", ["lower", "upper"])
def test_witness_attains_bound(table2_joint, table2_effects, measure, side):
    w = lp.witness_for_bound(table2_joint, table2_effects, AssumptionSet(), measure, side)
    joint, effects = observables_of(w)
    assert joint == table2_joint and effects == table2_effects
    interval = lp.sharp_bounds(table2_joint, table2_effects).get(measure)
    value = causation_of(w).get(measure)
    assert value == (interval.lower if side == "lower" else interval.upper)


def test_witness_rejects_nonlinear_targets():
    with pytest.raises(MissingEvidence):
        lp.witness_for_bound(None, CausalEffects(F(1, 2), F(1, 4)), AssumptionSet(), "pn", "lower")
    with pytest.raises(ValueError):
        lp.witness_for_bound(UNIFORM, None, AssumptionSet(), "pns", "middle")


def test_certify(table2_joint, table2_effects):
    assert lp.certify(evaluate(table2_joint, table2_effects), table2_joint, table2_effects)
    loose = evaluate(table2_joint, None)
    assert not lp.certify(loose, table2_joint, table2_effects)


def test_feasibility_matches_closed_form_tests():
    rng = random.Random(5)
    for _ in range(300):
        joint = JointDistribution(*(F(w, 12) for w in _composition(rng, 12, 4)))
        effects = CausalEffects(F(rng.randint(0, 12), 12), F(rng.randint(0, 12), 12))
        assert lp.feasible(lp.build_polytope(joint, effects)) == (compatibility_violation(joint, effects) is None)
        assert lp.feasible(lp.build_polytope(joint, effects, MONO)) == (
            monotonicity_violation(joint, effects) is None
        )


def _composition(rng, total, parts):
    cuts = sorted(rng.randint(0, total) for _ in range(parts - 1))
    return [b - a for a, b in zip([0] + cuts, cuts + [total])]


def test_vertex_enumeration_against_floating_point_solver():
    linprog = pytest.importorskip("scipy.optimize").linprog
    rng = random.Random(11)
    for n in range(60):
        profile = random_profile(rng)
        joint, effects = observables_of(profile)
        assume = [AssumptionSet(), MONO, AssumptionSet(strong_exogeneity=True)][n % 3]
        if assume.monotonicity:
            values = list(profile.values)
            values[0] += values[4] + values[5]
            values[4] = values[5] = F(0)
            joint, effects = observables_of(ResponseProfile(tuple(values)))
        if assume.strong_exogeneity:
            effects = None
        system = lp.build_polytope(joint, effects, assume)
        a_eq = [[float(c) for c in row] for row in system.rows]
        b_eq = [float(b) for b in system.rhs]
        for name, objective in lp.OBJECTIVES.items():
            exact = lp.optimize(system, objective)
            c = [float(v) for v in objective]
            lo = linprog(c, A_eq=a_eq, b_eq=b_eq, bounds=(0, None), method="highs")
            hi = linprog([-v for v in c], A_eq=a_eq, b_eq=b_eq, bounds=(0, None), method="highs")
            assert lo.status == 0 and hi.status == 0
            assert abs(lo.fun - float(exact.min)) < 1e-9, name
            assert abs(-hi.fun - float(exact.max)) < 1e-9, name
