"""Exact linear programming over response-type profiles.

The feasible set is ``{p in R^8 : A p = b, p >= 0}`` with at most nine equality
rows, so every vertex is found by enumerating bases. The coefficient matrix
only changes when strong exogeneity is declared (its rows carry P(x)), so the
nonsingular bases of each distinct matrix are computed once, stored with
their integer adjugates, and reused: a vertex then costs one small integer
matrix-vector product. No floating point is involved anywhere.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import combinations
from math import lcm
from typing import Mapping, Optional, Sequence

from .bounds import BoundsReport, MEASURES, VACUOUS, UNDEFINED
from .errors import (
    InconsistentExogeneityDeclaration,
    InfeasibleSystem,
    MissingEvidence,
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
    PROFILE_INDEX,
    ResponseProfile,
    profile_position,
)

N_VARS = 8
LP_PROVENANCE = "LP vertex enumeration"

Vector = tuple[Fraction, ...]


def linear_form(coefficients: Mapping[tuple[int, int, int], object]) -> Vector:
    """8-vector of coefficients from ``{(i, j, k): c}``."""
    vec = [ZERO] * N_VARS
    for key, c in coefficients.items():
        vec[profile_position(*key)] = Fraction(c)
    return tuple(vec)


def _sum_of(*keys) -> Vector:
    return linear_form({k: 1 for k in keys})


OBJECTIVES: dict[str, Vector] = {
    "pns": _sum_of((1, 0, 1), (1, 0, 0)),
    "pn_numerator": _sum_of((1, 0, 1)),
    "ps_numerator": _sum_of((1, 0, 0)),
    "py_x": _sum_of((1, 1, 1), (1, 1, 0), (1, 0, 1), (1, 0, 0)),
    "py_x_prime": _sum_of((1, 1, 1), (1, 1, 0), (0, 1, 1), (0, 1, 0)),
}


@dataclass(frozen=True)
class ConstraintSystem:
    """Equality rows over p_ijk (canonical order) plus implicit nonnegativity."""

    rows: tuple[Vector, ...]
    rhs: tuple[Fraction, ...]
    labels: tuple[str, ...] = field(compare=False, default=())

    n_vars = N_VARS

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    @property
    def rank(self) -> int:
        return len(_basis_table(self.rows).kept)

    @cached_property
    def vertices(self) -> tuple[Vector, ...]:
        return _enumerate_vertices(self.rows, self.rhs)

    def satisfied_by(self, point: Sequence[Fraction]) -> bool:
        if any(v < 0 for v in point):
            return False
        return all(
            sum(a * x for a, x in zip(row, point)) == b for row, b in zip(self.rows, self.rhs)
        )

    def with_rows(self, rows, rhs, labels) -> "ConstraintSystem":
        return ConstraintSystem(
            self.rows + tuple(rows), self.rhs + tuple(rhs), self.labels + tuple(labels)
        )


@dataclass(frozen=True)
class OptimaPair:
    min: Fraction
    max: Fraction
    witness_min: ResponseProfile
    witness_max: ResponseProfile


@dataclass(frozen=True)
class _BasisTable:
    kept: tuple[int, ...]
    scales: tuple[int, ...]
    # each dependency d satisfies sum(d[k] * row[k]) == 0 over all rows
    dependencies: tuple[tuple[Fraction, ...], ...]
    # (columns, integer adjugate rows, determinant)
    bases: tuple[tuple[tuple[int, ...], tuple[tuple[int, ...], ...], int], ...]


def _row_reduce(rows: Sequence[Vector]):
    """Split rows into an independent prefix-greedy subset and dependency relations."""
    m = len(rows)
    echelon: list[tuple[int, list[Fraction], list[Fraction]]] = []
    kept, dependencies = [], []
    for i, row in enumerate(rows):
        v = list(row)
        comb = [ZERO] * m
        comb[i] = ONE
        for pivot, e, ecomb in echelon:
            f = v[pivot]
            if f:
                f = f / e[pivot]
                v = [a - f * b for a, b in zip(v, e)]
                comb = [a - f * b for a, b in zip(comb, ecomb)]
        nz = next((c for c, a in enumerate(v) if a != 0), None)
        if nz is None:
            dependencies.append(tuple(comb))
        else:
            kept.append(i)
            echelon.append((nz, v, comb))
    return tuple(kept), tuple(dependencies)


def _inverse(matrix: list[list[int]]) -> Optional[tuple[list[list[Fraction]], Fraction]]:
    """Gauss-Jordan inverse and determinant; None when singular."""
    n = len(matrix)
    a = [[Fraction(x) for x in row] + [ONE if i == j else ZERO for j in range(n)]
         for i, row in enumerate(matrix)]
    det = ONE
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            return None
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            det = -det
        p = a[col][col]
        det *= p
        a[col] = [x / p for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a], det


@lru_cache(maxsize=512)
def _basis_table(rows: tuple[Vector, ...]) -> _BasisTable:
    kept, dependencies = _row_reduce(rows)
    int_rows, scales = [], []
    for i in kept:
        s = lcm(*(c.denominator for c in rows[i]))
        scales.append(s)
        int_rows.append([int(c * s) for c in rows[i]])
    r = len(kept)
    bases = []
    for cols in combinations(range(N_VARS), r):
        sub = [[row[c] for c in cols] for row in int_rows]
        inv = _inverse(sub)
        if inv is None:
            continue
        inverse, det = inv
        d = int(det)
        adj = tuple(tuple(int(x * det) for x in row) for row in inverse)
        bases.append((cols, adj, d))
    return _BasisTable(kept, tuple(scales), dependencies, tuple(bases))


def _enumerate_vertices(rows, rhs) -> tuple[Vector, ...]:
    table = _basis_table(rows)
    for dep in table.dependencies:
        if sum(c * b for c, b in zip(dep, rhs) if c) != 0:
            return ()
    scaled = [rhs[i] * s for i, s in zip(table.kept, table.scales)]
    denom = lcm(*(b.denominator for b in scaled))
    b_int = [int(b * denom) for b in scaled]
    seen: dict[Vector, None] = {}
    for cols, adj, det in table.bases:
        nums = [sum(a * b for a, b in zip(row, b_int)) for row in adj]
        if det > 0:
            if any(n < 0 for n in nums):
                continue
        elif any(n > 0 for n in nums):
            continue
        point = [ZERO] * N_VARS
        scale = det * denom
        for c, n in zip(cols, nums):
            if n:
                point[c] = Fraction(n, scale)
        seen.setdefault(tuple(point), None)
    return tuple(seen)


def build_polytope(
    joint: Optional[JointDistribution] = None,
    effects: Optional[CausalEffects] = None,
    assume: AssumptionSet = NO_ASSUMPTIONS,
) -> ConstraintSystem:
    """Equality system for the evidence and assumptions.

    Exogeneity is encoded through the effects it implies, P(y_x) = P(y|x) and
    P(y_x') = P(y|x'), which requires a joint distribution.
    """
    if joint is None and effects is None:
        raise MissingEvidence("need a joint distribution, causal effects, or both")
    if assume.strong_exogeneity and joint is None:
        raise MissingEvidence("strong exogeneity needs P(x) from a joint distribution")
    if assume.exogeneity and joint is not None:
        if joint.px == 0 or joint.px_prime == 0:
            raise UndefinedConditional("exogeneity needs 0 < P(x) < 1")
        implied = CausalEffects(joint.py_given_x, joint.py_given_x_prime)
        if effects is not None and effects != implied:
            raise InconsistentExogeneityDeclaration(
                "exogeneity declared but P(y_x), P(y_x') differ from P(y|x), P(y|x')"
            )
        effects = implied

    rows, rhs, labels = [tuple([ONE] * N_VARS)], [ONE], ["normalization"]
    if joint is not None:
        rows += [
            _sum_of((1, 1, 1), (1, 0, 1)),
            _sum_of((0, 1, 1), (0, 0, 1)),
            _sum_of((1, 1, 0), (0, 1, 0)),
        ]
        rhs += [joint.xy, joint.xy_prime, joint.x_prime_y]
        labels += ["P(x,y)", "P(x,y')", "P(x',y)"]
    if effects is not None:
        rows += [OBJECTIVES["py_x"], OBJECTIVES["py_x_prime"]]
        rhs += [effects.py_x, effects.py_x_prime]
        labels += ["P(y_x)", "P(y_x')"]
    if assume.monotonicity:
        rows += [_sum_of((0, 1, 1)), _sum_of((0, 1, 0))]
        rhs += [ZERO, ZERO]
        labels += ["p011 = 0", "p010 = 0"]
    if assume.strong_exogeneity:
        px = joint.px
        for i in (1, 0):
            for j in (1, 0):
                # p_ij1 = (p_ij1 + p_ij0) P(x)
                rows.append(linear_form({(i, j, 1): 1 - px, (i, j, 0): -px}))
                rhs.append(ZERO)
                labels.append(f"strong exogeneity ({i},{j})")
    return ConstraintSystem(tuple(rows), tuple(rhs), tuple(labels))


def feasible(system: ConstraintSystem) -> bool:
    return bool(system.vertices)


def optimize(system: ConstraintSystem, objective: Sequence) -> OptimaPair:
    """Exact minimum and maximum of a linear objective, with attaining vertices."""
    vertices = system.vertices
    if not vertices:
        raise InfeasibleSystem("constraint polytope is empty")
    objective = tuple(Fraction(c) for c in objective)
    terms = [(n, c) for n, c in enumerate(objective) if c]
    lo = hi = None
    for v in vertices:
        value = sum((c * v[n] for n, c in terms), ZERO)
        if lo is None or value < lo[0]:
            lo = (value, v)
        if hi is None or value > hi[0]:
            hi = (value, v)
    return OptimaPair(lo[0], hi[0], ResponseProfile(lo[1]), ResponseProfile(hi[1]))


def _ratio_interval(pair: OptimaPair, den: Fraction) -> Interval:
    return Interval(pair.min / den, pair.max / den)


def sharp_bounds(
    joint: Optional[JointDistribution] = None,
    effects: Optional[CausalEffects] = None,
    assume: AssumptionSet = NO_ASSUMPTIONS,
    system: Optional[ConstraintSystem] = None,
) -> BoundsReport:
    """Bounds obtained by global optimization over the polytope.

    PN and PS are linear only because P(x,y) and P(x',y') are fixed by the
    joint; without a joint they are reported vacuous.
    """
    if system is None:
        system = build_polytope(joint, effects, assume)
    if not feasible(system):
        raise InfeasibleSystem("evidence and assumptions admit no response profile")
    pns = optimize(system, OBJECTIVES["pns"])
    prov = {"pns": LP_PROVENANCE}
    if joint is None:
        pn = ps = Interval.unit()
        prov["pn"] = prov["ps"] = VACUOUS
    else:
        pn = ps = None
        prov["pn"] = prov["ps"] = UNDEFINED
        if joint.xy:
            pn = _ratio_interval(optimize(system, OBJECTIVES["pn_numerator"]), joint.xy)
            prov["pn"] = LP_PROVENANCE
        if joint.x_prime_y_prime:
            ps = _ratio_interval(optimize(system, OBJECTIVES["ps_numerator"]), joint.x_prime_y_prime)
            prov["ps"] = LP_PROVENANCE
    effect_bounds = None
    if effects is None and joint is not None and not assume.exogeneity:
        yx = optimize(system, OBJECTIVES["py_x"])
        yx_ = optimize(system, OBJECTIVES["py_x_prime"])
        effect_bounds = (Interval(yx.min, yx.max), Interval(yx_.min, yx_.max))
        prov["effects"] = LP_PROVENANCE
    return BoundsReport(Interval(pns.min, pns.max), pn, ps, prov, effect_bounds=effect_bounds)


_TARGET_OBJECTIVE = {"pns": "pns", "pn": "pn_numerator", "ps": "ps_numerator"}


def witness_for_bound(
    joint: Optional[JointDistribution],
    effects: Optional[CausalEffects],
    assume: AssumptionSet,
    measure: str,
    side: str,
) -> ResponseProfile:
    """A profile consistent with all evidence whose ``measure`` sits at its ``side`` bound."""
    if measure not in _TARGET_OBJECTIVE or side not in ("lower", "upper"):
        raise ValueError(f"bad target {measure}/{side}")
    if measure != "pns" and joint is None:
        raise MissingEvidence(f"{measure.upper()} is not linear without a joint distribution")
    system = build_polytope(joint, effects, assume)
    pair = optimize(system, OBJECTIVES[_TARGET_OBJECTIVE[measure]])
    return pair.witness_min if side == "lower" else pair.witness_max


__all__ = [
    "ConstraintSystem",
    "OptimaPair",
    "OBJECTIVES",
    "PROFILE_INDEX",
    "build_polytope",
    "feasible",
    "linear_form",
    "optimize",
    "sharp_bounds",
    "witness_for_bound",
    "MEASURES",
]


def certify(
    report: BoundsReport,
    joint: Optional[JointDistribution],
    effects: Optional[CausalEffects],
    assume: AssumptionSet = NO_ASSUMPTIONS,
) -> bool:
    """True when every comparable interval of ``report`` equals the LP optimum."""
    sharp = sharp_bounds(joint, effects, assume)
    names = ("pns",) if (assume.exogeneity and joint is None) else MEASURES
    for name in names:
        a, b = report.get(name), sharp.get(name)
        if (a is None) != (b is None):
            return False
        if a is not None and not a.same_bounds(b):
            return False
    return True
