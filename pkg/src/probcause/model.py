"""Domain types for binary exposure X and outcome Y.

All probabilities are held as :class:`fractions.Fraction`. Floats are accepted
at the boundary and converted through their shortest decimal repr, so ``0.1``
becomes ``1/10`` rather than the binary approximation.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from decimal import Decimal
from fractions import Fraction
from itertools import product
from numbers import Rational
from typing import Iterable, Optional, Sequence

from .errors import (
    EmptyArm,
    InvalidDistribution,
    UndefinedConditional,
    ZeroTotal,
)

ZERO = Fraction(0)
ONE = Fraction(1)

# Probability inputs that are not already exact must sum to one within this.
NORMALIZATION_TOL = Fraction(1, 10**9)


def as_fraction(value) -> Fraction:
    """Convert an int, Fraction, Decimal, str ("0.25", "1/4") or float to a Fraction."""
    if isinstance(value, bool):
        raise TypeError("booleans are not probabilities")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(repr(value))
    if isinstance(value, (str, Decimal)):
        return Fraction(value)
    raise TypeError(f"cannot interpret {value!r} as a probability")


def round_half_even(value: Fraction, digits: int) -> Fraction:
    """Round an exact value to ``digits`` decimals, ties to even."""
    scale = 10**digits
    return Fraction(round(value * scale), scale)


def format_decimal(value: Fraction, digits: int = 6) -> str:
    """Decimal rendering: round half-to-even, trailing zeros trimmed, one decimal kept."""
    q = round(value * 10**digits)
    sign = "-" if q < 0 else ""
    whole, frac = divmod(abs(q), 10**digits)
    frac_str = str(frac).rjust(digits, "0").rstrip("0") if digits else ""
    return f"{sign}{whole}.{frac_str or '0'}"


def format_rational(value: Fraction) -> str:
    return f"{value.numerator}/{value.denominator}"


def _check_probability(name: str, value: Fraction) -> None:
    if not ZERO <= value <= ONE:
        raise InvalidDistribution(f"{name}={value} is outside [0, 1]")


@dataclass(frozen=True)
class DatasetCounts:
    """Raw 2x2 frequency tables, each ordered (n(x,y), n(x,y'), n(x',y), n(x',y'))."""

    experimental: Optional[tuple[int, int, int, int]] = None
    observational: Optional[tuple[int, int, int, int]] = None

    def __post_init__(self):
        for arm in ("experimental", "observational"):
            counts = getattr(self, arm)
            if counts is None:
                continue
            counts = tuple(counts)
            if len(counts) != 4:
                raise ValueError(f"{arm} needs four counts, got {len(counts)}")
            for c in counts:
                if isinstance(c, bool) or not isinstance(c, int) or c < 0:
                    raise ValueError(f"{arm} count {c!r} is not a nonnegative integer")
            object.__setattr__(self, arm, counts)
        if self.experimental is not None:
            nx = self.experimental[0] + self.experimental[1]
            nx_ = self.experimental[2] + self.experimental[3]
            if nx == 0 or nx_ == 0:
                raise EmptyArm("experimental arm has an empty treatment group")
        if self.observational is not None and sum(self.observational) == 0:
            raise ZeroTotal("observational counts are all zero")

    def joint(self) -> Optional["JointDistribution"]:
        return None if self.observational is None else joint_from_counts(*self.observational)

    def effects(self) -> Optional["CausalEffects"]:
        return None if self.experimental is None else effects_from_counts(*self.experimental)


@dataclass(frozen=True)
class JointDistribution:
    """Observational distribution P(X, Y) over the four cells."""

    xy: Fraction
    xy_prime: Fraction
    x_prime_y: Fraction
    x_prime_y_prime: Fraction
    # False when built from floating-point input; selects the diagnostic tolerance.
    exact: bool = field(default=True, compare=False)

    def __post_init__(self):
        for name in ("xy", "xy_prime", "x_prime_y", "x_prime_y_prime"):
            value = as_fraction(getattr(self, name))
            object.__setattr__(self, name, value)
            _check_probability(name, value)
        if sum(self.cells) != ONE:
            raise InvalidDistribution(f"cells sum to {sum(self.cells)}, not 1")

    @classmethod
    def from_probabilities(cls, values: Sequence) -> "JointDistribution":
        """Accept hand-entered decimals; renormalize exactly if they sum to 1 within 1e-9."""
        exact = not any(isinstance(v, float) for v in values)
        cells = [as_fraction(v) for v in values]
        if len(cells) != 4:
            raise InvalidDistribution("a joint distribution has four cells")
        for c in cells:
            _check_probability("cell", c)
        total = sum(cells)
        if abs(total - ONE) > NORMALIZATION_TOL:
            raise InvalidDistribution(f"cells sum to {float(total)}, not 1")
        return cls(*(c / total for c in cells), exact=exact)

    @property
    def cells(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return (self.xy, self.xy_prime, self.x_prime_y, self.x_prime_y_prime)

    @property
    def px(self) -> Fraction:
        return self.xy + self.xy_prime

    @property
    def px_prime(self) -> Fraction:
        return self.x_prime_y + self.x_prime_y_prime

    @property
    def py(self) -> Fraction:
        return self.xy + self.x_prime_y

    @property
    def py_prime(self) -> Fraction:
        return self.xy_prime + self.x_prime_y_prime

    @property
    def py_given_x(self) -> Fraction:
        if self.px == 0:
            raise UndefinedConditional("P(y|x) undefined: P(x) = 0")
        return self.xy / self.px

    @property
    def py_given_x_prime(self) -> Fraction:
        if self.px_prime == 0:
            raise UndefinedConditional("P(y|x') undefined: P(x') = 0")
        return self.x_prime_y / self.px_prime

    @property
    def py_prime_given_x_prime(self) -> Fraction:
        return ONE - self.py_given_x_prime

    def as_floats(self) -> tuple[float, float, float, float]:
        return tuple(float(c) for c in self.cells)


@dataclass(frozen=True)
class CausalEffects:
    """Interventional probabilities P(y_x) and P(y_x')."""

    py_x: Fraction
    py_x_prime: Fraction
    exact: bool = field(default=True, compare=False)

    def __post_init__(self):
        for name in ("py_x", "py_x_prime"):
            value = as_fraction(getattr(self, name))
            object.__setattr__(self, name, value)
            _check_probability(name, value)

    @classmethod
    def from_probabilities(cls, py_x, py_x_prime) -> "CausalEffects":
        exact = not (isinstance(py_x, float) or isinstance(py_x_prime, float))
        return cls(as_fraction(py_x), as_fraction(py_x_prime), exact=exact)

    @property
    def py_prime_x(self) -> Fraction:
        return ONE - self.py_x

    @property
    def py_prime_x_prime(self) -> Fraction:
        return ONE - self.py_x_prime


# Canonical order of the response-type cells (i, j, k) = (Y_x, Y_x', X).
PROFILE_INDEX: tuple[tuple[int, int, int], ...] = tuple(product((1, 0), repeat=3))
_POSITION = {key: n for n, key in enumerate(PROFILE_INDEX)}


def profile_position(i: int, j: int, k: int) -> int:
    """Position of p_ijk in the canonical 8-vector."""
    return _POSITION[(i, j, k)]


@dataclass(frozen=True)
class ResponseProfile:
    """Joint distribution of (Y_x, Y_x', X) as eight probabilities.

    ``values[n]`` is p_ijk for ``(i, j, k) = PROFILE_INDEX[n]``, i.e. the order
    p111, p110, p101, p100, p011, p010, p001, p000.
    """

    values: tuple[Fraction, ...]

    def __post_init__(self):
        vals = tuple(as_fraction(v) for v in self.values)
        if len(vals) != 8:
            raise InvalidDistribution("a response profile has eight entries")
        if any(v < 0 for v in vals):
            raise InvalidDistribution("response profile has a negative entry")
        if sum(vals) != ONE:
            raise InvalidDistribution(f"response profile sums to {sum(vals)}, not 1")
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_mapping(cls, mapping: dict) -> "ResponseProfile":
        """Build from ``{(i, j, k): p}``; missing keys are zero."""
        unknown = set(mapping) - set(PROFILE_INDEX)
        if unknown:
            raise KeyError(f"not response-type indices: {sorted(unknown)}")
        return cls(tuple(as_fraction(mapping.get(key, 0)) for key in PROFILE_INDEX))

    @classmethod
    def uniform(cls) -> "ResponseProfile":
        return cls((Fraction(1, 8),) * 8)

    def p(self, i: int, j: int, k: int) -> Fraction:
        return self.values[_POSITION[(i, j, k)]]

    def as_dict(self) -> dict[tuple[int, int, int], Fraction]:
        return dict(zip(PROFILE_INDEX, self.values))

    @property
    def is_monotone(self) -> bool:
        return self.p(0, 1, 1) == 0 and self.p(0, 1, 0) == 0

    def strong_exogeneity_residuals(self) -> tuple[Fraction, ...]:
        """P(Y_x=i, Y_x'=j, x) - P(Y_x=i, Y_x'=j) P(x) for the four (i, j)."""
        px = sum(self.p(i, j, 1) for i in (0, 1) for j in (0, 1))
        return tuple(
            self.p(i, j, 1) - (self.p(i, j, 1) + self.p(i, j, 0)) * px
            for i in (1, 0)
            for j in (1, 0)
        )


@dataclass(frozen=True)
class CausationMeasures:
    """PNS, PN and PS; ``None`` marks a measure whose conditioning cell is empty."""

    pns: Fraction
    pn: Optional[Fraction]
    ps: Optional[Fraction]

    def get(self, name: str) -> Optional[Fraction]:
        return getattr(self, name)


@dataclass(frozen=True)
class Interval:
    """Closed interval inside [0, 1]."""

    lower: Fraction
    upper: Fraction
    identified: bool = False
    vacuous: bool = False

    def __post_init__(self):
        lo, hi = as_fraction(self.lower), as_fraction(self.upper)
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)
        if not ZERO <= lo <= hi <= ONE:
            raise ValueError(f"invalid interval [{lo}, {hi}]")

    @classmethod
    def point(cls, value) -> "Interval":
        return cls(value, value, identified=True)

    @classmethod
    def unit(cls) -> "Interval":
        return cls(ZERO, ONE, vacuous=True)

    def contains(self, value: Fraction) -> bool:
        return self.lower <= value <= self.upper

    def within(self, other: "Interval") -> bool:
        return other.lower <= self.lower and self.upper <= other.upper

    @property
    def degenerate(self) -> bool:
        return self.lower == self.upper

    def same_bounds(self, other: "Interval") -> bool:
        return self.lower == other.lower and self.upper == other.upper

    def as_floats(self) -> tuple[float, float]:
        return float(self.lower), float(self.upper)


_ASSUMPTION_ALIASES = {
    "exogeneity": "exogeneity",
    "exo": "exogeneity",
    "strong_exogeneity": "strong_exogeneity",
    "strong-exogeneity": "strong_exogeneity",
    "strong": "strong_exogeneity",
    "monotonicity": "monotonicity",
    "mono": "monotonicity",
}


@dataclass(frozen=True)
class AssumptionSet:
    """Declared causal assumptions; strong exogeneity implies exogeneity."""

    exogeneity: bool = False
    strong_exogeneity: bool = False
    monotonicity: bool = False

    def __post_init__(self):
        if self.strong_exogeneity and not self.exogeneity:
            object.__setattr__(self, "exogeneity", True)

    @classmethod
    def parse(cls, text: str) -> "AssumptionSet":
        """Parse ``"none"``, ``"monotonicity"``, ``"exogeneity+monotonicity"`` and similar."""
        text = text.strip().lower()
        if text in ("", "none"):
            return cls()
        return cls.from_names(t for t in text.replace(",", "+").split("+"))

    @classmethod
    def from_names(cls, names: Iterable[str]) -> "AssumptionSet":
        flags = {}
        for raw in names:
            name = raw.strip().lower()
            if not name or name == "none":
                continue
            if name not in _ASSUMPTION_ALIASES:
                raise ValueError(f"unknown assumption {raw!r}")
            flags[_ASSUMPTION_ALIASES[name]] = True
        return cls(**flags)

    @property
    def names(self) -> tuple[str, ...]:
        out = []
        if self.strong_exogeneity:
            out.append("strong_exogeneity")
        elif self.exogeneity:
            out.append("exogeneity")
        if self.monotonicity:
            out.append("monotonicity")
        return tuple(out)

    @property
    def label(self) -> str:
        return "+".join(self.names) or "none"

    def implies(self, other: "AssumptionSet") -> bool:
        """True when every assumption in ``other`` is also in ``self``."""
        return (
            (self.exogeneity or not other.exogeneity)
            and (self.strong_exogeneity or not other.strong_exogeneity)
            and (self.monotonicity or not other.monotonicity)
        )


NO_ASSUMPTIONS = AssumptionSet()


def joint_from_counts(n_xy: int, n_xy_prime: int, n_x_prime_y: int, n_x_prime_y_prime: int) -> JointDistribution:
    counts = (n_xy, n_xy_prime, n_x_prime_y, n_x_prime_y_prime)
    if any(c < 0 for c in counts):
        raise ValueError("counts must be nonnegative")
    total = sum(counts)
    if total == 0:
        raise ZeroTotal("observational counts are all zero")
    return JointDistribution(*(Fraction(c, total) for c in counts))


def effects_from_counts(n_xy: int, n_xy_prime: int, n_x_prime_y: int, n_x_prime_y_prime: int) -> CausalEffects:
    if min(n_xy, n_xy_prime, n_x_prime_y, n_x_prime_y_prime) < 0:
        raise ValueError("counts must be nonnegative")
    nx, nx_ = n_xy + n_xy_prime, n_x_prime_y + n_x_prime_y_prime
    if nx == 0 or nx_ == 0:
        raise EmptyArm("experimental arm has an empty treatment group")
    return CausalEffects(Fraction(n_xy, nx), Fraction(n_x_prime_y, nx_))


def observables_of(profile: ResponseProfile) -> tuple[JointDistribution, CausalEffects]:
    """Observational joint and interventional effects implied by a response profile."""
    p = profile.p
    joint = JointDistribution(
        p(1, 1, 1) + p(1, 0, 1),
        p(0, 1, 1) + p(0, 0, 1),
        p(1, 1, 0) + p(0, 1, 0),
        p(1, 0, 0) + p(0, 0, 0),
    )
    effects = CausalEffects(
        p(1, 1, 1) + p(1, 1, 0) + p(1, 0, 1) + p(1, 0, 0),
        p(1, 1, 1) + p(1, 1, 0) + p(0, 1, 1) + p(0, 1, 0),
    )
    return joint, effects


def causation_of(profile: ResponseProfile) -> CausationMeasures:
    joint, _ = observables_of(profile)
    pns = profile.p(1, 0, 1) + profile.p(1, 0, 0)
    pn = profile.p(1, 0, 1) / joint.xy if joint.xy else None
    ps = profile.p(1, 0, 0) / joint.x_prime_y_prime if joint.x_prime_y_prime else None
    return CausationMeasures(pns, pn, ps)


def lemma1_residual(profile: ResponseProfile) -> Fraction:
    """PNS - [P(x,y) PN + P(x',y') PS]; zero for every profile."""
    joint, _ = observables_of(profile)
    m = causation_of(profile)
    if m.pn is None:
        raise UndefinedConditional("PN undefined: P(x,y) = 0")
    if m.ps is None:
        raise UndefinedConditional("PS undefined: P(x',y') = 0")
    return m.pns - (joint.xy * m.pn + joint.x_prime_y_prime * m.ps)
