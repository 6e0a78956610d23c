import random
from fractions import Fraction

import pytest
from hypothesis import strategies as st

from probcause.model import JointDistribution, ResponseProfile, CausalEffects, joint_from_counts, effects_from_counts

ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance_log():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def table2_joint():
    return joint_from_counts(2, 998, 28, 972)


@pytest.fixture
def table2_effects():
    return effects_from_counts(16, 984, 14, 986)


def random_profile(rng: random.Random, zeros: bool = True) -> ResponseProfile:
    lo = 0 if zeros else 1
    while True:
        w = [rng.randint(lo, 50) for _ in range(8)]
        if sum(w):
            return ResponseProfile(tuple(Fraction(x, sum(w)) for x in w))


@st.composite
def profiles(draw, monotone=False):
    weights = draw(st.lists(st.integers(0, 40), min_size=8, max_size=8).filter(lambda w: sum(w) > 0))
    if monotone:
        weights[4] = weights[5] = 0  # p011, p010
        if not sum(weights):
            weights[0] = 1
    total = sum(weights)
    return ResponseProfile(tuple(Fraction(w, total) for w in weights))


@st.composite
def joints(draw):
    w = draw(st.lists(st.integers(0, 30), min_size=4, max_size=4).filter(lambda w: sum(w) > 0))
    return JointDistribution(*(Fraction(x, sum(w)) for x in w))


unit_fractions = st.integers(0, 24).map(lambda n: Fraction(n, 24))
