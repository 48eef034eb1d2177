from fractions import Fraction

import pytest

from obstruct.beta import BetaSystem
from obstruct.decomposition import beta_decomposition


@pytest.fixture(scope="session")
def golden():
    return BetaSystem.golden_mean()


@pytest.fixture(scope="session")
def full2():
    return BetaSystem.full_shift(2)


@pytest.fixture(scope="session")
def threehalf():
    return BetaSystem.from_beta(Fraction(3, 2), horizon=60)


@pytest.fixture(scope="session")
def golden_scheme(golden):
    return beta_decomposition(golden)


@pytest.fixture(scope="session")
def full2_scheme(full2):
    return beta_decomposition(full2)
