"""Shared fixtures for the lending model tests."""

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent.parent))

from src.discrete_game import DiscreteGameConfig
from src.gaussian_model import GaussianParams, PayoffSpec, QuadratureConfig


@pytest.fixture
def one_coin_game():
    """5 coins lent at 1 coin interest against 5 competitor coins."""
    return DiscreteGameConfig(loan_coins=5, competitor_coins=5, interest_coins=1)


@pytest.fixture
def full_interest_game():
    return DiscreteGameConfig(loan_coins=5, competitor_coins=5, interest_coins=5)


@pytest.fixture
def fair_params():
    return GaussianParams(mu=0.0, sigma=0.25)


@pytest.fixture
def rigged_params():
    return GaussianParams(mu=0.05, sigma=0.25)


@pytest.fixture
def capped_20():
    return PayoffSpec(interest=0.2)


@pytest.fixture
def quadrature():
    return QuadratureConfig()
