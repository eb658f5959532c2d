"""Shared fixtures: the committed price fixture and small panel builders."""

import datetime as dt
import os

import numpy as np
import pytest

from relsent import ReturnPanel, compute_returns, parse_price_csv

DATA_DIR = os.path.join(os.path.dirname(__file__), "data")
GOLDEN_DIR = os.path.join(os.path.dirname(__file__), "golden")
FIXTURE_PRICES = os.path.join(DATA_DIR, "fixture_prices.csv")
GOLDEN_SPEC = os.path.join(DATA_DIR, "golden_spec.toml")


@pytest.fixture(scope="session")
def fixture_path():
    return FIXTURE_PRICES


@pytest.fixture(scope="session")
def fixture_prices():
    return parse_price_csv(FIXTURE_PRICES)


@pytest.fixture(scope="session")
def fixture_returns(fixture_prices):
    return compute_returns(fixture_prices, "simple")


def make_panel(returns, start=dt.date(2020, 1, 1), mode="simple"):
    """ReturnPanel over consecutive dates with generated ticker names."""
    returns = np.asarray(returns, dtype=np.float64)
    dates = tuple(start + dt.timedelta(days=t) for t in range(returns.shape[0]))
    tickers = tuple(f"T{i}" for i in range(returns.shape[1]))
    return ReturnPanel(dates=dates, tickers=tickers, returns=returns, mode=mode)


@pytest.fixture
def random_panel():
    """Seeded 40-date, 5-ticker panel of plausible daily returns."""
    rng = np.random.Generator(np.random.Philox(314))
    return make_panel(rng.normal(0.0005, 0.02, (40, 5)))
