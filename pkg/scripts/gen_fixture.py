"""Regenerate the committed 3-stock price fixture.

Writes tests/data/fixture_prices.csv from a seeded synthetic market so the
golden-file regression has a stable, realistic input. Prices are a
multiplicative walk from 100 over the synthetic simple returns, serialized
at full float64 precision so parse -> serialize round-trips byte-for-byte.

Run from the repository root:

    python scripts/gen_fixture.py
"""

import datetime as dt
import os

import numpy as np

from relsent import PricePanel, SynthSpec, generate_market, serialize_price_csv

SPEC = SynthSpec(
    n_stocks=3,
    horizon=119,
    factor_vol=0.01,
    idio_vols=(0.006, 0.009, 0.012),
    true_alphas=(0.05, 0.0, -0.05),
    seed=7,
)
TICKERS = ("AAA", "BBB", "CCC")
BASE_PRICE = 100.0
OUT = os.path.join("tests", "data", "fixture_prices.csv")


def build_panel() -> PricePanel:
    returns, _ = generate_market(SPEC)
    prices = BASE_PRICE * np.cumprod(1.0 + returns.returns, axis=0)
    prices = np.vstack([np.full(SPEC.n_stocks, BASE_PRICE), prices])
    dates = (returns.dates[0] - dt.timedelta(days=1),) + returns.dates
    return PricePanel(dates=dates, tickers=TICKERS, prices=prices)


def main() -> None:
    os.makedirs(os.path.dirname(OUT), exist_ok=True)
    text = serialize_price_csv(build_panel())
    with open(OUT, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    print(f"wrote {OUT} ({len(text.splitlines())} lines)")


if __name__ == "__main__":
    main()
