"""Parsing, validation, alignment and return computation."""

import datetime as dt
import io
import math

import numpy as np
import pytest

from relsent import (
    AlignmentPolicy,
    DuplicateDateError,
    InsufficientDataError,
    ParseError,
    PricePanel,
    ReturnPanel,
    align_calendar,
    compute_returns,
    parse_price_csv,
    parse_return_csv,
    serialize_price_csv,
    serialize_return_csv,
)

D = dt.date


def panel(rows, tickers=("A", "B"), start=D(2021, 3, 1)):
    rows = np.asarray(rows, dtype=np.float64)
    dates = tuple(start + dt.timedelta(days=t) for t in range(rows.shape[0]))
    return PricePanel(dates=dates, tickers=tuple(tickers), prices=rows)


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------


def test_fixture_round_trips_byte_for_byte(fixture_path, fixture_prices):
    with open(fixture_path, "r", encoding="utf-8", newline="") as fh:
        original = fh.read()
    assert serialize_price_csv(fixture_prices) == original


def test_parse_sorts_rows_by_date():
    text = "date,A,B\n2021-01-03,3.0,30.0\n2021-01-01,1.0,10.0\n2021-01-02,2.0,20.0\n"
    p = parse_price_csv(io.StringIO(text))
    assert p.dates == (D(2021, 1, 1), D(2021, 1, 2), D(2021, 1, 3))
    assert p.prices[:, 0].tolist() == [1.0, 2.0, 3.0]


def test_parse_empty_cells_become_missing():
    p = parse_price_csv(io.StringIO("date,A,B\n2021-01-01,1.0,\n2021-01-02,2.0,20.0\n"))
    assert math.isnan(p.prices[0, 1])
    assert p.has_missing


def test_parse_duplicate_date_rejected():
    text = "date,A\n2021-01-01,1.0\n2021-01-01,2.0\n"
    with pytest.raises(DuplicateDateError):
        parse_price_csv(io.StringIO(text))


def test_parse_bad_cell_names_line_and_ticker():
    text = "date,A,B\n2021-01-01,1.0,2.0\n2021-01-02,1.1,oops\n"
    with pytest.raises(ValueError, match=r"'oops' for B on 2021-01-02"):
        parse_price_csv(io.StringIO(text))


def test_parse_rejects_nonpositive_price():
    with pytest.raises(ValueError, match="non-positive"):
        parse_price_csv(io.StringIO("date,A\n2021-01-01,-3.0\n2021-01-02,1.0\n"))


@pytest.mark.parametrize(
    "text",
    [
        "",  # empty input
        "time,A\n2021-01-01,1.0\n",  # header must start with date
        "date\n2021-01-01\n",  # no ticker columns
        "date,A,A\n2021-01-01,1.0,2.0\n",  # duplicate tickers
        "date,A B\n2021-01-01,1.0\n",  # invalid ticker name
        "date,A\n2021-01-01\n",  # wrong field count
        "date,A\nkaboom,1.0\n",  # bad date
        "date,A\n",  # no data rows
    ],
)
def test_parse_malformed_inputs(text):
    with pytest.raises(ParseError):
        parse_price_csv(io.StringIO(text))


def test_parse_return_csv_rejects_missing_cells():
    with pytest.raises(ValueError, match="missing return"):
        parse_return_csv(io.StringIO("date,A\n2021-01-01,\n"))


def test_return_round_trip(fixture_returns):
    text = serialize_return_csv(fixture_returns)
    again = parse_return_csv(io.StringIO(text), mode=fixture_returns.mode)
    assert again == fixture_returns


def test_serialize_uses_shortest_repr():
    p = panel([[0.1 + 0.2, 1.0], [1.5, 2.5]])
    line = serialize_price_csv(p).splitlines()[1]
    assert line.endswith("0.30000000000000004,1.0")


# ---------------------------------------------------------------------------
# panel validation
# ---------------------------------------------------------------------------


def test_price_panel_rejects_unsorted_dates():
    with pytest.raises(ValueError, match="strictly increasing"):
        PricePanel(
            dates=(D(2021, 1, 2), D(2021, 1, 1)),
            tickers=("A",),
            prices=np.ones((2, 1)),
        )


def test_return_panel_rejects_simple_return_at_or_below_minus_one(random_panel):
    bad = random_panel.returns.copy()
    bad[0, 0] = -1.0
    with pytest.raises(ValueError):
        ReturnPanel(
            dates=random_panel.dates,
            tickers=random_panel.tickers,
            returns=bad,
            mode="simple",
        )


def test_panel_equality_treats_nan_as_equal():
    rows = [[1.0, np.nan], [1.1, 2.0]]
    assert panel(rows) == panel(rows)
    assert panel(rows) != panel([[1.0, 3.0], [1.1, 2.0]])


# ---------------------------------------------------------------------------
# alignment
# ---------------------------------------------------------------------------


def test_align_strict_drops_rows_with_any_missing():
    p = panel([[1.0, 10.0], [np.nan, 11.0], [3.0, 12.0], [4.0, np.nan], [5.0, 14.0]])
    out = align_calendar(p, AlignmentPolicy(method="strict"))
    assert out.dates == (p.dates[0], p.dates[2], p.dates[4])
    assert not out.has_missing


def test_align_ffill_fills_short_gaps_with_last_price():
    p = panel([[1.0, 10.0], [np.nan, 11.0], [np.nan, 12.0], [4.0, 13.0]])
    out = align_calendar(p, AlignmentPolicy(method="ffill", max_fill_gap=2))
    assert out.dates == p.dates
    assert out.prices[:, 0].tolist() == [1.0, 1.0, 1.0, 4.0]


def test_align_ffill_drops_runs_longer_than_max_gap():
    p = panel(
        [[1.0, 10.0], [np.nan, 11.0], [np.nan, 12.0], [np.nan, 13.0], [5.0, 14.0]]
    )
    out = align_calendar(p, AlignmentPolicy(method="ffill", max_fill_gap=2))
    # the whole 3-date run goes, not just its tail
    assert out.dates == (p.dates[0], p.dates[4])


def test_align_ffill_never_fills_leading_missing():
    p = panel([[np.nan, 10.0], [np.nan, 11.0], [3.0, 12.0], [4.0, 13.0]])
    out = align_calendar(p, AlignmentPolicy(method="ffill", max_fill_gap=5))
    assert out.dates == p.dates[2:]


def test_align_insufficient_survivors():
    p = panel([[1.0, np.nan], [np.nan, 11.0], [3.0, 12.0]])
    with pytest.raises(InsufficientDataError):
        align_calendar(p, AlignmentPolicy(method="strict"))


def test_alignment_policy_validation():
    with pytest.raises(ValueError):
        AlignmentPolicy(method="interpolate")
    with pytest.raises(ValueError):
        AlignmentPolicy(method="ffill", max_fill_gap=0)


# ---------------------------------------------------------------------------
# returns
# ---------------------------------------------------------------------------


def test_compute_returns_simple_hand_values():
    p = panel([[100.0, 50.0], [110.0, 45.0], [99.0, 54.0]])
    r = compute_returns(p, "simple")
    assert r.dates == p.dates[1:]
    assert np.allclose(r.returns[:, 0], [0.1, -0.1], atol=1e-15)
    assert np.allclose(r.returns[:, 1], [-0.1, 0.2], atol=1e-15)


def test_compute_returns_log_hand_values():
    p = panel([[100.0, 50.0], [110.0, 45.0]])
    r = compute_returns(p, "log")
    assert r.mode == "log"
    assert np.allclose(r.returns[0], [math.log(1.1), math.log(0.9)], atol=1e-15)


def test_simple_and_log_agree_to_second_order(fixture_prices):
    simple = compute_returns(fixture_prices, "simple").returns
    logr = compute_returns(fixture_prices, "log").returns
    assert np.all(np.abs(simple - logr) <= simple**2)


def test_compute_returns_requires_aligned_panel():
    p = panel([[1.0, np.nan], [2.0, 3.0]])
    with pytest.raises(ValueError, match="missing"):
        compute_returns(p)


def test_compute_returns_needs_two_dates():
    p = PricePanel(dates=(D(2021, 1, 1),), tickers=("A",), prices=[[1.0]])
    with pytest.raises(InsufficientDataError):
        compute_returns(p)


def test_compute_returns_rejects_unknown_mode(fixture_prices):
    with pytest.raises(ValueError, match="mode"):
        compute_returns(fixture_prices, "arith")
