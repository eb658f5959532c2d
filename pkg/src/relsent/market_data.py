"""Price-panel ingestion, calendar alignment and return computation.

Input format is a rectangular daily close CSV:

    date,<TICKER1>,<TICKER2>,...
    2000-01-03,100.0,50.25,...

Dates are ISO ``YYYY-MM-DD`` trading days, taken as given (no exchange
calendar validation). Prices are assumed to be already split/dividend
adjusted; no adjustment logic lives here. Empty cells mark missing
observations and must be resolved by :func:`align_calendar` before returns
can be computed.

All panel values are float64 and all panel containers are immutable by
convention: operations return new panels and never mutate inputs.
"""

from __future__ import annotations

import csv
import datetime as dt
import io
import math
import os
import re
from dataclasses import dataclass, field
from typing import IO, Iterable, Union

import numpy as np

from .errors import (
    DuplicateDateError,
    InsufficientDataError,
    ParseError,
)

Source = Union[str, os.PathLike, IO[str]]

_TICKER_RE = re.compile(r"^[A-Za-z0-9._-]+$")

RETURN_MODES = ("simple", "log")


def _fmt(value: float) -> str:
    """Shortest decimal string that round-trips to the same float64."""
    return repr(float(value))


@dataclass(frozen=True, eq=False)
class PricePanel:
    """Rectangular panel of daily close prices.

    Attributes:
        dates: strictly increasing trading days, length T.
        tickers: unique column names, length N >= 1.
        prices: (T, N) float64; NaN encodes a missing observation, every
            non-missing entry is strictly positive and finite.
    """

    dates: tuple[dt.date, ...]
    tickers: tuple[str, ...]
    prices: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        prices = np.asarray(self.prices, dtype=np.float64)
        object.__setattr__(self, "prices", prices)
        if prices.ndim != 2:
            raise ValueError("prices must be a 2-D array")
        if prices.shape != (len(self.dates), len(self.tickers)):
            raise ValueError(
                f"prices shape {prices.shape} does not match "
                f"{len(self.dates)} dates x {len(self.tickers)} tickers"
            )
        if not self.tickers:
            raise ValueError("at least one ticker required")
        if len(set(self.tickers)) != len(self.tickers):
            raise ValueError("ticker names must be unique")
        for a, b in zip(self.dates, self.dates[1:]):
            if not a < b:
                raise ValueError(f"dates not strictly increasing at {b}")
        bad = np.isfinite(prices) & (prices <= 0.0)
        if bad.any():
            t, c = np.argwhere(bad)[0]
            raise ValueError(
                f"non-positive price {prices[t, c]} for {self.tickers[c]} "
                f"on {self.dates[t]}"
            )
        inf = np.isinf(prices)
        if inf.any():
            t, c = np.argwhere(inf)[0]
            raise ValueError(
                f"non-finite price for {self.tickers[c]} on {self.dates[t]}"
            )

    @property
    def n_dates(self) -> int:
        return len(self.dates)

    @property
    def n_tickers(self) -> int:
        return len(self.tickers)

    @property
    def has_missing(self) -> bool:
        return bool(np.isnan(self.prices).any())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PricePanel):
            return NotImplemented
        return (
            self.dates == other.dates
            and self.tickers == other.tickers
            and np.array_equal(self.prices, other.prices, equal_nan=True)
        )

    __hash__ = None  # mutable payload


@dataclass(frozen=True, eq=False)
class ReturnPanel:
    """Rectangular panel of daily returns.

    Attributes:
        dates: strictly increasing, length T (the later date of each
            price pair when derived from prices).
        tickers: unique column names, length N.
        returns: (T, N) float64, all finite; simple returns exceed -1.
        mode: "simple" (p1/p0 - 1) or "log" (ln(p1/p0)).
    """

    dates: tuple[dt.date, ...]
    tickers: tuple[str, ...]
    returns: np.ndarray = field(repr=False)
    mode: str = "simple"

    def __post_init__(self) -> None:
        returns = np.asarray(self.returns, dtype=np.float64)
        object.__setattr__(self, "returns", returns)
        if returns.ndim != 2:
            raise ValueError("returns must be a 2-D array")
        if returns.shape != (len(self.dates), len(self.tickers)):
            raise ValueError(
                f"returns shape {returns.shape} does not match "
                f"{len(self.dates)} dates x {len(self.tickers)} tickers"
            )
        if self.mode not in RETURN_MODES:
            raise ValueError(f"mode must be one of {RETURN_MODES}, got {self.mode!r}")
        if not self.tickers:
            raise ValueError("at least one ticker required")
        if len(set(self.tickers)) != len(self.tickers):
            raise ValueError("ticker names must be unique")
        for a, b in zip(self.dates, self.dates[1:]):
            if not a < b:
                raise ValueError(f"dates not strictly increasing at {b}")
        if not np.isfinite(returns).all():
            t, c = np.argwhere(~np.isfinite(returns))[0]
            raise ValueError(
                f"non-finite return for {self.tickers[c]} on {self.dates[t]}"
            )
        if self.mode == "simple" and (returns <= -1.0).any():
            t, c = np.argwhere(returns <= -1.0)[0]
            raise ValueError(
                f"simple return <= -1 for {self.tickers[c]} on {self.dates[t]}"
            )

    @property
    def n_dates(self) -> int:
        return len(self.dates)

    @property
    def n_tickers(self) -> int:
        return len(self.tickers)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ReturnPanel):
            return NotImplemented
        return (
            self.dates == other.dates
            and self.tickers == other.tickers
            and self.mode == other.mode
            and np.array_equal(self.returns, other.returns)
        )

    __hash__ = None


@dataclass(frozen=True)
class AlignmentPolicy:
    """How to resolve missing observations.

    method "strict" drops every date with any missing cell. Method "ffill"
    carries the last seen price forward through runs of up to max_fill_gap
    consecutive missing cells; a longer run, or a run with no prior value
    (leading missing), drops all dates of that run instead.
    """

    method: str = "strict"
    max_fill_gap: int = 5

    def __post_init__(self) -> None:
        if self.method not in ("strict", "ffill"):
            raise ValueError(f"method must be 'strict' or 'ffill', got {self.method!r}")
        if self.max_fill_gap < 1:
            raise ValueError("max_fill_gap must be >= 1")


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------


def _open_source(source: Source) -> tuple[IO[str], bool, str]:
    if hasattr(source, "read"):
        return source, False, "<stream>"
    path = os.fspath(source)
    return open(path, "r", encoding="utf-8", newline=""), True, path


def _parse_header(row: list[str], where: str) -> tuple[str, ...]:
    if not row or row[0].strip() != "date":
        raise ParseError(f"{where}: header must start with 'date', got {row[:1]!r}")
    tickers = tuple(cell.strip() for cell in row[1:])
    if not tickers:
        raise ParseError(f"{where}: header names no ticker columns")
    for name in tickers:
        if not _TICKER_RE.match(name):
            raise ParseError(f"{where}: invalid ticker name {name!r} in header")
    if len(set(tickers)) != len(tickers):
        raise ParseError(f"{where}: duplicate ticker names in header")
    return tickers


def _parse_date(cell: str, where: str, line: int) -> dt.date:
    try:
        return dt.date.fromisoformat(cell.strip())
    except ValueError as exc:
        raise ParseError(f"{where}: line {line}: bad date {cell.strip()!r}") from exc


def _parse_rows(
    source: Source,
) -> tuple[tuple[str, ...], list[dt.date], list[list[str]], str]:
    stream, should_close, where = _open_source(source)
    try:
        reader = csv.reader(stream)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError(f"{where}: empty input") from None
        tickers = _parse_header(header, where)
        dates: list[dt.date] = []
        cells: list[list[str]] = []
        seen: dict[dt.date, int] = {}
        for line, row in enumerate(reader, start=2):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue  # ignore blank lines
            if len(row) != len(tickers) + 1:
                raise ParseError(
                    f"{where}: line {line}: expected {len(tickers) + 1} fields, "
                    f"got {len(row)}"
                )
            date = _parse_date(row[0], where, line)
            if date in seen:
                raise DuplicateDateError(
                    f"{where}: line {line}: date {date} already given on "
                    f"line {seen[date]}"
                )
            seen[date] = line
            dates.append(date)
            cells.append([c.strip() for c in row[1:]])
        if not dates:
            raise ParseError(f"{where}: no data rows")
        return tickers, dates, cells, where
    finally:
        if should_close:
            stream.close()


def parse_price_csv(source: Source) -> PricePanel:
    """Parse a close-price CSV into a PricePanel.

    Args:
        source: file path or open text stream.

    Rows may arrive in any order and are sorted by date. Empty cells become
    missing observations (NaN) for align_calendar to resolve.

    Raises:
        ParseError: malformed header, field count, date, or empty input.
        DuplicateDateError: the same date on two rows.
        ValueError: a non-numeric, non-finite or non-positive price cell
            (message names the line and ticker).
    """
    tickers, dates, cells, where = _parse_rows(source)
    order = np.argsort(np.array(dates, dtype=object))
    prices = np.full((len(dates), len(tickers)), np.nan)
    for out_row, idx in enumerate(order):
        for col, cell in enumerate(cells[idx]):
            if cell == "":
                continue
            try:
                value = float(cell)
            except ValueError as exc:
                raise ValueError(
                    f"{where}: non-numeric price {cell!r} for {tickers[col]} "
                    f"on {dates[idx]}"
                ) from exc
            if not math.isfinite(value) or value <= 0.0:
                raise ValueError(
                    f"{where}: non-positive or non-finite price {cell!r} for "
                    f"{tickers[col]} on {dates[idx]}"
                )
            prices[out_row, col] = value
    sorted_dates = tuple(dates[i] for i in order)
    return PricePanel(dates=sorted_dates, tickers=tickers, prices=prices)


def parse_return_csv(source: Source, mode: str = "simple") -> ReturnPanel:
    """Parse a return CSV (same shape as the price CSV, no missing cells)."""
    tickers, dates, cells, where = _parse_rows(source)
    order = np.argsort(np.array(dates, dtype=object))
    returns = np.empty((len(dates), len(tickers)))
    for out_row, idx in enumerate(order):
        for col, cell in enumerate(cells[idx]):
            if cell == "":
                raise ValueError(
                    f"{where}: missing return for {tickers[col]} on {dates[idx]}"
                )
            try:
                returns[out_row, col] = float(cell)
            except ValueError as exc:
                raise ValueError(
                    f"{where}: non-numeric return {cell!r} for {tickers[col]} "
                    f"on {dates[idx]}"
                ) from exc
    sorted_dates = tuple(dates[i] for i in order)
    return ReturnPanel(dates=sorted_dates, tickers=tickers, returns=returns, mode=mode)


# ---------------------------------------------------------------------------
# serialization (shortest round-trip decimals, byte-stable)
# ---------------------------------------------------------------------------


def _panel_csv(dates: Iterable[dt.date], tickers: tuple[str, ...], values: np.ndarray) -> str:
    out = io.StringIO()
    out.write("date," + ",".join(tickers) + "\n")
    for row, date in enumerate(dates):
        cells = [
            "" if np.isnan(v) else _fmt(v) for v in values[row]
        ]
        out.write(date.isoformat() + "," + ",".join(cells) + "\n")
    return out.getvalue()


def serialize_price_csv(panel: PricePanel) -> str:
    """Render a PricePanel as CSV text; parse_price_csv inverts it exactly."""
    return _panel_csv(panel.dates, panel.tickers, panel.prices)


def serialize_return_csv(panel: ReturnPanel) -> str:
    """Render a ReturnPanel as CSV text; parse_return_csv inverts it exactly."""
    return _panel_csv(panel.dates, panel.tickers, panel.returns)


# ---------------------------------------------------------------------------
# alignment and returns
# ---------------------------------------------------------------------------


def align_calendar(panel: PricePanel, policy: AlignmentPolicy | None = None) -> PricePanel:
    """Resolve missing observations according to policy.

    Returns a panel with no missing cells and the surviving dates.

    Raises:
        InsufficientDataError: fewer than 2 dates survive.
    """
    policy = policy or AlignmentPolicy()
    prices = panel.prices
    n, k = prices.shape
    if policy.method == "strict":
        keep = ~np.isnan(prices).any(axis=1)
        filled = prices
    else:
        filled = prices.copy()
        keep = np.ones(n, dtype=bool)
        for c in range(k):
            last = np.nan
            run = 0
            run_rows: list[int] = []
            for t in range(n):
                if np.isnan(filled[t, c]):
                    run += 1
                    run_rows.append(t)
                    if np.isnan(last) or run > policy.max_fill_gap:
                        # leading gap or run too long: drop every date of the run
                        for r in run_rows:
                            keep[r] = False
                    else:
                        filled[t, c] = last
                else:
                    last = filled[t, c]
                    run = 0
                    run_rows = []
    kept_idx = np.flatnonzero(keep)
    # rows killed by a long run may still hold fills from shorter prefixes;
    # a kept row must have no NaN left in any column
    kept_idx = kept_idx[~np.isnan(filled[kept_idx]).any(axis=1)]
    if kept_idx.size < 2:
        raise InsufficientDataError(
            f"alignment left {kept_idx.size} dates; need at least 2"
        )
    return PricePanel(
        dates=tuple(panel.dates[i] for i in kept_idx),
        tickers=panel.tickers,
        prices=filled[kept_idx],
    )


def compute_returns(panel: PricePanel, mode: str = "simple") -> ReturnPanel:
    """Per-ticker daily returns from an aligned price panel.

    Args:
        panel: aligned PricePanel (no missing cells).
        mode: "simple" for p1/p0 - 1, "log" for ln(p1/p0).

    The first date drops out; output has one fewer row than the input.

    Raises:
        InsufficientDataError: fewer than 2 dates of prices.
        ValueError: unknown mode, or the panel still has missing cells.
    """
    if mode not in RETURN_MODES:
        raise ValueError(f"mode must be one of {RETURN_MODES}, got {mode!r}")
    if panel.n_dates < 2:
        raise InsufficientDataError(
            f"need at least 2 dates to compute returns, have {panel.n_dates}"
        )
    if panel.has_missing:
        raise ValueError("panel has missing cells; run align_calendar first")
    ratio = panel.prices[1:] / panel.prices[:-1]
    returns = ratio - 1.0 if mode == "simple" else np.log(ratio)
    return ReturnPanel(
        dates=panel.dates[1:],
        tickers=panel.tickers,
        returns=returns,
        mode=mode,
    )
