"""Leave-one-out yardstick benchmark and volatility-normalized sentiment.

The model prices a stock's daily return against the average return of the
other stocks in its pool, with each side measured in units of its own
volatility. For stock i at date t, with s_i(t) the return and R_-i(t) the
equal-weight mean return of the pool excluding i:

    alpha_i(t) = s_i(t) / sigma(s_i) - R_-i(t) / sigma(R_-i)

sigma is the population standard deviation, taken either over a rolling
window of the trailing ``window`` observations ending at t (inclusive), or
over the full sample. alpha is the per-day sentiment score: the stock's
move in excess of what the pool benchmark prescribes, in volatility units.

Inverting the definition decomposes the raw return:

    s_i(t) = sigma(s_i) * alpha_i(t) + (sigma(s_i) / sigma(R_-i)) * R_-i(t)

which is what predicted_return evaluates for a hypothetical alpha.
"""

from __future__ import annotations

import datetime as dt
from dataclasses import dataclass, field, replace

import numpy as np

from . import _kernels
from .errors import (
    EmptyResultError,
    InsufficientDataError,
    WindowNotReadyError,
    ZeroVarianceError,
)
from .market_data import ReturnPanel

DEFAULT_WINDOW = 20

WINDOW_MODES = ("rolling", "full")


@dataclass(frozen=True)
class VolatilityConfig:
    """Volatility estimation settings.

    mode "rolling" uses the window observations ending at and including the
    evaluation date; mode "full" uses the whole series regardless of date.
    The estimator divides by the number of observations (population).
    """

    mode: str = "rolling"
    window: int = DEFAULT_WINDOW
    estimator: str = "population"

    def __post_init__(self) -> None:
        mode = "full" if self.mode == "full-sample" else self.mode
        object.__setattr__(self, "mode", mode)
        if self.mode not in WINDOW_MODES:
            raise ValueError(f"mode must be one of {WINDOW_MODES}, got {self.mode!r}")
        if self.mode == "rolling" and self.window < 2:
            raise ValueError("rolling window must be >= 2")
        if self.estimator != "population":
            raise ValueError("only the population estimator is supported")


@dataclass(frozen=True)
class SentimentSeries:
    """Per-stock sentiment over its eligible dates.

    zero_vol_dates lists dates dropped because either volatility in the
    denominator was exactly zero; warm-up dates (rolling mode) are not
    listed, they are simply never eligible.
    """

    ticker: str
    dates: tuple[dt.date, ...]
    alpha: np.ndarray = field(repr=False)
    cumulative: np.ndarray = field(repr=False)
    zero_vol_dates: tuple[dt.date, ...] = ()

    def __post_init__(self) -> None:
        alpha = np.asarray(self.alpha, dtype=np.float64)
        cumulative = np.asarray(self.cumulative, dtype=np.float64)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "cumulative", cumulative)
        if alpha.shape != (len(self.dates),) or cumulative.shape != alpha.shape:
            raise ValueError("dates, alpha and cumulative lengths must agree")


@dataclass(frozen=True)
class YardstickPoint:
    """One (date, ticker) point of the yardstick hypothesis plot.

    x is the benchmark-implied return rescaled to the stock's own
    volatility, y is the realized return. Under a perfect yardstick fit
    with zero sentiment, y == x.
    """

    date: dt.date
    ticker: str
    x: float
    y: float


def _normalize_t(t: int, n: int) -> int:
    t = int(t)
    if t < 0:
        t += n
    if not 0 <= t < n:
        raise IndexError(f"date index {t} out of range for {n} dates")
    return t


def leave_one_out_return(panel: ReturnPanel, i: int, t: int) -> float:
    """Equal-weight mean return over all tickers except i, at date index t."""
    if panel.n_tickers < 2:
        raise InsufficientDataError("leave-one-out needs at least 2 tickers")
    n = panel.n_tickers
    t = _normalize_t(t, panel.n_dates)
    row = panel.returns[t]
    return float((row.sum() - row[i]) / (n - 1))


def loo_matrix(panel: ReturnPanel) -> np.ndarray:
    """(T, N) matrix of leave-one-out mean returns, one column per ticker."""
    if panel.n_tickers < 2:
        raise InsufficientDataError("leave-one-out needs at least 2 tickers")
    total = panel.returns.sum(axis=1, keepdims=True)
    return (total - panel.returns) / (panel.n_tickers - 1)


def windowed_std(series: np.ndarray, cfg: VolatilityConfig, t: int = -1) -> float:
    """Population standard deviation of the window ending at index t.

    In full mode t is ignored and the whole series is used. In rolling mode
    the window is series[t-window+1 .. t].

    Raises:
        WindowNotReadyError: rolling mode with fewer than window
            observations available at t.
    """
    series = np.asarray(series, dtype=np.float64)
    if series.ndim != 1:
        raise ValueError("series must be 1-D")
    if cfg.mode == "full":
        if series.size == 0:
            raise WindowNotReadyError("empty series")
        return float(series.std())
    t = _normalize_t(t, series.size)
    if t + 1 < cfg.window:
        raise WindowNotReadyError(
            f"window of {cfg.window} not ready at index {t} "
            f"(have {t + 1} observations)"
        )
    return float(series[t - cfg.window + 1 : t + 1].std())


def _std_matrix(values: np.ndarray, cfg: VolatilityConfig) -> np.ndarray:
    """(T, N) per-date volatility of each column under cfg; NaN in warm-up."""
    if cfg.mode == "full":
        return np.broadcast_to(values.std(axis=0), values.shape).copy()
    _, var = _kernels.rolling_mean_var_panel(values, cfg.window)
    return np.sqrt(var)


def alpha_matrix(
    panel: ReturnPanel, cfg: VolatilityConfig | None = None
) -> np.ndarray:
    """(T, N) sentiment matrix; NaN marks warm-up and zero-volatility dates.

    Vectorized across the whole panel; sentiment() is the per-stock view
    with explicit eligibility bookkeeping.
    """
    cfg = cfg or VolatilityConfig()
    loo = loo_matrix(panel)
    sigma_own = _std_matrix(panel.returns, cfg)
    sigma_loo = _std_matrix(loo, cfg)
    ok = (
        np.isfinite(sigma_own)
        & np.isfinite(sigma_loo)
        & (sigma_own > 0)
        & (sigma_loo > 0)
    )
    own_term = np.full(panel.returns.shape, np.nan)
    np.divide(panel.returns, sigma_own, out=own_term, where=ok)
    bench_term = np.full(panel.returns.shape, np.nan)
    np.divide(loo, sigma_loo, out=bench_term, where=ok)
    return np.where(ok, own_term - bench_term, np.nan)


def sentiment(
    panel: ReturnPanel, i: int, cfg: VolatilityConfig | None = None
) -> SentimentSeries:
    """Sentiment series for ticker index i.

    Dates where either volatility is exactly zero are excluded and reported
    in zero_vol_dates; rolling warm-up dates are excluded silently.

    Raises:
        EmptyResultError: no date survives the exclusions.
    """
    cfg = cfg or VolatilityConfig()
    if not 0 <= i < panel.n_tickers:
        raise IndexError(f"ticker index {i} out of range")
    loo = loo_matrix(panel)[:, i]
    own = panel.returns[:, i]
    sigma_own = _std_matrix(panel.returns, cfg)[:, i]
    sigma_loo = _std_matrix(loo[:, None], cfg)[:, 0]
    ready = np.isfinite(sigma_own) & np.isfinite(sigma_loo)
    zero = ready & ((sigma_own == 0) | (sigma_loo == 0))
    ok = ready & ~zero
    if not ok.any():
        raise EmptyResultError(
            f"no eligible dates for {panel.tickers[i]}: "
            f"{int(zero.sum())} zero-volatility, rest warm-up"
        )
    alpha = own[ok] / sigma_own[ok] - loo[ok] / sigma_loo[ok]
    return SentimentSeries(
        ticker=panel.tickers[i],
        dates=tuple(d for d, k in zip(panel.dates, ok) if k),
        alpha=alpha,
        cumulative=np.cumsum(alpha),
        zero_vol_dates=tuple(d for d, z in zip(panel.dates, zero) if z),
    )


def cumulative_sentiment(series: SentimentSeries) -> SentimentSeries:
    """Recompute the running sum of alpha; idempotent."""
    return replace(series, cumulative=np.cumsum(series.alpha))


def predicted_return(
    panel: ReturnPanel,
    i: int,
    t: int,
    alpha_assumed: float,
    cfg: VolatilityConfig | None = None,
) -> float:
    """Return implied by the decomposition for a hypothetical sentiment.

    Evaluates sigma(s_i)*alpha + (sigma(s_i)/sigma(R_-i))*R_-i(t) at date
    index t. With alpha_assumed equal to the realized sentiment this
    reproduces the observed return bit-for-bit up to rounding.

    Raises:
        WindowNotReadyError: rolling window not ready at t.
        ZeroVarianceError: either volatility is exactly zero at t.
    """
    cfg = cfg or VolatilityConfig()
    t = _normalize_t(t, panel.n_dates)
    loo = loo_matrix(panel)[:, i]
    sigma_own = windowed_std(panel.returns[:, i], cfg, t)
    sigma_loo = windowed_std(loo, cfg, t)
    if sigma_own == 0 or sigma_loo == 0:
        raise ZeroVarianceError(
            f"zero volatility for {panel.tickers[i]} at {panel.dates[t]}"
        )
    return float(sigma_own * alpha_assumed + (sigma_own / sigma_loo) * loo[t])


def yardstick_points(
    panel: ReturnPanel, cfg: VolatilityConfig | None = None
) -> list[YardstickPoint]:
    """All eligible (date, ticker) yardstick points, ticker-major order.

    x = (R_-i(t)/sigma(R_-i)) * sigma(s_i), y = s_i(t). Stocks whose whole
    series is excluded contribute no points; an entirely empty result
    raises EmptyResultError.
    """
    cfg = cfg or VolatilityConfig()
    loo = loo_matrix(panel)
    sigma_own = _std_matrix(panel.returns, cfg)
    sigma_loo = _std_matrix(loo, cfg)
    ok = (
        np.isfinite(sigma_own)
        & np.isfinite(sigma_loo)
        & (sigma_own > 0)
        & (sigma_loo > 0)
    )
    points: list[YardstickPoint] = []
    for i, ticker in enumerate(panel.tickers):
        for t in np.flatnonzero(ok[:, i]):
            x = loo[t, i] / sigma_loo[t, i] * sigma_own[t, i]
            points.append(
                YardstickPoint(
                    date=panel.dates[t], ticker=ticker, x=float(x), y=float(panel.returns[t, i])
                )
            )
    if not points:
        raise EmptyResultError("every (date, ticker) pair was excluded")
    return points
