"""Single-factor market baseline and the hypothesis comparison report.

The baseline prices stock i against a market index R(t) built from the
panel itself: expected return beta_i * R(t) with the risk-free rate fixed
at zero, beta_i = Cov(s_i, R) / Var(R) (population moments, same window
conventions as the sentiment volatilities).

By default the index includes stock i (equal-weight mean over all N
columns); include_self=False excludes the stock from its own index, which
is the ablation matching the leave-one-out benchmark geometry.

compare_fits measures how each hypothesis' point cloud sits relative to
the diagonal y = x. The primary statistic is the through-origin orthogonal
regression slope: the slope m of the line through the origin minimizing
perpendicular point-line distance, i.e. the symmetry axis of the cloud.
For in-sample baselines the ordinary y-on-x through-origin slope is an
algebraic identity (x = beta*R is already the least-squares projection of
y on R, forcing slope 1 for any data), so it cannot distinguish the
hypotheses; it is still reported in the ols_slope_* fields. The symmetry
statistic is the mean signed perpendicular distance (y - x)/sqrt(2) from
the diagonal.
"""

from __future__ import annotations

import datetime as dt
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import _kernels
from .errors import (
    DimensionError,
    EmptyResultError,
    ZeroVarianceError,
)
from .market_data import ReturnPanel
from .yardstick import VolatilityConfig, YardstickPoint

RISK_FREE = 0.0

WEIGHT_SUM_TOL = 1e-12


@dataclass(frozen=True)
class IndexSpec:
    """Market index definition: equal weights or a user vector.

    User weights must be nonnegative and sum to 1 within 1e-12. With
    include_self=False the priced stock is removed and the remaining
    weights renormalized.
    """

    weights: str | Sequence[float] = "equal"
    include_self: bool = True

    def __post_init__(self) -> None:
        if isinstance(self.weights, str):
            if self.weights != "equal":
                raise ValueError(f"unknown weights scheme {self.weights!r}")
            return
        w = np.asarray(self.weights, dtype=np.float64)
        if w.ndim != 1:
            raise ValueError("weights must be a 1-D vector")
        if (w < 0).any():
            raise ValueError("weights must be nonnegative")
        if abs(w.sum() - 1.0) > WEIGHT_SUM_TOL:
            raise ValueError(f"weights sum to {w.sum()!r}, expected 1")
        object.__setattr__(self, "weights", tuple(float(v) for v in w))

    def vector(self, n: int, exclude: int | None = None) -> np.ndarray:
        """Effective weight vector for an n-column panel."""
        if isinstance(self.weights, str):
            w = np.full(n, 1.0 / n)
        else:
            if len(self.weights) != n:
                raise DimensionError(
                    f"weight vector has {len(self.weights)} entries "
                    f"for {n} tickers"
                )
            w = np.asarray(self.weights, dtype=np.float64)
        if exclude is not None:
            w = w.copy()
            w[exclude] = 0.0
            total = w.sum()
            if total <= 0:
                raise ZeroVarianceError(
                    "index weights vanish once the priced stock is excluded"
                )
            w = w / total
        return w


@dataclass(frozen=True)
class CapmStats:
    """Baseline fit for one stock. beta is a scalar in full mode, a per-date
    array (NaN during warm-up or zero-variance windows) in rolling mode."""

    ticker: str
    beta: float | np.ndarray = field(repr=False)
    risk_free: float = RISK_FREE
    window_mode: str = "full"


@dataclass(frozen=True)
class CapmPoint:
    """One (date, ticker) point of the baseline plot: x = beta*R(t), y = s_i(t)."""

    date: dt.date
    ticker: str
    x: float
    y: float


@dataclass(frozen=True)
class ComparisonReport:
    """Diagonal-fit comparison of the two hypotheses' point clouds."""

    slope_yardstick: float
    slope_capm: float
    symmetry_yardstick: float
    symmetry_capm: float
    n_points_yardstick: int
    n_points_capm: int
    ols_slope_yardstick: float
    ols_slope_capm: float

    @property
    def slope_dev_yardstick(self) -> float:
        return abs(self.slope_yardstick - 1.0)

    @property
    def slope_dev_capm(self) -> float:
        return abs(self.slope_capm - 1.0)

    @property
    def closer_slope(self) -> str:
        if self.slope_dev_yardstick == self.slope_dev_capm:
            return "tie"
        return "yardstick" if self.slope_dev_yardstick < self.slope_dev_capm else "capm"

    @property
    def closer_symmetry(self) -> str:
        a, b = abs(self.symmetry_yardstick), abs(self.symmetry_capm)
        if a == b:
            return "tie"
        return "yardstick" if a < b else "capm"

    def to_json_dict(self) -> dict:
        return {
            "slope_yardstick": self.slope_yardstick,
            "slope_capm": self.slope_capm,
            "symmetry_yardstick": self.symmetry_yardstick,
            "symmetry_capm": self.symmetry_capm,
            "n_points": {
                "yardstick": self.n_points_yardstick,
                "capm": self.n_points_capm,
            },
            "ols_slope_yardstick": self.ols_slope_yardstick,
            "ols_slope_capm": self.ols_slope_capm,
            "slope_dev_yardstick": self.slope_dev_yardstick,
            "slope_dev_capm": self.slope_dev_capm,
            "closer_slope": self.closer_slope,
            "closer_symmetry": self.closer_symmetry,
        }


def index_return(
    panel: ReturnPanel, spec: IndexSpec | None = None, exclude: int | None = None
) -> np.ndarray:
    """Weighted index return series R(t) over the panel.

    exclude drops that ticker and renormalizes (used internally for
    include_self=False).
    """
    spec = spec or IndexSpec()
    w = spec.vector(panel.n_tickers, exclude)
    return panel.returns @ w


def beta(
    panel: ReturnPanel,
    i: int,
    spec: IndexSpec | None = None,
    cfg: VolatilityConfig | None = None,
) -> CapmStats:
    """Market beta of ticker i: population Cov(s_i, R)/Var(R).

    Full mode gives a scalar; rolling mode a per-date series over windows
    ending at each date (same convention as windowed_std), NaN where the
    window is not ready or has zero index variance.

    Raises:
        ZeroVarianceError: Var(R) == 0 (full mode), or no rolling window
            has positive variance.
        DimensionError: user weight vector length mismatch.
    """
    spec = spec or IndexSpec()
    cfg = cfg or VolatilityConfig()
    if not 0 <= i < panel.n_tickers:
        raise IndexError(f"ticker index {i} out of range")
    own = panel.returns[:, i]
    R = index_return(panel, spec, exclude=None if spec.include_self else i)
    if cfg.mode == "full":
        var = float(R.var())
        if var == 0.0:
            raise ZeroVarianceError("index variance is zero over the full sample")
        cov = float(np.mean((own - own.mean()) * (R - R.mean())))
        return CapmStats(ticker=panel.tickers[i], beta=cov / var, window_mode="full")
    cov = _kernels.rolling_cov(own, R, cfg.window)
    _, var = _kernels.rolling_mean_var(R, cfg.window)
    ok = np.isfinite(var) & (var > 0)
    series = np.full(own.shape, np.nan)
    np.divide(cov, var, out=series, where=ok)
    if not np.isfinite(series).any():
        raise ZeroVarianceError(
            "no rolling window has positive index variance"
        )
    return CapmStats(ticker=panel.tickers[i], beta=series, window_mode="rolling")


def capm_points(
    panel: ReturnPanel,
    spec: IndexSpec | None = None,
    cfg: VolatilityConfig | None = None,
) -> list[CapmPoint]:
    """All eligible (date, ticker) baseline points, ticker-major order.

    x = beta_i * R(t) with the risk-free rate zero; rolling mode pairs each
    date with the beta of the window ending there.
    """
    spec = spec or IndexSpec()
    cfg = cfg or VolatilityConfig()
    points: list[CapmPoint] = []
    for i, ticker in enumerate(panel.tickers):
        stats = beta(panel, i, spec, cfg)
        R = index_return(panel, spec, exclude=None if spec.include_self else i)
        x = np.asarray(stats.beta) * R
        for t in np.flatnonzero(np.isfinite(x)):
            points.append(
                CapmPoint(
                    date=panel.dates[t],
                    ticker=ticker,
                    x=float(x[t]),
                    y=float(panel.returns[t, i]),
                )
            )
    if not points:
        raise EmptyResultError("every (date, ticker) pair was excluded")
    return points


def _xy(points: Sequence[YardstickPoint | CapmPoint]) -> tuple[np.ndarray, np.ndarray]:
    x = np.fromiter((p.x for p in points), dtype=np.float64, count=len(points))
    y = np.fromiter((p.y for p in points), dtype=np.float64, count=len(points))
    return x, y


def orthogonal_slope(x: np.ndarray, y: np.ndarray) -> float:
    """Slope of the through-origin line minimizing perpendicular distances.

    Uses uncentered second moments; for Sxy > 0 this is the major axis of
    the cloud. Raises ZeroVarianceError when x and y are uncorrelated
    through the origin (Sxy == 0), where no axis is defined.
    """
    sxx = float(np.dot(x, x))
    syy = float(np.dot(y, y))
    sxy = float(np.dot(x, y))
    if sxy == 0.0:
        raise ZeroVarianceError("x-y cross moment is zero; no diagonal fit")
    d = syy - sxx
    return (d + np.hypot(d, 2.0 * sxy)) / (2.0 * sxy)


def ols_origin_slope(x: np.ndarray, y: np.ndarray) -> float:
    """Ordinary through-origin slope of y on x."""
    sxx = float(np.dot(x, x))
    if sxx == 0.0:
        raise ZeroVarianceError("x has zero energy; no slope")
    return float(np.dot(x, y) / sxx)


def symmetry_statistic(x: np.ndarray, y: np.ndarray) -> float:
    """Mean signed perpendicular distance from the diagonal y = x."""
    return float(np.mean(y - x) / np.sqrt(2.0))


def compare_fits(
    yard_points: Sequence[YardstickPoint],
    baseline_points: Sequence[CapmPoint],
) -> ComparisonReport:
    """Rank the two hypotheses by diagonal fit.

    Slope fields are the orthogonal through-origin slopes (closer to 1 is
    better); symmetry fields the mean signed perpendicular distances
    (closer to 0 is better). Invariant under point reordering.
    """
    if not yard_points or not baseline_points:
        raise EmptyResultError("compare_fits needs nonempty point sets")
    xy_x, xy_y = _xy(yard_points)
    cp_x, cp_y = _xy(baseline_points)
    return ComparisonReport(
        slope_yardstick=orthogonal_slope(xy_x, xy_y),
        slope_capm=orthogonal_slope(cp_x, cp_y),
        symmetry_yardstick=symmetry_statistic(xy_x, xy_y),
        symmetry_capm=symmetry_statistic(cp_x, cp_y),
        n_points_yardstick=len(yard_points),
        n_points_capm=len(baseline_points),
        ols_slope_yardstick=ols_origin_slope(xy_x, xy_y),
        ols_slope_capm=ols_origin_slope(cp_x, cp_y),
    )
