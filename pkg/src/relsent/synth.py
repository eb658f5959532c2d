"""Synthetic factor market with injectable sentiment bias.

Generative model, one return row per day t and one column per stock i:

    s_i(t) = mu_i + beta_i * f(t) + eps_i(t)
    f(t)   ~ Normal(0, factor_vol^2)            common factor
    eps_i  ~ Normal(0, idio_vols[i]^2)          idiosyncratic noise
    mu_i   = true_alphas[i] * sigma_star_i
    sigma_star_i = sqrt(beta_i^2 factor_vol^2 + idio_vols[i]^2)

so true_alphas[i] is the injected drift in units of the stock's own total
volatility: the ground-truth sentiment the estimator should see.

Randomness is pinned for reproducibility across platforms: draws come from
numpy's counter-based Philox bit generator wrapped in numpy.random.Generator,
with numpy's ziggurat standard_normal as the normal transform. The draw
order is fixed: the factor path first (horizon values), then the
idiosyncratic matrix (horizon x n_stocks, C order). Identical seeds give
bit-identical panels.

noise="student-t" swaps both draws for Student-t (t_dof degrees of freedom,
numpy standard_t) rescaled by sqrt((t_dof-2)/t_dof) so factor_vol and
idio_vols stay the true standard deviations; a heavy-tail robustness
option, not the default.

recover_bias runs the sentiment estimator over a generated panel and
checks the estimates against the injected truth. The estimator's
expectation is not the raw injected alpha: subtracting the renormalized
leave-one-out benchmark rescales the drift by a cross-term factor
(measured around 1.1-1.3 for typical configurations). The report fits
this attenuation factor from the data (through-origin regression of
per-stock mean estimates on the injected alphas) instead of assuming 1,
and z-scores each stock against the attenuated target.
"""

from __future__ import annotations

import datetime as dt
import json
import math
import os
from dataclasses import dataclass, field, replace
from typing import Sequence, Union

import numpy as np

from .errors import InsufficientDataError, SpecError
from .market_data import ReturnPanel
from .yardstick import VolatilityConfig, alpha_matrix

try:
    import tomllib
except ModuleNotFoundError:  # python < 3.11
    import tomli as tomllib

EPOCH = dt.date(2000, 1, 3)

Z_PASS_LIMIT = 3.0

NOISE_MODELS = ("gaussian", "student-t")

_SPEC_FIELDS = {
    "n_stocks",
    "horizon",
    "factor_vol",
    "idio_vols",
    "true_alphas",
    "betas",
    "seed",
    "noise",
    "t_dof",
}


def _per_stock(value, n: int, name: str, default: float) -> tuple[float, ...]:
    """Broadcast a scalar or validate a length-n sequence."""
    if value is None:
        return (float(default),) * n
    if isinstance(value, (int, float)):
        return (float(value),) * n
    out = tuple(float(v) for v in value)
    if len(out) != n:
        raise SpecError(f"{name} has {len(out)} entries for {n} stocks")
    return out


@dataclass(frozen=True)
class SynthSpec:
    """Parameters of a synthetic market.

    idio_vols, true_alphas and betas accept a scalar (broadcast to all
    stocks) or one value per stock.
    """

    n_stocks: int
    horizon: int
    factor_vol: float
    idio_vols: Union[float, Sequence[float]]
    true_alphas: Union[float, Sequence[float]] = 0.0
    betas: Union[float, Sequence[float]] = 1.0
    seed: int = 0
    noise: str = "gaussian"
    t_dof: float = 5.0

    def __post_init__(self) -> None:
        if self.n_stocks < 2:
            raise SpecError(f"n_stocks must be >= 2, got {self.n_stocks}")
        if self.horizon < 2:
            raise SpecError(f"horizon must be >= 2, got {self.horizon}")
        if not math.isfinite(self.factor_vol) or self.factor_vol < 0:
            raise SpecError(f"factor_vol must be >= 0, got {self.factor_vol}")
        object.__setattr__(
            self, "idio_vols", _per_stock(self.idio_vols, self.n_stocks, "idio_vols", 0.0)
        )
        object.__setattr__(
            self,
            "true_alphas",
            _per_stock(self.true_alphas, self.n_stocks, "true_alphas", 0.0),
        )
        object.__setattr__(
            self, "betas", _per_stock(self.betas, self.n_stocks, "betas", 1.0)
        )
        if any(not math.isfinite(v) or v <= 0 for v in self.idio_vols):
            raise SpecError("idio_vols must all be strictly positive")
        if any(not math.isfinite(v) for v in self.true_alphas):
            raise SpecError("true_alphas must be finite")
        if any(not math.isfinite(v) for v in self.betas):
            raise SpecError("betas must be finite")
        if not 0 <= int(self.seed) < 2**64:
            raise SpecError("seed must fit in an unsigned 64-bit integer")
        object.__setattr__(self, "seed", int(self.seed))
        if self.noise not in NOISE_MODELS:
            raise SpecError(f"noise must be one of {NOISE_MODELS}, got {self.noise!r}")
        if self.noise == "student-t" and self.t_dof <= 2:
            raise SpecError("t_dof must exceed 2 for a finite variance")

    @property
    def sigma_star(self) -> tuple[float, ...]:
        """Per-stock total volatility implied by the model."""
        return tuple(
            math.sqrt(b * b * self.factor_vol**2 + v * v)
            for b, v in zip(self.betas, self.idio_vols)
        )

    @classmethod
    def from_dict(cls, raw: dict) -> "SynthSpec":
        unknown = set(raw) - _SPEC_FIELDS
        if unknown:
            raise SpecError(f"unknown spec fields: {sorted(unknown)}")
        missing = {"n_stocks", "horizon", "factor_vol", "idio_vols"} - set(raw)
        if missing:
            raise SpecError(f"spec fields missing: {sorted(missing)}")
        return cls(**raw)

    @classmethod
    def from_file(cls, path: Union[str, os.PathLike]) -> "SynthSpec":
        """Load a spec from a .toml or .json file (by extension)."""
        path = os.fspath(path)
        if path.endswith(".toml"):
            with open(path, "rb") as fh:
                raw = tomllib.load(fh)
        elif path.endswith(".json"):
            with open(path, "r", encoding="utf-8") as fh:
                raw = json.load(fh)
        else:
            raise SpecError(f"spec file must end in .toml or .json: {path}")
        if not isinstance(raw, dict):
            raise SpecError(f"spec file must hold a table/object: {path}")
        return cls.from_dict(raw)


@dataclass(frozen=True)
class GroundTruth:
    """What was injected into a generated panel."""

    tickers: tuple[str, ...]
    true_alphas: tuple[float, ...]
    betas: tuple[float, ...]
    factor_vol: float
    idio_vols: tuple[float, ...]
    sigma_star: tuple[float, ...]
    seed: int
    noise: str
    event: dict | None = None

    def to_json_dict(self) -> dict:
        out = {
            "tickers": list(self.tickers),
            "true_alphas": list(self.true_alphas),
            "betas": list(self.betas),
            "factor_vol": self.factor_vol,
            "idio_vols": list(self.idio_vols),
            "sigma_star": list(self.sigma_star),
            "seed": self.seed,
            "noise": self.noise,
        }
        if self.event is not None:
            out["event"] = self.event
        return out


@dataclass(frozen=True)
class StockRecovery:
    """Recovery stats for one stock."""

    ticker: str
    true_alpha: float
    alpha_mean: float
    alpha_stderr: float
    z: float
    n_obs: int


@dataclass(frozen=True)
class RecoveryReport:
    """Estimator-vs-truth summary over a synthetic panel.

    attenuation is the measured through-origin slope of per-stock mean
    estimates on injected alphas (1.0 when nothing was injected); z-scores
    are taken against attenuation * true_alpha. rank_ok checks that every
    pair of stocks with distinct injected alphas is ordered correctly by
    the estimates; None when all injected alphas are equal.
    """

    stocks: tuple[StockRecovery, ...]
    attenuation: float
    max_abs_z: float
    passed: bool
    rank_ok: bool | None

    def to_json_dict(self) -> dict:
        return {
            "stocks": [
                {
                    "ticker": s.ticker,
                    "true_alpha": s.true_alpha,
                    "alpha_mean": s.alpha_mean,
                    "alpha_stderr": s.alpha_stderr,
                    "z": s.z,
                    "n_obs": s.n_obs,
                }
                for s in self.stocks
            ],
            "attenuation": self.attenuation,
            "max_abs_z": self.max_abs_z,
            "passed": self.passed,
            "rank_ok": self.rank_ok,
        }


def _tickers(n: int) -> tuple[str, ...]:
    width = max(2, len(str(n - 1)))
    return tuple(f"S{i:0{width}d}" for i in range(n))


def _draw(rng: np.random.Generator, spec: SynthSpec, size) -> np.ndarray:
    if spec.noise == "gaussian":
        return rng.standard_normal(size)
    scale = math.sqrt((spec.t_dof - 2.0) / spec.t_dof)
    return rng.standard_t(spec.t_dof, size) * scale


def generate_market(spec: SynthSpec) -> tuple[ReturnPanel, GroundTruth]:
    """Generate a return panel plus its ground-truth record.

    Deterministic in spec.seed; see the module docstring for the pinned
    generator and draw order.
    """
    rng = np.random.Generator(np.random.Philox(spec.seed))
    factor = _draw(rng, spec, spec.horizon) * spec.factor_vol
    eps = _draw(rng, spec, (spec.horizon, spec.n_stocks)) * np.asarray(spec.idio_vols)
    betas = np.asarray(spec.betas)
    mu = np.asarray(spec.true_alphas) * np.asarray(spec.sigma_star)
    returns = mu + factor[:, None] * betas + eps
    dates = tuple(EPOCH + dt.timedelta(days=t) for t in range(spec.horizon))
    panel = ReturnPanel(
        dates=dates, tickers=_tickers(spec.n_stocks), returns=returns, mode="simple"
    )
    truth = GroundTruth(
        tickers=panel.tickers,
        true_alphas=spec.true_alphas,
        betas=spec.betas,
        factor_vol=spec.factor_vol,
        idio_vols=spec.idio_vols,
        sigma_star=spec.sigma_star,
        seed=spec.seed,
        noise=spec.noise,
    )
    return panel, truth


def event_scenario(
    spec: SynthSpec, event_day: int, jump: float, stock: int = 0
) -> tuple[ReturnPanel, GroundTruth]:
    """generate_market plus a one-day additive return shock.

    The shock of size jump lands on the designated stock at row index
    event_day. jump=0 reproduces generate_market exactly.
    """
    if not 0 <= event_day < spec.horizon:
        raise SpecError(f"event_day {event_day} outside horizon {spec.horizon}")
    if not 0 <= stock < spec.n_stocks:
        raise SpecError(f"stock index {stock} outside n_stocks {spec.n_stocks}")
    panel, truth = generate_market(spec)
    returns = panel.returns.copy()
    returns[event_day, stock] += jump
    shocked = ReturnPanel(
        dates=panel.dates, tickers=panel.tickers, returns=returns, mode=panel.mode
    )
    event = {
        "day": int(event_day),
        "date": panel.dates[event_day].isoformat(),
        "stock": panel.tickers[stock],
        "jump": float(jump),
    }
    return shocked, replace(truth, event=event)


def recover_bias(
    panel: ReturnPanel,
    truth: GroundTruth,
    cfg: VolatilityConfig | None = None,
) -> RecoveryReport:
    """Estimate per-stock sentiment means and z-score them against truth.

    stderr is the plain iid standard error over eligible dates; it is
    honest in full mode (daily alpha estimates are independent there) and
    mildly understated under rolling windows, where overlapping windows
    autocorrelate the series.

    Raises:
        InsufficientDataError: panel shorter than the volatility window
            plus one row (rolling) or two rows (full), or a stock retains
            fewer than two eligible dates.
    """
    cfg = cfg or VolatilityConfig()
    need = cfg.window + 1 if cfg.mode == "rolling" else 2
    if panel.n_dates < need:
        raise InsufficientDataError(
            f"panel has {panel.n_dates} rows; {cfg.mode} recovery needs {need}"
        )
    if tuple(panel.tickers) != tuple(truth.tickers):
        raise ValueError("panel tickers do not match the ground truth")
    alphas = alpha_matrix(panel, cfg)
    true = np.asarray(truth.true_alphas)
    stocks = []
    means = np.empty(panel.n_tickers)
    for i, ticker in enumerate(panel.tickers):
        col = alphas[:, i]
        col = col[np.isfinite(col)]
        if col.size < 2:
            raise InsufficientDataError(
                f"{ticker}: only {col.size} eligible dates; need at least 2"
            )
        means[i] = col.mean()
        stderr = float(col.std(ddof=1) / np.sqrt(col.size))
        stocks.append((ticker, float(true[i]), float(means[i]), stderr, col.size))
    true_energy = float(np.dot(true, true))
    attenuation = float(np.dot(true, means) / true_energy) if true_energy > 0 else 1.0
    records = []
    for (ticker, t_alpha, mean, stderr, n_obs) in stocks:
        z = (mean - attenuation * t_alpha) / stderr
        records.append(
            StockRecovery(
                ticker=ticker,
                true_alpha=t_alpha,
                alpha_mean=mean,
                alpha_stderr=stderr,
                z=float(z),
                n_obs=n_obs,
            )
        )
    max_abs_z = max(abs(r.z) for r in records)
    rank_ok: bool | None
    if np.unique(true).size < 2:
        rank_ok = None
    else:
        rank_ok = True
        for i in range(len(records)):
            for j in range(len(records)):
                if true[i] > true[j] and not means[i] > means[j]:
                    rank_ok = False
    return RecoveryReport(
        stocks=tuple(records),
        attenuation=attenuation,
        max_abs_z=float(max_abs_z),
        passed=bool(max_abs_z < Z_PASS_LIMIT),
        rank_ok=rank_ok,
    )
