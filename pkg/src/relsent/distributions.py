"""Distributional diagnostics for sentiment scores and hypothesis points.

Three views of the data:

  * conditional_pdf: the density of realized returns y inside a thin slab
    of benchmark-implied returns x near a target (does the most likely y
    sit on the diagonal?),
  * sentiment_histogram and fit_laplace: the pooled sentiment density and
    its zero-centered two-sided Laplace maximum-likelihood fit (are the
    tails exponential and the two sides the same scale?),
  * symmetry_test: sign counts with an exact binomial test (is positive
    sentiment as common as negative?).

Histograms are density-normalized: sum(density * bin_width) == 1.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.stats import binomtest

from .errors import (
    EmptyResultError,
    EmptySlabError,
    OneSidedFitError,
    SampleTooSmallWarning,
)

SLAB_TOL_FACTOR = 0.1
MIN_SLAB_SAMPLE = 30
MIN_BINS = 10
MIN_SIDE = 10
TARGET_PERCENTILES = (10.0, 30.0, 50.0, 70.0, 90.0)
DENSITY_TOL = 1e-9


@dataclass(frozen=True)
class Histogram:
    """Counts and normalized density over contiguous bins."""

    edges: np.ndarray = field(repr=False)
    counts: np.ndarray = field(repr=False)
    density: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        edges = np.asarray(self.edges, dtype=np.float64)
        counts = np.asarray(self.counts, dtype=np.int64)
        density = np.asarray(self.density, dtype=np.float64)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "counts", counts)
        object.__setattr__(self, "density", density)
        if edges.ndim != 1 or edges.size < 2:
            raise ValueError("edges must hold at least one bin")
        if counts.shape != (edges.size - 1,) or density.shape != counts.shape:
            raise ValueError("counts/density must have one entry per bin")
        mass = float(np.sum(density * np.diff(edges)))
        if abs(mass - 1.0) > DENSITY_TOL:
            raise ValueError(f"density integrates to {mass!r}, expected 1")

    @property
    def n_bins(self) -> int:
        return self.edges.size - 1

    @property
    def widths(self) -> np.ndarray:
        return np.diff(self.edges)

    @property
    def midpoints(self) -> np.ndarray:
        return 0.5 * (self.edges[:-1] + self.edges[1:])

    def peak(self) -> float:
        """Midpoint of the highest-density bin (first bin on ties)."""
        return float(self.midpoints[int(np.argmax(self.density))])


@dataclass(frozen=True)
class ConditionalPdf:
    """Density of y conditioned on x within tolerance of x_target."""

    x_target: float
    tolerance: float
    histogram: Histogram
    peak: float
    n_sample: int
    small_sample: bool


@dataclass(frozen=True)
class LaplaceFit:
    """Zero-centered two-sided Laplace MLE.

    scale_pos is the MLE scale of the strictly positive samples, scale_neg
    of the magnitudes of the strictly negative ones, scale_pooled the MLE
    over the whole sample (zeros included). asymmetry is
    |scale_pos - scale_neg| / scale_pooled.
    """

    scale_pos: float
    scale_neg: float
    scale_pooled: float
    asymmetry: float
    n_pos: int
    n_neg: int
    location: float = 0.0

    def to_json_dict(self) -> dict:
        return {
            "location": self.location,
            "scale_pos": self.scale_pos,
            "scale_neg": self.scale_neg,
            "scale_pooled": self.scale_pooled,
            "asymmetry": self.asymmetry,
            "n_pos": self.n_pos,
            "n_neg": self.n_neg,
        }


@dataclass(frozen=True)
class SymmetryReport:
    """Sign balance of a sentiment sample.

    p_value is the exact two-sided binomial sign test with success
    probability 0.5 over the nonzero samples. asymmetry is the relaxed
    (min_side=1) Laplace fit asymmetry, or None when a side is empty.
    """

    n: int
    mean: float
    n_pos: int
    n_neg: int
    n_zero: int
    p_value: float
    asymmetry: float | None

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "mean": self.mean,
            "n_pos": self.n_pos,
            "n_neg": self.n_neg,
            "n_zero": self.n_zero,
            "p_value": self.p_value,
            "asymmetry": self.asymmetry,
        }


def _freedman_diaconis_bins(values: np.ndarray, lo: float, hi: float) -> int:
    """FD bin count over [lo, hi], floored at MIN_BINS."""
    q75, q25 = np.percentile(values, [75.0, 25.0])
    width = 2.0 * (q75 - q25) / values.size ** (1.0 / 3.0)
    if width <= 0.0:
        return MIN_BINS
    return max(int(np.ceil((hi - lo) / width)), MIN_BINS)


def build_histogram(
    values: np.ndarray,
    lo: float | None = None,
    hi: float | None = None,
    bins: int | str = "fd",
) -> Histogram:
    """Density histogram of values over [lo, hi] (data range by default).

    bins is an explicit count or "fd" for Freedman-Diaconis with a floor
    of MIN_BINS. A zero-width range is widened by +-0.5 around the value.
    """
    values = np.asarray(values, dtype=np.float64)
    if values.size == 0:
        raise EmptyResultError("cannot build a histogram of nothing")
    lo = float(values.min()) if lo is None else float(lo)
    hi = float(values.max()) if hi is None else float(hi)
    if hi < lo:
        raise ValueError(f"histogram range [{lo}, {hi}] is inverted")
    if hi == lo:
        lo, hi = lo - 0.5, hi + 0.5
    if bins == "fd":
        n_bins = _freedman_diaconis_bins(values, lo, hi)
    else:
        n_bins = int(bins)
        if n_bins < 1:
            raise ValueError("bins must be >= 1")
    edges = np.linspace(lo, hi, n_bins + 1)
    counts, edges = np.histogram(values, bins=edges)
    total = counts.sum()
    if total == 0:
        raise EmptyResultError("no values fall inside the histogram range")
    density = counts / (total * np.diff(edges))
    return Histogram(edges=edges, counts=counts, density=density)


def default_x_targets(
    points: Sequence, percentiles: Sequence[float] = TARGET_PERCENTILES
) -> tuple[float, ...]:
    """Slab centers at fixed percentiles of the points' x values."""
    x = np.fromiter((p.x for p in points), dtype=np.float64, count=len(points))
    if x.size == 0:
        raise EmptyResultError("no points to take percentiles of")
    return tuple(float(v) for v in np.percentile(x, list(percentiles)))


def conditional_pdf(
    points: Sequence,
    x_target: float,
    tolerance: float | None = None,
    bins: int | str = "fd",
) -> ConditionalPdf:
    """Density of y over points whose x lies within tolerance of x_target.

    tolerance defaults to SLAB_TOL_FACTOR times the standard deviation of
    all x values. Fewer than MIN_SLAB_SAMPLE points in the slab attaches
    small_sample=True and emits SampleTooSmallWarning; an empty slab raises
    EmptySlabError. The peak is the midpoint of the highest-density bin.
    """
    if not len(points):
        raise EmptyResultError("no points given")
    x = np.fromiter((p.x for p in points), dtype=np.float64, count=len(points))
    y = np.fromiter((p.y for p in points), dtype=np.float64, count=len(points))
    if tolerance is None:
        tolerance = SLAB_TOL_FACTOR * float(x.std())
    if tolerance <= 0:
        raise ValueError("tolerance must be positive")
    inside = np.abs(x - x_target) <= tolerance
    n_sample = int(inside.sum())
    if n_sample == 0:
        raise EmptySlabError(
            f"no points within {tolerance} of x = {x_target}"
        )
    small = n_sample < MIN_SLAB_SAMPLE
    if small:
        warnings.warn(
            f"conditional slab at x = {x_target} holds only {n_sample} points",
            SampleTooSmallWarning,
            stacklevel=2,
        )
    hist = build_histogram(y[inside], bins=bins)
    return ConditionalPdf(
        x_target=float(x_target),
        tolerance=float(tolerance),
        histogram=hist,
        peak=hist.peak(),
        n_sample=n_sample,
        small_sample=small,
    )


def sentiment_histogram(alphas: np.ndarray, bins: int | str = "fd") -> Histogram:
    """Density histogram of pooled sentiment over a symmetric range.

    The range is [-max|alpha|, +max|alpha|] so the two tails can be read
    off against each other; an all-zero sample falls back to [-1, 1].
    """
    alphas = np.asarray(alphas, dtype=np.float64)
    if alphas.size == 0:
        raise EmptyResultError("no sentiment values")
    half = float(np.abs(alphas).max())
    if half == 0.0:
        half = 1.0
    return build_histogram(alphas, lo=-half, hi=half, bins=bins)


def fit_laplace(alphas: np.ndarray, min_side: int = MIN_SIDE) -> LaplaceFit:
    """Zero-centered Laplace MLE with per-side scales.

    The MLE of a Laplace scale with known location 0 is the mean absolute
    value. Sides are fit on strictly positive / strictly negative samples;
    zeros enter only the pooled scale. min_side (>= 1) can be lowered for
    exact tiny-sample tests.

    Raises:
        OneSidedFitError: a side has fewer than min_side samples.
    """
    if min_side < 1:
        raise ValueError("min_side must be >= 1")
    alphas = np.asarray(alphas, dtype=np.float64)
    pos = alphas[alphas > 0]
    neg = -alphas[alphas < 0]
    deficient = []
    if pos.size < min_side:
        deficient.append(f"positive ({pos.size} < {min_side})")
    if neg.size < min_side:
        deficient.append(f"negative ({neg.size} < {min_side})")
    if deficient:
        raise OneSidedFitError(
            "too few samples on the " + " and ".join(deficient) + " side"
        )
    scale_pos = float(pos.mean())
    scale_neg = float(neg.mean())
    scale_pooled = float(np.abs(alphas).mean())
    return LaplaceFit(
        scale_pos=scale_pos,
        scale_neg=scale_neg,
        scale_pooled=scale_pooled,
        asymmetry=abs(scale_pos - scale_neg) / scale_pooled,
        n_pos=int(pos.size),
        n_neg=int(neg.size),
    )


def symmetry_test(alphas: np.ndarray) -> SymmetryReport:
    """Sign counts, exact binomial sign test and Laplace asymmetry.

    Zeros are excluded from the sign test (standard treatment). With no
    nonzero samples the p-value is 1 and asymmetry is None.
    """
    alphas = np.asarray(alphas, dtype=np.float64)
    if alphas.size == 0:
        raise EmptyResultError("no sentiment values")
    n_pos = int((alphas > 0).sum())
    n_neg = int((alphas < 0).sum())
    n_zero = int(alphas.size - n_pos - n_neg)
    if n_pos + n_neg == 0:
        p_value = 1.0
    else:
        p_value = float(binomtest(n_pos, n_pos + n_neg, 0.5).pvalue)
    if n_pos >= 1 and n_neg >= 1:
        asymmetry = fit_laplace(alphas, min_side=1).asymmetry
    else:
        asymmetry = None
    return SymmetryReport(
        n=int(alphas.size),
        mean=float(alphas.mean()),
        n_pos=n_pos,
        n_neg=n_neg,
        n_zero=n_zero,
        p_value=p_value,
        asymmetry=asymmetry,
    )
