"""Relative-sentiment stock pricing analytics.

Prices each stock's daily return against a leave-one-out benchmark of its
peers, both sides normalized by their own volatility; the residual is a
per-day sentiment score. Includes a CAPM baseline for comparison,
distributional diagnostics, and a seeded synthetic market for validating
the estimator against known ground truth.
"""

from ._kernels import BACKEND, HAS_NUMBA
from .capm import (
    CapmPoint,
    CapmStats,
    ComparisonReport,
    IndexSpec,
    beta,
    capm_points,
    compare_fits,
    index_return,
    ols_origin_slope,
    orthogonal_slope,
    symmetry_statistic,
)
from .distributions import (
    ConditionalPdf,
    Histogram,
    LaplaceFit,
    SymmetryReport,
    build_histogram,
    conditional_pdf,
    default_x_targets,
    fit_laplace,
    sentiment_histogram,
    symmetry_test,
)
from .errors import (
    DimensionError,
    DuplicateDateError,
    EmptyResultError,
    EmptySlabError,
    InsufficientDataError,
    OneSidedFitError,
    ParseError,
    RelsentError,
    SampleTooSmallWarning,
    SpecError,
    WindowNotReadyError,
    ZeroVarianceError,
)
from .market_data import (
    AlignmentPolicy,
    PricePanel,
    ReturnPanel,
    align_calendar,
    compute_returns,
    parse_price_csv,
    parse_return_csv,
    serialize_price_csv,
    serialize_return_csv,
)
from .synth import (
    GroundTruth,
    RecoveryReport,
    StockRecovery,
    SynthSpec,
    event_scenario,
    generate_market,
    recover_bias,
)
from .yardstick import (
    SentimentSeries,
    VolatilityConfig,
    YardstickPoint,
    alpha_matrix,
    cumulative_sentiment,
    leave_one_out_return,
    loo_matrix,
    predicted_return,
    sentiment,
    windowed_std,
    yardstick_points,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "HAS_NUMBA",
    "AlignmentPolicy",
    "CapmPoint",
    "CapmStats",
    "ComparisonReport",
    "ConditionalPdf",
    "DimensionError",
    "DuplicateDateError",
    "EmptyResultError",
    "EmptySlabError",
    "GroundTruth",
    "Histogram",
    "IndexSpec",
    "InsufficientDataError",
    "LaplaceFit",
    "OneSidedFitError",
    "ParseError",
    "PricePanel",
    "RecoveryReport",
    "RelsentError",
    "ReturnPanel",
    "SampleTooSmallWarning",
    "SentimentSeries",
    "SpecError",
    "StockRecovery",
    "SymmetryReport",
    "SynthSpec",
    "VolatilityConfig",
    "WindowNotReadyError",
    "YardstickPoint",
    "ZeroVarianceError",
    "align_calendar",
    "alpha_matrix",
    "beta",
    "build_histogram",
    "capm_points",
    "compare_fits",
    "compute_returns",
    "conditional_pdf",
    "cumulative_sentiment",
    "default_x_targets",
    "event_scenario",
    "fit_laplace",
    "generate_market",
    "index_return",
    "leave_one_out_return",
    "loo_matrix",
    "ols_origin_slope",
    "orthogonal_slope",
    "parse_price_csv",
    "parse_return_csv",
    "predicted_return",
    "recover_bias",
    "sentiment",
    "sentiment_histogram",
    "serialize_price_csv",
    "serialize_return_csv",
    "symmetry_statistic",
    "symmetry_test",
    "windowed_std",
    "yardstick_points",
]
