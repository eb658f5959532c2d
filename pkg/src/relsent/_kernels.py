"""Rolling-window moment kernels: numba-accelerated with a pure-numpy fallback.

These are the hot inner loops of the library. Every sentiment, rolling-beta
and Monte Carlo recovery run reduces to windowed population means, variances
and covariances over return panels, evaluated once per (stock, date).

Two interchangeable implementations are provided:

  * numba ``@njit`` loops (selected when numba imports cleanly), and
  * vectorized numpy fallbacks built on ``sliding_window_view``.

Set ``RELSENT_DISABLE_NUMBA=1`` in the environment before import to force the
numpy path; it is also used automatically when numba is not installed. The
selected backend is reported in ``BACKEND``. Both paths compute each window
with a direct two-pass sum (no running-sum shortcuts), so they agree with a
naive per-window recomputation to float64 rounding, not just asymptotically.

All variances are population variances (divide by the window length), and a
window covers the ``window`` observations ending at and including index t.
Entries before the first complete window are NaN.

``benchmarks/bench_kernels.py`` times the two paths against each other.
"""

from __future__ import annotations

import os

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

_ENV_DISABLE = os.environ.get("RELSENT_DISABLE_NUMBA", "").strip().lower() in {
    "1",
    "true",
    "yes",
}

try:
    if _ENV_DISABLE:
        raise ImportError("numba disabled via RELSENT_DISABLE_NUMBA")
    from numba import njit

    HAS_NUMBA = True
except ImportError:
    HAS_NUMBA = False

    def njit(*args, **kwargs):  # pragma: no cover - trivial passthrough
        if args and callable(args[0]):
            return args[0]

        def wrap(func):
            return func

        return wrap


# ---------------------------------------------------------------------------
# numpy implementations
# ---------------------------------------------------------------------------


def rolling_mean_var_numpy(x: np.ndarray, window: int) -> tuple[np.ndarray, np.ndarray]:
    """Windowed population mean and variance of a 1-D series.

    Returns (mean, var) arrays shaped like x, NaN before the first full
    window. var[t] is the population variance of x[t-window+1 .. t].
    """
    x = np.ascontiguousarray(x, dtype=np.float64)
    n = x.shape[0]
    mean = np.full(n, np.nan)
    var = np.full(n, np.nan)
    if window <= n:
        win = sliding_window_view(x, window)
        m = win.mean(axis=-1)
        v = ((win - m[:, None]) ** 2).mean(axis=-1)
        mean[window - 1 :] = m
        var[window - 1 :] = v
    return mean, var


def rolling_mean_var_panel_numpy(
    panel: np.ndarray, window: int
) -> tuple[np.ndarray, np.ndarray]:
    """Column-wise rolling_mean_var over a (T, N) panel."""
    panel = np.ascontiguousarray(panel, dtype=np.float64)
    n, k = panel.shape
    mean = np.full((n, k), np.nan)
    var = np.full((n, k), np.nan)
    if window <= n:
        win = sliding_window_view(panel, window, axis=0)  # (n-w+1, k, w)
        m = win.mean(axis=-1)
        v = ((win - m[..., None]) ** 2).mean(axis=-1)
        mean[window - 1 :] = m
        var[window - 1 :] = v
    return mean, var


def rolling_cov_numpy(x: np.ndarray, y: np.ndarray, window: int) -> np.ndarray:
    """Windowed population covariance of two equal-length 1-D series."""
    x = np.ascontiguousarray(x, dtype=np.float64)
    y = np.ascontiguousarray(y, dtype=np.float64)
    n = x.shape[0]
    cov = np.full(n, np.nan)
    if window <= n:
        wx = sliding_window_view(x, window)
        wy = sliding_window_view(y, window)
        mx = wx.mean(axis=-1)
        my = wy.mean(axis=-1)
        cov[window - 1 :] = ((wx - mx[:, None]) * (wy - my[:, None])).mean(axis=-1)
    return cov


# ---------------------------------------------------------------------------
# numba implementations (same contracts, explicit loops)
# ---------------------------------------------------------------------------


@njit(cache=True)
def _rolling_mean_var_loop(x, window):  # pragma: no cover - exercised via tests
    n = x.shape[0]
    mean = np.full(n, np.nan)
    var = np.full(n, np.nan)
    for t in range(window - 1, n):
        acc = 0.0
        for j in range(t - window + 1, t + 1):
            acc += x[j]
        m = acc / window
        acc = 0.0
        for j in range(t - window + 1, t + 1):
            d = x[j] - m
            acc += d * d
        mean[t] = m
        var[t] = acc / window
    return mean, var


@njit(cache=True)
def _rolling_mean_var_panel_loop(panel, window):  # pragma: no cover
    n, k = panel.shape
    mean = np.full((n, k), np.nan)
    var = np.full((n, k), np.nan)
    for c in range(k):
        for t in range(window - 1, n):
            acc = 0.0
            for j in range(t - window + 1, t + 1):
                acc += panel[j, c]
            m = acc / window
            acc = 0.0
            for j in range(t - window + 1, t + 1):
                d = panel[j, c] - m
                acc += d * d
            mean[t, c] = m
            var[t, c] = acc / window
    return mean, var


@njit(cache=True)
def _rolling_cov_loop(x, y, window):  # pragma: no cover
    n = x.shape[0]
    cov = np.full(n, np.nan)
    for t in range(window - 1, n):
        ax = 0.0
        ay = 0.0
        for j in range(t - window + 1, t + 1):
            ax += x[j]
            ay += y[j]
        mx = ax / window
        my = ay / window
        acc = 0.0
        for j in range(t - window + 1, t + 1):
            acc += (x[j] - mx) * (y[j] - my)
        cov[t] = acc / window
    return cov


def rolling_mean_var_numba(x: np.ndarray, window: int) -> tuple[np.ndarray, np.ndarray]:
    return _rolling_mean_var_loop(np.ascontiguousarray(x, dtype=np.float64), window)


def rolling_mean_var_panel_numba(
    panel: np.ndarray, window: int
) -> tuple[np.ndarray, np.ndarray]:
    return _rolling_mean_var_panel_loop(
        np.ascontiguousarray(panel, dtype=np.float64), window
    )


def rolling_cov_numba(x: np.ndarray, y: np.ndarray, window: int) -> np.ndarray:
    return _rolling_cov_loop(
        np.ascontiguousarray(x, dtype=np.float64),
        np.ascontiguousarray(y, dtype=np.float64),
        window,
    )


# ---------------------------------------------------------------------------
# backend selection
# ---------------------------------------------------------------------------

if HAS_NUMBA:
    BACKEND = "numba"
    rolling_mean_var = rolling_mean_var_numba
    rolling_mean_var_panel = rolling_mean_var_panel_numba
    rolling_cov = rolling_cov_numba
else:
    BACKEND = "numpy"
    rolling_mean_var = rolling_mean_var_numpy
    rolling_mean_var_panel = rolling_mean_var_panel_numpy
    rolling_cov = rolling_cov_numpy
