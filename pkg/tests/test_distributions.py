"""Histograms, conditional densities, Laplace fits and the sign test."""

import numpy as np
import pytest

from relsent import (
    ConditionalPdf,
    EmptyResultError,
    EmptySlabError,
    Histogram,
    OneSidedFitError,
    SampleTooSmallWarning,
    build_histogram,
    conditional_pdf,
    default_x_targets,
    fit_laplace,
    sentiment_histogram,
    symmetry_test,
)
from relsent.distributions import MIN_BINS


class P:
    """Bare (x, y) point for the slab functions."""

    def __init__(self, x, y):
        self.x = x
        self.y = y


def points(xs, ys):
    return [P(x, y) for x, y in zip(xs, ys)]


# ---------------------------------------------------------------------------
# histograms
# ---------------------------------------------------------------------------


def test_histogram_two_known_bins():
    hist = build_histogram(np.array([-1.0, 1.0]), bins=2)
    assert hist.counts.tolist() == [1, 1]
    assert hist.edges[0] == -1.0 and hist.edges[-1] == 1.0
    assert np.sum(hist.density * hist.widths) == pytest.approx(1.0, abs=1e-12)


def test_histogram_density_always_integrates_to_one():
    rng = np.random.Generator(np.random.Philox(3))
    for _ in range(10):
        hist = build_histogram(rng.normal(0, 1, 500))
        assert np.sum(hist.density * hist.widths) == pytest.approx(1.0, abs=1e-9)


def test_histogram_fd_floor():
    hist = build_histogram(np.array([0.0, 0.3, 0.31, 1.0]))
    assert hist.n_bins >= MIN_BINS


def test_histogram_zero_width_range_widens():
    hist = build_histogram(np.full(5, 2.0), bins=4)
    assert hist.edges[0] == pytest.approx(1.5)
    assert hist.edges[-1] == pytest.approx(2.5)
    assert hist.counts.sum() == 5


def test_histogram_rejects_bad_density():
    with pytest.raises(ValueError, match="integrates"):
        Histogram(edges=[0.0, 1.0], counts=[2], density=[2.0])


def test_histogram_empty_input():
    with pytest.raises(EmptyResultError):
        build_histogram(np.array([]))


def test_histogram_peak_is_modal_midpoint():
    values = np.concatenate([np.full(10, 0.55), np.linspace(0, 1, 5)])
    hist = build_histogram(values, lo=0.0, hi=1.0, bins=10)
    assert hist.peak() == pytest.approx(0.55, abs=0.05 + 1e-12)


def test_sentiment_histogram_symmetric_range():
    hist = sentiment_histogram(np.array([-0.2, 0.1, 0.7]), bins=10)
    assert hist.edges[0] == pytest.approx(-0.7)
    assert hist.edges[-1] == pytest.approx(0.7)


def test_sentiment_histogram_all_zero_fallback():
    hist = sentiment_histogram(np.zeros(4), bins=4)
    assert hist.edges[0] == pytest.approx(-1.0)
    assert hist.edges[-1] == pytest.approx(1.0)


# ---------------------------------------------------------------------------
# conditional pdf
# ---------------------------------------------------------------------------


def test_conditional_pdf_selects_slab_and_peaks_on_cluster():
    xs = np.concatenate([np.zeros(40), np.full(40, 10.0)])
    ys = np.concatenate([np.full(40, 0.5), np.full(40, 9.0)])
    pdf = conditional_pdf(points(xs, ys), x_target=0.0, tolerance=1.0, bins=5)
    assert pdf.n_sample == 40
    assert not pdf.small_sample
    assert pdf.peak == pytest.approx(0.5, abs=0.25)


def test_conditional_pdf_default_tolerance_is_tenth_of_x_std():
    rng = np.random.Generator(np.random.Philox(8))
    xs = rng.normal(0, 2.0, 5000)
    ys = xs + rng.normal(0, 0.1, 5000)
    pdf = conditional_pdf(points(xs, ys), x_target=0.0)
    assert pdf.tolerance == pytest.approx(0.1 * xs.std(), rel=1e-12)


def test_conditional_pdf_empty_slab():
    pts = points([0.0, 1.0], [0.0, 1.0])
    with pytest.raises(EmptySlabError):
        conditional_pdf(pts, x_target=50.0, tolerance=0.5, bins=2)


def test_conditional_pdf_small_sample_warns():
    pts = points(np.zeros(5), np.arange(5.0))
    with pytest.warns(SampleTooSmallWarning):
        pdf = conditional_pdf(pts, x_target=0.0, tolerance=1.0, bins=2)
    assert pdf.small_sample
    assert pdf.n_sample == 5


def test_conditional_pdf_rejects_nonpositive_tolerance():
    pts = points([0.0, 0.0], [1.0, 2.0])
    with pytest.raises(ValueError):
        conditional_pdf(pts, x_target=0.0, tolerance=0.0, bins=2)


def test_default_x_targets_are_percentiles():
    xs = np.linspace(0.0, 1.0, 101)
    targets = default_x_targets(points(xs, xs))
    assert targets == pytest.approx((0.1, 0.3, 0.5, 0.7, 0.9), abs=1e-12)


# ---------------------------------------------------------------------------
# Laplace fit
# ---------------------------------------------------------------------------


def test_fit_laplace_exact_tiny_sample():
    fit = fit_laplace(np.array([-1.0, 1.0]), min_side=1)
    assert fit.scale_pos == 1.0
    assert fit.scale_neg == 1.0
    assert fit.scale_pooled == 1.0
    assert fit.asymmetry == 0.0
    assert (fit.n_pos, fit.n_neg) == (1, 1)


def test_fit_laplace_zeros_enter_pooled_scale_only():
    fit = fit_laplace(np.array([-2.0, 0.0, 0.0, 2.0]), min_side=1)
    assert fit.scale_pos == 2.0 and fit.scale_neg == 2.0
    assert fit.scale_pooled == 1.0  # mean(|-2|, 0, 0, |2|)


def test_fit_laplace_recovers_known_scale():
    rng = np.random.Generator(np.random.Philox(44))
    sample = rng.laplace(0.0, 0.25, 40_000)
    fit = fit_laplace(sample)
    assert fit.scale_pooled == pytest.approx(0.25, rel=0.02)
    assert fit.scale_pos == pytest.approx(0.25, rel=0.03)
    assert fit.scale_neg == pytest.approx(0.25, rel=0.03)
    assert fit.asymmetry < 0.02


def test_fit_laplace_log_density_tail_slope():
    # a Laplace density falls off linearly in log space with slope 1/scale
    rng = np.random.Generator(np.random.Philox(45))
    scale = 0.3
    sample = rng.laplace(0.0, scale, 200_000)
    fit = fit_laplace(sample)
    hist = build_histogram(sample, lo=0.0, hi=4 * scale, bins=20)
    logd = np.log(hist.density[hist.counts > 0])
    mids = hist.midpoints[hist.counts > 0]
    slope = np.polyfit(mids, logd, 1)[0]
    assert slope == pytest.approx(-1.0 / fit.scale_pooled, rel=0.15)


def test_fit_laplace_one_sided_raises_and_names_side():
    with pytest.raises(OneSidedFitError, match="negative"):
        fit_laplace(np.full(20, 0.5))
    with pytest.raises(OneSidedFitError, match="positive"):
        fit_laplace(np.full(20, -0.5))


def test_fit_laplace_min_side_validation():
    with pytest.raises(ValueError):
        fit_laplace(np.array([1.0, -1.0]), min_side=0)


# ---------------------------------------------------------------------------
# sign test
# ---------------------------------------------------------------------------


def test_symmetry_test_all_same_sign_exact_p():
    report = symmetry_test(np.full(20, 0.3))
    assert report.p_value == pytest.approx(2.0 * 0.5**20, rel=1e-9)
    assert report.n_pos == 20 and report.n_neg == 0
    assert report.asymmetry is None


def test_symmetry_test_balanced_sample():
    report = symmetry_test(np.array([-2.0, -1.0, 1.0, 2.0]))
    assert report.p_value == 1.0
    assert report.asymmetry == 0.0


def test_symmetry_test_excludes_zeros():
    report = symmetry_test(np.array([0.0, 0.0, 1.0, -1.0]))
    assert report.n_zero == 2
    assert report.p_value == 1.0


def test_symmetry_test_all_zero():
    report = symmetry_test(np.zeros(5))
    assert report.p_value == 1.0
    assert report.asymmetry is None


def test_symmetry_test_empty_raises():
    with pytest.raises(EmptyResultError):
        symmetry_test(np.array([]))


def test_symmetry_report_round_trips_to_json():
    import json

    report = symmetry_test(np.array([-1.0, 2.0, -3.0]))
    blob = json.dumps(report.to_json_dict(), sort_keys=True)
    assert json.loads(blob)["n"] == 3


def test_conditional_pdf_fields_frozen():
    pdf = ConditionalPdf(
        x_target=0.0,
        tolerance=1.0,
        histogram=build_histogram(np.array([0.0, 1.0]), bins=2),
        peak=0.25,
        n_sample=2,
        small_sample=True,
    )
    with pytest.raises(AttributeError):
        pdf.peak = 1.0
