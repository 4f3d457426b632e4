import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import stats

from nlos_bias.boolean_model import (
    BooleanModelConfig,
    MarkDistribution,
    Realization,
    Window,
    auto_window,
    coverage_fraction,
    sample_realization,
    substream,
)
from nlos_bias.geometry import LinkGeometry

from conftest import FIG5_LAMBDA, FIG5_THETAS, FIG5_WIDTHS


def small_cfg(marks, lam=FIG5_LAMBDA, side=2000.0):
    return BooleanModelConfig(lam, Window(0.0, side, 0.0, side), marks)


def test_mark_distribution_validation():
    with pytest.raises(ValueError):
        MarkDistribution([0.0], [0.5], [[1.0]])
    with pytest.raises(ValueError):
        MarkDistribution([1.0], [0.0], [[1.0]])
    with pytest.raises(ValueError):
        MarkDistribution([1.0], [math.pi / 2], [[1.0]])
    with pytest.raises(ValueError):
        MarkDistribution([1.0, 2.0], [0.5], [[0.5], [0.4]])
    with pytest.raises(ValueError):
        MarkDistribution([1.0, 2.0], [0.5], [[1.5], [-0.5]])
    with pytest.raises(ValueError):
        MarkDistribution([1.0], [0.5], [[0.5, 0.5]])


def test_fig5_mark_moments(fig5_marks):
    assert fig5_marks.mean_width == pytest.approx(70.0, rel=1e-14)
    assert fig5_marks.mean_square_width == pytest.approx(36400 / 6, rel=1e-14)
    assert fig5_marks.pmf[0, 0] == pytest.approx(1 / 48)


@given(st.lists(st.floats(0.1, 500.0), min_size=1, max_size=5), st.lists(st.floats(0.01, 1.5), min_size=1, max_size=5), st.data())
def test_mean_width_is_marginal_expectation(ws, ts, data):
    raw = np.array(data.draw(st.lists(st.floats(0.0, 1.0), min_size=len(ws) * len(ts), max_size=len(ws) * len(ts))))
    if raw.sum() == 0:
        raw[0] = 1.0
    pmf = (raw / raw.sum()).reshape(len(ws), len(ts))
    pmf[-1, -1] += 1.0 - pmf.sum()
    pmf = np.clip(pmf, 0.0, None)
    marks = MarkDistribution(ws, ts, pmf)
    expected = sum(pmf[i, j] * ws[i] for i in range(len(ws)) for j in range(len(ts)))
    assert marks.mean_width == pytest.approx(expected, rel=1e-12)


def test_window_validation():
    with pytest.raises(ValueError):
        Window(0, 0, 0, 1)
    assert Window(0, 8000, 0, 8000).area == 64e6


def test_fig5_mean_count(fig5_marks):
    cfg = BooleanModelConfig(FIG5_LAMBDA, Window(0, 8000, 0, 8000), fig5_marks)
    assert cfg.mean_count == pytest.approx(640.0)


def test_poisson_count_moments(fig5_marks):
    cfg = small_cfg(fig5_marks, side=2500.0)
    lam_a = cfg.mean_count
    counts = np.array([len(sample_realization(cfg, substream(3, i))) for i in range(10_000)])
    assert abs(counts.mean() - lam_a) < 3 * math.sqrt(lam_a / 10_000)
    assert counts.var() == pytest.approx(lam_a, rel=0.05)


def test_centers_uniform_and_inside(fig5_marks):
    cfg = BooleanModelConfig(1e-3, Window(-50, 150, 10, 30), fig5_marks)
    xs = np.concatenate([sample_realization(cfg, substream(1, i)).centers for i in range(200)])
    assert xs[:, 0].min() >= -50 and xs[:, 0].max() <= 150
    assert xs[:, 1].min() >= 10 and xs[:, 1].max() <= 30
    assert stats.kstest((xs[:, 0] + 50) / 200, "uniform").pvalue > 0.001
    assert stats.kstest((xs[:, 1] - 10) / 20, "uniform").pvalue > 0.001


def test_marks_uniform_chi_square(fig5_marks):
    cfg = BooleanModelConfig(1e-3, Window(0, 100, 0, 100), fig5_marks)
    idx = np.concatenate([sample_realization(cfg, substream(5, i)).mark_index for i in range(3000)])
    freq = np.bincount(idx, minlength=48)
    assert freq.size == 48
    assert stats.chisquare(freq).pvalue > 0.01
    real = sample_realization(cfg, substream(5, 0))
    assert set(real.widths) <= set(FIG5_WIDTHS)
    assert set(real.orientations) <= set(FIG5_THETAS)


def test_zero_probability_marks_never_drawn():
    marks = MarkDistribution([10.0, 20.0, 30.0], [0.3, 0.6], [[0.5, 0.0], [0.0, 0.0], [0.0, 0.5]])
    cfg = BooleanModelConfig(1e-2, Window(0, 100, 0, 100), marks)
    idx = np.concatenate([sample_realization(cfg, substream(0, i)).mark_index for i in range(50)])
    assert set(np.unique(idx)) == {0, 5}


def test_sampling_is_deterministic(fig5_marks):
    cfg = small_cfg(fig5_marks)
    a = sample_realization(cfg, substream(11, 4))
    b = sample_realization(cfg, substream(11, 4))
    np.testing.assert_array_equal(a.centers, b.centers)
    np.testing.assert_array_equal(a.mark_index, b.mark_index)
    c = sample_realization(cfg, substream(11, 5))
    assert len(c) != len(a) or not np.array_equal(a.centers, c.centers)


def test_thinned_classes_are_poisson(fig5_marks):
    cfg = small_cfg(fig5_marks, lam=1e-4, side=1000.0)
    per_class = np.zeros((10_000, 48))
    for i in range(10_000):
        per_class[i] = np.bincount(sample_realization(cfg, substream(9, i)).mark_index, minlength=48)
    expected = cfg.mean_count / 48
    means = per_class.mean(axis=0)
    assert np.all(np.abs(means - expected) < 4 * math.sqrt(expected / 10_000))
    assert np.allclose(per_class.var(axis=0), expected, rtol=0.15)
    # disjoint classes of a PPP are independent
    corr = np.corrcoef(per_class[:, 0], per_class[:, 1])[0, 1]
    assert abs(corr) < 4 / math.sqrt(10_000)


def test_shifted_window_same_counts(fig5_marks):
    cfg = small_cfg(fig5_marks)
    moved = BooleanModelConfig(cfg.intensity, cfg.window.shifted(1e4, -3e3), fig5_marks)
    for i in range(50):
        assert len(sample_realization(cfg, substream(2, i))) == len(sample_realization(moved, substream(2, i)))


def test_reflectors_view(fig5_marks):
    real = sample_realization(small_cfg(fig5_marks), substream(0, 0))
    refl = real.reflectors
    assert len(refl) == len(real)
    back = Realization.from_reflectors(refl)
    np.testing.assert_allclose(back.centers, real.centers)
    np.testing.assert_allclose(back.orientations, real.orientations)


def test_auto_window(fig5_marks):
    w = auto_window(LinkGeometry(300.0), 1800.0, fig5_marks)
    reach = 900 + 120 * math.sqrt(2) / 2
    assert (w.xmin, w.xmax) == pytest.approx((-150 - reach, 150 + reach))
    assert (w.ymin, w.ymax) == pytest.approx((-reach, reach))


def test_coverage_fraction(fig5_marks):
    cfg = BooleanModelConfig(FIG5_LAMBDA, Window(0, 1, 0, 1), fig5_marks)
    # E[W^2] = (20^2 + 40^2 + ... + 120^2) / 6 = 36400 / 6
    assert coverage_fraction(cfg) == pytest.approx(1 - math.exp(-1e-5 * 36400 / 6), rel=1e-12)
    assert 0.05 < coverage_fraction(cfg) < 0.06
    single = MarkDistribution([50.0], [0.4], [[1.0]])
    assert coverage_fraction(BooleanModelConfig(2e-4, Window(0, 1, 0, 1), single)) == pytest.approx(
        1 - math.exp(-2e-4 * 2500)
    )
    assert coverage_fraction(BooleanModelConfig(1e-300, Window(0, 1, 0, 1), single)) == pytest.approx(0.0, abs=1e-290)
