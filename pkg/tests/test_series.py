import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from linearcast.errors import BorderOutOfRange, ChannelMismatch, EmptyWindowSet
from linearcast.series import (
    MultivariateSeries,
    SplitSpec,
    destandardize,
    fit_scaler,
    make_windows,
    split_series,
    standardize,
    window_arrays,
)


def ramp(T, c=1):
    return MultivariateSeries(np.arange(c * T, dtype=float).reshape(c, T))


def test_window_count_and_origins():
    w = make_windows(ramp(10), 3, 2)
    assert len(w) == 6
    assert [p.origin_index for p in w] == list(range(6))
    np.testing.assert_array_equal(w[2].x, [[2, 3, 4]])
    np.testing.assert_array_equal(w[2].y, [[5, 6]])


def test_single_window_covers_series():
    (w,) = make_windows(ramp(5), 3, 2)
    np.testing.assert_array_equal(np.concatenate([w.x, w.y], axis=1), [[0, 1, 2, 3, 4]])


def test_too_short_for_any_window():
    with pytest.raises(EmptyWindowSet):
        make_windows(ramp(4), 3, 2)
    with pytest.raises(EmptyWindowSet):
        window_arrays(ramp(4), 3, 2)


@settings(max_examples=40, deadline=None)
@given(T=st.integers(2, 60), n=st.integers(1, 10), m=st.integers(1, 10), stride=st.integers(1, 4), c=st.integers(1, 3))
def test_window_arrays_match_list(T, n, m, stride, c):
    s = ramp(T, c)
    if T < n + m:
        return
    X, Y = window_arrays(s, n, m, stride)
    pairs = make_windows(s, n, m, stride)
    assert len(X) == len(pairs) == (T - n - m) // stride + 1
    for k, p in enumerate(pairs):
        np.testing.assert_array_equal(X[k], p.x)
        np.testing.assert_array_equal(Y[k], p.y)
        np.testing.assert_array_equal(p.x, s.values[:, p.origin_index:p.origin_index + n])


def test_ratio_split_borders():
    assert SplitSpec("ratio_7_2_1").resolve(100, 10) == (0, 70, 60, 90, 80, 100)
    tr, va, te = split_series(ramp(100), SplitSpec("ratio_7_2_1"), 10)
    assert (tr.length, va.length, te.length) == (70, 30, 20)
    assert va.values[0, 0] == 60 and te.values[0, 0] == 80


def test_ett_borders_scale_with_granularity():
    h = SplitSpec.ett_hourly().resolve(17420, 336)
    q = SplitSpec.ett_15min().resolve(4 * 17420, 336)
    assert h[:2] == (0, 8640) and h[3] == 11520 and h[5] == 14400
    assert (q[1], q[3], q[5]) == (4 * h[1], 4 * h[3], 4 * h[5])


def test_bad_borders():
    with pytest.raises(BorderOutOfRange):
        SplitSpec.explicit(0, 50, 80, 120).resolve(100, 5)
    with pytest.raises(BorderOutOfRange):
        SplitSpec.explicit(0, 5, 80, 100).resolve(100, 10)


@pytest.mark.parametrize("vals,mean,std", [
    ([1, 1, 1], 1.0, 1e-8),
    ([0, 2], 1.0, 1.0),
    ([1, 2, 3, 4], 2.5, np.sqrt(1.25)),
])
def test_scaler_examples(vals, mean, std):
    st_ = fit_scaler(MultivariateSeries(np.array(vals, dtype=float)))
    assert st_.mean[0] == pytest.approx(mean)
    assert st_.std[0] == pytest.approx(std)


def test_standardize_value():
    s = MultivariateSeries(np.array([1.0, 2, 3, 4]))
    z = standardize(s, fit_scaler(s))
    assert z.values[0, 3] == pytest.approx(1.5 / np.sqrt(1.25))
    assert z.values[0, 3] == pytest.approx(1.3416, abs=1e-4)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.floats(-1e3, 1e3), min_size=2, max_size=30), st.integers(1, 3))
def test_standardize_roundtrip(vals, c):
    s = MultivariateSeries(np.tile(np.array(vals), (c, 1)) + np.arange(c)[:, None])
    stats = fit_scaler(s)
    back = destandardize(standardize(s, stats), stats)
    np.testing.assert_allclose(back.values, s.values, atol=1e-12 * max(1.0, np.abs(s.values).max()))


def test_channel_mismatch():
    stats = fit_scaler(ramp(10, 2))
    with pytest.raises(ChannelMismatch):
        standardize(ramp(10, 3), stats)


def test_series_rejects_nonfinite_and_is_readonly():
    with pytest.raises(ValueError):
        MultivariateSeries(np.array([[1.0, np.nan]]))
    s = ramp(5)
    with pytest.raises(ValueError):
        s.values[0, 0] = 9
