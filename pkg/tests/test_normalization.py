import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from linearcast.errors import DegenerateGamma, KernelTooLarge
from linearcast.normalization import (
    InstanceStats,
    RevinState,
    baseline_normalize,
    moving_avg_decompose,
    revin_forward,
    revin_inverse,
)


def unit(x):
    x = np.asarray(x, dtype=float)
    return (x - x.mean(-1, keepdims=True)) / x.std(-1, keepdims=True)


def test_constant_channel_normalizes_to_zero():
    z, stats = revin_forward(np.full((2, 7), 3.5), RevinState.init(2))
    assert not z.any()
    np.testing.assert_allclose(stats.mu[..., 0], 3.5)


def test_unit_input_is_near_fixed_point():
    x = unit(np.random.default_rng(0).normal(size=(3, 50)))
    z, _ = revin_forward(x, RevinState.init(3))
    np.testing.assert_allclose(z, x, atol=1e-4)


def test_affine_parameters():
    x = unit(np.random.default_rng(1).normal(size=(1, 40)))
    z, _ = revin_forward(x, RevinState(np.array([2.0]), np.array([1.0])))
    np.testing.assert_allclose(z, 2 * x + 1, atol=1e-4)


def test_constant_restore():
    stats = InstanceStats(np.array([[5.0]]), np.array([[0.0]]))
    y = revin_inverse(np.zeros((1, 4)), stats, RevinState.init(1))
    np.testing.assert_allclose(y, 5.0)


@settings(max_examples=40, deadline=None)
@given(
    arrays(np.float64, (2, 3, 9), elements=st.floats(-100, 100)),
    st.floats(0.1, 3), st.floats(-2, 2),
)
def test_inverse_undoes_forward(x, g, b):
    state = RevinState(np.array([g, -g, 1.0]), np.array([b, 0.0, -b]))
    z, stats = revin_forward(x, state)
    np.testing.assert_allclose(revin_inverse(z, stats, state), x, atol=1e-8 * (1 + np.abs(x).max()))


def test_degenerate_gamma():
    _, stats = revin_forward(np.ones((1, 3)), RevinState.init(1))
    with pytest.raises(DegenerateGamma):
        revin_inverse(np.zeros((1, 2)), stats, RevinState(np.array([0.0]), np.array([0.0])))


def test_baseline_schemes():
    same = np.tile(np.arange(6.0).reshape(1, 2, 3), (4, 1, 1))
    assert not baseline_normalize(same, "batch_style").any()
    one = np.random.default_rng(2).normal(size=(1, 2, 10))
    out = baseline_normalize(one, "layer_style")
    assert out.mean() == pytest.approx(0, abs=1e-12)
    assert out.var() == pytest.approx(1, abs=1e-4)
    with pytest.raises(ValueError):
        baseline_normalize(one, "nope")


def test_moving_average():
    x = np.random.default_rng(3).normal(size=(2, 30))
    trend, season = moving_avg_decompose(x, 1)
    np.testing.assert_array_equal(trend, x)
    assert not season.any()

    line = 0.7 * np.arange(50.0) + 2
    _, season = moving_avg_decompose(line, 9)
    assert np.abs(season[4:-4]).max() < 1e-10
    assert np.abs(season[:4]).min() > 1e-3 and np.abs(season[-4:]).min() > 1e-3
    # head point 0: four copies of line[0] stand in for the missing history
    expected = line[0] - (4 * line[0] + line[:5].sum()) / 9
    assert season[0] == pytest.approx(expected, abs=1e-12)

    p = 11
    t = np.arange(200.0)
    sine = 3 + np.sin(2 * np.pi * t / p)
    trend, _ = moving_avg_decompose(sine, p)
    np.testing.assert_allclose(trend[p:-p], 3.0, atol=1e-10)

    with pytest.raises(KernelTooLarge):
        moving_avg_decompose(np.zeros(5), 7)
    with pytest.raises(ValueError):
        moving_avg_decompose(np.zeros(5), 2)
