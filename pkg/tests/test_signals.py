import numpy as np
import pytest

from linearcast.signals import (
    SignalSpec,
    gen_affine_recurrent,
    gen_integer_periodic,
    gen_multiperiod,
    gen_periodic_patterns,
    gen_sine,
    gen_trend,
)


def test_quarter_period_sine():
    v = gen_sine(8, np.pi / 2).values[0]
    np.testing.assert_allclose(v, [0, 1, 0, -1, 0, 1, 0, -1], atol=1e-12)


def test_zero_amplitude():
    assert not gen_sine(20, 0.3, amplitude=0).values.any()


def test_trends():
    assert np.all(gen_trend(10, 0, 3.0).values == 3.0)
    np.testing.assert_array_equal(gen_trend(6, 1).values[0], np.arange(6))


def test_multiperiod_channel_periods():
    s = gen_multiperiod(200, [2 * np.pi / 10, 2 * np.pi / 20])
    assert s.channels == 2
    v = s.values
    np.testing.assert_allclose(v[0, 10:], v[0, :-10], atol=1e-12)
    np.testing.assert_allclose(v[1, 20:], v[1, :-20], atol=1e-12)
    assert np.abs(v[1, 10:] - v[1, :-10]).max() > 0.5


def test_affine_recurrence_examples():
    np.testing.assert_array_equal(gen_affine_recurrent(8, 2, 2.0, 1.0, [1, 0]).values[0], [1, 0, 3, 1, 7, 3, 15, 7])
    v = gen_affine_recurrent(12, 3, 1.0, 0.0, [4, 5, 6]).values[0]
    np.testing.assert_array_equal(v, np.tile([4, 5, 6], 4))
    v = gen_affine_recurrent(10, 3, 0.0, 2.5, [4, 5, 6]).values[0]
    assert np.all(v[3:] == 2.5)


def test_noise_is_seeded():
    a = gen_sine(50, 0.2, noise_std=0.1, seed=3).values
    b = gen_sine(50, 0.2, noise_std=0.1, seed=3).values
    c = gen_sine(50, 0.2, noise_std=0.1, seed=4).values
    assert np.array_equal(a, b) and not np.array_equal(a, c)


def test_spec_dispatch_and_validation():
    s = SignalSpec("multiperiod", 30, {"omegas": [0.1, 0.2]}).generate()
    assert s.channels == 2
    with pytest.raises(ValueError):
        SignalSpec("bogus", 10)
    with pytest.raises(ValueError):
        SignalSpec("sine", 10, {"omega": 1.0}, noise_std=-1)


def test_integer_and_pattern_periodicity():
    for s, periods in ((gen_integer_periodic(120, [4, 6]), [4, 6]), (gen_periodic_patterns(120, [5, 7], 1), [5, 7])):
        for ch, p in enumerate(periods):
            np.testing.assert_allclose(s.values[ch, p:], s.values[ch, :-p], atol=1e-12)
