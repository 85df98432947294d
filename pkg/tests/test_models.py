import numpy as np
import pytest

from linearcast.closed_form import LinearForecaster, build_periodic_weights
from linearcast.errors import ShapeMismatch
from linearcast.models import (
    FrozenRandomCore,
    LinearCore,
    ForecastModel,
    backward,
    forward,
    from_linear_forecaster,
    init_model,
    init_preset_model,
)
from linearcast.training import AdamState, adam_step

from gradcheck import KINDS, check_model
from oracles import periodic_extension


@pytest.mark.parametrize("kind,revin,mode", KINDS)
def test_gradients_match_finite_differences(kind, revin, mode):
    errs = check_model(kind, revin, mode, seed=11)
    assert max(errs.values()) < 1e-5, errs


def test_scalar_gradient_example():
    core = LinearCore(1, 1, {"W": np.zeros((1, 1, 1)), "b": np.zeros((1, 1))})
    model = ForecastModel(core, 1)
    _, cache = forward(model, np.array([[2.0]]))
    grads, loss = backward(model, cache, np.array([[4.0]]))
    assert loss == 16
    assert grads["core.W"].item() == -16
    assert grads["core.b"].item() == -8


def test_perfect_prediction_has_zero_grads():
    model = init_model("mlp", 2, 6, 3, h=4, seed=0)
    x = np.random.default_rng(0).normal(size=(5, 2, 6))
    y, cache = forward(model, x)
    grads, loss = backward(model, cache, y.copy())
    assert loss == 0
    assert all(not g.any() for g in grads.values())


def test_closed_form_wrapped_is_exact():
    n, m, p = 12, 7, 5
    lf = LinearForecaster(*build_periodic_weights(n, m, p, 2))
    model = from_linear_forecaster(lf, 2)
    x = np.vstack([periodic_extension(np.arange(p, dtype=float), n + m),
                   periodic_extension(np.array([3.0, -1, 0, 2, 2]), n + m)])
    np.testing.assert_allclose(model.predict(x[:, :n]), x[:, n:], atol=1e-12)


def test_zero_model_and_constant_window():
    core = LinearCore(4, 3, {"W": np.zeros((1, 4, 3)), "b": np.zeros((1, 3))})
    assert not ForecastModel(core, 2).predict(np.ones((2, 4))).any()
    model = init_model("linear", 2, 8, 3, revin=True, seed=5, bias=False)
    pred = model.predict(np.vstack([np.full(8, 7.25), np.full(8, -3.0)]))
    np.testing.assert_allclose(pred, [[7.25] * 3, [-3.0] * 3], atol=1e-12)


def test_independent_equals_stacked_shared_models():
    c, n, m = 3, 10, 4
    ci = init_preset_model("rlinear-ci", c, n, m, seed=3)
    x = np.random.default_rng(1).normal(size=(6, c, n))
    pred = ci.predict(x)
    for ch in range(c):
        core = LinearCore(n, m, {"W": ci.core.params["W"][ch:ch + 1], "b": ci.core.params["b"][ch:ch + 1]})
        single = init_model("linear", 1, n, m, revin=True)
        single.core = core
        single.revin.gamma[:] = ci.revin.gamma[ch]
        single.revin.beta[:] = ci.revin.beta[ch]
        np.testing.assert_allclose(single.predict(x[:, ch:ch + 1]), pred[:, ch:ch + 1], atol=1e-12)


def test_shared_model_is_channel_permutation_equivariant():
    model = init_preset_model("rmlp", 3, 8, 2, seed=0, h=6)
    x = np.random.default_rng(2).normal(size=(4, 3, 8))
    perm = [2, 0, 1]
    np.testing.assert_allclose(model.predict(x[:, perm]), model.predict(x)[:, perm], atol=1e-12)


def test_init_is_deterministic():
    a = init_model("mlp", 2, 8, 3, h=5, seed=42)
    b = init_model("mlp", 2, 8, 3, h=5, seed=42)
    c = init_model("mlp", 2, 8, 3, h=5, seed=43)
    for k, v in a.parameters().items():
        assert np.array_equal(v, b.parameters()[k])
    assert not np.array_equal(a.core.params["W1"], c.core.params["W1"])
    bound = 1 / np.sqrt(8)
    assert np.abs(a.core.params["W1"]).max() <= bound


def test_frozen_matrix_survives_training_step():
    model = init_preset_model("frozen", 2, 8, 3, seed=0)
    assert isinstance(model.core, FrozenRandomCore)
    h0 = model.core.frozen_hash()
    assert "core.R" not in model.parameters()
    x = np.random.default_rng(0).normal(size=(4, 2, 8))
    _, cache = forward(model, x)
    grads, _ = backward(model, cache, np.zeros((4, 2, 3)))
    adam_step(model.parameters(), grads, AdamState(), 0.1)
    assert model.core.frozen_hash() == h0
    with pytest.raises(ValueError):
        model.core.R[0, 0, 0] = 1.0
    # R depends only on the frozen seed
    other = init_preset_model("frozen", 2, 8, 3, seed=99)
    assert other.core.frozen_hash() == h0
    np.testing.assert_allclose(model.core.transition_matrix(), model.core.R @ model.core.params["Wp"])


def test_shape_errors():
    model = init_model("linear", 2, 5, 3)
    with pytest.raises(ShapeMismatch):
        model.predict(np.zeros((3, 5)))
    with pytest.raises(ValueError):
        init_model("transformer", 1, 4, 2)
