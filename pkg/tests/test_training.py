import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from meanfield.config import RunConfig
from meanfield.errors import ConfigError, InvalidArgumentError, ShapeError
from meanfield.training import (BETA_FLOOR, AdamState, adam_step, checkpoint_epochs,
                                compare_runs, train_run)


def small(**kw):
    base = dict(dataset="linear", architecture=(4,), epochs=30, checkpoint_every=10)
    base.update(kw)
    return RunConfig(**base)


def test_adam_zero_gradient_is_noop(rng):
    theta = rng.normal(size=6)
    new, state = adam_step(theta, np.zeros(6), AdamState.zeros(6))
    assert np.array_equal(new, theta) and state.t == 1


@given(st.floats(1e-6, 1e6), st.sampled_from([-1.0, 1.0]))
def test_adam_first_step_magnitude(g, sign):
    lr, b2, eps = 0.01, 0.999, 1e-8
    new, _ = adam_step(np.zeros(1), np.array([sign * g]), AdamState.zeros(1), lr=lr, b2=b2, eps=eps)
    # The bias-corrected second moment is g^2, so the denominator is |g| + eps.
    assert new[0] == pytest.approx(-sign * lr * g / (g + eps), rel=1e-12)
    if g >= 1e-4:
        assert abs(new[0]) == pytest.approx(lr, rel=1e-3)


def test_adam_matches_reference_sequence(rng):
    theta, state = np.zeros(3), AdamState.zeros(3)
    m = v = np.zeros(3)
    ref = np.zeros(3)
    for t in range(1, 6):
        g = rng.normal(size=3)
        theta, state = adam_step(theta, g, state)
        m = 0.9 * m + 0.1 * g
        v = 0.999 * v + 0.001 * g * g
        ref = ref - 0.01 * (m / (1 - 0.9 ** t)) / (np.sqrt(v / (1 - 0.999 ** t)) + 1e-8)
    assert np.allclose(theta, ref, rtol=1e-12, atol=0)


def test_adam_floor_applies_only_to_masked():
    mask = np.array([False, True])
    new, _ = adam_step(np.array([0.0, 0.002]), np.array([1.0, 1.0]), AdamState.zeros(2),
                       lr=0.5, floor_mask=mask)
    assert new[1] == BETA_FLOOR and new[0] < 0


def test_adam_shape_mismatch():
    with pytest.raises(ShapeError):
        adam_step(np.zeros(3), np.zeros(2), AdamState.zeros(3))


def test_config_rejects_zero_epochs():
    with pytest.raises(ConfigError):
        small(epochs=0)
    with pytest.raises(ConfigError):
        small(checkpoint_every=31)


def test_single_epoch_run():
    res = train_run(small(epochs=1, checkpoint_every=1))
    assert len(res.records) == 1 and res.records[0].epoch == 1
    assert len(res.spectra) == 1 and res.spectra[0].dim == res.param_dim


def test_checkpoint_schedule_includes_final_epoch():
    assert checkpoint_epochs(small(epochs=25, checkpoint_every=10)) == [10, 20, 25]


def test_run_is_deterministic():
    a, b = train_run(small(seed=5)), train_run(small(seed=5))
    assert [r.as_row() for r in a.records] == [r.as_row() for r in b.records]
    assert all(np.array_equal(x.eigenvalues, y.eigenvalues) for x, y in zip(a.spectra, b.spectra))


@settings(max_examples=6, deadline=None)
@given(st.sampled_from(["swish", "relu", "sigmoid", "tanh", "linear"]), st.integers(0, 50))
def test_trajectory_invariants(kind, seed):
    res = train_run(small(activation=kind, seed=seed, epochs=20, checkpoint_every=5))
    epochs = [r.epoch for r in res.records]
    assert epochs == sorted(set(epochs))
    for r in res.records:
        assert 0 <= r.alpha <= 1 and 0 <= r.gamma <= 1 and 0 <= r.zero_residual_frac <= 1
        assert np.isfinite(r.loss_train) and np.isfinite(r.loss_test)
    assert np.all(res.network.betas >= BETA_FLOOR)


def test_frozen_beta_stays_put():
    res = train_run(small(beta_trainable=False, beta0=1.7))
    assert np.all(res.network.betas == 1.7)


def test_column_normalized_training_keeps_unit_columns():
    res = train_run(small(column_normalize=True, activation="relu"))
    for W in res.network.weights:
        assert np.allclose(W.sum(axis=0), 1.0, atol=1e-12)


def test_swish_hidden_activations_go_negative():
    res = train_run(RunConfig(dataset="nonlinear", activation="swish", epochs=200,
                              checkpoint_every=50))
    assert min(res.min_hidden_act) < 0


def test_linear_task_reaches_full_accuracy():
    res = train_run(RunConfig(dataset="linear", activation="swish", seed=1))
    assert res.final.acc_train == 1.0 and res.final.acc_test == 1.0


def test_compare_validation():
    with pytest.raises(InvalidArgumentError):
        compare_runs([small()], [0])
    with pytest.raises(InvalidArgumentError):
        compare_runs([small(), small(activation="relu", epochs=40)], [0])
    with pytest.raises(InvalidArgumentError):
        compare_runs([small(), small()], [0])


def test_compare_summary_shape_and_determinism():
    cfgs = [small(), small(activation="relu")]
    s1 = compare_runs(cfgs, [0, 1])
    s2 = compare_runs(cfgs, [0, 1])
    assert s1 == s2
    assert set(s1["activations"]) == {"swish", "relu"}
    cell = s1["activations"]["swish"]
    assert len(cell["final_loss"]) == 2 and "median_final_loss" in cell
