import numpy as np
import pytest

from oracles import central_diff_grads, max_relative_error
from trfnet import nn
from trfnet.errors import DomainError


def random_masked_layer(h, v, seed, density=0.5, activation="sigmoid"):
    rng = np.random.default_rng(seed)
    mask = (rng.random((h, v)) < density).astype(np.float64)
    mask[np.arange(h), rng.integers(0, v, size=h)] = 1.0  # no empty rows
    layer = nn.init_masked_layer(mask, rng, activation=activation)
    layer.bias_hidden[:] = rng.normal(scale=0.3, size=h)
    layer.bias_visible[:] = rng.normal(scale=0.3, size=v)
    return layer, rng


class TestForward:
    def test_sigmoid_at_zero(self):
        layer, _ = random_masked_layer(3, 4, seed=0)
        layer.weights[:] = 0.0
        layer.bias_hidden[:] = 0.0
        out = nn.masked_forward(layer, np.zeros((2, 4)))
        np.testing.assert_array_equal(out, 0.5)

    def test_masked_input_has_no_influence(self):
        layer, rng = random_masked_layer(3, 5, seed=1)
        layer.mask[:, 2] = 0.0
        layer.apply_mask()
        x = rng.normal(size=(4, 5))
        base = nn.masked_forward(layer, x)
        x2 = x.copy()
        x2[:, 2] += 100.0
        np.testing.assert_array_equal(nn.masked_forward(layer, x2), base)

    def test_hand_values_match_scalar_evaluation(self):
        mask = np.array([[1.0, 0.0], [1.0, 1.0]])
        w = np.array([[0.5, 9.0], [-0.25, 2.0]])  # the 9 is masked away
        layer = nn.MaskedLayer(mask, w, np.array([0.1, -0.2]), np.zeros(2), "sigmoid")
        x = np.array([[2.0, 3.0]])
        out = nn.masked_forward(layer, x)
        import math

        expect0 = 1 / (1 + math.exp(-(0.5 * 2.0 + 0.1)))
        expect1 = 1 / (1 + math.exp(-(-0.25 * 2.0 + 2.0 * 3.0 - 0.2)))
        assert out[0, 0] == pytest.approx(expect0, abs=1e-12)
        assert out[0, 1] == pytest.approx(expect1, abs=1e-12)

    def test_width_mismatch(self):
        layer, _ = random_masked_layer(3, 4, seed=2)
        with pytest.raises(ValueError):
            nn.masked_forward(layer, np.zeros((2, 5)))


class TestDecoder:
    def test_bernoulli_at_zero(self):
        layer, _ = random_masked_layer(3, 4, seed=3)
        layer.bias_visible[:] = 0.0
        out = nn.decoder_forward(layer, np.zeros((2, 3)), nn.BERNOULLI)
        np.testing.assert_array_equal(out, 0.5)

    def test_gaussian_mean_is_affine(self):
        layer, _ = random_masked_layer(3, 4, seed=4)
        out = nn.decoder_forward(layer, np.zeros((2, 3)), nn.GAUSSIAN)
        np.testing.assert_array_equal(out, np.tile(layer.bias_visible, (2, 1)))

    def test_tied_transpose_matches_explicit_multiply(self):
        layer, rng = random_masked_layer(3, 4, seed=5)
        h = rng.normal(size=(2, 3))
        z = nn.decoder_preactivation(layer, h)
        explicit = (layer.mask * layer.weights).T @ h.T
        np.testing.assert_allclose(z, explicit.T + layer.bias_visible, atol=1e-12)


class TestReconstructionLoss:
    def test_gaussian_perfect_reconstruction(self):
        x = np.random.default_rng(0).normal(size=(3, 5))
        assert nn.reconstruction_loss(x, x, nn.GAUSSIAN) == 0.0

    def test_bernoulli_at_fair_point_is_ln2_per_unit(self):
        x = np.ones((2, 4))
        z = np.zeros((2, 4))
        assert nn.reconstruction_loss(x, z, nn.BERNOULLI) == pytest.approx(
            4 * np.log(2), abs=1e-12
        )

    def test_bernoulli_vanishes_at_confident_correct(self):
        x = np.ones((1, 3))
        z = np.full((1, 3), 80.0)
        assert nn.reconstruction_loss(x, z, nn.BERNOULLI) < 1e-20

    def test_bernoulli_finite_for_huge_logits(self):
        x = np.zeros((1, 2))
        z = np.array([[1e4, -1e4]])
        assert np.isfinite(nn.reconstruction_loss(x, z, nn.BERNOULLI))

    def test_bernoulli_domain_check(self):
        with pytest.raises(DomainError):
            nn.reconstruction_loss(np.array([[1.5, 0.0]]), np.zeros((1, 2)), nn.BERNOULLI)


class TestDaeGradients:
    @pytest.mark.parametrize("family", [nn.BERNOULLI, nn.GAUSSIAN])
    def test_against_finite_differences(self, family):
        rng = np.random.default_rng(17)
        layer, _ = random_masked_layer(5, 7, seed=17)
        if family == nn.BERNOULLI:
            x = (rng.random((6, 7)) < 0.5).astype(np.float64)
        else:
            x = rng.normal(size=(6, 7))
        x_tilde = x * (rng.random(x.shape) >= 0.3)
        _, analytic = nn.dae_gradients(layer, x, x_tilde, family)
        arrays = {
            "weights": layer.weights,
            "bias_hidden": layer.bias_hidden,
            "bias_visible": layer.bias_visible,
        }
        numeric = central_diff_grads(
            lambda: nn.dae_gradients(layer, x, x_tilde, family)[0], arrays
        )
        for name in arrays:
            assert max_relative_error(analytic[name], numeric[name]) <= 1e-4

    def test_masked_positions_get_zero_gradient(self):
        layer, rng = random_masked_layer(4, 6, seed=23)
        x = (rng.random((5, 6)) < 0.5).astype(np.float64)
        _, grads = nn.dae_gradients(layer, x, x, nn.BERNOULLI)
        np.testing.assert_array_equal(grads["weights"] * (1 - layer.mask), 0.0)

    def test_loss_equals_composed_operations(self):
        layer, rng = random_masked_layer(4, 6, seed=29)
        x = (rng.random((5, 6)) < 0.5).astype(np.float64)
        x_tilde = x * (rng.random(x.shape) >= 0.2)
        loss, _ = nn.dae_gradients(layer, x, x_tilde, nn.BERNOULLI)
        h = nn.masked_forward(layer, x_tilde)
        z = nn.decoder_preactivation(layer, h)
        assert loss == nn.reconstruction_loss(x, z, nn.BERNOULLI)


class TestClassifierStack:
    def test_gradients_against_finite_differences(self):
        rng = np.random.default_rng(31)
        layer, _ = random_masked_layer(5, 7, seed=31, activation="relu")
        head = nn.init_dense_layer(3, 5, rng)
        x = rng.normal(size=(6, 7))
        y = rng.integers(0, 3, size=6)

        def loss_fn():
            logits, _ = nn.stack_forward([layer], head, x, training=False)
            return nn.softmax_cross_entropy(logits, y)[0]

        logits, caches = nn.stack_forward([layer], head, x, training=False)
        _, dlogits = nn.softmax_cross_entropy(logits, y)
        g = nn.stack_backward([layer], head, caches, dlogits)
        arrays = {
            "w": layer.weights,
            "bh": layer.bias_hidden,
            "hw": head.weights,
            "hb": head.bias,
        }
        numeric = central_diff_grads(loss_fn, arrays)
        assert max_relative_error(g["layers"][0]["weights"], numeric["w"]) <= 1e-4
        assert max_relative_error(g["layers"][0]["bias_hidden"], numeric["bh"]) <= 1e-4
        assert max_relative_error(g["head"]["weights"], numeric["hw"]) <= 1e-4
        assert max_relative_error(g["head"]["bias"], numeric["hb"]) <= 1e-4

    def test_multitask_loss_gradients_and_missing_labels(self):
        rng = np.random.default_rng(37)
        logits = rng.normal(size=(5, 3))
        targets = rng.integers(0, 2, size=(5, 3)).astype(np.float64)
        targets[0, 1] = -1
        targets[3, 2] = -1

        z = logits.copy()
        _, dlogits = nn.multitask_sigmoid_loss(z, targets)
        assert dlogits[0, 1] == 0.0 and dlogits[3, 2] == 0.0
        numeric = central_diff_grads(
            lambda: nn.multitask_sigmoid_loss(z, targets)[0], {"z": z}
        )
        assert max_relative_error(dlogits, numeric["z"]) <= 1e-4


class TestAdam:
    def test_zero_gradient_is_fixed_point(self):
        p = {"w": np.array([1.0, -2.0, 3.0])}
        adam = nn.Adam()
        for _ in range(5):
            adam.step(p, {"w": np.zeros(3)})
        np.testing.assert_array_equal(p["w"], [1.0, -2.0, 3.0])

    def test_first_step_moves_by_stepsize_times_sign(self):
        # with constant gradient g, the bias-corrected first step is
        # -step * g / (|g| + eps') ~= -step * sign(g)
        for g in (0.3, -4.0):
            p = {"w": np.array([0.0])}
            nn.Adam(step_size=1e-3).step(p, {"w": np.array([g])})
            assert p["w"][0] == pytest.approx(-1e-3 * np.sign(g), rel=1e-6)

    def test_mask_reapplied_after_step(self):
        mask = np.array([[1.0, 0.0]])
        p = {"w": np.array([[0.5, 0.0]])}
        grads = {"w": np.array([[0.1, 0.7]])}  # erroneous gradient on masked slot
        nn.Adam().step(p, grads, {"w": mask})
        assert p["w"][0, 1] == 0.0

    def test_nan_gradient_aborts_without_state_change(self):
        p = {"w": np.array([1.0])}
        adam = nn.Adam()
        with pytest.raises(FloatingPointError):
            adam.step(p, {"w": np.array([np.nan])})
        assert p["w"][0] == 1.0
        assert adam.t == 0


class TestDropout:
    def test_rate_zero_is_identity(self):
        x = np.random.default_rng(0).normal(size=(3, 4))
        y, scale = nn.dropout(x, 0.0, np.random.default_rng(1))
        np.testing.assert_array_equal(y, x)
        np.testing.assert_array_equal(scale, 1.0)

    def test_eval_mode_is_identity(self):
        x = np.random.default_rng(0).normal(size=(3, 4))
        y, _ = nn.dropout(x, 0.9, np.random.default_rng(1), training=False)
        np.testing.assert_array_equal(y, x)

    def test_zeroed_fraction_concentrates(self):
        x = np.ones((1, 100_000))
        y, _ = nn.dropout(x, 0.5, np.random.default_rng(2))
        assert (y == 0).mean() == pytest.approx(0.5, abs=0.01)

    def test_survivors_scaled_up(self):
        x = np.ones((1, 1000))
        y, _ = nn.dropout(x, 0.25, np.random.default_rng(3))
        survivors = y[y != 0]
        np.testing.assert_allclose(survivors, 1.0 / 0.75)

    def test_rate_one_rejected(self):
        with pytest.raises(ValueError):
            nn.dropout(np.ones((1, 2)), 1.0, np.random.default_rng(0))


class TestMaskInvariance:
    def test_training_steps_never_write_masked_entries(self):
        rng = np.random.default_rng(41)
        layer, _ = random_masked_layer(6, 9, seed=41)
        adam = nn.Adam(step_size=0.01)
        params = {
            "w": layer.weights,
            "bh": layer.bias_hidden,
            "bv": layer.bias_visible,
        }
        x = (rng.random((30, 9)) < 0.5).astype(np.float64)
        for _ in range(25):
            x_tilde = x * (rng.random(x.shape) >= 0.2)
            _, grads = nn.dae_gradients(layer, x, x_tilde, nn.BERNOULLI)
            adam.step(
                params,
                {"w": grads["weights"], "bh": grads["bias_hidden"], "bv": grads["bias_visible"]},
                {"w": layer.mask},
            )
        np.testing.assert_array_equal(layer.weights * (1 - layer.mask), 0.0)
        assert np.isfinite(layer.weights).all()
