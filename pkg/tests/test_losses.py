import math

import numpy as np
import pytest

from poswise.losses import (
    LossKind,
    LossSpec,
    am_softmax_loss,
    cross_entropy,
    loss_value,
    mse_loss,
    output_delta,
)
from poswise.network import ActivationKind, ForwardCache, activate
from poswise.oracle import finite_diff_grad, relative_error

AK = ActivationKind


def cache_for(out_kind, preact):
    """Minimal cache whose output is the activation of the given pre-activation."""
    preact = np.asarray(preact, dtype=float)
    return ForwardCache(x=[np.zeros((1, preact.shape[1])), activate(out_kind, preact)], y=[preact])


class TestCrossEntropy:
    def test_perfect_prediction(self):
        target = np.array([[1.0, 0.0, 1.0]])
        assert cross_entropy(target, target) < 1e-11

    def test_coin_flip(self):
        e = cross_entropy(np.array([[0.5, 0.5]]), np.array([[1.0, 0.0]]))
        assert e == pytest.approx(math.log(2), abs=1e-12)

    def test_by_hand(self):
        e = cross_entropy(np.array([[0.9, 0.2]]), np.array([[1.0, 0.0]]))
        expected = -0.5 * (math.log(0.9) + math.log(0.8))
        assert e == pytest.approx(expected, abs=1e-12)

    def test_shape_mismatch(self):
        with pytest.raises(ValueError, match="cross_entropy"):
            cross_entropy(np.zeros((1, 3)), np.zeros((1, 2)))

    def test_permutation_invariant(self):
        rng = np.random.default_rng(0)
        pred = rng.uniform(0.01, 0.99, size=(1, 9))
        target = (rng.uniform(size=(1, 9)) > 0.5).astype(float)
        perm = rng.permutation(9)
        assert cross_entropy(pred, target) == pytest.approx(
            cross_entropy(pred[:, perm], target[:, perm]), abs=1e-12
        )

    def test_nonnegative_finite(self):
        rng = np.random.default_rng(1)
        for _ in range(20):
            pred = rng.uniform(size=(1, 5))
            target = (rng.uniform(size=(1, 5)) > 0.5).astype(float)
            e = cross_entropy(pred, target)
            assert math.isfinite(e) and e >= 0


class TestMse:
    def test_zero_residual(self):
        pred = np.array([[1.0, 2.0]])
        assert mse_loss(pred, pred) == 0.0

    def test_single_sample(self):
        assert mse_loss(np.array([[0.0]]), np.array([[2.0]])) == 2.0

    def test_two_samples(self):
        assert mse_loss(np.array([[1.0, 3.0]]), np.array([[2.0, 3.0]])) == 0.25

    def test_shape_mismatch(self):
        with pytest.raises(ValueError, match="mse"):
            mse_loss(np.zeros((1, 2)), np.zeros((1, 3)))


class TestAmSoftmax:
    def softmax_ce(self, logits, labels):
        # Independent plain softmax cross-entropy reference.
        z = logits - logits.max(axis=0, keepdims=True)
        p = np.exp(z) / np.exp(z).sum(axis=0, keepdims=True)
        return float(-np.log(p[labels, np.arange(logits.shape[1])]).mean())

    def test_margin_zero_scale_one_reduces_to_softmax(self):
        rng = np.random.default_rng(2)
        logits = rng.normal(size=(5, 7))
        labels = rng.integers(0, 5, size=7)
        assert am_softmax_loss(logits, labels, 0.0, 1.0) == pytest.approx(
            self.softmax_ce(logits, labels), abs=1e-12
        )

    def test_two_class_symmetric(self):
        e = am_softmax_loss(np.array([[1.3], [1.3]]), np.array([0]), 0.0, 1.0)
        assert e == pytest.approx(math.log(2), abs=1e-12)

    def test_monotone_in_margin(self):
        rng = np.random.default_rng(3)
        logits = rng.normal(size=(4, 6))
        labels = rng.integers(0, 4, size=6)
        margins = [0.0, 0.1, 0.35, 0.8, 2.0]
        losses = [am_softmax_loss(logits, labels, m, 7.0) for m in margins]
        assert all(b >= a - 1e-12 for a, b in zip(losses, losses[1:]))

    def test_label_out_of_range(self):
        with pytest.raises(ValueError, match="range"):
            am_softmax_loss(np.zeros((3, 2)), np.array([0, 3]), 0.1, 1.0)

    def test_needs_two_classes(self):
        with pytest.raises(ValueError, match="2 classes"):
            am_softmax_loss(np.zeros((1, 2)), np.array([0, 0]), 0.1, 1.0)

    def test_stable_at_huge_logits(self):
        logits = np.array([[1000.0, -1000.0], [-1000.0, 1000.0]])
        e = am_softmax_loss(logits, np.array([0, 1]), 0.35, 30.0)
        assert math.isfinite(e)


class TestLossSpec:
    def test_margin_validation(self):
        with pytest.raises(ValueError, match="margin"):
            LossSpec(LossKind.AM_SOFTMAX, margin=-0.1)

    def test_scale_validation(self):
        with pytest.raises(ValueError, match="scale"):
            LossSpec(LossKind.AM_SOFTMAX, scale=0.0)

    def test_mse_ignores_margin(self):
        LossSpec(LossKind.MSE, margin=-1.0)  # no error: margin unused


class TestOutputDelta:
    def test_perfect_prediction_fixed_point(self):
        y = np.array([[0.5, -1.0, 2.0]])
        cache = cache_for(AK.LINEAR, y)
        delta = output_delta(LossSpec(LossKind.MSE), cache, cache.output.copy(), AK.LINEAR)
        assert np.array_equal(delta, np.zeros_like(y))

    def test_sigmoid_bce_by_hand(self):
        # One sample with sigmoid output 0.8 and target 1: delta = -0.2.
        preact = np.array([[math.log(4.0)]])  # sigmoid = 0.8
        cache = cache_for(AK.SIGMOID, preact)
        delta = output_delta(LossSpec(LossKind.BCE), cache, np.array([[1.0]]), AK.SIGMOID)
        assert delta[0, 0] == pytest.approx(-0.2, abs=1e-12)

    @pytest.mark.parametrize("kind", [LossKind.BCE, LossKind.MSE, LossKind.AM_SOFTMAX])
    def test_matches_finite_differences(self, kind):
        rng = np.random.default_rng(4)
        k, n = 4, 3
        preact = rng.normal(size=(k, n))
        if kind is LossKind.BCE:
            out_kind = AK.SIGMOID
            target = (rng.uniform(size=(k, n)) > 0.5).astype(float)
        else:
            out_kind = AK.LINEAR
            if kind is LossKind.AM_SOFTMAX:
                labels = rng.integers(0, k, size=n)
                target = np.zeros((k, n))
                target[labels, np.arange(n)] = 1.0
            else:
                target = rng.normal(size=(k, n))
        spec = LossSpec(kind, margin=0.2, scale=3.0)
        delta = output_delta(spec, cache_for(out_kind, preact), target, out_kind)
        fd = finite_diff_grad(
            lambda y: loss_value(spec, activate(out_kind, y), target), preact
        )
        assert relative_error(delta, fd) <= 1e-6

    def test_unsupported_pairings_rejected(self):
        y = np.array([[0.0, 0.0]])
        target = np.array([[1.0, 0.0]])
        with pytest.raises(ValueError, match="requires"):
            output_delta(LossSpec(LossKind.BCE), cache_for(AK.LINEAR, y), target, AK.LINEAR)
        with pytest.raises(ValueError, match="requires"):
            output_delta(LossSpec(LossKind.MSE), cache_for(AK.SIGMOID, y), target, AK.SIGMOID)
        with pytest.raises(ValueError, match="requires"):
            output_delta(
                LossSpec(LossKind.AM_SOFTMAX), cache_for(AK.SIGMOID, y), target, AK.SIGMOID
            )


class TestLossValue:
    def test_dispatch(self):
        pred = np.array([[0.5, 0.5]])
        target = np.array([[1.0, 0.0]])
        assert loss_value(LossSpec(LossKind.BCE), pred, target) == pytest.approx(math.log(2))
        assert loss_value(LossSpec(LossKind.MSE), pred, target) == pytest.approx(0.125)

    def test_amsoftmax_uses_argmax_labels(self):
        logits = np.array([[2.0, -1.0], [0.5, 3.0]])
        target = np.array([[1.0, 0.0], [0.0, 1.0]])
        direct = am_softmax_loss(logits, np.array([0, 1]), 0.35, 30.0)
        assert loss_value(LossSpec(LossKind.AM_SOFTMAX), logits, target) == direct
