"""Objective functions and their gradients at the output layer.

Three objectives are supported, each tied to the output activation it is
valid with:

  binary cross-entropy   with a Sigmoid output
  additive margin softmax with a Linear (logits) output
  half mean squared error with a Linear output

`output_delta` returns the exact gradient of the batch loss with respect to
the output layer's pre-activation, already scaled by 1/N so the learning
rate is decoupled from batch size. For the cross-entropy pairings this is
the usual fused shortcut (activation minus target) / N.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .network import ActivationKind, ForwardCache

# Predictions are clamped away from {0, 1} before any logarithm.
PROB_CLAMP = 1e-12


class LossKind(Enum):
    BCE = "bce"
    AM_SOFTMAX = "amsoftmax"
    MSE = "mse"


# Which output activation each loss is defined against.
_VALID_PAIRINGS = {
    LossKind.BCE: ActivationKind.SIGMOID,
    LossKind.AM_SOFTMAX: ActivationKind.LINEAR,
    LossKind.MSE: ActivationKind.LINEAR,
}


@dataclass
class LossSpec:
    kind: LossKind
    margin: float = 0.35
    scale: float = 30.0

    def __post_init__(self):
        if self.kind is LossKind.AM_SOFTMAX:
            if self.margin < 0:
                raise ValueError(f"margin must be >= 0, got {self.margin}")
            if self.scale <= 0:
                raise ValueError(f"scale must be > 0, got {self.scale}")

    def output_activation(self) -> ActivationKind:
        return _VALID_PAIRINGS[self.kind]


def _check_same_shape(pred: np.ndarray, target: np.ndarray, name: str):
    if pred.shape != target.shape:
        raise ValueError(f"{name}: prediction {pred.shape} vs target {target.shape}")


def cross_entropy(pred: np.ndarray, target: np.ndarray) -> float:
    """Binary cross-entropy, averaged over samples (columns).

    Rows are treated as independent binary outputs and summed, which reduces
    to the scalar definition for a single output row.
    """
    _check_same_shape(pred, target, "cross_entropy")
    p = np.clip(pred, PROB_CLAMP, 1.0 - PROB_CLAMP)
    n = pred.shape[1]
    return float(-(target * np.log(p) + (1.0 - target) * np.log1p(-p)).sum() / n)


def mse_loss(pred: np.ndarray, target: np.ndarray) -> float:
    """Half mean squared error: (1/2N) sum of squared residuals."""
    _check_same_shape(pred, target, "mse_loss")
    diff = target - pred
    return float((diff * diff).sum() / (2 * pred.shape[1]))


def _am_adjusted_logits(logits: np.ndarray, labels: np.ndarray, m: float, s: float) -> np.ndarray:
    k, n = logits.shape
    if k < 2:
        raise ValueError(f"need at least 2 classes, got {k}")
    labels = np.asarray(labels)
    if labels.shape != (n,):
        raise ValueError(f"labels shape {labels.shape} does not match batch size {n}")
    if labels.min() < 0 or labels.max() >= k:
        raise ValueError(f"labels out of range [0, {k})")
    adjusted = s * logits.copy()
    adjusted[labels, np.arange(n)] -= s * m
    return adjusted


def am_softmax_loss(logits: np.ndarray, labels: np.ndarray, m: float, s: float) -> float:
    """Additive margin softmax cross-entropy.

    The true-class logit is penalized by m before scaling every logit by s;
    the loss is the mean negative log posterior of the true class. m=0, s=1
    is plain softmax cross-entropy.
    """
    adjusted = _am_adjusted_logits(logits, labels, m, s)
    n = logits.shape[1]
    shifted = adjusted - adjusted.max(axis=0, keepdims=True)
    log_z = np.log(np.exp(shifted).sum(axis=0))
    return float((log_z - shifted[labels, np.arange(n)]).mean())


def _am_posterior(logits: np.ndarray, labels: np.ndarray, m: float, s: float) -> np.ndarray:
    adjusted = _am_adjusted_logits(logits, labels, m, s)
    shifted = adjusted - adjusted.max(axis=0, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=0, keepdims=True)


def loss_value(spec: LossSpec, output: np.ndarray, target: np.ndarray) -> float:
    """Scalar batch loss of the network output against the target matrix."""
    if spec.kind is LossKind.BCE:
        return cross_entropy(output, target)
    if spec.kind is LossKind.MSE:
        return mse_loss(output, target)
    labels = np.argmax(target, axis=0)
    return am_softmax_loss(output, labels, spec.margin, spec.scale)


def output_delta(
    spec: LossSpec,
    cache: ForwardCache,
    target: np.ndarray,
    out_activation: ActivationKind,
) -> np.ndarray:
    """Gradient of the batch loss w.r.t. the output layer's pre-activation.

    Rejects (activation, loss) pairings the shortcut is not exact for.
    """
    expected = _VALID_PAIRINGS[spec.kind]
    if out_activation is not expected:
        raise ValueError(
            f"loss {spec.kind.value} requires a {expected.value} output layer, "
            f"got {out_activation.value}"
        )
    output = cache.output
    _check_same_shape(output, target, "output_delta")
    n = output.shape[1]
    if spec.kind in (LossKind.BCE, LossKind.MSE):
        return (output - target) / n
    labels = np.argmax(target, axis=0)
    posterior = _am_posterior(output, labels, spec.margin, spec.scale)
    return (posterior - target) * (spec.scale / n)
