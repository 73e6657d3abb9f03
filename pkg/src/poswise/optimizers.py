"""The two training algorithms and the epoch loop around them.

Batch gradient descent updates every layer once per epoch from a single
backward pass. The position-wise optimizer runs L phases per epoch: phase i
backpropagates only through the deepest i+1 layers and updates them, so
layer l (0 = shallowest) receives l+1 updates per epoch while shallow layers
change rarely, and the deeper layers always descend against a freshly
re-evaluated objective.

Two cache-refresh behaviors are kept behind `refresh_mode`:

  "suffix"  (default) after each phase, re-forward from the shallowest layer
            the phase touched, so the next phase starts from a fully
            consistent cache;
  "literal" only the per-layer refresh that happens immediately after each
            weight update, which leaves deeper cache entries computed from
            pre-update shallower weights until a later phase reaches them.

Both modes perform the identical update schedule; they differ only in what
the next phase's gradients see.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .losses import LossSpec, loss_value, output_delta
from .matrix import matmul, scale_and_axpy
from .network import Network, ForwardCache, activate, activate_prime, forward_full, forward_suffix

REFRESH_MODES = ("suffix", "literal")


class DivergenceError(RuntimeError):
    """Raised inside an epoch when the loss stops being finite."""

    def __init__(self, loss: float):
        super().__init__(f"training diverged: loss became {loss}")
        self.loss = loss


@dataclass
class TrainConfig:
    eta: float
    loss_threshold: float
    max_epochs: int
    loss_spec: LossSpec
    refresh_mode: str = "suffix"
    train_bias: bool = True

    def __post_init__(self):
        if not self.eta > 0:
            raise ValueError(f"eta must be > 0, got {self.eta}")
        if self.max_epochs < 1:
            raise ValueError(f"max_epochs must be >= 1, got {self.max_epochs}")
        if self.refresh_mode not in REFRESH_MODES:
            raise ValueError(f"refresh_mode must be one of {REFRESH_MODES}, got {self.refresh_mode!r}")


@dataclass
class TrainRecord:
    loss_history: list[float] = field(default_factory=list)
    epochs_to_threshold: int | None = None
    wall_seconds: float = 0.0
    update_counts: list[list[int]] = field(default_factory=list)  # per epoch, per layer
    diverged: bool = False


def _ensure_finite(loss: float):
    if not math.isfinite(loss):
        raise DivergenceError(loss)


def _check_cache(net: Network, cache: ForwardCache, target: np.ndarray):
    n = cache.batch_size
    if len(cache.x) != net.depth + 1 or len(cache.y) != net.depth:
        raise ValueError(f"cache depth does not match network depth {net.depth}")
    for l, layer in enumerate(net.layers):
        if cache.x[l].shape != (layer.in_width, n) or cache.y[l].shape != (layer.out_width, n):
            raise ValueError(
                f"stale cache at layer {l}: x {cache.x[l].shape}, y {cache.y[l].shape}, "
                f"layer {layer.out_width}x{layer.in_width}, batch {n}"
            )
    if target.shape != (net.layers[-1].out_width, n):
        raise ValueError(f"target shape {target.shape} does not match output {cache.output.shape}")


def _layer_grads(cache: ForwardCache, l: int, d_y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    d_w = matmul(d_y, cache.x[l].T)
    d_b = d_y.sum(axis=1, keepdims=True)
    return d_w, d_b


def _apply_update(layer, d_w: np.ndarray, d_b: np.ndarray, cfg: TrainConfig):
    layer.weights = scale_and_axpy(layer.weights, d_w, cfg.eta)
    if cfg.train_bias:
        layer.bias = scale_and_axpy(layer.bias, d_b, cfg.eta)
    layer.updates += 1


def backward_full(
    net: Network,
    cache: ForwardCache,
    target: np.ndarray,
    spec: LossSpec,
) -> tuple[list[np.ndarray], list[np.ndarray]]:
    """Gradients of the batch loss for every layer; weights are untouched."""
    _check_cache(net, cache, target)
    depth = net.depth
    d_ws: list[np.ndarray | None] = [None] * depth
    d_bs: list[np.ndarray | None] = [None] * depth
    d_y = output_delta(spec, cache, target, net.layers[-1].activation)
    d_x = None
    for l in range(depth - 1, -1, -1):
        if l < depth - 1:
            d_y = d_x * activate_prime(net.layers[l].activation, cache.y[l])
        d_ws[l], d_bs[l] = _layer_grads(cache, l, d_y)
        if l >= 1:
            d_x = matmul(net.layers[l].weights.T, d_y)
    return d_ws, d_bs


def gd_epoch(net: Network, data, cfg: TrainConfig) -> tuple[Network, float]:
    """One full-batch gradient descent epoch.

    Returns the loss measured before the update (the value the forward pass
    saw), then updates all layers simultaneously from one backward pass.
    """
    cache = forward_full(net, data.inputs)
    loss = loss_value(cfg.loss_spec, cache.output, data.targets)
    _ensure_finite(loss)
    d_ws, d_bs = backward_full(net, cache, data.targets, cfg.loss_spec)
    for layer, d_w, d_b in zip(net.layers, d_ws, d_bs):
        _apply_update(layer, d_w, d_b, cfg)
    return net, loss


def poswise_epoch(net: Network, data, cfg: TrainConfig) -> tuple[Network, float]:
    """One position-wise epoch: L phases, phase i updating the deepest i+1 layers.

    Within a phase the inner loop descends from the output layer. The
    propagated delta for the next shallower layer always uses the pre-update
    weights of the layer above, and every updated layer immediately refreshes
    its own cached forward values. Returns the loss of the final cache after
    the last phase.
    """
    depth = net.depth
    target = data.targets
    cache = forward_full(net, data.inputs)
    _check_cache(net, cache, target)
    for i in range(depth):
        phase_loss = loss_value(cfg.loss_spec, cache.output, target)
        _ensure_finite(phase_loss)
        d_y = output_delta(cfg.loss_spec, cache, target, net.layers[-1].activation)
        d_x = None
        for l in range(depth - 1, depth - 2 - i, -1):
            layer = net.layers[l]
            if l < depth - 1:
                d_y = d_x * activate_prime(layer.activation, cache.y[l])
            d_w, d_b = _layer_grads(cache, l, d_y)
            if l >= 1:
                # Propagate through the pre-update weights before touching them.
                d_x = matmul(layer.weights.T, d_y)
            _apply_update(layer, d_w, d_b, cfg)
            cache.y[l] = matmul(layer.weights, cache.x[l]) + layer.bias
            cache.x[l + 1] = activate(layer.activation, cache.y[l])
        if cfg.refresh_mode == "suffix":
            forward_suffix(net, cache, depth - 1 - i)
    epoch_loss = loss_value(cfg.loss_spec, cache.output, target)
    _ensure_finite(epoch_loss)
    return net, epoch_loss


_EPOCH_FNS = {"gd": gd_epoch, "poswise": poswise_epoch}


def train(net: Network, data, cfg: TrainConfig, kind: str) -> TrainRecord:
    """Run epochs until the end-of-epoch loss drops below the threshold or
    max_epochs is reached; on a non-finite loss the partial record is
    returned flagged as diverged."""
    if kind not in _EPOCH_FNS:
        raise ValueError(f"optimizer kind must be one of {sorted(_EPOCH_FNS)}, got {kind!r}")
    epoch_fn = _EPOCH_FNS[kind]
    record = TrainRecord()
    before = net.update_counts()
    start = time.perf_counter()
    for epoch in range(cfg.max_epochs):
        try:
            net, loss = epoch_fn(net, data, cfg)
        except DivergenceError:
            record.diverged = True
            break
        after = net.update_counts()
        record.loss_history.append(loss)
        record.update_counts.append([a - b for a, b in zip(after, before)])
        before = after
        if loss < cfg.loss_threshold:
            record.epochs_to_threshold = epoch + 1
            break
    record.wall_seconds = time.perf_counter() - start
    return record
