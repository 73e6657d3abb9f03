"""Layers, activations, and the forward passes both optimizers consume.

Data layout follows the column-per-sample convention: inputs are
(features x N), a layer maps (n_prev x N) activations to (n_l x N), and the
cache keeps every intermediate so gradients and partial re-forwards can reuse
them.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .matrix import broadcast_add_col, matmul


class ActivationKind(Enum):
    RELU = "relu"
    SIGMOID = "sigmoid"
    LINEAR = "linear"


def _sigmoid(z: np.ndarray) -> np.ndarray:
    # Split by sign so exp never sees a large positive argument.
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def activate(kind: ActivationKind, y: np.ndarray) -> np.ndarray:
    """Entrywise activation value."""
    if kind is ActivationKind.RELU:
        return np.maximum(y, 0.0)
    if kind is ActivationKind.SIGMOID:
        return _sigmoid(y)
    return y.copy()


def activate_prime(kind: ActivationKind, y: np.ndarray) -> np.ndarray:
    """Entrywise activation derivative at the pre-activation y.

    ReLU' is taken as 0 at exactly 0 (a fixed measure-zero choice so runs
    are reproducible).
    """
    if kind is ActivationKind.RELU:
        return (y > 0).astype(np.float64)
    if kind is ActivationKind.SIGMOID:
        s = _sigmoid(y)
        return s * (1.0 - s)
    return np.ones_like(y)


@dataclass
class Layer:
    weights: np.ndarray  # (n_l x n_prev)
    bias: np.ndarray  # (n_l x 1)
    activation: ActivationKind
    updates: int = 0  # instrumentation: bumped on every weight update

    def __post_init__(self):
        if self.weights.ndim != 2 or self.bias.shape != (self.weights.shape[0], 1):
            raise ValueError(
                f"layer weights {self.weights.shape} and bias {self.bias.shape} disagree"
            )

    @property
    def out_width(self) -> int:
        return self.weights.shape[0]

    @property
    def in_width(self) -> int:
        return self.weights.shape[1]


@dataclass
class Network:
    layers: list[Layer] = field(default_factory=list)

    def __post_init__(self):
        for l in range(1, len(self.layers)):
            if self.layers[l].in_width != self.layers[l - 1].out_width:
                raise ValueError(
                    f"layer {l} expects {self.layers[l].in_width} inputs but layer "
                    f"{l - 1} produces {self.layers[l - 1].out_width}"
                )

    @property
    def depth(self) -> int:
        return len(self.layers)

    def update_counts(self) -> list[int]:
        return [layer.updates for layer in self.layers]


@dataclass
class ForwardCache:
    """Per-layer pre-activations y[l] and activations x[l] from the latest
    (possibly partial) forward pass; x[0] is the input, x[depth] the output."""

    x: list[np.ndarray]
    y: list[np.ndarray]

    @property
    def batch_size(self) -> int:
        return self.x[0].shape[1]

    @property
    def output(self) -> np.ndarray:
        return self.x[-1]


def forward_full(net: Network, x0: np.ndarray) -> ForwardCache:
    """Run every layer on x0 and cache all intermediates."""
    if x0.ndim != 2 or x0.shape[0] != net.layers[0].in_width:
        raise ValueError(
            f"input shape {x0.shape} does not feed layer 0 (expects {net.layers[0].in_width} rows)"
        )
    cache = ForwardCache(x=[x0] + [None] * net.depth, y=[None] * net.depth)
    return forward_suffix(net, cache, 0)


def forward_suffix(net: Network, cache: ForwardCache, from_layer: int) -> ForwardCache:
    """Recompute y[l] and x[l+1] for all l >= from_layer with current weights.

    Entries below from_layer are left untouched; the cache is updated in
    place and returned. from_layer == 0 is a full forward pass.
    """
    if not 0 <= from_layer <= net.depth - 1:
        raise ValueError(f"from_layer {from_layer} out of range for depth {net.depth}")
    if cache.x[from_layer] is None or cache.x[from_layer].shape[0] != net.layers[from_layer].in_width:
        got = None if cache.x[from_layer] is None else cache.x[from_layer].shape
        raise ValueError(f"cache.x[{from_layer}] has shape {got}, cannot resume there")
    for l in range(from_layer, net.depth):
        layer = net.layers[l]
        try:
            y = broadcast_add_col(matmul(layer.weights, cache.x[l]), layer.bias)
        except ValueError as err:
            raise ValueError(f"forward failed at layer {l}: {err}") from err
        cache.y[l] = y
        cache.x[l + 1] = activate(layer.activation, y)
    return cache
