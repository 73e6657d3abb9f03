"""Weight initialization and the copy step that makes optimizer runs comparable.

Weights follow normal Xavier scaling, sigma = sqrt(2 / (fan_in + fan_out));
biases start at zero. A single rng stream is consumed in layer order
(shallow to deep), so a given (architecture, seed) pair always produces the
same network, and `duplicate_network` hands both optimizers bit-identical
starting points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .matrix import SeededRng, draw_normal
from .network import ActivationKind, Layer, Network


@dataclass
class InitSpec:
    seed: int
    mu: float = 0.0


def xavier_sigma(n_l: int, n_prev: int) -> float:
    return math.sqrt(2.0 / (n_l + n_prev))


def xavier_normal(rng: SeededRng, n_l: int, n_prev: int, mu: float = 0.0) -> np.ndarray:
    """(n_l x n_prev) weight draw at Xavier scale."""
    if n_l < 1 or n_prev < 1:
        raise ValueError(f"layer widths must be >= 1, got {n_l} x {n_prev}")
    return draw_normal(rng, n_l, n_prev, mu, xavier_sigma(n_l, n_prev))


def init_network(
    arch: Sequence[int],
    activations: Sequence[ActivationKind],
    spec: InitSpec,
) -> Network:
    """Build a network of len(arch)-1 layers with Xavier weights, zero biases."""
    if len(arch) < 2:
        raise ValueError(f"architecture needs at least input and output widths, got {list(arch)}")
    if len(activations) != len(arch) - 1:
        raise ValueError(
            f"{len(arch) - 1} layers need {len(arch) - 1} activations, got {len(activations)}"
        )
    rng = SeededRng(spec.seed)
    layers = []
    for l in range(len(arch) - 1):
        n_prev, n_l = arch[l], arch[l + 1]
        layers.append(
            Layer(
                weights=xavier_normal(rng, n_l, n_prev, spec.mu),
                bias=np.zeros((n_l, 1)),
                activation=activations[l],
            )
        )
    return Network(layers=layers)


def duplicate_network(net: Network) -> tuple[Network, Network]:
    """Two independent deep copies; training one never touches the other."""
    return _copy_network(net), _copy_network(net)


def _copy_network(net: Network) -> Network:
    return Network(
        layers=[
            Layer(
                weights=layer.weights.copy(),
                bias=layer.bias.copy(),
                activation=layer.activation,
                updates=layer.updates,
            )
            for layer in net.layers
        ]
    )
