"""Training engine comparing batch gradient descent against a position-wise
optimizer that updates deeper layers more often within each epoch."""

from .datasets import (
    Dataset,
    DataFormatError,
    load_cifar10_bin,
    load_mnist_idx,
    one_hot,
    subsample,
    synthetic_binary,
)
from .init import InitSpec, duplicate_network, init_network, xavier_normal
from .losses import LossKind, LossSpec, am_softmax_loss, cross_entropy, mse_loss, output_delta
from .matrix import SeededRng
from .network import (
    ActivationKind,
    ForwardCache,
    Layer,
    Network,
    activate,
    activate_prime,
    forward_full,
    forward_suffix,
)
from .optimizers import (
    DivergenceError,
    TrainConfig,
    TrainRecord,
    backward_full,
    gd_epoch,
    poswise_epoch,
    train,
)

__all__ = [
    "ActivationKind",
    "DataFormatError",
    "Dataset",
    "DivergenceError",
    "ForwardCache",
    "InitSpec",
    "Layer",
    "LossKind",
    "LossSpec",
    "Network",
    "SeededRng",
    "TrainConfig",
    "TrainRecord",
    "activate",
    "activate_prime",
    "am_softmax_loss",
    "backward_full",
    "cross_entropy",
    "duplicate_network",
    "forward_full",
    "forward_suffix",
    "gd_epoch",
    "init_network",
    "load_cifar10_bin",
    "load_mnist_idx",
    "mse_loss",
    "one_hot",
    "output_delta",
    "poswise_epoch",
    "subsample",
    "synthetic_binary",
    "train",
    "xavier_normal",
]
