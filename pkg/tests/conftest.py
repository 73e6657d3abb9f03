"""Shared fixtures: random network builders and dataset fixtures."""

import os
from pathlib import Path

import numpy as np
import pytest

from poswise.datasets import write_idx_images, write_idx_labels

# Directory that may hold the real MNIST IDX training files; the multi-class
# trend test runs on them when present and on the generated stand-in below
# otherwise.
MNIST_ENV_VAR = "POSWISE_DATA_DIR"
MNIST_FILES = ("train-images-idx3-ubyte", "train-labels-idx1-ubyte")


def find_mnist_dir():
    candidates = []
    if os.environ.get(MNIST_ENV_VAR):
        candidates.append(Path(os.environ[MNIST_ENV_VAR]))
    candidates.append(Path(__file__).resolve().parent.parent / "data")
    for cand in candidates:
        if all((cand / name).is_file() for name in MNIST_FILES):
            return cand
    return None


def make_image_class_idx(
    out_dir: Path,
    n_per_class: int = 600,
    side: int = 28,
    classes: int = 10,
    lit_pixels: int = 100,
    noise_std: float = 40.0,
    seed: int = 99,
):
    """Write an IDX image/label pair of synthetic 10-class images.

    Each class is a sparse bright-pixel prototype on a black background plus
    per-sample noise, mimicking the scale and sparsity of handwritten-digit
    data without shipping it.
    """
    gen = np.random.Generator(np.random.PCG64(seed))
    d = side * side
    protos = np.zeros((classes, d))
    for c in range(classes):
        on = gen.choice(d, size=lit_pixels, replace=False)
        protos[c, on] = gen.uniform(150, 255, size=lit_pixels)
    images, labels = [], []
    for c in range(classes):
        samples = np.clip(protos[c] + gen.normal(0, noise_std, (n_per_class, d)), 0, 255)
        images.append(samples)
        labels.append(np.full(n_per_class, c))
    images = np.concatenate(images).astype(np.uint8).reshape(-1, side, side)
    labels = np.concatenate(labels).astype(np.uint8)
    order = gen.permutation(labels.shape[0])
    write_idx_images(out_dir / MNIST_FILES[0], images[order])
    write_idx_labels(out_dir / MNIST_FILES[1], labels[order])
    return out_dir


@pytest.fixture(scope="session")
def image_class_idx_dir(tmp_path_factory):
    out_dir = tmp_path_factory.mktemp("idx10")
    return make_image_class_idx(out_dir)
