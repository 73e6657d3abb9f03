"""Dataset loading, synthesis, and shaping.

Everything downstream consumes a `Dataset`: inputs as a (features x N)
float64 matrix with entries in [0, 1], targets as an (out x N) matrix, and
integer labels for multi-class tasks. Loaders are pure functions of the file
bytes and never download anything.

File formats handled here:

  IDX images   big-endian: uint32 magic 2051, count, rows, cols, then
               count*rows*cols pixel bytes
  IDX labels   big-endian: uint32 magic 2049, count, then count label bytes
  CIFAR-10 bin records of exactly 3073 bytes: 1 label byte (0-9) then
               3072 pixel bytes (1024 R, 1024 G, 1024 B), row-major
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .matrix import SeededRng

IDX_IMAGE_MAGIC = 2051
IDX_LABEL_MAGIC = 2049
CIFAR_RECORD_BYTES = 3073

# Per-coordinate noise of the synthetic binary clusters; class difficulty is
# steered through the `separation` argument instead.
CLUSTER_STD = 0.15


class DataFormatError(ValueError):
    """A data file violates its documented byte layout."""


@dataclass
class Dataset:
    inputs: np.ndarray  # (features x N), entries in [0, 1]
    targets: np.ndarray  # (out x N)
    labels: np.ndarray | None  # (N,) ints, multi-class only
    name: str

    def __post_init__(self):
        if self.inputs.shape[1] != self.targets.shape[1]:
            raise ValueError(
                f"inputs have {self.inputs.shape[1]} columns, targets {self.targets.shape[1]}"
            )
        if self.labels is not None and self.labels.shape != (self.inputs.shape[1],):
            raise ValueError(f"labels shape {self.labels.shape} does not match N")

    @property
    def n_samples(self) -> int:
        return self.inputs.shape[1]

    @property
    def n_features(self) -> int:
        return self.inputs.shape[0]


def one_hot(labels: np.ndarray, k: int) -> np.ndarray:
    """(k x N) matrix with a single 1 per column at the label's row."""
    labels = np.asarray(labels)
    if labels.size and (labels.min() < 0 or labels.max() >= k):
        raise ValueError(f"labels out of range [0, {k})")
    out = np.zeros((k, labels.shape[0]))
    out[labels, np.arange(labels.shape[0])] = 1.0
    return out


def _read_exact(raw: bytes, offset: int, count: int, what: str) -> bytes:
    if len(raw) < offset + count:
        raise DataFormatError(
            f"truncated file: expected {count} bytes of {what} at byte {offset}, "
            f"found {len(raw) - offset}"
        )
    return raw[offset : offset + count]


def _parse_idx_images(raw: bytes, path) -> np.ndarray:
    magic, n, rows, cols = struct.unpack(">IIII", _read_exact(raw, 0, 16, "IDX image header"))
    if magic != IDX_IMAGE_MAGIC:
        raise DataFormatError(
            f"{path}: bad magic {magic} at byte 0 (expected {IDX_IMAGE_MAGIC})"
        )
    pixels = _read_exact(raw, 16, n * rows * cols, "pixels")
    return np.frombuffer(pixels, dtype=np.uint8).reshape(n, rows * cols)


def _parse_idx_labels(raw: bytes, path) -> np.ndarray:
    magic, n = struct.unpack(">II", _read_exact(raw, 0, 8, "IDX label header"))
    if magic != IDX_LABEL_MAGIC:
        raise DataFormatError(
            f"{path}: bad magic {magic} at byte 0 (expected {IDX_LABEL_MAGIC})"
        )
    return np.frombuffer(_read_exact(raw, 8, n, "labels"), dtype=np.uint8)


def load_mnist_idx(images_path, labels_path) -> Dataset:
    """Load an IDX image/label file pair into a 10-class dataset.

    Pixels are flattened row-major, one image per column, divided by 255.
    """
    images = _parse_idx_images(Path(images_path).read_bytes(), images_path)
    labels = _parse_idx_labels(Path(labels_path).read_bytes(), labels_path)
    if images.shape[0] != labels.shape[0]:
        raise DataFormatError(
            f"count mismatch: {images_path} has {images.shape[0]} images but "
            f"{labels_path} has {labels.shape[0]} labels"
        )
    labels = labels.astype(np.int64)
    return Dataset(
        inputs=images.T.astype(np.float64) / 255.0,
        targets=one_hot(labels, 10),
        labels=labels,
        name="mnist",
    )


def load_cifar10_bin(paths: Sequence) -> Dataset:
    """Load one or more CIFAR-10 binary batch files, concatenated in order."""
    all_pixels = []
    all_labels = []
    for path in paths:
        raw = Path(path).read_bytes()
        if len(raw) == 0 or len(raw) % CIFAR_RECORD_BYTES != 0:
            raise DataFormatError(
                f"{path}: length {len(raw)} is not a positive multiple of {CIFAR_RECORD_BYTES}"
            )
        records = np.frombuffer(raw, dtype=np.uint8).reshape(-1, CIFAR_RECORD_BYTES)
        labels = records[:, 0]
        if labels.max(initial=0) > 9:
            bad = int(np.argmax(labels > 9))
            raise DataFormatError(
                f"{path}: label {labels[bad]} out of range 0-9 at record {bad} "
                f"(byte {bad * CIFAR_RECORD_BYTES})"
            )
        all_labels.append(labels.astype(np.int64))
        all_pixels.append(records[:, 1:])
    pixels = np.concatenate(all_pixels, axis=0)
    labels = np.concatenate(all_labels, axis=0)
    return Dataset(
        inputs=pixels.T.astype(np.float64) / 255.0,
        targets=one_hot(labels, 10),
        labels=labels,
        name="cifar10",
    )


def synthetic_binary(n_per_class: int, features: int, separation: float, seed: int) -> Dataset:
    """Two Gaussian clusters in [0, 1]^features at the given center distance.

    Cluster centers sit symmetrically around 0.5 along the all-ones
    direction, a Euclidean distance `separation` apart; draws are clipped
    into the unit box. separation = 0 makes the classes indistinguishable.
    """
    if n_per_class < 1:
        raise ValueError(f"n_per_class must be >= 1, got {n_per_class}")
    rng = SeededRng(seed)
    offset = separation / (2.0 * np.sqrt(features))
    blocks = []
    for center in (0.5 - offset, 0.5 + offset):
        noise = rng.normal(features, n_per_class, 0.0, CLUSTER_STD)
        blocks.append(np.clip(center + noise, 0.0, 1.0))
    inputs = np.hstack(blocks)
    targets = np.concatenate([np.zeros(n_per_class), np.ones(n_per_class)])[None, :]
    return Dataset(inputs=inputs, targets=targets, labels=None, name="synthetic")


def _effective_labels(data: Dataset) -> np.ndarray:
    if data.labels is not None:
        return data.labels
    if data.targets.shape[0] == 1:
        return data.targets[0].astype(np.int64)
    return np.argmax(data.targets, axis=0)


def subsample(data: Dataset, n: int, seed: int) -> Dataset:
    """Stratified deterministic subset of n columns, without replacement.

    Classes get equal quotas (within +-1), capped by availability with the
    surplus redistributed; chosen columns keep their original order, so
    n == N returns the dataset unchanged.
    """
    if n > data.n_samples:
        raise ValueError(f"cannot take {n} of {data.n_samples} samples")
    labels = _effective_labels(data)
    classes = np.unique(labels)
    counts = {int(c): int((labels == c).sum()) for c in classes}
    quotas = {int(c): 0 for c in classes}
    remaining = n
    while remaining > 0:
        active = [c for c in quotas if quotas[c] < counts[c]]
        share = remaining // len(active)
        if share == 0:
            for c in active[:remaining]:
                quotas[c] += 1
            break
        for c in active:
            take = min(share, counts[c] - quotas[c])
            quotas[c] += take
            remaining -= take
    rng = SeededRng(seed)
    chosen = []
    for c in classes:
        idx = np.flatnonzero(labels == c)
        perm = rng.permutation(idx.shape[0])
        chosen.append(idx[perm[: quotas[int(c)]]])
    cols = np.sort(np.concatenate(chosen))
    return Dataset(
        inputs=data.inputs[:, cols],
        targets=data.targets[:, cols],
        labels=None if data.labels is None else data.labels[cols],
        name=data.name,
    )


def write_idx_images(path, images: np.ndarray):
    """Write a (n, rows, cols) uint8 array in IDX image layout."""
    images = np.ascontiguousarray(images, dtype=np.uint8)
    n, rows, cols = images.shape
    with open(path, "wb") as fh:
        fh.write(struct.pack(">IIII", IDX_IMAGE_MAGIC, n, rows, cols))
        fh.write(images.tobytes())


def write_idx_labels(path, labels: np.ndarray):
    """Write a (n,) uint8 label array in IDX label layout."""
    labels = np.ascontiguousarray(labels, dtype=np.uint8)
    with open(path, "wb") as fh:
        fh.write(struct.pack(">II", IDX_LABEL_MAGIC, labels.shape[0]))
        fh.write(labels.tobytes())
