"""Dense float64 kernels and the seeded random stream everything else draws from.

All arrays are 2-D, row-major, 64-bit float. Every function here is pure:
callers' arrays are never mutated. Products go through BLAS dgemm, whose
per-entry accumulation order is fixed for a given build, so repeated calls
with identical inputs are bit-identical; no nondeterministic reductions are
used anywhere in the package.
"""

from __future__ import annotations

import numpy as np

_ELEMENTWISE_OPS = {
    "add": np.add,
    "sub": np.subtract,
    "mul": np.multiply,
}


class SeededRng:
    """Single deterministic draw stream.

    Sampling algorithm is pinned here once for the whole package: PCG64 bit
    generator, normals via numpy's ziggurat rejection sampler. Identical
    seed => identical draw sequence, across runs and platforms.
    """

    def __init__(self, seed: int):
        seed = int(seed)
        if not 0 <= seed < 2**64:
            raise ValueError(f"seed must fit in 64 unsigned bits, got {seed}")
        self.seed = seed
        self._gen = np.random.Generator(np.random.PCG64(seed))

    def normal(self, rows: int, cols: int, mu: float = 0.0, sigma: float = 1.0) -> np.ndarray:
        if sigma < 0:
            raise ValueError(f"sigma must be >= 0, got {sigma}")
        return self._gen.normal(mu, sigma, size=(rows, cols))

    def permutation(self, n: int) -> np.ndarray:
        return self._gen.permutation(n)


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Matrix product a @ b with the shape mismatch reported, not broadcast."""
    if a.ndim != 2 or b.ndim != 2 or a.shape[1] != b.shape[0]:
        raise ValueError(f"matmul: incompatible shapes {a.shape} x {b.shape}")
    return a @ b


def transpose(a: np.ndarray) -> np.ndarray:
    """Transposed copy (not a view, so results keep value semantics)."""
    return np.ascontiguousarray(a.T)


def elementwise(a: np.ndarray, b: np.ndarray, kind: str) -> np.ndarray:
    """Entrywise add/sub/mul of two same-shape matrices."""
    if kind not in _ELEMENTWISE_OPS:
        raise ValueError(f"unknown elementwise kind {kind!r}")
    if a.shape != b.shape:
        raise ValueError(f"elementwise {kind}: shape mismatch {a.shape} vs {b.shape}")
    return _ELEMENTWISE_OPS[kind](a, b)


def scale_and_axpy(w: np.ndarray, g: np.ndarray, eta: float) -> np.ndarray:
    """Return w - eta * g without touching w."""
    if w.shape != g.shape:
        raise ValueError(f"scale_and_axpy: shape mismatch {w.shape} vs {g.shape}")
    if not np.isfinite(eta):
        raise ValueError(f"eta must be finite, got {eta}")
    if eta == 0.0:
        # 0.0 * g can flip signed zeros; the zero step must be bit-exact.
        return w.copy()
    return w - eta * g


def broadcast_add_col(a: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Add the column vector v to every column of a."""
    if v.ndim != 2 or v.shape[1] != 1 or a.shape[0] != v.shape[0]:
        raise ValueError(f"broadcast_add_col: shape mismatch {a.shape} vs {v.shape}")
    return a + v


def draw_normal(rng: SeededRng, rows: int, cols: int, mu: float, sigma: float) -> np.ndarray:
    """rows x cols matrix of i.i.d. N(mu, sigma) draws, advancing rng."""
    return rng.normal(rows, cols, mu, sigma)
