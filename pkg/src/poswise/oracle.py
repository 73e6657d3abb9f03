"""Independent ground truth: closed-form linear regression and a numerical
gradient checker.

Nothing here imports the network or optimizer code, so agreement between the
two sides is evidence, not tautology. The linear model is the textbook
least-squares setup (no intercept); the checker is plain central differences.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

# Central-difference step for 64-bit floats: small enough that truncation is
# negligible, large enough that round-off does not dominate.
FD_EPS = 1e-5


@dataclass
class LinearModel:
    theta: np.ndarray  # 1-D, one coefficient per feature

    def __post_init__(self):
        self.theta = np.asarray(self.theta, dtype=np.float64)
        if self.theta.ndim != 1:
            raise ValueError(f"theta must be 1-D, got shape {self.theta.shape}")


def linreg_predict(model: LinearModel, x: np.ndarray) -> float:
    """Dot product of coefficients and one feature vector."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape != model.theta.shape:
        raise ValueError(f"feature length {x.shape} != theta length {model.theta.shape}")
    return float(np.dot(model.theta, x))


def linreg_gradient(model: LinearModel, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    """Half-MSE gradient: g_j = -(1/N) sum_i (y_i - f(x_i)) x_ij."""
    xs = np.asarray(xs, dtype=np.float64)
    ys = np.asarray(ys, dtype=np.float64)
    if xs.ndim != 2 or ys.ndim != 1 or xs.shape[0] != ys.shape[0]:
        raise ValueError(f"inconsistent sample dims: xs {xs.shape}, ys {ys.shape}")
    if xs.shape[1] != model.theta.shape[0]:
        raise ValueError(f"feature count {xs.shape[1]} != theta length {model.theta.shape[0]}")
    n = xs.shape[0]
    residual = ys - xs @ model.theta
    return -(xs.T @ residual) / n


def linreg_step(model: LinearModel, xs: np.ndarray, ys: np.ndarray, eta: float) -> LinearModel:
    """One descent step against the half-MSE gradient."""
    if not np.isfinite(eta):
        raise ValueError(f"eta must be finite, got {eta}")
    return LinearModel(model.theta - eta * linreg_gradient(model, xs, ys))


def half_mse(model: LinearModel, xs: np.ndarray, ys: np.ndarray) -> float:
    """(1/2N) sum of squared residuals; the objective linreg_gradient derives from."""
    xs = np.asarray(xs, dtype=np.float64)
    ys = np.asarray(ys, dtype=np.float64)
    residual = ys - xs @ model.theta
    return float(residual @ residual) / (2 * xs.shape[0])


def finite_diff_grad(f: Callable[[np.ndarray], float], at: np.ndarray, eps: float = FD_EPS) -> np.ndarray:
    """Central differences of a scalar function, entry by entry.

    `f` must treat its argument as read-only; it is handed fresh perturbed
    copies of `at`.
    """
    if eps <= 0:
        raise ValueError(f"eps must be positive, got {eps}")
    at = np.asarray(at, dtype=np.float64)
    grad = np.zeros_like(at)
    work = at.copy()
    for i in range(at.size):
        base = work.flat[i]
        work.flat[i] = base + eps
        f_plus = f(work)
        work.flat[i] = base - eps
        f_minus = f(work)
        work.flat[i] = base
        if not (np.isfinite(f_plus) and np.isfinite(f_minus)):
            raise ValueError(f"non-finite objective at perturbed entry {i}")
        grad.flat[i] = (f_plus - f_minus) / (2 * eps)
    return grad


def relative_error(a: np.ndarray, b: np.ndarray, floor: float = 1e-8) -> float:
    """Max over entries of |a-b| / max(|a|, |b|, floor)."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    denom = np.maximum(np.maximum(np.abs(a), np.abs(b)), floor)
    return float(np.max(np.abs(a - b) / denom))
