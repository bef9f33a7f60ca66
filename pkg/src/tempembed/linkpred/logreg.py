"""L2-regularized logistic regression trained by full-batch gradient descent."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import expit, log_expit


@dataclass(frozen=True)
class LogRegModel:
    weights: np.ndarray
    bias: float
    l2_strength: float


def loss(weights: np.ndarray, bias: float, x: np.ndarray, y: np.ndarray, l2: float) -> float:
    """Mean cross-entropy plus ``(l2 / 2) ||weights||^2``; the bias is not penalized."""
    z = x @ weights + bias
    ce = -np.mean(y * log_expit(z) + (1.0 - y) * log_expit(-z))
    return float(ce + 0.5 * l2 * weights @ weights)


def grad(weights: np.ndarray, bias: float, x: np.ndarray, y: np.ndarray,
         l2: float) -> tuple[np.ndarray, float]:
    r = expit(x @ weights + bias) - y
    return x.T @ r / len(y) + l2 * weights, float(r.mean())


def logreg_fit(features, labels, l2: float = 1.0, max_iter: int = 20_000,
               tol: float = 1e-6, history: list | None = None) -> LogRegModel:
    """Gradient descent with the fixed step ``1 / L`` (``L`` the smoothness bound).

    Stops when the gradient max-norm drops below ``tol`` or after
    ``max_iter`` steps.
    """
    x = np.asarray(features, dtype=float)
    y = np.asarray(labels, dtype=float).ravel()
    if x.ndim != 2 or len(x) != len(y):
        raise ValueError("features must be (n, d) aligned with labels")
    if not np.isin(y, (0.0, 1.0)).all():
        raise ValueError("labels must be 0/1")
    if y.min() == y.max():
        raise ValueError("logistic regression needs both classes")
    if l2 < 0:
        raise ValueError("l2 must be non-negative")
    n, d = x.shape
    aug = np.hstack([x, np.ones((n, 1))])
    lip = np.linalg.norm(aug, 2) ** 2 / (4.0 * n) + l2
    step = 1.0 / lip
    w, b = np.zeros(d), 0.0
    for _ in range(max_iter):
        gw, gb = grad(w, b, x, y, l2)
        if history is not None:
            history.append(loss(w, b, x, y, l2))
        if max(np.max(np.abs(gw), initial=0.0), abs(gb)) < tol:
            break
        w = w - step * gw
        b = b - step * gb
    return LogRegModel(w, b, l2)


def logreg_score(model: LogRegModel, features) -> np.ndarray:
    x = np.asarray(features, dtype=float)
    if x.ndim != 2 or x.shape[1] != len(model.weights):
        raise ValueError(f"expected {len(model.weights)} features, got shape {x.shape}")
    return expit(x @ model.weights + model.bias)
