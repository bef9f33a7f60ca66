"""Linear transformation models: global temporal smoothness.

A ``d x d`` map ``W`` is fit so that ``phi_t @ W`` approximates
``phi_{t+1}`` (row-vector convention).  The homogeneous model shares one map
across all consecutive pairs; the heterogeneous model fits one map per pair
and blends them with a smoothing rule.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

SMOOTHING_KINDS = ("avg", "linear", "exp", "wct")


@dataclass(frozen=True)
class GdConfig:
    iterations: int = 10_000
    learning_rate: float = 1e-3
    clip_ratio: float = 5.0
    seed: int = 0

    def __post_init__(self):
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")
        if not self.learning_rate > 0:
            raise ValueError("learning_rate must be positive")
        if not self.clip_ratio > 0:
            raise ValueError("clip_ratio must be positive")


@dataclass(frozen=True)
class SmoothingSpec:
    kind: str = "avg"
    theta: float = 0.3
    normalize: bool = False

    def __post_init__(self):
        if self.kind not in SMOOTHING_KINDS:
            raise ValueError(f"smoothing kind must be one of {SMOOTHING_KINDS}")
        if not 0 <= self.theta < 1:
            raise ValueError("theta must lie in [0, 1)")


def _as_list(phis: Sequence[np.ndarray]) -> list[np.ndarray]:
    phis = [np.asarray(p, dtype=float) for p in phis]
    if len(phis) < 2:
        raise ValueError("need at least two embedding matrices")
    shape = phis[0].shape
    if len(shape) != 2 or any(p.shape != shape for p in phis):
        raise ValueError("all embedding matrices must share one 2-D shape")
    return phis


def stack_pairs(phis: Sequence[np.ndarray]) -> tuple[np.ndarray, np.ndarray]:
    """Source ``X`` = phi_1..phi_{T-1} and target ``Z`` = phi_2..phi_T, stacked row-wise."""
    phis = _as_list(phis)
    return np.vstack(phis[:-1]), np.vstack(phis[1:])


def objective(x: np.ndarray, z: np.ndarray, w: np.ndarray) -> float:
    r = x @ w - z
    return float(np.sum(r * r))


def gradient(x: np.ndarray, z: np.ndarray, w: np.ndarray) -> np.ndarray:
    return 2.0 * x.T @ (x @ w - z)


def clip_by_global_norm(g: np.ndarray, clip: float) -> np.ndarray:
    norm = float(np.linalg.norm(g))
    if norm > clip:
        return g * (clip / norm)
    return g


def least_squares_gd(x: np.ndarray, z: np.ndarray, cfg: GdConfig,
                     history: list | None = None) -> np.ndarray:
    """Minimize ``||X W - Z||_F^2`` from ``W = I`` by clipped full-batch GD.

    The gradient ``2 X^T (X W - Z)`` is evaluated through the ``d x d`` Gram
    matrices, so each step costs ``O(d^3)`` regardless of row count.
    """
    d = x.shape[1]
    gram, cross = x.T @ x, x.T @ z
    zz = float(np.sum(z * z))
    w = np.eye(d)
    for _ in range(cfg.iterations):
        g = 2.0 * (gram @ w - cross)
        if history is not None:
            history.append(float(np.sum(w * (gram @ w)) - 2.0 * np.sum(w * cross) + zz))
        w = w - cfg.learning_rate * clip_by_global_norm(g, cfg.clip_ratio)
    return w


def fit_homogeneous(phis: Sequence[np.ndarray], cfg: GdConfig = GdConfig()) -> np.ndarray:
    x, z = stack_pairs(phis)
    return least_squares_gd(x, z, cfg)


def fit_pairwise(phi_t: np.ndarray, phi_next: np.ndarray, cfg: GdConfig = GdConfig()) -> np.ndarray:
    return fit_homogeneous([phi_t, phi_next], cfg)


def combine_weights(count: int, smoothing: SmoothingSpec) -> np.ndarray:
    """Blend weights for ``W_1..W_count`` (``count = T - 1``)."""
    if count < 1:
        raise ValueError("need at least one transform to combine")
    t = np.arange(1, count + 1, dtype=float)
    if smoothing.kind == "avg":
        w = np.full(count, 1.0 / count)
    elif smoothing.kind == "linear":
        w = t / count
    elif smoothing.kind == "exp":
        w = np.exp(t / count)
    else:
        w = (1.0 - smoothing.theta) ** (count - t)
    if smoothing.normalize:
        w = w / w.sum()
    return w


def combine(ws: Sequence[np.ndarray], smoothing: SmoothingSpec) -> np.ndarray:
    if not ws:
        raise ValueError("need at least one transform to combine")
    ws = [np.asarray(w, dtype=float) for w in ws]
    if any(w.shape != ws[0].shape for w in ws) or ws[0].shape[0] != ws[0].shape[1]:
        raise ValueError("transforms must be square with equal dimension")
    weights = combine_weights(len(ws), smoothing)
    out = np.zeros_like(ws[0])
    for a, w in zip(weights, ws):
        out += a * w
    return out


def fit_pairwise_all(phis: Sequence[np.ndarray], cfg: GdConfig = GdConfig()) -> list[np.ndarray]:
    phis = _as_list(phis)
    return [fit_pairwise(a, b, cfg) for a, b in zip(phis[:-1], phis[1:])]


def fit_heterogeneous(phis: Sequence[np.ndarray], cfg: GdConfig = GdConfig(),
                      smoothing: SmoothingSpec = SmoothingSpec()) -> np.ndarray:
    return combine(fit_pairwise_all(phis, cfg), smoothing)


def project(phi: np.ndarray, w: np.ndarray) -> np.ndarray:
    phi, w = np.asarray(phi, dtype=float), np.asarray(w, dtype=float)
    if phi.ndim != 2 or w.shape != (phi.shape[1], phi.shape[1]):
        raise ValueError(f"cannot apply a {w.shape} map to {phi.shape} embeddings")
    return phi @ w

