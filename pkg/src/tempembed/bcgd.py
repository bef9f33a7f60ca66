"""Temporal non-negative matrix factorization baseline (BCGD-style).

Minimizes, over non-negative ``phi_1..phi_T``::

    sum_t ||A_t - phi_t phi_t^T||_F^2 + lam * sum_{t>=2} sum_u (1 - phi_t(u) . phi_{t-1}(u))

one snapshot block at a time with projected gradient steps.  This is a
reimplementation of the objective, not of the original incremental solver.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
import scipy.sparse as sp

from .graph import DENSE_GUARD, Snapshot, TemporalGraph

MAX_HALVINGS = 40


@dataclass(frozen=True)
class BcgdConfig:
    lam: float = 0.1
    iterations: int = 500
    learning_rate: float = 1e-2
    d: int = 64
    seed: int = 0

    def __post_init__(self):
        if self.lam < 0:
            raise ValueError("lambda must be non-negative")
        if self.d < 1:
            raise ValueError("d must be >= 1")
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")
        if not self.learning_rate > 0:
            raise ValueError("learning_rate must be positive")


def _snapshots(graph) -> list[Snapshot]:
    if isinstance(graph, TemporalGraph):
        return list(graph.snapshots)
    return list(graph)


def _proximity(a: sp.csr_matrix, a_sq: float, phi: np.ndarray) -> float:
    # ||A - P P^T||^2 = ||A||^2 - 2 tr(P^T A P) + ||P^T P||^2
    g = phi.T @ phi
    return a_sq - 2.0 * float(np.sum(phi * (a @ phi))) + float(np.sum(g * g))


def bcgd_objective(graph, phis: Sequence[np.ndarray], lam: float) -> float:
    snaps = _snapshots(graph)
    if len(phis) != len(snaps):
        raise ValueError(f"{len(phis)} embeddings for {len(snaps)} snapshots")
    total = 0.0
    for s, phi in zip(snaps, phis):
        phi = np.asarray(phi, dtype=float)
        if phi.ndim != 2 or phi.shape[0] != s.vertex_count:
            raise ValueError("embedding shape does not match the snapshot")
        if np.any(phi < 0):
            raise ValueError("BCGD embeddings must be non-negative")
        total += _proximity(s.adjacency(), float(s.edge_count * 2), phi)
    for prev, cur in zip(phis[:-1], phis[1:]):
        total += lam * float(np.sum(1.0 - np.sum(np.asarray(cur) * np.asarray(prev), axis=1)))
    return total


def fit_bcgd(graph, cfg: BcgdConfig = BcgdConfig(),
             callback: Callable[[int, list[np.ndarray]], None] | None = None) -> list[np.ndarray]:
    """Projected block gradient descent, blocks visited in snapshot order.

    Each block step starts from the block's last accepted step size and is
    halved until the block objective does not increase, so the total
    objective is non-increasing across passes.
    """
    snaps = _snapshots(graph)
    n = snaps[0].vertex_count
    if n > DENSE_GUARD:
        raise MemoryError(f"{n} vertices exceeds the adjacency guard ({DENSE_GUARD})")
    T, d, lam = len(snaps), cfg.d, cfg.lam
    rng = np.random.default_rng(cfg.seed)
    phis = [rng.uniform(0.0, 1.0 / np.sqrt(d), size=(n, d)) for _ in range(T)]
    adj = [s.adjacency() for s in snaps]
    a_sq = [float(2 * s.edge_count) for s in snaps]
    steps = [cfg.learning_rate] * T

    def block_value(t, phi, pull):
        return _proximity(adj[t], a_sq[t], phi) - lam * float(np.sum(phi * pull))

    for it in range(cfg.iterations):
        for t in range(T):
            pull = np.zeros((n, d))
            if t > 0:
                pull += phis[t - 1]
            if t < T - 1:
                pull += phis[t + 1]
            phi = phis[t]
            grad = -4.0 * (adj[t] @ phi - phi @ (phi.T @ phi)) - lam * pull
            current = block_value(t, phi, pull)
            step = steps[t]
            for _ in range(MAX_HALVINGS):
                cand = np.maximum(phi - step * grad, 0.0)
                if block_value(t, cand, pull) <= current:
                    phis[t] = cand
                    break
                step *= 0.5
            steps[t] = step
        if callback is not None:
            callback(it, phis)
    return phis
