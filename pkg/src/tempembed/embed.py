"""Static per-snapshot embedders.

An embedding is a plain ``(|V|, d)`` float array; row ``i`` belongs to vertex
``i``.  Vertices without edges in the snapshot get zero rows from every
embedder except ``random``.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable

import numpy as np
import scipy.sparse as sp

from . import _kernels
from .graph import Snapshot, TemporalGraph

NOISE_POWER = 0.75


def randomized_svd(a, k: int, seed: int, oversample: int = 10, n_iter: int = 7):
    """Rank-``k`` SVD by randomized subspace iteration (Halko et al. style).

    Returns ``(U, S, Vt)`` with singular values non-increasing and signs
    fixed so the largest-magnitude entry of each ``U`` column is positive.
    """
    m, n = a.shape
    if not 1 <= k <= min(m, n):
        raise ValueError(f"rank {k} outside [1, {min(m, n)}]")
    ell = min(k + oversample, m, n)
    rng = np.random.default_rng(seed)
    q, _ = np.linalg.qr(a @ rng.standard_normal((n, ell)))
    for _ in range(n_iter):
        q, _ = np.linalg.qr(a.T @ q)
        q, _ = np.linalg.qr(a @ q)
    b = np.asarray(a.T @ q).T
    ub, s, vt = np.linalg.svd(b, full_matrices=False)
    u = q @ ub[:, :k]
    s, vt = s[:k], vt[:k]
    pick = np.argmax(np.abs(u), axis=0)
    signs = np.sign(u[pick, np.arange(k)])
    signs[signs == 0] = 1.0
    return u * signs, s, vt * signs[:, None]


def _check_dim(snapshot: Snapshot, d: int) -> None:
    if d < 1:
        raise ValueError("dimension must be >= 1")
    if d > snapshot.vertex_count:
        raise ValueError(f"d={d} exceeds |V|={snapshot.vertex_count}")


def embed_tsvd(snapshot: Snapshot, d: int, seed: int = 0, weighted: bool = False) -> np.ndarray:
    """``U Σ^{1/2}`` from a rank-``d`` truncated SVD of the adjacency matrix."""
    _check_dim(snapshot, d)
    if snapshot.edge_count == 0:
        return np.zeros((snapshot.vertex_count, d))
    u, s, _ = randomized_svd(snapshot.adjacency(weighted), d, seed)
    return u * np.sqrt(s)


def _centered_active(snapshot: Snapshot, weighted: bool = False):
    # isolated vertices are left out of the sample, so they can sit at the origin
    # without disturbing the zero column means of the projection
    active = snapshot.degrees() > 0
    a = snapshot.adjacency_dense(weighted)[active]
    return active, a - a.mean(axis=0)


def embed_pca(snapshot: Snapshot, d: int, seed: int = 0, weighted: bool = False) -> np.ndarray:
    """Project centered adjacency rows onto the top-``d`` principal axes.

    The mean is taken over non-isolated vertices; isolated vertices get zero
    rows.  Components beyond the rank of the sample are zero.
    """
    _check_dim(snapshot, d)
    n = snapshot.vertex_count
    out = np.zeros((n, d))
    if snapshot.edge_count == 0:
        return out
    active, centered = _centered_active(snapshot, weighted)
    k = min(d, len(centered))
    u, s, _ = randomized_svd(centered, k, seed)
    out[active, :k] = u * s
    return out


def pca_explained_variance(snapshot: Snapshot, d: int, seed: int = 0) -> np.ndarray:
    """Variances of the top-``d`` principal components (sample covariance)."""
    _, centered = _centered_active(snapshot)
    _, s, _ = randomized_svd(centered, min(d, len(centered)), seed)
    return s ** 2 / (len(centered) - 1)


@dataclass(frozen=True)
class SkipgramConfig:
    negative_samples: int = 5
    walks_per_node: int = 10
    walk_length: int = 40
    window: int = 8
    p: float = 1.0
    q: float = 1.0
    epochs: int = 1
    learning_rate: float = 0.025
    seed: int = 0

    def __post_init__(self):
        if self.negative_samples < 1:
            raise ValueError("negative_samples must be >= 1")
        if self.window < 1:
            raise ValueError("window must be >= 1")
        if self.p <= 0 or self.q <= 0:
            raise ValueError("p and q must be positive")
        if self.walks_per_node < 1 or self.walk_length < 2 or self.epochs < 1:
            raise ValueError("walks_per_node, walk_length and epochs must be positive")
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")


@dataclass(frozen=True)
class LineConfig:
    order: str = "first"
    samples_per_edge: int = 200
    negative_samples: int = 5
    learning_rate: float = 0.025
    seed: int = 0

    def __post_init__(self):
        if self.order not in ("first", "second"):
            raise ValueError("order must be 'first' or 'second'")
        if self.negative_samples < 1:
            raise ValueError("negative_samples must be >= 1")
        if self.samples_per_edge < 1:
            raise ValueError("samples_per_edge must be >= 1")
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")


def noise_cdf(degrees: np.ndarray, power: float = NOISE_POWER) -> np.ndarray:
    w = np.asarray(degrees, dtype=float) ** power
    cdf = np.cumsum(w)
    return cdf / cdf[-1]


def _seed64(rng: np.random.Generator) -> int:
    return int(rng.integers(0, 2**63 - 1))


def generate_walks(snapshot: Snapshot, cfg: SkipgramConfig) -> np.ndarray:
    """``walks_per_node`` rounds of walks, one per non-isolated vertex per round."""
    rng = np.random.default_rng(cfg.seed)
    indptr, indices = snapshot.csr()
    active = np.flatnonzero(snapshot.degrees() > 0)
    starts = np.concatenate([rng.permutation(active) for _ in range(cfg.walks_per_node)])
    return _kernels.node2vec_walks(indptr, indices, starts.astype(np.int64),
                                   cfg.walk_length, float(cfg.p), float(cfg.q), _seed64(rng))


def embed_randwalk(snapshot: Snapshot, d: int, cfg: SkipgramConfig = SkipgramConfig()) -> np.ndarray:
    """DeepWalk (p = q = 1) / node2vec walks followed by skip-gram with negative sampling."""
    if d < 1:
        raise ValueError("dimension must be >= 1")
    if snapshot.edge_count == 0:
        raise ValueError("random-walk embedding needs at least one edge")
    n = snapshot.vertex_count
    walks = generate_walks(snapshot, cfg)
    rng = np.random.default_rng([cfg.seed, 1])
    emb_in = (rng.random((n, d)) - 0.5) / d
    emb_out = np.zeros((n, d))
    deg = snapshot.degrees()
    _kernels.sgns_train(walks, cfg.window, cfg.negative_samples, noise_cdf(deg),
                        emb_in, emb_out, cfg.learning_rate, cfg.epochs, _seed64(rng))
    emb_in[deg == 0] = 0.0
    return emb_in


def embed_line(snapshot: Snapshot, d: int, cfg: LineConfig = LineConfig()) -> np.ndarray:
    """LINE by edge-sampling SGD; first order shares vertex and context vectors."""
    if d < 1:
        raise ValueError("dimension must be >= 1")
    if snapshot.edge_count == 0:
        raise ValueError("LINE embedding needs at least one edge")
    n = snapshot.vertex_count
    src = np.concatenate([snapshot.src, snapshot.dst]).astype(np.int64)
    dst = np.concatenate([snapshot.dst, snapshot.src]).astype(np.int64)
    rng = np.random.default_rng(cfg.seed)
    emb = (rng.random((n, d)) - 0.5) / d
    ctx = emb if cfg.order == "first" else np.zeros((n, d))
    deg = snapshot.degrees()
    samples = cfg.samples_per_edge * snapshot.edge_count
    _kernels.line_train(src, dst, cfg.negative_samples, noise_cdf(deg), emb, ctx,
                        samples, cfg.learning_rate, _seed64(rng))
    emb[deg == 0] = 0.0
    return emb


def embed_random(snapshot: Snapshot, d: int, seed: int = 0) -> np.ndarray:
    """Structure-free Gaussian vectors (a control for the evaluation harness)."""
    return np.random.default_rng(seed).standard_normal((snapshot.vertex_count, d))


def sgns_pair_loss(h: np.ndarray, targets: np.ndarray, labels: np.ndarray) -> float:
    """Negative-sampling loss of one input vector against its target rows.

    ``-sum_k log σ(s_k · h·t_k)`` with ``s_k = +1`` for label 1 and ``-1``
    for label 0.  Shared by the skip-gram and LINE updates.
    """
    sign = np.where(np.asarray(labels) > 0, 1.0, -1.0)
    return float(np.sum(np.logaddexp(0.0, -sign * (targets @ h))))


def sgns_pair_grad(h: np.ndarray, targets: np.ndarray, labels: np.ndarray):
    """Gradient of :func:`sgns_pair_loss` w.r.t. ``h`` and each target row."""
    f = targets @ h
    coef = 1.0 / (1.0 + np.exp(-f)) - np.asarray(labels, dtype=float)
    return coef @ targets, coef[:, None] * h[None, :]


Embedder = Callable[[Snapshot, int, int], np.ndarray]


@dataclass(frozen=True)
class MatrixConfig:
    """Options for the factorization embedders."""

    weighted: bool = False


def _weighted(cfg) -> bool:
    return bool(cfg.weighted) if isinstance(cfg, MatrixConfig) else False


def _randwalk_factory(p: float, q: float) -> Callable[..., np.ndarray]:
    def run(snapshot, d, seed, cfg=None):
        cfg = replace(cfg or SkipgramConfig(p=p, q=q), seed=seed)
        return embed_randwalk(snapshot, d, cfg)
    return run


def _line(snapshot, d, seed, cfg=None):
    return embed_line(snapshot, d, replace(cfg or LineConfig(), seed=seed))


EMBEDDERS: dict[str, Callable[..., np.ndarray]] = {
    "tsvd": lambda s, d, seed, cfg=None: embed_tsvd(s, d, seed, _weighted(cfg)),
    "pca": lambda s, d, seed, cfg=None: embed_pca(s, d, seed, _weighted(cfg)),
    "deepwalk": _randwalk_factory(1.0, 1.0),
    "node2vec": _randwalk_factory(0.5, 0.5),
    "line": _line,
    "random": lambda s, d, seed, cfg=None: embed_random(s, d, seed),
}


def embed_snapshot(snapshot: Snapshot, method: str, d: int, seed: int, cfg=None) -> np.ndarray:
    try:
        fn = EMBEDDERS[method]
    except KeyError:
        raise ValueError(f"unknown embedder {method!r}; choose from {sorted(EMBEDDERS)}") from None
    return fn(snapshot, d, seed, cfg)


def embed_sequence(graph: TemporalGraph, method: str, d: int, seed: int = 0,
                   cfg=None, stop: int | None = None) -> list[np.ndarray]:
    """Embed snapshots ``0..stop-1`` independently; snapshot ``t`` uses ``seed + t``."""
    stop = graph.T if stop is None else stop
    return [embed_snapshot(graph.snapshots[t], method, d, seed + t, cfg) for t in range(stop)]
