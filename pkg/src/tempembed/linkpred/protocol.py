"""Temporal link-prediction protocol.

The last snapshot is held out as the prediction target.  Embeddings only see
the earlier snapshots; the target's edges are split 50/30/20 into
train/test/validation, each matched with as many sampled non-edges.  Pair
features are Hadamard products, the classifier is logistic regression, and
hyperparameters are chosen by validation AUC.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy import stats

from .. import bcgd, embed, retrofit, transform
from ..graph import TemporalGraph
from .logreg import logreg_fit, logreg_score
from .metrics import auc, auprc, ndcg_at_p

MODEL_KINDS = ("RET", "HomoLT", "HeterLT", "BCGD", "StaticBaseline")
METRICS = ("auc", "auprc", "ndcg")


@dataclass(frozen=True)
class EvalConfig:
    train_frac: float = 0.5
    test_frac: float = 0.3
    validation_frac: float = 0.2
    repeats: int = 10
    ndcg_p: int = 50
    seed: int = 0
    l2: float = 1.0
    exclude_historical_negatives: bool = False

    def __post_init__(self):
        fracs = (self.train_frac, self.test_frac, self.validation_frac)
        if min(fracs) < 0 or abs(sum(fracs) - 1.0) > 1e-9:
            raise ValueError("split fractions must be non-negative and sum to 1")
        if self.repeats < 1:
            raise ValueError("repeats must be >= 1")
        if self.ndcg_p < 1:
            raise ValueError("ndcg_p must be >= 1")


@dataclass(frozen=True)
class Partition:
    pairs: np.ndarray
    labels: np.ndarray


@dataclass(frozen=True)
class EvalSplit:
    train: Partition
    test: Partition
    validation: Partition

    def __iter__(self):
        return iter((self.train, self.test, self.validation))


def repeat_seed(master: int, repeat: int) -> int:
    """Seed for repeat ``repeat``: first word of ``SeedSequence([master, repeat])``."""
    return int(np.random.SeedSequence([master, repeat]).generate_state(1)[0])


def _portion(frac: float, n: int) -> int:
    return int(math.floor(frac * n + 1e-9))


def _sample_non_edges(n: int, count: int, excluded: np.ndarray,
                      rng: np.random.Generator) -> np.ndarray:
    """``count`` distinct keys ``u * n + v`` (``u < v``) not in ``excluded``."""
    total = n * (n - 1) // 2
    available = total - len(excluded)
    if available < count:
        raise ValueError(f"only {available} non-edges available, need {count}")
    if available < 2 * count or total <= 200_000:
        iu, ju = np.triu_indices(n, k=1)
        pool = np.setdiff1d(iu * n + ju, excluded, assume_unique=True)
        return rng.choice(pool, size=count, replace=False)
    chosen: list[int] = []
    seen = set(excluded.tolist())
    while len(chosen) < count:
        u = rng.integers(n, size=2 * count)
        v = rng.integers(n, size=2 * count)
        for a, b in zip(u.tolist(), v.tolist()):
            if a == b:
                continue
            key = min(a, b) * n + max(a, b)
            if key not in seen:
                seen.add(key)
                chosen.append(key)
                if len(chosen) == count:
                    break
    return np.asarray(chosen, dtype=np.int64)


def make_split(graph: TemporalGraph, target_snapshot_index: int, cfg: EvalConfig,
               repeat_seed: int) -> EvalSplit:
    snap = graph.snapshots[target_snapshot_index]
    m, n = snap.edge_count, graph.vertex_count
    if m == 0:
        raise ValueError("target snapshot has no edges")
    rng = np.random.default_rng(repeat_seed)
    pos = np.stack([snap.src, snap.dst], axis=1)[rng.permutation(m)]
    excluded = snap.src * n + snap.dst
    if cfg.exclude_historical_negatives:
        past = [s.src * n + s.dst for s in graph.snapshots[:target_snapshot_index]]
        excluded = np.unique(np.concatenate([excluded, *past]))
    keys = _sample_non_edges(n, m, excluded, rng)
    neg = np.stack([keys // n, keys % n], axis=1)

    n_train = _portion(cfg.train_frac, m)
    n_test = _portion(cfg.test_frac, m)
    bounds = [(0, n_train), (n_train, n_train + n_test), (n_train + n_test, m)]
    parts = []
    for lo, hi in bounds:
        pairs = np.concatenate([pos[lo:hi], neg[lo:hi]])
        labels = np.concatenate([np.ones(hi - lo, dtype=np.int64), np.zeros(hi - lo, dtype=np.int64)])
        order = rng.permutation(len(labels))
        parts.append(Partition(pairs[order], labels[order]))
    return EvalSplit(*parts)


def hadamard_features(phi: np.ndarray, pairs) -> np.ndarray:
    phi = np.asarray(phi, dtype=float)
    pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
    if len(pairs) and (pairs.min() < 0 or pairs.max() >= len(phi)):
        raise IndexError("pair index out of range")
    return phi[pairs[:, 0]] * phi[pairs[:, 1]]


@dataclass(frozen=True)
class ModelHyper:
    """Model settings and the validation grids searched per repeat."""

    alphas: tuple[float, ...] = (0.1, 1.0, 10.0)
    retrofit_sweeps: int = 20
    smoothing: str = "wct"
    thetas: tuple[float, ...] = (0.1, 0.3, 0.5, 0.7, 0.9)
    lambdas: tuple[float, ...] = (0.01, 0.1, 1.0)
    bcgd_iterations: int = 500
    bcgd_learning_rate: float = 1e-2
    gd: transform.GdConfig = transform.GdConfig()
    embedder_config: object = None


@dataclass
class MetricsReport:
    model: str
    embedder: str
    dim: int
    per_repeat: list[dict] = field(default_factory=list)

    def values(self, metric: str) -> np.ndarray:
        return np.array([r[metric] for r in self.per_repeat])

    def mean(self, metric: str) -> float:
        return float(self.values(metric).mean())

    def sd(self, metric: str) -> float:
        v = self.values(metric)
        return float(v.std(ddof=1)) if len(v) > 1 else 0.0

    def summary(self) -> dict:
        return {m: (self.mean(m), self.sd(m)) for m in METRICS}


def candidate_embeddings(graph: TemporalGraph, model_kind: str, base_embedder: str, d: int,
                         seed: int, hyper: ModelHyper) -> dict[str, np.ndarray]:
    """Feature embeddings for the target snapshot, one per hyperparameter setting.

    Only snapshots ``0..T-2`` are touched; snapshot ``T-1`` is the target.
    """
    if graph.T < 3:
        raise ValueError("evaluation needs at least 3 snapshots")
    train = graph.snapshots[:-1]
    cfg = hyper.embedder_config

    if model_kind == "StaticBaseline":
        return {"-": embed.embed_snapshot(train[-1], base_embedder, d, seed + len(train) - 1, cfg)}
    if model_kind == "RET":
        phi_1 = embed.embed_snapshot(train[0], base_embedder, d, seed, cfg)
        out = {}
        for a in hyper.alphas:
            rc = retrofit.RetrofitConfig(alpha=a, max_sweeps=hyper.retrofit_sweeps)
            out[f"alpha={a:g}"] = retrofit.retrofit_sequence(phi_1, train[1:], rc)[-1]
        return out
    if model_kind == "HomoLT":
        phis = embed.embed_sequence(graph, base_embedder, d, seed, cfg, stop=len(train))
        w = transform.fit_homogeneous(phis, hyper.gd)
        return {"-": transform.project(phis[-1], w)}
    if model_kind == "HeterLT":
        phis = embed.embed_sequence(graph, base_embedder, d, seed, cfg, stop=len(train))
        ws = transform.fit_pairwise_all(phis, hyper.gd)
        thetas = hyper.thetas if hyper.smoothing == "wct" else (0.3,)
        out = {}
        for th in thetas:
            w = transform.combine(ws, transform.SmoothingSpec(hyper.smoothing, th))
            key = f"{hyper.smoothing},theta={th:g}" if hyper.smoothing == "wct" else hyper.smoothing
            out[key] = transform.project(phis[-1], w)
        return out
    if model_kind == "BCGD":
        out = {}
        for lam in hyper.lambdas:
            bc = bcgd.BcgdConfig(lam=lam, iterations=hyper.bcgd_iterations,
                                 learning_rate=hyper.bcgd_learning_rate, d=d, seed=seed)
            out[f"lambda={lam:g}"] = bcgd.fit_bcgd(train, bc)[-1]
        return out
    raise ValueError(f"unknown model kind {model_kind!r}; choose from {MODEL_KINDS}")


def score_split(phi: np.ndarray, split: EvalSplit, cfg: EvalConfig):
    model = logreg_fit(hadamard_features(phi, split.train.pairs), split.train.labels, l2=cfg.l2)
    val = logreg_score(model, hadamard_features(phi, split.validation.pairs))
    test = logreg_score(model, hadamard_features(phi, split.test.pairs))
    return val, test


def evaluate(graph: TemporalGraph, model_kind: str, base_embedder: str, d: int,
             cfg: EvalConfig = EvalConfig(), hyper: ModelHyper = ModelHyper(),
             candidates: dict[str, np.ndarray] | None = None) -> MetricsReport:
    if candidates is None:
        candidates = candidate_embeddings(graph, model_kind, base_embedder, d, cfg.seed, hyper)
    base = "-" if model_kind == "BCGD" else base_embedder
    report = MetricsReport(model_kind, base, d)
    target = graph.T - 1
    for r in range(cfg.repeats):
        split = make_split(graph, target, cfg, repeat_seed(cfg.seed, r))
        best = None
        for name, phi in candidates.items():
            val, test = score_split(phi, split, cfg)
            v_auc = auc(val, split.validation.labels) if len(np.unique(split.validation.labels)) == 2 else 0.5
            if best is None or v_auc > best[0]:
                best = (v_auc, name, test)
        _, name, test = best
        y = split.test.labels
        report.per_repeat.append({
            "repeat": r,
            "selected": name,
            "auc": auc(test, y),
            "auprc": auprc(test, y),
            "ndcg": ndcg_at_p(test, y, cfg.ndcg_p),
        })
    return report


def compare_reports(a: MetricsReport, b: MetricsReport, metric: str = "auc") -> float:
    """Two-sample t-test p-value over per-repeat values (informational)."""
    va, vb = a.values(metric), b.values(metric)
    if len(va) < 2 or len(vb) < 2:
        return float("nan")
    if np.allclose(va, va[0]) and np.allclose(vb, vb[0]):
        return 0.0 if va[0] != vb[0] else 1.0
    return float(stats.ttest_ind(va, vb).pvalue)
