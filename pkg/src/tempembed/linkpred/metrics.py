"""Ranking metrics for binary link labels."""

from __future__ import annotations

import numpy as np
from scipy.stats import rankdata


def _prep(scores, labels):
    scores = np.asarray(scores, dtype=float).ravel()
    labels = np.asarray(labels).ravel()
    if scores.shape != labels.shape:
        raise ValueError("scores and labels differ in length")
    if not np.isin(labels, (0, 1)).all():
        raise ValueError("labels must be 0/1")
    return scores, labels.astype(bool)


def auc(scores, labels) -> float:
    """ROC AUC via the Mann-Whitney rank statistic (ties count one half)."""
    scores, pos = _prep(scores, labels)
    n_pos, n_neg = int(pos.sum()), int((~pos).sum())
    if n_pos == 0 or n_neg == 0:
        raise ValueError("AUC needs both positive and negative labels")
    ranks = rankdata(scores)
    # exact in binary: rank sums are half-integers and the counts are small integers
    u = ranks[pos].sum() - n_pos * (n_pos + 1) / 2.0
    return float(u / (n_pos * n_neg))


def _ranked(scores, labels):
    scores, pos = _prep(scores, labels)
    if not pos.any():
        raise ValueError("metric needs at least one positive label")
    order = np.argsort(-scores, kind="stable")
    return pos[order]


def auprc(scores, labels) -> float:
    """Average precision: mean of precision@k over the ranks k of positives."""
    hits = _ranked(scores, labels)
    k = np.flatnonzero(hits) + 1
    return float(np.mean(np.arange(1, len(k) + 1) / k))


def ndcg_at_p(scores, labels, p: int = 50) -> float:
    if p < 1:
        raise ValueError("p must be >= 1")
    hits = _ranked(scores, labels)
    top = hits[:p]
    discount = 1.0 / np.log2(np.arange(2, len(top) + 2))
    dcg = float(discount[top].sum())
    ideal = float(discount[:min(p, int(hits.sum()))].sum())
    return dcg / ideal
