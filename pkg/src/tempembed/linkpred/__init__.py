"""Temporal link-prediction evaluation: splits, features, classifier, metrics."""

from .logreg import LogRegModel, logreg_fit, logreg_score
from .metrics import auc, auprc, ndcg_at_p
from .protocol import (EvalConfig, EvalSplit, MetricsReport, ModelHyper, compare_reports,
                       evaluate, hadamard_features, make_split, repeat_seed)

__all__ = [
    "LogRegModel", "logreg_fit", "logreg_score", "auc", "auprc", "ndcg_at_p",
    "EvalConfig", "EvalSplit", "MetricsReport", "ModelHyper", "compare_reports",
    "evaluate", "hadamard_features", "make_split", "repeat_seed",
]
