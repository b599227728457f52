"""Clustering error with optimal label matching, and sparse recovery
error of the self-representation.

Predicted labels are only meaningful up to permutation, so the error is
computed after the agreement-maximizing matching between predicted and
true clusters (optimal assignment on the confusion matrix).
"""

from __future__ import annotations

import numpy as np
from scipy.optimize import linear_sum_assignment

from .model import DimensionError, ValidationError


def _check_labels(pred, truth, C):
    pred = np.asarray(pred, dtype=np.int64)
    truth = np.asarray(truth, dtype=np.int64)
    if pred.shape != truth.shape or pred.ndim != 1:
        raise DimensionError("pred and truth must be 1-d vectors of equal length")
    if pred.size == 0:
        raise ValidationError("label vectors are empty")
    for name, v in (("pred", pred), ("truth", truth)):
        if v.min() < 0 or v.max() >= C:
            raise ValidationError(f"{name} labels must lie in [0, {C})")
    return pred, truth


def confusion_matrix(pred, truth, C):
    """counts[k, l] = number of points with predicted label k and true
    label l; total equals N."""
    pred, truth = _check_labels(pred, truth, C)
    counts = np.zeros((C, C), dtype=np.int64)
    np.add.at(counts, (pred, truth), 1)
    return counts


def best_label_matching(pred, truth, C):
    """Permutation pi of [0, C) maximizing agreement.

    pi[k] is the true cluster matched to predicted cluster k; the score
    sum_k counts[k, pi[k]] is the number of points counted as correct.

    Returns
    -------
    pi : ndarray of int, shape (C,)
    agreement : int
    """
    counts = confusion_matrix(pred, truth, C)
    rows, cols = linear_sum_assignment(counts, maximize=True)
    pi = np.empty(C, dtype=np.int64)
    pi[rows] = cols
    return pi, int(counts[rows, cols].sum())


def misclassification(pred, truth, C):
    """Fraction of points outside the best matching, in [0, 1 - 1/C]."""
    pred, truth = _check_labels(pred, truth, C)
    _, agreement = best_label_matching(pred, truth, C)
    return (pred.size - agreement) / pred.size


def ssr_error(Z, truth, C):
    """Average out-of-subspace l1 mass of the representation columns.

    For point i with true cluster m, the recovery ratio is the l1 mass of
    column z_i restricted to points of cluster m over the column's total
    l1 mass; the error is 1 minus the average ratio. Zero columns
    contribute ratio 0 (full error for that point).
    """
    Z = np.asarray(Z, dtype=np.float64)
    truth = np.asarray(truth, dtype=np.int64)
    N = Z.shape[0]
    if Z.shape != (N, N) or truth.shape != (N,):
        raise DimensionError("Z must be NxN with one truth label per point")
    if truth.min() < 0 or truth.max() >= C:
        raise ValidationError(f"truth labels must lie in [0, {C})")
    absZ = np.abs(Z)
    total = absZ.sum(axis=0)
    member = np.zeros((N, C))
    member[np.arange(N), truth] = 1.0
    in_cluster = np.einsum("ji,jk->ik", absZ, member)[np.arange(N), truth]
    ratio = np.zeros(N)
    ok = total > 0
    ratio[ok] = in_cluster[ok] / total[ok]
    return float(1.0 - ratio.mean())
