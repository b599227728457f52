"""Estimator-style wrappers around the functional API.

These follow the common fit/predict conventions: samples are rows of the
input to fit, hyperparameters are constructor arguments mirrored by
get_params/set_params, and fitted state lives in trailing-underscore
attributes. Internally points are columns, so fit transposes.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClusterMixin

from .driver import run, run_ssc_baseline
from .model import HyperParams


class ProbabilisticSubspaceClustering(ClusterMixin, BaseEstimator):
    """Sparse subspace clustering with delayed association.

    Parameters mirror HyperParams plus the cluster count and the
    normalization toggle.

    Attributes (after fit)
    ----------------------
    labels_ : ndarray of int, shape (n_samples,)
    probabilities_ : ndarray, shape (n_samples, n_clusters)
    certain_mask_ : ndarray of bool, shape (n_samples,)
    n_iter_ : int
    stop_reason_ : str
    result_ : ClusteringResult
    """

    def __init__(self, n_clusters=2, alpha=40.0, lambda_ratio=0.125, t_max=10,
                 solver_tol=1e-6, solver_max_sweeps=1000, kmeans_restarts=20,
                 seed=0, spectral_mode="incremental", normalize=True):
        self.n_clusters = n_clusters
        self.alpha = alpha
        self.lambda_ratio = lambda_ratio
        self.t_max = t_max
        self.solver_tol = solver_tol
        self.solver_max_sweeps = solver_max_sweeps
        self.kmeans_restarts = kmeans_restarts
        self.seed = seed
        self.spectral_mode = spectral_mode
        self.normalize = normalize

    def _hyper_params(self):
        return HyperParams(
            alpha=self.alpha,
            lambda_ratio=self.lambda_ratio,
            t_max=self.t_max,
            solver_tol=self.solver_tol,
            solver_max_sweeps=self.solver_max_sweeps,
            kmeans_restarts=self.kmeans_restarts,
            seed=self.seed,
            spectral_mode=self.spectral_mode,
        )

    def _run(self, X):
        return run(np.asarray(X).T, self.n_clusters, self._hyper_params(),
                   normalize=self.normalize)

    def fit(self, X, y=None):
        """Cluster the rows of X (shape (n_samples, n_features))."""
        res = self._run(X)
        self.result_ = res
        self.labels_ = res.labels
        self.probabilities_ = res.probabilities
        self.certain_mask_ = res.certain_mask
        self.n_iter_ = res.iterations
        self.stop_reason_ = res.stop_reason
        return self

    def fit_predict(self, X, y=None):
        return self.fit(X).labels_


class SparseSubspaceClustering(ProbabilisticSubspaceClustering):
    """Single-pass baseline: one unweighted solve, one spectral
    clustering. Equivalent to the full loop with t_max = 1."""

    def _run(self, X):
        return run_ssc_baseline(np.asarray(X).T, self.n_clusters,
                                self._hyper_params(), normalize=self.normalize)
