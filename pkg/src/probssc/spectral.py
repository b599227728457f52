"""Spectral clustering on the self-representation similarity.

The similarity graph is W = Zbar = (|Z| + |Z^T|)/2. Clustering uses the
symmetric normalized Laplacian, the C smallest eigenvectors with row
normalization, and k-means on the embedded rows. The incremental variant
re-clusters only uncertain points and their graph neighbors, holding every
other point's label fixed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .model import DimensionError, EigenFailure, ValidationError

_LLOYD_MAX_ITER = 300


@dataclass(frozen=True)
class SpectralEmbedding:
    """Row-normalized spectral coordinates.

    coords : ndarray, shape (N, C)
        Row i is point i's embedding; rows that were identically zero
        before normalization are left as zeros and flagged.
    eigenvalues : ndarray, shape (C,)
        Ascending; the first is >= -1e-10 up to rounding.
    zero_rows : ndarray of bool, shape (N,)
    """

    coords: np.ndarray
    eigenvalues: np.ndarray
    zero_rows: np.ndarray


def normalized_laplacian(W):
    """Symmetric normalized Laplacian L = I - D^{-1/2} W D^{-1/2}.

    Isolated vertices (zero degree) get D^{-1/2} = 0, so they keep a unit
    diagonal entry and contribute a constant-free eigendirection.
    """
    W = np.asarray(W, dtype=np.float64)
    N = W.shape[0]
    if W.shape != (N, N):
        raise DimensionError(f"similarity must be square, got {W.shape}")
    if np.any(W < 0):
        raise ValidationError("similarity has negative entries")
    d = W.sum(axis=1)
    dinv = np.zeros(N)
    pos = d > 0
    dinv[pos] = 1.0 / np.sqrt(d[pos])
    L = np.eye(N) - (dinv[:, None] * W) * dinv[None, :]
    return 0.5 * (L + L.T)


def spectral_embed(L, C):
    """Embed into the C smallest eigenvectors of L, rows normalized to
    unit length.

    Raises
    ------
    EigenFailure
        If the eigensolver does not converge or returns a first eigenvalue
        below -1e-10 (L is PSD up to rounding).
    """
    L = np.asarray(L, dtype=np.float64)
    N = L.shape[0]
    if not 1 <= C <= N:
        raise ValidationError(f"need 1 <= C <= N, got C={C}, N={N}")
    try:
        vals, vecs = scipy.linalg.eigh(L, subset_by_index=(0, C - 1))
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgError) as exc:
        raise EigenFailure(f"eigendecomposition failed: {exc}") from exc
    if vals[0] < -1e-10:
        raise EigenFailure(f"Laplacian has eigenvalue {vals[0]:.3e} < -1e-10")
    norms = np.linalg.norm(vecs, axis=1)
    zero_rows = norms == 0.0
    coords = vecs.copy()
    keep = ~zero_rows
    coords[keep] /= norms[keep, None]
    return SpectralEmbedding(coords=coords, eigenvalues=vals, zero_rows=zero_rows)


def _plusplus_seed(Y, C, rng):
    """k-means++ initialization: D^2 sampling after a uniform first pick."""
    N = Y.shape[0]
    centers = np.empty((C, Y.shape[1]))
    first = int(rng.integers(N))
    centers[0] = Y[first]
    d2 = np.sum((Y - centers[0]) ** 2, axis=1)
    for k in range(1, C):
        total = d2.sum()
        if total <= 0.0:
            idx = int(rng.integers(N))
        else:
            r = rng.random() * total
            idx = int(np.searchsorted(np.cumsum(d2), r))
            idx = min(idx, N - 1)
        centers[k] = Y[idx]
        d2 = np.minimum(d2, np.sum((Y - centers[k]) ** 2, axis=1))
    return centers


def _lloyd(Y, centers):
    """Lloyd iterations with farthest-point reseeding of empty clusters.
    Returns (labels, wcss)."""
    C = centers.shape[0]
    labels = np.full(Y.shape[0], -1, dtype=np.int64)
    for _ in range(_LLOYD_MAX_ITER):
        d2 = ((Y[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
        new_labels = np.argmin(d2, axis=1)
        closest = d2[np.arange(Y.shape[0]), new_labels]
        for k in range(C):
            if not np.any(new_labels == k):
                far = int(np.argmax(closest))
                new_labels[far] = k
                centers[k] = Y[far]
                closest[far] = 0.0
        if np.array_equal(new_labels, labels):
            break
        labels = new_labels
        for k in range(C):
            centers[k] = Y[labels == k].mean(axis=0)
    d2 = ((Y[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
    wcss = float(d2[np.arange(Y.shape[0]), labels].sum())
    return labels, wcss


def kmeans(Y, C, restarts, seed):
    """k-means over embedding rows with k-means++ restarts.

    The best run by within-cluster sum of squares wins; strict comparison
    keeps the earliest restart on ties. Label ties go to the lowest
    cluster index.

    Parameters
    ----------
    Y : ndarray, shape (N, C), or SpectralEmbedding
    C : int
    restarts : int
    seed : np.random.SeedSequence
        One child stream is spawned per restart, so results are identical
        regardless of how many restarts other callers consumed.
    """
    if isinstance(Y, SpectralEmbedding):
        Y = Y.coords
    Y = np.asarray(Y, dtype=np.float64)
    N = Y.shape[0]
    if C < 1 or restarts < 1:
        raise ValidationError("C and restarts must be positive")
    if C > N:
        raise ValidationError(f"cannot split {N} points into {C} clusters")
    if C == 1:
        return np.zeros(N, dtype=np.int64)
    best_labels = None
    best_wcss = np.inf
    for child in seed.spawn(restarts):
        rng = np.random.Generator(np.random.PCG64(child))
        centers = _plusplus_seed(Y, C, rng)
        labels, wcss = _lloyd(Y, centers)
        if wcss < best_wcss:
            best_wcss = wcss
            best_labels = labels
    return best_labels


def cluster_full(Zbar, C, restarts, seed):
    """Spectral clustering of the whole graph. Returns (labels, embedding)."""
    L = normalized_laplacian(Zbar)
    emb = spectral_embed(L, C)
    labels = kmeans(emb.coords, C, restarts, seed)
    return labels, emb


def cluster_incremental(Zbar, C, prev_labels, uncertain_mask, restarts, seed):
    """Re-cluster only uncertain points and their similarity neighbors.

    The update set is U* = uncertain points plus every j with
    Zbar[i, j] != 0 for some uncertain i. Points outside U* keep their
    previous labels exactly. Free points are assigned by constrained Lloyd
    in the current embedding: centroids are anchored by the fixed points,
    free points move between clusters, and fixed memberships never change.
    This path is deterministic and consumes no randomness.

    Falls back to cluster_full (consuming `seed`) when some cluster has no
    fixed point to anchor it; the second return value reports this.

    Returns
    -------
    labels : ndarray of int, shape (N,)
    fell_back : bool
    """
    Zbar = np.asarray(Zbar, dtype=np.float64)
    N = Zbar.shape[0]
    prev_labels = np.asarray(prev_labels, dtype=np.int64)
    uncertain = np.asarray(uncertain_mask)
    if uncertain.dtype != bool:
        idx = uncertain.astype(np.int64)
        uncertain = np.zeros(N, dtype=bool)
        uncertain[idx] = True
    if prev_labels.shape != (N,) or uncertain.shape != (N,):
        raise DimensionError("labels and mask must have one entry per point")
    if not uncertain.any():
        return prev_labels.copy(), False
    update = uncertain | (Zbar[uncertain].any(axis=0))
    fixed = ~update
    anchored = np.array([np.any(prev_labels[fixed] == k) for k in range(C)])
    if not anchored.all():
        labels, _ = cluster_full(Zbar, C, restarts, seed)
        return labels, True
    emb = spectral_embed(normalized_laplacian(Zbar), C)
    Y = emb.coords
    labels = prev_labels.copy()
    free_idx = np.flatnonzero(update)
    for _ in range(_LLOYD_MAX_ITER):
        centers = np.stack([Y[labels == k].mean(axis=0) for k in range(C)])
        d2 = ((Y[free_idx, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
        new_free = np.argmin(d2, axis=1)
        if np.array_equal(new_free, labels[free_idx]):
            break
        labels[free_idx] = new_free
    return labels, False
