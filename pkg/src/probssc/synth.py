"""Synthetic unions of intersecting subspaces.

All C subspaces share one common s-dimensional basis; each adds d - s
private directions drawn at random and orthogonalized against the shared
block only, so distinct subspaces intersect in exactly the shared part
and rank([B_1 ... B_C]) = s + C(d - s) with probability 1. Points are
sampled uniformly on each subspace's unit sphere.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import DimensionError


@dataclass(frozen=True)
class SubspaceModel:
    """C subspaces of dimension d in ambient dimension n, pairwise
    intersecting in a shared s-dimensional subspace; n_points per
    subspace are drawn by sample_points."""

    C: int
    n: int
    d: int
    s: int
    n_points: int
    bases: tuple

    def __post_init__(self):
        if not (0 <= self.s < self.d <= self.n):
            raise DimensionError(
                f"need 0 <= s < d <= n, got s={self.s}, d={self.d}, n={self.n}"
            )
        if self.C < 2:
            raise DimensionError(f"need C >= 2, got {self.C}")
        if self.n_points < 1:
            raise DimensionError(f"need n_points >= 1, got {self.n_points}")
        if len(self.bases) != self.C:
            raise DimensionError("one basis per subspace required")
        for B in self.bases:
            if B.shape != (self.n, self.d):
                raise DimensionError(
                    f"basis shape {B.shape} does not match (n, d)=({self.n}, {self.d})"
                )


def _orthonormalize(G):
    """QR orthonormal factor with a deterministic sign convention
    (positive R diagonal)."""
    Q, R = np.linalg.qr(G)
    signs = np.sign(np.diag(R))
    signs[signs == 0] = 1.0
    return Q * signs[None, :]


def generate_subspaces(C, n, d, s, seed, n_points=100):
    """Draw a SubspaceModel.

    The first basis is the orthonormalized n x d standard Gaussian
    matrix. Every later basis reuses its first s columns as the shared
    intersection and appends d - s fresh Gaussian directions with their
    components along the shared block projected out before
    orthonormalization.

    Parameters
    ----------
    C, n, d, s : int
        Subspace count, ambient dimension, subspace dimension,
        intersection dimension; 0 <= s < d <= n and C >= 2.
    seed : int or np.random.SeedSequence
    n_points : int
        Points per subspace recorded on the model for sample_points.
    """
    if not (0 <= s < d <= n):
        raise DimensionError(f"need 0 <= s < d <= n, got s={s}, d={d}, n={n}")
    if C < 2:
        raise DimensionError(f"need C >= 2, got {C}")
    rng = np.random.default_rng(seed)
    B1 = _orthonormalize(rng.standard_normal((n, d)))
    shared = B1[:, :s]
    bases = [B1]
    for _ in range(1, C):
        G = rng.standard_normal((n, d - s))
        if s > 0:
            G = G - shared @ (shared.T @ G)
        private = _orthonormalize(G)
        bases.append(np.hstack([shared, private]))
    return SubspaceModel(C=C, n=n, d=d, s=s, n_points=n_points, bases=tuple(bases))


def sample_points(model, seed):
    """Sample model.n_points unit-norm points per subspace.

    Each point is B_j c with c standard Gaussian, normalized to unit l2
    norm; since B_j is orthonormal this is the uniform law on the
    subspace's unit sphere. Columns are assembled in subspace order.

    Returns
    -------
    X : ndarray, shape (n, C * n_points)
    truth : ndarray of int, shape (C * n_points,)
    """
    rng = np.random.default_rng(seed)
    cols = []
    labels = []
    for j, B in enumerate(model.bases):
        coeff = rng.standard_normal((model.d, model.n_points))
        norms = np.linalg.norm(coeff, axis=0)
        while np.any(norms < 1e-12):
            bad = norms < 1e-12
            coeff[:, bad] = rng.standard_normal((model.d, int(bad.sum())))
            norms = np.linalg.norm(coeff, axis=0)
        cols.append(B @ (coeff / norms))
        labels.append(np.full(model.n_points, j, dtype=np.int64))
    return np.hstack(cols), np.concatenate(labels)
