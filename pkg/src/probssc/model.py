"""Shared domain types, validation, and hyper-parameters.

Data layout convention: points are columns. A dataset is X in R^{n x N}
with n the ambient dimension and N the number of points; every module
indexes points by column. Labels are 0-based integers everywhere.
"""

from __future__ import annotations

from dataclasses import dataclass, field, asdict
from typing import Optional

import numpy as np


class ValidationError(ValueError):
    """Input fails a structural precondition."""


class ZeroColumn(ValidationError):
    def __init__(self, index):
        self.index = int(index)
        super().__init__(f"column {index} has zero norm")


class NonFinite(ValidationError):
    def __init__(self, row, col):
        self.row, self.col = int(row), int(col)
        super().__init__(f"non-finite entry at ({row}, {col})")


class TooFewPoints(ValidationError):
    def __init__(self, N, C):
        super().__init__(f"{N} points cannot form {C} clusters of >= 2 points")


class DimensionError(ValidationError):
    """Inconsistent or out-of-range dimensions."""


class DegenerateScale(ValueError):
    """All points mutually orthogonal; the lambda0 scaling rule is undefined."""


class DegenerateAffinity(ValueError):
    """trace(P^T P) = 0; impossible for valid probability rows (defensive)."""


class EigenFailure(RuntimeError):
    """Symmetric eigensolver did not converge."""


STOP_PHI_FIXED = "phi_fixed_point"
STOP_KAPPA = "kappa_nondecreasing"
STOP_T_MAX = "t_max_reached"


@dataclass(frozen=True)
class HyperParams:
    """Solver and loop settings shared by every module.

    alpha
        Scale factor for the l1 weight: lambda0 = mu / alpha where
        mu = min_i max_{j != i} |x_i^T x_j|. Larger alpha gives denser
        coefficient supports.
    lambda_ratio
        The ratio lambda0 / lambda1. Values below 1 make the association
        penalty stronger than the sparsity penalty, which is what lets the
        delayed-association refinement act; the default 0.125 gives
        lambda1 = 8 * lambda0.
    t_max
        Maximum alternating iterations of the outer loop.
    solver_tol
        Coordinate-descent stop: max absolute coordinate change per sweep.
    solver_max_sweeps
        Sweep cap per column; hitting it is a warning, not an error.
    kmeans_restarts
        Independent k-means restarts per clustering call.
    seed
        64-bit unsigned base seed for every random decision in a run.
    spectral_mode
        "incremental" relabels only points affected by uncertain points
        from t=2 on; "full" reclusters everything each iteration.
    """

    alpha: float = 40.0
    lambda_ratio: float = 0.125
    t_max: int = 10
    solver_tol: float = 1e-6
    solver_max_sweeps: int = 1000
    kmeans_restarts: int = 20
    seed: int = 0
    spectral_mode: str = "incremental"

    def __post_init__(self):
        if self.alpha <= 0 or self.lambda_ratio <= 0 or self.solver_tol <= 0:
            raise ValidationError("alpha, lambda_ratio, solver_tol must be positive")
        if self.t_max < 1 or self.solver_max_sweeps < 1 or self.kmeans_restarts < 1:
            raise ValidationError("t_max, solver_max_sweeps, kmeans_restarts must be >= 1")
        if not 0 <= int(self.seed) < 2 ** 64:
            raise ValidationError("seed must fit in an unsigned 64-bit integer")
        if self.spectral_mode not in ("full", "incremental"):
            raise ValidationError(f"unknown spectral_mode {self.spectral_mode!r}")

    def to_dict(self):
        return asdict(self)


@dataclass
class CoefficientState:
    """Self-representation state: Z (diag 0), residual E = X - XZ, and
    similarity Zbar = (|Z| + |Z^T|) / 2."""

    Z: np.ndarray
    E: np.ndarray
    Zbar: np.ndarray
    sweeps: np.ndarray          # per-column sweep counts
    converged: np.ndarray       # per-column bool, False = hit max_sweeps


@dataclass
class SoftAssignment:
    """Phi with certain/uncertain tags.

    Certain points get one-hot phi rows at their argmax cluster; uncertain
    points keep their probability row. kappa counts uncertain points.
    """

    phi: np.ndarray
    certain_mask: np.ndarray
    P: np.ndarray
    omega: float
    kappa: int


@dataclass
class IterationRecord:
    t: int
    kappa: int
    omega: float
    objective: float
    labels: np.ndarray
    cluster_mode: str = "full"  # diagnostic; not part of the JSON schema


@dataclass
class ClusteringResult:
    labels: np.ndarray
    iterations: int
    stop_reason: str
    history: list[IterationRecord]
    params: HyperParams
    warnings: list[str] = field(default_factory=list)
    Z: Optional[np.ndarray] = None
    probabilities: Optional[np.ndarray] = None
    certain_mask: Optional[np.ndarray] = None


def validate_dataset(X, C, normalize=True):
    """Validate and column-normalize a dataset.

    Parameters
    ----------
    X : array-like, shape (n, N)
        Points as columns.
    C : int
        Number of clusters the caller intends to form.
    normalize : bool
        Rescale each column to unit l2 norm (the default preprocessing).

    Returns
    -------
    X : ndarray, shape (n, N)
        A float64 copy, column-normalized when requested.
    """
    X = np.array(X, dtype=np.float64, order="F", copy=True)
    if X.ndim != 2:
        raise DimensionError(f"expected a 2-d matrix, got ndim={X.ndim}")
    n, N = X.shape
    if n < 1 or N < 2:
        raise DimensionError(f"need n >= 1 and N >= 2, got {n} x {N}")
    C = int(C)
    if C < 1:
        raise DimensionError(f"cluster count must be positive, got {C}")
    if N < 2 * C:
        raise TooFewPoints(N, C)
    bad = ~np.isfinite(X)
    if bad.any():
        r, c = np.argwhere(bad)[0]
        raise NonFinite(r, c)
    norms = np.linalg.norm(X, axis=0)
    zero = norms == 0.0
    if zero.any():
        raise ZeroColumn(np.argmax(zero))
    if normalize:
        X /= norms
    return X
