"""Degree-of-association probabilities, ambiguity score, and the soft
assignment that feeds back into the solver.

For point i with similarity column z = Zbar[:, i], its probability of
belonging to cluster k is the l1 mass of z restricted to the current
members of k over the total l1 mass. Points whose top probability clears
the certainty threshold are frozen to a one-hot row; the rest keep their
probability rows. A = Phi Phi^T then couples every pair of points by how
compatible their assignments are.
"""

from __future__ import annotations

import numpy as np

from .model import DegenerateAffinity, DimensionError, SoftAssignment, ValidationError


def compute_probabilities(Zbar, labels, C):
    """Per-point cluster membership probabilities from similarity mass.

    Parameters
    ----------
    Zbar : ndarray, shape (N, N)
        Symmetric nonnegative similarity.
    labels : ndarray of int, shape (N,)
        Current hard clustering with values in [0, C).
    C : int

    Returns
    -------
    P : ndarray, shape (N, C)
        Rows sum to 1. Points with zero similarity mass get the uniform
        row 1/C.
    flagged : ndarray of bool, shape (N,)
        True where the uniform fallback was applied.
    """
    Zbar = np.asarray(Zbar, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.int64)
    N = Zbar.shape[0]
    if Zbar.shape != (N, N) or labels.shape != (N,):
        raise DimensionError("similarity must be NxN with one label per point")
    if labels.min() < 0 or labels.max() >= C:
        raise ValidationError(f"labels must lie in [0, {C})")
    member = np.zeros((N, C))
    member[np.arange(N), labels] = 1.0
    mass = np.abs(Zbar).T @ member  # mass[i, k] = sum_{j in S_k} |Zbar[j, i]|
    total = mass.sum(axis=1)
    flagged = total == 0.0
    P = np.full((N, C), 1.0 / C)
    ok = ~flagged
    P[ok] = mass[ok] / total[ok, None]
    return P, flagged


def compute_omega(P):
    """Clustering ambiguity score in [0, 1].

    With M = P^T P,

        omega = 1 - sum_{k != l} M_kl / ((C - 1) * sum_k M_kk).

    Off-diagonal mass of M measures how much probability rows straddle
    cluster pairs; omega = 1 means every row is one-hot, lower values mean
    ambiguity. Rounding can push the ratio a hair outside [0, 1], so the
    result is clipped.

    Raises
    ------
    DegenerateAffinity
        If trace(M) = 0 (only possible for an empty or all-zero P).
    """
    P = np.asarray(P, dtype=np.float64)
    if P.ndim != 2:
        raise DimensionError("P must be a 2-d probability matrix")
    C = P.shape[1]
    M = P.T @ P
    trace = float(np.trace(M))
    if trace <= 0.0:
        raise DegenerateAffinity("probability matrix has zero trace")
    if C == 1:
        return 1.0
    off = float(M.sum() - trace)
    return float(np.clip(1.0 - off / ((C - 1) * trace), 0.0, 1.0))


def certainty_threshold(omega, C):
    """Map the first iteration's ambiguity score to a probability cutoff.

    The cutoff interpolates between the uniform floor 1/C (omega = 1, no
    ambiguity: everything clears it) and 1 (omega = 0, full ambiguity:
    nothing does):

        tau = 1/C + (1 - 1/C) * (1 - omega).

    Every probability row has max >= 1/C, so an ambiguity score below the
    floor would otherwise mark every point certain at exactly the moment
    the clustering is least trustworthy. The driver computes tau once from
    the first iteration and keeps it fixed for the run.
    """
    if not 0.0 <= omega <= 1.0:
        raise ValidationError(f"omega must be in [0, 1], got {omega}")
    if C < 1:
        raise ValidationError("C must be positive")
    floor = 1.0 / C
    return floor + (1.0 - floor) * (1.0 - omega)


def build_soft_assignment(P, threshold):
    """Split points into certain and uncertain at the given cutoff.

    Certain points (max probability >= threshold) get a one-hot row at
    their argmax; uncertain points keep their probability rows. kappa
    counts the uncertain points.
    """
    P = np.asarray(P, dtype=np.float64)
    N, C = P.shape
    omega = compute_omega(P)
    top = P.argmax(axis=1)
    certain = P[np.arange(N), top] >= threshold
    phi = P.copy()
    phi[certain] = 0.0
    phi[np.flatnonzero(certain), top[certain]] = 1.0
    return SoftAssignment(
        phi=phi,
        certain_mask=certain,
        P=P,
        omega=omega,
        kappa=int(N - certain.sum()),
    )


def build_association(phi):
    """Association matrix A = Phi Phi^T, clipped to [0, 1].

    a_ij is the inner product of the two assignment rows: 1 for two
    certain points in the same cluster, 0 for certain points in different
    clusters, intermediate when either is uncertain.
    """
    phi = np.asarray(phi, dtype=np.float64)
    return np.clip(phi @ phi.T, 0.0, 1.0)
