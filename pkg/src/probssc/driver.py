"""Alternating loop: weighted sparse self-representation, spectral
clustering, soft assignment, association feedback.

Iteration t solves for Z under the previous association matrix A (all
ones at t=1, so the first pass is plain sparse self-representation),
clusters Zbar, converts similarity mass into membership probabilities,
splits points into certain and uncertain at a threshold fixed from the
first iteration's ambiguity score, and feeds A = Phi Phi^T into the next
solve. The loop stops when Phi reaches a fixed point, when the uncertain
count stops decreasing, or at t_max.
"""

from __future__ import annotations

import dataclasses

import numpy as np

from .association import (
    build_association,
    build_soft_assignment,
    certainty_threshold,
    compute_omega,
    compute_probabilities,
)
from .model import (
    STOP_KAPPA,
    STOP_PHI_FIXED,
    STOP_T_MAX,
    ClusteringResult,
    HyperParams,
    IterationRecord,
    ValidationError,
    validate_dataset,
)
from .solver import compute_lambda0, objective_value, solve_self_representation
from .spectral import cluster_full, cluster_incremental

_PHI_TOL = 1e-12


def stopping_check(prev, curr, t, t_max):
    """Evaluate the three stop clauses in order.

    Returns one of the stop-reason strings or None to continue. The
    comparison clauses need a previous assignment (t >= 2); the t_max
    clause always applies.
    """
    if prev is not None and t >= 2:
        if (
            np.array_equal(prev.certain_mask, curr.certain_mask)
            and np.max(np.abs(prev.phi - curr.phi)) <= _PHI_TOL
        ):
            return STOP_PHI_FIXED
        if curr.kappa >= prev.kappa:
            return STOP_KAPPA
    if t >= t_max:
        return STOP_T_MAX
    return None


def _covered(assignment, C):
    """True when every cluster has at least one certain point (the
    rank-C surrogate on Phi)."""
    top = assignment.phi.argmax(axis=1)
    return np.unique(top[assignment.certain_mask]).size == C


def _iteration_seed(params, t, retry):
    return np.random.SeedSequence(entropy=params.seed, spawn_key=(t, retry))


def run(X, C, params=None, normalize=True, early_stop=True):
    """Cluster X into C groups with delayed association.

    Parameters
    ----------
    X : ndarray, shape (n, N)
        Points as columns.
    C : int
        Number of clusters, 2 <= C <= N/2.
    params : HyperParams, optional
        Defaults when omitted.
    normalize : bool
        Scale columns to unit length before solving.
    early_stop : bool
        When False only the t_max clause stops the loop (used for
        fixed-length uncertainty traces).

    Returns
    -------
    ClusteringResult
        Final labels are each point's argmax over its Phi row; certain
        points keep their hard label, uncertain points take their most
        probable cluster. history[t-1] records the clustering labels,
        kappa, omega, and the objective of (Z_t, A_{t-1}) at iteration t.
    """
    if params is None:
        params = HyperParams()
    if C < 2:
        raise ValidationError(f"need at least 2 clusters, got C={C}")
    X = validate_dataset(X, C, normalize=normalize)
    N = X.shape[1]
    lambda0 = compute_lambda0(X, params.alpha)
    lambda1 = lambda0 / params.lambda_ratio

    A = np.ones((N, N))
    threshold = None
    prev_assignment = None
    prev_labels = None
    prev_Z = None
    guard_stop = False
    history = []
    warnings = []
    stop_reason = None

    for t in range(1, params.t_max + 1):
        state = solve_self_representation(X, A, params, lambda0=lambda0, z_warm=prev_Z)
        if not state.converged.all():
            n_bad = int((~state.converged).sum())
            warnings.append(f"iteration {t}: {n_bad} columns hit the sweep cap")
        objective = objective_value(X, state.Z, A, lambda0, lambda1)

        retry = 0
        mode = "full"
        if t == 1 or params.spectral_mode == "full" or prev_labels is None:
            labels, _ = cluster_full(state.Zbar, C, params.kmeans_restarts,
                                       _iteration_seed(params, t, retry))
        else:
            mode = "incremental"
            labels, fell_back = cluster_incremental(
                state.Zbar, C, prev_labels, ~prev_assignment.certain_mask,
                params.kmeans_restarts, _iteration_seed(params, t, retry),
            )
            if fell_back:
                mode = "full"
                warnings.append(
                    f"iteration {t}: incremental update fell back to full clustering"
                )

        P, flagged = compute_probabilities(state.Zbar, labels, C)
        if flagged.any():
            warnings.append(
                f"iteration {t}: {int(flagged.sum())} points had zero similarity mass"
            )
        if t == 1:
            threshold = certainty_threshold(compute_omega(P), C)
        assignment = build_soft_assignment(P, threshold)

        if not _covered(assignment, C):
            retry = 1
            mode = "full"
            warnings.append(
                f"iteration {t}: RankGuardTripped, a cluster had no certain point; "
                "re-ran full clustering"
            )
            labels, _ = cluster_full(state.Zbar, C, params.kmeans_restarts,
                                       _iteration_seed(params, t, retry))
            P, flagged = compute_probabilities(state.Zbar, labels, C)
            if t == 1:
                threshold = certainty_threshold(compute_omega(P), C)
            assignment = build_soft_assignment(P, threshold)
            if not _covered(assignment, C):
                guard_stop = True
                warnings.append(
                    f"iteration {t}: RankGuardTripped twice, stopping"
                )

        history.append(IterationRecord(
            t=t,
            kappa=assignment.kappa,
            omega=assignment.omega,
            objective=objective,
            labels=np.asarray(labels, dtype=np.int64),
            cluster_mode=mode,
        ))

        if guard_stop:
            stop_reason = STOP_T_MAX
            break
        if early_stop:
            stop_reason = stopping_check(prev_assignment, assignment, t, params.t_max)
        else:
            stop_reason = STOP_T_MAX if t >= params.t_max else None
        if stop_reason is not None:
            break

        A = build_association(assignment.phi)
        prev_assignment = assignment
        prev_labels = np.asarray(labels, dtype=np.int64)
        prev_Z = state.Z

    final_labels = assignment.phi.argmax(axis=1).astype(np.int64)
    return ClusteringResult(
        labels=final_labels,
        iterations=len(history),
        stop_reason=stop_reason,
        history=history,
        params=params,
        warnings=warnings,
        Z=state.Z,
        probabilities=assignment.P,
        certain_mask=assignment.certain_mask,
    )


def run_ssc_baseline(X, C, params=None, normalize=True):
    """Single-pass baseline: one all-ones solve plus one full spectral
    clustering. Identical to run with t_max = 1 by construction."""
    if params is None:
        params = HyperParams()
    return run(X, C, dataclasses.replace(params, t_max=1), normalize=normalize)
