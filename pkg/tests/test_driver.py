import numpy as np
import pytest

from conftest import make_intersecting_dataset, make_orthogonal_dataset
from probssc import (
    STOP_KAPPA,
    STOP_PHI_FIXED,
    STOP_T_MAX,
    HyperParams,
    SoftAssignment,
    TooFewPoints,
    ValidationError,
    compute_lambda0,
    misclassification,
    objective_value,
    run,
    run_ssc_baseline,
    stopping_check,
)


def assignment_with(kappa, phi=None, certain=None):
    N = 4 if phi is None else len(phi)
    if phi is None:
        phi = np.eye(2)[np.zeros(N, dtype=int)]
    if certain is None:
        certain = np.ones(N, dtype=bool)
    return SoftAssignment(phi=phi, certain_mask=certain,
                          P=phi.copy(), omega=1.0, kappa=kappa)


class TestStoppingCheck:
    def test_no_previous_continues(self):
        assert stopping_check(None, assignment_with(3), 1, 10) is None

    def test_phi_fixed_point(self):
        a = assignment_with(2)
        b = assignment_with(2, phi=a.phi.copy(), certain=a.certain_mask.copy())
        assert stopping_check(a, b, 2, 10) == STOP_PHI_FIXED

    def test_phi_drift_beyond_tolerance_is_not_fixed(self):
        a = assignment_with(2)
        phi = a.phi.copy()
        phi[0] = [1.0 - 1e-6, 1e-6]
        b = assignment_with(2, phi=phi, certain=a.certain_mask.copy())
        assert stopping_check(a, b, 2, 10) == STOP_KAPPA

    def test_certain_mask_change_is_not_fixed(self):
        a = assignment_with(1)
        certain = a.certain_mask.copy()
        certain[0] = False
        b = assignment_with(2, phi=a.phi.copy(), certain=certain)
        assert stopping_check(a, b, 2, 10) == STOP_KAPPA

    def test_kappa_stalls(self):
        a = assignment_with(12)
        phi = np.eye(2)[np.array([0, 1, 0, 1])]
        b = assignment_with(12, phi=phi, certain=np.ones(4, dtype=bool))
        assert stopping_check(a, b, 2, 10) == STOP_KAPPA

    def test_kappa_strictly_decreasing_continues(self):
        a = assignment_with(12)
        phi = np.eye(2)[np.array([0, 1, 0, 1])]
        b = assignment_with(9, phi=phi, certain=np.ones(4, dtype=bool))
        assert stopping_check(a, b, 2, 10) is None

    def test_t_max_wins_when_progress_continues(self):
        a = assignment_with(12)
        phi = np.eye(2)[np.array([0, 1, 0, 1])]
        b = assignment_with(9, phi=phi, certain=np.ones(4, dtype=bool))
        assert stopping_check(a, b, 10, 10) == STOP_T_MAX

    def test_fixed_point_checked_before_kappa(self):
        a = assignment_with(5)
        b = assignment_with(5, phi=a.phi.copy(), certain=a.certain_mask.copy())
        assert stopping_check(a, b, 2, 10) == STOP_PHI_FIXED


class TestRunOnSeparableData:
    def test_orthogonal_blocks_converge_immediately(self):
        X, truth = make_orthogonal_dataset()
        result = run(X, 2)
        assert misclassification(result.labels, truth, 2) == 0.0
        assert result.stop_reason == STOP_PHI_FIXED
        assert result.iterations == 2
        assert [rec.kappa for rec in result.history] == [0, 0]
        assert result.certain_mask.all()

    def test_history_modes(self):
        X, _ = make_orthogonal_dataset()
        result = run(X, 2)
        assert result.history[0].cluster_mode == "full"
        for rec in result.history[1:]:
            assert rec.cluster_mode in ("full", "incremental")

    def test_intersecting_data_runs_clean(self):
        X, truth = make_intersecting_dataset()
        result = run(X, 2)
        assert misclassification(result.labels, truth, 2) <= 0.25
        assert result.iterations == len(result.history)
        assert result.probabilities.shape == (X.shape[1], 2)
        np.testing.assert_allclose(result.probabilities.sum(axis=1), 1.0,
                                   atol=1e-10)


class TestRunContracts:
    def test_final_labels_are_phi_argmax(self):
        X, _ = make_intersecting_dataset(seed=3)
        result = run(X, 2)
        hard = np.where(result.certain_mask, result.labels, -1)
        top = result.probabilities.argmax(axis=1)
        np.testing.assert_array_equal(result.labels[result.certain_mask],
                                      hard[result.certain_mask])
        np.testing.assert_array_equal(result.labels, top)

    def test_deterministic(self):
        X, _ = make_intersecting_dataset(seed=4)
        a = run(X, 2)
        b = run(X, 2)
        np.testing.assert_array_equal(a.labels, b.labels)
        assert a.stop_reason == b.stop_reason
        assert len(a.history) == len(b.history)
        for ra, rb in zip(a.history, b.history):
            assert ra.kappa == rb.kappa
            assert ra.objective == rb.objective
            np.testing.assert_array_equal(ra.labels, rb.labels)

    def test_stop_reason_matches_history_tail(self):
        X, _ = make_intersecting_dataset(seed=5)
        result = run(X, 2)
        assert result.stop_reason in (STOP_PHI_FIXED, STOP_KAPPA, STOP_T_MAX)
        if result.stop_reason == STOP_KAPPA:
            assert result.history[-1].kappa >= result.history[-2].kappa
        if result.stop_reason == STOP_T_MAX:
            assert result.iterations == result.params.t_max

    def test_first_objective_matches_plain_solve(self):
        X, _ = make_intersecting_dataset(seed=6)
        params = HyperParams(t_max=1)
        result = run(X, 2, params=params)
        from probssc import validate_dataset

        Xn = validate_dataset(X, 2)
        lam0 = compute_lambda0(Xn, params.alpha)
        lam1 = lam0 / params.lambda_ratio
        expected = objective_value(Xn, result.Z, np.ones((Xn.shape[1],) * 2),
                                   lam0, lam1)
        assert result.history[0].objective == pytest.approx(expected, rel=1e-12)

    def test_early_stop_disabled_runs_exactly_t_max(self):
        X, _ = make_orthogonal_dataset()
        result = run(X, 2, params=HyperParams(t_max=5), early_stop=False)
        assert result.iterations == 5
        assert result.stop_reason == STOP_T_MAX

    def test_t_max_one_skips_comparison_clauses(self):
        X, _ = make_intersecting_dataset(seed=7)
        result = run(X, 2, params=HyperParams(t_max=1))
        assert result.iterations == 1
        assert result.stop_reason == STOP_T_MAX

    def test_full_mode_setting_disables_incremental(self):
        X, _ = make_intersecting_dataset(seed=8)
        result = run(X, 2, params=HyperParams(spectral_mode="full", t_max=4))
        assert all(rec.cluster_mode == "full" for rec in result.history)


class TestBaselineEquivalence:
    def test_matches_t_max_one(self):
        for s in range(5):
            X, _ = make_intersecting_dataset(seed=20 + s)
            a = run(X, 2, params=HyperParams(t_max=1))
            b = run_ssc_baseline(X, 2)
            np.testing.assert_array_equal(a.labels, b.labels)
            assert a.history[0].objective == b.history[0].objective

    def test_baseline_keeps_caller_params(self):
        X, _ = make_intersecting_dataset(seed=30)
        result = run_ssc_baseline(X, 2, params=HyperParams(alpha=25.0))
        assert result.params.alpha == 25.0
        assert result.params.t_max == 1


class TestValidationAndGuards:
    def test_rejects_single_cluster(self):
        X, _ = make_orthogonal_dataset()
        with pytest.raises(ValidationError):
            run(X, 1)

    def test_rejects_too_few_points(self):
        rng = np.random.default_rng(0)
        X = rng.standard_normal((10, 5))
        with pytest.raises(TooFewPoints):
            run(X, 3)

    def test_near_duplicate_points_trip_rank_guard(self):
        # All points nearly identical: probabilities stay close to uniform,
        # the first-iteration threshold lands near 1, and no cluster can
        # claim a certain point.
        rng = np.random.default_rng(1)
        base = rng.standard_normal((6, 1))
        X = base + 1e-8 * rng.standard_normal((6, 12))
        result = run(X, 2)
        joined = " ".join(result.warnings)
        assert "RankGuardTripped" in joined
        assert result.iterations >= 1
