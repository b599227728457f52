import dataclasses

import numpy as np
import pytest

from probssc import (
    HyperParams,
    NonFinite,
    TooFewPoints,
    ValidationError,
    ZeroColumn,
    validate_dataset,
)


class TestHyperParams:
    def test_defaults(self):
        p = HyperParams()
        assert p.alpha == 40.0
        assert p.lambda_ratio == 0.125
        assert p.t_max == 10
        assert p.solver_tol == 1e-6
        assert p.solver_max_sweeps == 1000
        assert p.kmeans_restarts == 20
        assert p.seed == 0
        assert p.spectral_mode == "incremental"

    def test_frozen(self):
        p = HyperParams()
        with pytest.raises(dataclasses.FrozenInstanceError):
            p.alpha = 1.0

    @pytest.mark.parametrize("kwargs", [
        {"alpha": 0.0},
        {"alpha": -1.0},
        {"lambda_ratio": 0.0},
        {"t_max": 0},
        {"solver_tol": 0.0},
        {"solver_max_sweeps": 0},
        {"kmeans_restarts": 0},
        {"seed": -1},
        {"seed": 2**64},
        {"spectral_mode": "eigenupdate"},
    ])
    def test_rejects_invalid(self, kwargs):
        with pytest.raises(ValidationError):
            HyperParams(**kwargs)

    def test_to_dict_round_trip(self):
        p = HyperParams(alpha=7.0, seed=123, spectral_mode="full")
        d = p.to_dict()
        assert d["alpha"] == 7.0
        assert d["seed"] == 123
        assert HyperParams(**d) == p

    def test_replace_keeps_validation(self):
        p = HyperParams()
        with pytest.raises(ValidationError):
            dataclasses.replace(p, t_max=-3)


class TestValidateDataset:
    def test_normalizes_columns(self):
        rng = np.random.default_rng(0)
        X = rng.standard_normal((20, 40)) * 3.0
        out = validate_dataset(X, 4)
        assert out.dtype == np.float64
        assert out.flags.f_contiguous
        np.testing.assert_allclose(np.linalg.norm(out, axis=0), 1.0, atol=1e-12)

    def test_returns_copy(self):
        X = np.eye(4)
        out = validate_dataset(X, 2)
        out[0, 0] = 99.0
        assert X[0, 0] == 1.0

    def test_idempotent(self):
        rng = np.random.default_rng(1)
        X = rng.standard_normal((10, 12))
        once = validate_dataset(X, 2)
        twice = validate_dataset(once, 2)
        np.testing.assert_allclose(once, twice, atol=1e-15)

    def test_no_normalize_preserves_scale(self):
        X = np.eye(4) * 2.0
        out = validate_dataset(X, 2, normalize=False)
        np.testing.assert_array_equal(out, X)

    def test_zero_column_reports_index(self):
        X = np.ones((3, 8))
        X[:, 7] = 0.0
        with pytest.raises(ZeroColumn) as exc:
            validate_dataset(X, 2)
        assert exc.value.index == 7

    def test_non_finite_reports_position(self):
        X = np.ones((4, 6))
        X[2, 3] = np.nan
        with pytest.raises(NonFinite) as exc:
            validate_dataset(X, 2)
        assert (exc.value.row, exc.value.col) == (2, 3)
        X[2, 3] = np.inf
        with pytest.raises(NonFinite):
            validate_dataset(X, 2)

    def test_too_few_points(self):
        X = np.random.default_rng(2).standard_normal((10, 5))
        with pytest.raises(TooFewPoints):
            validate_dataset(X, 3)

    def test_shape_and_count_validation(self):
        with pytest.raises(ValidationError):
            validate_dataset(np.ones(5), 2)
        with pytest.raises(ValidationError):
            validate_dataset(np.ones((3, 4)), 0)
