import numpy as np
import pytest

from oracles import rank_of
from probssc import DimensionError, generate_subspaces, sample_points


class TestGenerateSubspaces:
    def test_bases_orthonormal(self):
        model = generate_subspaces(3, 30, 6, 3, seed=0)
        for B in model.bases:
            np.testing.assert_allclose(B.T @ B, np.eye(6), atol=1e-10)

    def test_shared_block_identical(self):
        model = generate_subspaces(4, 25, 5, 2, seed=1)
        shared = model.bases[0][:, :2]
        for B in model.bases[1:]:
            np.testing.assert_array_equal(B[:, :2], shared)

    @pytest.mark.parametrize("C,n,d,s", [
        (2, 20, 6, 3),
        (3, 200, 10, 5),
        (4, 50, 4, 1),
        (2, 12, 5, 4),
    ])
    def test_union_rank(self, C, n, d, s):
        model = generate_subspaces(C, n, d, s, seed=2)
        assert rank_of(*model.bases) == s + C * (d - s)

    def test_rank_at_benchmark_scale(self):
        model = generate_subspaces(3, 200, 10, 5, seed=3)
        assert rank_of(*model.bases) == 20

    def test_maximal_overlap_rank(self):
        model = generate_subspaces(2, 15, 8, 7, seed=4)
        assert rank_of(*model.bases) == 9

    def test_disjoint_subspaces_still_distinct(self):
        model = generate_subspaces(2, 40, 6, 0, seed=5)
        B1, B2 = model.bases
        top_angle_cos = np.linalg.svd(B1.T @ B2, compute_uv=False)[0]
        assert top_angle_cos < 1.0 - 1e-6

    def test_deterministic(self):
        a = generate_subspaces(3, 20, 5, 2, seed=6)
        b = generate_subspaces(3, 20, 5, 2, seed=6)
        for Ba, Bb in zip(a.bases, b.bases):
            np.testing.assert_array_equal(Ba, Bb)

    def test_accepts_seed_sequence(self):
        ss = np.random.SeedSequence(7)
        a = generate_subspaces(2, 10, 3, 1, seed=ss)
        b = generate_subspaces(2, 10, 3, 1, seed=np.random.SeedSequence(7))
        np.testing.assert_array_equal(a.bases[1], b.bases[1])

    @pytest.mark.parametrize("C,n,d,s", [
        (2, 10, 5, 5),
        (2, 10, 5, -1),
        (2, 4, 5, 2),
        (1, 10, 5, 2),
    ])
    def test_rejects_bad_dimensions(self, C, n, d, s):
        with pytest.raises(DimensionError):
            generate_subspaces(C, n, d, s, seed=0)

    def test_model_validation(self):
        model = generate_subspaces(2, 10, 3, 1, seed=8)
        with pytest.raises(DimensionError):
            type(model)(C=2, n=10, d=3, s=1, n_points=50, bases=model.bases[:1])


class TestSamplePoints:
    def test_points_lie_in_their_subspace(self):
        model = generate_subspaces(3, 30, 5, 2, seed=9, n_points=40)
        X, truth = sample_points(model, seed=10)
        for j, B in enumerate(model.bases):
            block = X[:, truth == j]
            residual = block - B @ (B.T @ block)
            assert np.abs(residual).max() <= 1e-10

    def test_unit_norms(self):
        model = generate_subspaces(2, 20, 4, 1, seed=11, n_points=60)
        X, _ = sample_points(model, seed=12)
        np.testing.assert_allclose(np.linalg.norm(X, axis=0), 1.0, atol=1e-12)

    def test_labels_are_contiguous_blocks(self):
        model = generate_subspaces(3, 15, 4, 2, seed=13, n_points=7)
        X, truth = sample_points(model, seed=14)
        assert X.shape == (15, 21)
        np.testing.assert_array_equal(truth, np.repeat([0, 1, 2], 7))

    def test_deterministic(self):
        model = generate_subspaces(2, 12, 4, 2, seed=15, n_points=9)
        Xa, _ = sample_points(model, seed=16)
        Xb, _ = sample_points(model, seed=16)
        np.testing.assert_array_equal(Xa, Xb)

    def test_sphere_law_is_centered(self):
        model = generate_subspaces(2, 10, 5, 2, seed=17, n_points=5000)
        X, _ = sample_points(model, seed=18)
        assert np.linalg.norm(X.mean(axis=1)) <= 0.05
