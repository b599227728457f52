import numpy as np
import pytest

from probssc import generate_subspaces, sample_points


def make_orthogonal_dataset(per_block=5, blocks=2, n=10, seed=0):
    """Points on mutually orthogonal 1-dim subspaces: block c lives on
    coordinate axis c with random nonzero scales."""
    rng = np.random.default_rng(seed)
    X = np.zeros((n, per_block * blocks))
    labels = np.zeros(per_block * blocks, dtype=np.int64)
    for c in range(blocks):
        sl = slice(c * per_block, (c + 1) * per_block)
        scales = rng.uniform(0.5, 2.0, per_block) * rng.choice([-1.0, 1.0], per_block)
        X[c, sl] = scales
        labels[sl] = c
    return X, labels


def make_intersecting_dataset(C=2, ratio=0.5, n=40, d=6, per=20, seed=0):
    s = int(round(ratio * d))
    model = generate_subspaces(C, n, d, s, seed, n_points=per)
    return sample_points(model, seed + 1)


@pytest.fixture
def orthogonal_dataset():
    return make_orthogonal_dataset()


@pytest.fixture
def intersecting_dataset():
    return make_intersecting_dataset()
