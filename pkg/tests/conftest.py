import numpy as np
import pytest

from kappag import Dataset, validate


def make_dataset(seed, n, p, beta=None, noise_sd=1.0):
    """Random validated dataset with N(0,1) predictors."""
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))
    X = rng.standard_normal((n, p))
    if beta is None:
        beta = rng.standard_normal(p)
    y = X @ np.asarray(beta, dtype=float) + noise_sd * rng.standard_normal(n)
    return validate(Dataset(X, y))


def make_orthogonal_dataset(seed, n, p, scales=None):
    """Dataset whose Gram matrix X'X is exactly diagonal."""
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))
    q, _ = np.linalg.qr(rng.standard_normal((n, p)))
    if scales is None:
        scales = np.linspace(1.0, 2.5, p)
    X = q * np.asarray(scales)
    y = rng.standard_normal(n)
    return validate(Dataset(X, y))


@pytest.fixture
def rng():
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(12345)))
