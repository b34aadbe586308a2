import numpy as np
import pytest


def haar_unitary(rng, d):
    """Haar-distributed unitary via QR with phase normalization."""
    z = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))[None, :].conj()


def random_sorted_weights(rng, d):
    """A valid weight vector: nonnegative, sorted nonincreasing, summing to 1."""
    return np.sort(rng.dirichlet(np.ones(d)))[::-1]


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
