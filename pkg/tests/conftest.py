import numpy as np
import pytest


def random_unitary(rng, dim):
    """Haar-ish random unitary from the QR of a complex Gaussian matrix."""
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(a)
    return q * (np.diag(r) / np.abs(np.diag(r)))[None, :]


def random_weights(rng, dim):
    w = rng.dirichlet(np.ones(dim))
    return w / w.sum()


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
