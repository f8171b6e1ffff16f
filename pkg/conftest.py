# conftest.py
import numpy as np
import pytest


def ginibre(rng, rows, cols=None):
    cols = rows if cols is None else cols
    return rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))


def random_hermitian(rng, N):
    G = ginibre(rng, N)
    return (G + G.conj().T) / 2


def random_unitary(rng, N):
    Q, R = np.linalg.qr(ginibre(rng, N))
    return Q * (np.diag(R) / np.abs(np.diag(R)))


@pytest.fixture
def rng():
    """Seeded generator so every randomized test is reproducible"""
    return np.random.default_rng(20240611)
