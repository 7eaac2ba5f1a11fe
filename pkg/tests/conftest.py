import numpy as np
import pytest

from beqpt.bipartite import DensityMatrix


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def random_product_state(dA, dB, rng):
    """Pure product density matrix |a><a| kron |b><b|."""
    a = rng.standard_normal(dA) + 1j * rng.standard_normal(dA)
    b = rng.standard_normal(dB) + 1j * rng.standard_normal(dB)
    a /= np.linalg.norm(a)
    b /= np.linalg.norm(b)
    ket = np.kron(a, b)
    return DensityMatrix(np.outer(ket, ket.conj()), dA, dB)


def random_separable_state(dA, dB, rng, terms=6):
    """Convex mixture of random pure product states."""
    weights = rng.random(terms)
    weights /= weights.sum()
    mat = sum(w * random_product_state(dA, dB, rng).mat for w in weights)
    return DensityMatrix(mat, dA, dB)
