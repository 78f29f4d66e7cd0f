import numpy as np
import pytest


def random_skew(n: int, gen: np.random.Generator, density: float = 1.0) -> np.ndarray:
    """Dense-ish random skew-symmetric matrix for eigensolver tests."""
    a = gen.standard_normal((n, n))
    if density < 1.0:
        a *= gen.random((n, n)) < density
    return np.triu(a, 1) - np.triu(a, 1).T


def gue_matrix(n: int, gen: np.random.Generator) -> np.ndarray:
    """Complex Hermitian matrix with Gaussian entries (GUE up to scale)."""
    a = gen.standard_normal((n, n)) + 1j * gen.standard_normal((n, n))
    return (a + a.conj().T) / 2.0


def poisson_levels(count: int, gen: np.random.Generator) -> np.ndarray:
    """Sorted iid uniform levels: the uncorrelated-spectrum reference."""
    return np.sort(gen.random(count))


@pytest.fixture
def gen() -> np.random.Generator:
    return np.random.default_rng(20240817)
