import numpy as np
import pytest

from fuplab import fig_sch1


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


@pytest.fixture(scope="session")
def sch1():
    return fig_sch1()


def direct_dft(v, alpha=1.0):
    """O(N^2) direct-summation oracle for the (dilated) unitary transform."""
    v = np.asarray(v, dtype=np.complex128)
    n = len(v)
    j = np.arange(n)
    kernel = np.exp(-2j * np.pi * alpha * np.outer(j, j) / n)
    return kernel @ v / np.sqrt(n)


def direct_kernel_F(M, alphabet, k, alpha, j):
    """Direct-summation oracle for the Cantor difference kernel."""
    from fuplab import CantorSpec1D, build_cantor

    c = build_cantor(CantorSpec1D(M, alphabet, k))
    n = M ** k
    return np.exp(-2j * np.pi * alpha * c * j / n).sum() / n
