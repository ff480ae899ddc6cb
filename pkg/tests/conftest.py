import numpy as np
import pytest

from randminnorm.rng import RandomStream

_ACCEPTANCE = []


def naive_dft(x):
    n = len(x)
    j = np.arange(n)
    return np.exp(-2j * np.pi * np.outer(j, j) / n) @ x / np.sqrt(n)


def crandn(rng, *shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


def tall_with_condition(rng, n, m, kappa):
    """``n x m`` matrix with singular values logspaced from 1 to 1/kappa."""
    U = np.linalg.qr(crandn(rng, n, m))[0]
    V = np.linalg.qr(crandn(rng, m, m))[0]
    return (U * np.logspace(0, -np.log10(kappa), m)) @ V.conj().T


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def stream():
    return RandomStream(2024)


@pytest.fixture(scope="session")
def acceptance_log():
    return _ACCEPTANCE


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for line in _ACCEPTANCE:
        terminalreporter.write_line(line)
