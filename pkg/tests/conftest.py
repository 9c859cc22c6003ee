import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240521)


def random_amplitudes(rng, n):
    z = rng.normal(size=n) + 1j * rng.normal(size=n)
    return z / np.linalg.norm(z)


def random_isometry_columns(rng, n, dim):
    """Gram-Schmidt on n random complex vectors; independent of numpy's QR."""
    cols = []
    while len(cols) < n:
        v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
        for c in cols:
            v = v - np.vdot(c, v) * c
        nv = np.linalg.norm(v)
        if nv > 1e-8:
            cols.append(v / nv)
    return np.array(cols)


ACCEPTANCE_RESULTS = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_RESULTS:
            terminalreporter.write_line(line)
