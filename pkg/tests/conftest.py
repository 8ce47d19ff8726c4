import numpy as np
import pytest
from hypothesis import settings

from subspace_cond import Matrix, Selection

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

SECTION3_SIGMA = (4.0, 2.0, 1.0, 0.99, 0.0, 0.0)


def pseudodiag_6x5():
    A = np.zeros((6, 5))
    A[:5, :5] = np.diag([4.0, 2.0, 1.0, 0.99, 0.0])
    return Matrix(A)


@pytest.fixture
def A3():
    return pseudodiag_6x5()


def left(*idx, m=6):
    return Selection.of(idx, m)


def random_unitary(rng, p, complex_=False):
    X = rng.standard_normal((p, p))
    if complex_:
        X = X + 1j * rng.standard_normal((p, p))
    Q, R = np.linalg.qr(X)
    return Q * (np.diag(R) / np.abs(np.diag(R)))


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
