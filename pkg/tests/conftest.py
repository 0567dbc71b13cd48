import numpy as np
import pytest

from circfun import Circulant


@pytest.fixture
def rng():
    return np.random.default_rng(20260809)


def assert_circ_close(x: Circulant, y: Circulant, tol: float = 1e-10):
    assert x.d == y.d, f"orders differ: {x.d} vs {y.d}"
    worst = float(np.max(np.abs(x.row - y.row)))
    assert worst <= tol, f"rows differ by {worst:.3e} > {tol:.1e}"
