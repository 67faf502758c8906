import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def random_probs(rng, n, floor=0.0):
    """Random point on the n-simplex; floor > 0 keeps entries bounded away
    from zero so support conditions hold."""
    p = rng.dirichlet(np.ones(n))
    if floor > 0.0:
        p = p + floor
        p = p / p.sum()
    return p


def random_joint(rng, n_rows, n_cols):
    t = rng.dirichlet(np.ones(n_rows * n_cols)).reshape(n_rows, n_cols)
    return t
