import numpy as np
import pytest
from hypothesis import settings

# derandomized so that every run explores the same examples
settings.register_profile("repo", deadline=None, max_examples=40, derandomize=True)
settings.load_profile("repo")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def separated_dirichlet(rng, d, gap=0.02):
    """Probability vector whose entries differ pairwise by at least ``gap``."""
    while True:
        x = rng.dirichlet(np.ones(d))
        s = np.sort(x)
        if d == 1 or np.min(np.diff(s)) > gap:
            return x
