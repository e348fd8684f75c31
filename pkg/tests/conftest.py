import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def brute_force_arc_width(phases):
    """Oracle: try every input phase as the arc start and keep the shortest arc reaching all others."""
    p = np.mod(np.asarray(phases, dtype=float), 2 * np.pi)
    best = np.inf
    for s in p:
        offsets = np.mod(p - s, 2 * np.pi)
        offsets[offsets > 2 * np.pi - 1e-13] = 0.0
        best = min(best, offsets.max())
    return best
