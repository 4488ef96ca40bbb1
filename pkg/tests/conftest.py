import os
import sys
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import settings

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile("ci", max_examples=40, deadline=None)
settings.load_profile("ci")


def rand_polygon(rng, k, scale=1, den=64):
    """Random rational points on a circle-ish ring; hull has several vertices."""
    ang = np.sort(rng.uniform(0, 2 * np.pi, k))
    rad = rng.uniform(0.6, 1.0, k)
    pts = np.stack([rad * np.cos(ang), rad * np.sin(ang)], 1) * scale
    return [tuple(Fraction(int(round(v * den)), den) for v in p) for p in pts]


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
