"""Monte Carlo volume oracle, independent of the exact polytope code."""
from typing import NamedTuple

import numpy as np
from scipy.spatial import ConvexHull

from ..geometry import ConvexBody
from .generate import stream


class MCEstimate(NamedTuple):
    estimate: float
    low: float
    high: float
    samples: int

    def contains(self, x):
        return self.low <= float(x) <= self.high


def _inequalities(body):
    """Float facet inequalities A x <= b from qhull (1-d bodies handled directly)."""
    V = np.array([[float(x) for x in v] for v in body.vertices])
    if V.shape[1] == 1:
        return np.array([[1.0], [-1.0]]), np.array([V.max(), -V.min()])
    eq = ConvexHull(V).equations  # rows (a, c) with a.x + c <= 0 inside
    return eq[:, :-1], -eq[:, -1]


def mc_volume(bodies, samples=10**6, seed=0, batch=10**5):
    """Hit-ratio estimate of vol(intersection of ``bodies``) with a 3-sigma interval.

    Points are drawn uniformly from the bounding box of the first body.
    """
    if isinstance(bodies, ConvexBody):
        bodies = [bodies]
    bodies = list(bodies)
    V = np.array([[float(x) for x in v] for v in bodies[0].vertices])
    lo, hi = V.min(axis=0), V.max(axis=0)
    box_vol = float(np.prod(hi - lo))
    ineqs = [_inequalities(b) for b in bodies]
    rng = stream(seed, "mcVolume")
    hits, done = 0, 0
    while done < samples:
        k = min(batch, samples - done)
        X = lo + (hi - lo) * rng.random((k, len(lo)))
        inside = np.ones(k, dtype=bool)
        for A, b in ineqs:
            inside &= (X @ A.T <= b + 1e-12).all(axis=1)
        hits += int(inside.sum())
        done += k
    p = hits / samples
    sigma = box_vol * np.sqrt(p * (1 - p) / samples)
    est = box_vol * p
    return MCEstimate(est, est - 3 * sigma, est + 3 * sigma, samples)
