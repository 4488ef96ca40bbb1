"""Deterministic instance generators.

Randomness comes from a Philox counter-based generator keyed by
``SeedSequence([seed, label])`` where ``label`` is a stable hash of the
generator name, so each kind draws from its own stream and no global RNG
state is touched.
"""
import hashlib
from fractions import Fraction

import numpy as np

from ..errors import InvalidInput
from ..geometry import box
from ..selection import slab_instance
from ..tverberg import Segment
from .io import Instance

GRID = 64  # coordinates are multiples of 1/GRID


def stream(seed, label):
    """Independent generator for ``(seed, label)``."""
    tag = int.from_bytes(hashlib.sha256(label.encode()).digest()[:8], "little")
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed) & (2**64 - 1), tag])))


def _grid(rng, lo, hi, size):
    """Uniform multiples of 1/GRID in [lo, hi]."""
    k = rng.integers(int(lo * GRID), int(hi * GRID) + 1, size=size)
    return [[Fraction(int(v), GRID) for v in row] for row in np.atleast_2d(k)]


def random_squares(d=2, n=8, families=1, window=2, spread=0, seed=0):
    """Unit boxes with corners in a ``window``-wide cube; family f is offset by ``spread * f``."""
    if window < 1:
        raise InvalidInput("window must be at least 1")
    rng = stream(seed, "randomSquares")
    fams = []
    for f in range(families):
        shift = [Fraction(spread * f)] + [Fraction(spread * (f % 2))] * (d - 1)
        corners = _grid(rng, 0, window - 1, (n, d))
        fams.append([box([c + s for c, s in zip(lo, shift)], [c + s + 1 for c, s in zip(lo, shift)])
                     for lo in corners])
    return Instance(d, "bodies" if families == 1 else "colorFamilies", fams, seed,
                    {"generator": "randomSquares", "window": str(window)})


def slabs(d=2, eps=Fraction(1, 4), n=16, seed=0):
    bodies = slab_instance(d, eps, n)
    return Instance(d, "bodies", [bodies], seed, {"generator": "slabs", "eps": str(Fraction(eps))})


def clustered_intervals(families=2, per=4, seed=0):
    """Length-2 intervals whose centers are jittered by at most 1/4 around 0."""
    rng = stream(seed, "clusteredIntervals")
    fams = []
    for _ in range(families):
        cs = _grid(rng, -0.25, 0.25, (per, 1))
        fams.append([box([c[0] - 1], [c[0] + 1]) for c in cs])
    return Instance(1, "colorFamilies", fams, seed, {"generator": "clusteredIntervals"})


def rational_unit(d, rng, den=97):
    """Exact unit vector from inverse stereographic projection of a rational point."""
    if d == 1:
        return (Fraction(1),)
    w = [Fraction(int(k), den) for k in rng.integers(-2 * den, 2 * den + 1, size=d - 1)]
    s = sum(x * x for x in w)
    return tuple(2 * x / (s + 1) for x in w) + ((s - 1) / (s + 1),)


def unit_segments(d=2, families=4, per=8, window=2, seed=0):
    """Segments of length exactly 1 with rational endpoints."""
    rng = stream(seed, "unitSegments")
    fams = []
    for _ in range(families):
        fam = []
        for a in _grid(rng, 0, window, (per, d)):
            u = rational_unit(d, rng)
            fam.append(Segment(tuple(a), tuple(x + y for x, y in zip(a, u))))
        fams.append(fam)
    return Instance(d, "segments", fams, seed, {"generator": "unitSegments"})


def identical_bodies(d=2, n=8, seed=0):
    return Instance(d, "bodies", [[box([0] * d, [1] * d) for _ in range(n)]], seed,
                    {"generator": "identicalBodies"})


GENERATORS = {
    "randomSquares": random_squares,
    "slabs": slabs,
    "clusteredIntervals": clustered_intervals,
    "unitSegments": unit_segments,
    "identicalBodies": identical_bodies,
}


def generate(kind, seed=0, **params):
    """Build an instance of ``kind``; unknown parameters raise InvalidInput."""
    if kind not in GENERATORS:
        raise InvalidInput(f"unknown generator {kind!r}; choose from {sorted(GENERATORS)}")
    try:
        return GENERATORS[kind](seed=seed, **params)
    except TypeError as exc:
        raise InvalidInput(str(exc)) from exc
