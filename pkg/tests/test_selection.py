import itertools
from fractions import Fraction as F
from math import comb, pi

import numpy as np
import pytest

from quantsel import _rational as R
from quantsel.ellipsoid import ball
from quantsel.errors import DegenerateHull, InvalidInput, PreconditionFailed, TooFewBodies
from quantsel.geometry import ConvexBody, box, contains_ellipsoid, convex_hull, intersect_bodies
from quantsel.selection import (
    ball_in_hull, chain_bound, point_selection, selection_2d, selection_quadratic, selection_simplex,
    simplex_depth, slab_instance, steinitz_reduce, tuple_hits, vol_planes_refine, weak_epsnet,
)


def _float_depth(P, X):
    """Number of (d+1)-subsets of P whose simplex contains each probe (float barycentrics)."""
    d = P.shape[1]
    out = np.zeros(len(X), dtype=int)
    for S in itertools.combinations(range(len(P)), d + 1):
        T = P[list(S)]
        M = np.vstack([T.T, np.ones(d + 1)])
        if abs(np.linalg.det(M)) < 1e-12:
            continue
        lam = np.linalg.solve(M, np.vstack([X.T, np.ones(len(X))]))
        out += (lam >= 0).all(0)
    return out


def test_point_selection_examples():
    x, depth = point_selection([(0,), (1,), (2,), (3,)])
    assert 1 < x[0] < 2 and depth == 4
    tri = [(0, 0), (1, 0), (0, 1)]
    x, depth = point_selection(tri)
    assert depth == 1 and simplex_depth(tri, x) == 1
    sq = [(0, 0), (1, 0), (1, 1), (0, 1)]
    x, depth = point_selection(sq, include_vertices=True)
    assert x == (F(1, 2), F(1, 2)) and depth == 4
    _, open_depth = point_selection(sq)
    assert open_depth == 2


@pytest.mark.parametrize("seed", range(6))
def test_point_selection_beats_random_probes(seed):
    rng = np.random.default_rng(seed)
    d = 1 + seed % 2
    n = int(rng.integers(d + 2, 10))
    pts = [tuple(F(int(v), 16) for v in p) for p in rng.integers(-32, 33, (n, d))]
    if R.affine_dimension(pts) < d:
        return
    x, depth = point_selection(pts)
    assert simplex_depth(pts, x) == depth
    P = np.array(pts, dtype=float)
    X = rng.uniform(P.min(0), P.max(0), (20000, d))
    assert _float_depth(P, X).max() <= depth


def test_vol_planes_examples():
    tri = [(0, 0), (4, 0), (0, 4)]
    out = vol_planes_refine([tri])
    assert out.subsets == ((0, 1, 2),) and out.cell.volume == 8
    sq = [(0, 0), (1, 0), (1, 1), (0, 1)]
    out = vol_planes_refine([sq])
    assert len(out.subsets[0]) == 3
    assert out.bound == F(1, 36) and out.ratio >= out.bound
    sq2 = [(F(1, 2), F(1, 4)), (F(3, 2), F(1, 4)), (F(3, 2), F(5, 4)), (F(1, 2), F(5, 4))]
    out = vol_planes_refine([sq, sq2])
    assert out.bound == F(1, 144) and out.ratio >= out.bound
    for S, X in zip(out.subsets, [sq, sq2]):
        simplex = ConvexBody(tuple(X[i] for i in S))
        assert all(simplex.hrep.contains(v) for v in out.cell.vertices)


@pytest.mark.parametrize("seed", range(5))
def test_vol_planes_cell_avoids_spanned_lines(seed):
    rng = np.random.default_rng(seed)
    sets = [[tuple(F(int(v), 8) for v in p) for p in rng.integers(0, 17, (int(rng.integers(3, 7)), 2))]
            for _ in range(2)]
    try:
        out = vol_planes_refine(sets)
    except DegenerateHull:
        return
    assert out.ratio >= out.bound
    inter = intersect_bodies([ConvexBody(tuple(X)) for X in sets])
    assert out.ratio == out.cell.volume / inter.volume
    for X in sets:
        for a, b in itertools.combinations(X, 2):
            if a == b:
                continue
            n = (b[1] - a[1], a[0] - b[0])
            vals = {(n[0] * (v[0] - a[0]) + n[1] * (v[1] - a[1])) for v in out.cell.extreme_vertices}
            assert not (min(vals) < 0 < max(vals))


def test_steinitz_examples():
    cross = [(2, 0), (-2, 0), (0, 2), (0, -2)]
    assert sorted(steinitz_reduce(cross)) == [0, 1, 2, 3]
    hexagon = [(F(2) * F(c).limit_denominator(10**6), F(2) * F(s).limit_denominator(10**6))
               for c, s in ((np.cos(k * pi / 3), np.sin(k * pi / 3)) for k in range(6))]
    idx = steinitz_reduce(hexagon)
    assert len(idx) <= 4
    assert ball_in_hull([hexagon[i] for i in idx], F(1, 20))
    # exhaustive oracle: some 4-subset works, and ours is the first such in lexicographic order
    good = [S for S in itertools.combinations(range(6), 4) if ball_in_hull([hexagon[i] for i in S], F(1, 20))]
    assert tuple(sorted(idx)) == good[0]
    with pytest.raises(PreconditionFailed):
        steinitz_reduce([(1, 1), (2, 1), (1, 2)])


def test_selection_quadratic_identical():
    fam = [box((0, 0), (1, 1))] * 8
    w = selection_quadratic(fam)
    assert w.fraction == 1 and w.tuple_size == 6
    assert w.witness.volume == pytest.approx(pi / 4, rel=1e-4)


def test_selection_quadratic_random_squares():
    from quantsel.harness.generate import random_squares

    fam = random_squares(n=8, seed=4).members
    w = selection_quadratic(fam)
    assert w.fraction > 0 and w.witness.volume >= 0.25 * (1 - 1e-4)
    hits, sampled = tuple_hits(fam, w.witness, 6)
    assert not sampled and len(hits) == len(w.hit_tuples)
    oracle = 0
    for t in itertools.combinations(range(8), 6):
        h, _ = convex_hull([v for i in t for v in fam[i].vertices])
        oracle += contains_ellipsoid(h, w.witness)
    assert F(oracle, comb(8, 6)) == w.fraction
    with pytest.raises(TooFewBodies):
        selection_quadratic(fam[:5])


def test_selection_2d_intervals():
    fam = [ConvexBody(((F(k, 10),), (F(k, 10) + 1,))) for k in range(6)]
    w = selection_2d(fam)
    assert w.tuple_size == 2 and w.fraction > 0
    s = selection_simplex(fam)
    assert s.tuple_size == 2 and s.fraction > 0


def test_selection_identical_bodies():
    fam = [box((0, 0), (1, 1))] * 8
    assert selection_2d(fam).fraction == 1
    w = selection_simplex(fam)
    assert w.fraction == 1 and w.tuple_size == 3


def test_selection_n30_sampled():
    from quantsel.harness.generate import random_squares

    fam = random_squares(n=30, window=3, seed=2).members
    for fn, alpha in ((selection_2d, 4), (selection_simplex, 3)):
        w = fn(fam, max_samples=2, limit=2000)
        assert w.tuple_size == alpha and w.fraction > 0
        for t in w.hit_tuples[:50]:
            h, _ = convex_hull([v for i in t for v in fam[i].vertices])
            assert contains_ellipsoid(h, w.witness)
        if fn is selection_simplex:
            assert w.meta["chainRatio"] >= w.meta["chainBound"]


def test_chain_bound_value():
    assert chain_bound(2, 3) == F(1, (3 * 6) ** 2 * 20**2 * 4)


def test_slab_instance():
    bodies = slab_instance(2, F(1, 4), 16)
    assert len(bodies) == 16 and all(b.volume == 1 for b in bodies)
    ys = sorted({b.extreme_vertices[0][1] for b in bodies})
    assert len(ys) == 4
    assert len(slab_instance(2, 1, 4)) == 4
    with pytest.raises(InvalidInput):
        slab_instance(2, F(1, 4), 10)


def _pierces(net, bodies, m):
    for S in itertools.combinations(range(len(bodies)), m):
        h, _ = convex_hull([v for i in S for v in bodies[i].vertices])
        if not any(contains_ellipsoid(h, e) for e in net.pieces):
            return False
    return True


def test_weak_epsnet_identical():
    fam = [box((0, 0), (1, 1))] * 6
    net = weak_epsnet(fam, F(1, 2), variant="simplex")
    assert len(net.pieces) == 1 and net.complete


def test_weak_epsnet_intervals_three_clusters():
    fam = [ConvexBody(((F(10 * c) + F(k, 8),), (F(10 * c) + F(k, 8) + 1,))) for c in range(3) for k in range(4)]
    net = weak_epsnet(fam, F(1, 3), variant="steinitz")
    assert net.complete and _pierces(net, fam, 4)
    assert len(net.pieces) <= 3


def test_weak_epsnet_slab_monotone():
    bodies = slab_instance(2, F(1, 2), 8)
    big = weak_epsnet(bodies, F(1, 2), variant="simplex")
    small = weak_epsnet(bodies, F(1, 4), variant="simplex")
    assert len(small.pieces) >= len(big.pieces) >= 2
    assert big.complete and _pierces(big, bodies, 4)
