import itertools
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.spatial import ConvexHull

from conftest import rand_polygon
from quantsel.ellipsoid import Ellipsoid, ball
from quantsel.errors import DegenerateHull
from quantsel.geometry import (
    ConvexBody, Hyperplane, Mixed, OrderType, arrangement_cells, box, clip_body, contains_ellipsoid,
    convex_hull, family_order_type, intersect_bodies, order_type_of, orientation, point_in_hull,
    polytope_volume,
)

coord = st.fractions(min_value=-10, max_value=10, max_denominator=16)
pt2 = st.tuples(coord, coord)


def test_orientation_examples():
    assert orientation([(0, 0), (1, 0), (0, 1)]) == 1
    assert orientation([(0, 0), (1, 1), (2, 2)]) == 0
    assert orientation([(0, 0), (0, 1), (1, 0)]) == -1


@given(st.lists(pt2, min_size=3, max_size=3), pt2)
def test_orientation_antisymmetric_and_translation_invariant(pts, t):
    s = orientation(pts)
    assert orientation([pts[1], pts[0], pts[2]]) == -s
    assert orientation([pts[0], pts[2], pts[1]]) == -s
    assert orientation([(p[0] + t[0], p[1] + t[1]) for p in pts]) == s


def test_hull_examples():
    h, v = convex_hull([(0, 0), (1, 0), (1, 1), (0, 1)])
    assert len(h.halfspaces) == 4 and len(v) == 4
    _, v = convex_hull([(0, 0), (2, 0), (2, 2), (0, 2), (1, 1)])
    assert len(v) == 4
    with pytest.raises(DegenerateHull) as err:
        convex_hull([(0, 0), (1, 1), (2, 2)])
    assert err.value.dim == 1


def test_volume_examples():
    assert polytope_volume(box((0, 0), (1, 1))) == 1
    assert polytope_volume(ConvexBody(((0, 0), (1, 0), (0, 1)))) == F(1, 2)
    assert polytope_volume(ConvexBody(((0, 0), (1, 1), (2, 2)))) == 0


@pytest.mark.parametrize("seed", range(10))
@pytest.mark.parametrize("d", [2, 3])
def test_volume_matches_qhull(seed, d):
    rng = np.random.default_rng(seed)
    pts = [tuple(F(int(x), 32) for x in row) for row in rng.integers(-64, 65, (12, d))]
    ref = ConvexHull(np.array(pts, dtype=float)).volume
    assert float(polytope_volume(ConvexBody(tuple(pts)))) == pytest.approx(ref, rel=1e-12)


@given(st.lists(pt2, min_size=3, max_size=8), st.floats(0.01, 0.99), st.floats(0.01, 0.99))
def test_interior_point_keeps_volume(pts, a, b):
    body = ConvexBody(tuple(pts))
    if body.volume == 0:
        return
    verts = body.extreme_vertices
    # a strict convex combination of three hull vertices stays inside
    a, b = F(a).limit_denominator(100), F(b).limit_denominator(100)
    w = [a * b, a * (1 - b), 1 - a]
    x = tuple(sum(wi * v[k] for wi, v in zip(w, verts[:3])) for k in range(2))
    assert ConvexBody(tuple(pts) + (x,)).volume == body.volume


def test_intersection_examples():
    sq = box((0, 0), (1, 1))
    r = intersect_bodies([sq, box((F(1, 2), 0), (F(3, 2), 1))])
    assert r.volume == F(1, 2)
    assert intersect_bodies([sq, box((5, 5), (6, 6))]) is None
    assert set(intersect_bodies([sq, sq]).extreme_vertices) == set(sq.extreme_vertices)


@pytest.mark.parametrize("seed", range(8))
def test_intersection_against_sampling(seed):
    rng = np.random.default_rng(seed)
    A = ConvexBody(tuple(rand_polygon(rng, 8)))
    B = ConvexBody(tuple((x + F(1, 3), y) for x, y in rand_polygon(rng, 8)))
    inter = intersect_bodies([A, B])
    X = rng.uniform(-1.5, 1.5, (4000, 2))
    for x in X[:400]:
        q = tuple(F(v) for v in x)
        inside = A.contains_point(q) and B.contains_point(q)
        assert inside == (inter is not None and inter.contains_point(q))


def test_clip_body_halves_square():
    sq = box((0, 0), (2, 2))
    left = clip_body(sq, (1, 0), 1)
    assert left.volume == 2
    assert clip_body(sq, (1, 0), -1) is None


def test_contains_ellipsoid_examples():
    disk = ball((0, 0), 1)
    assert contains_ellipsoid(box((-2, -2), (2, 2)).hrep, disk)
    assert not contains_ellipsoid(box((F(-1, 2), F(-1, 2)), (F(1, 2), F(1, 2))).hrep, disk)
    # reaches x = 5/2, outside the box; shifted by 1 it is tangent and inside
    assert not contains_ellipsoid(box((-2, -2), (2, 2)).hrep, ball((F(3, 2), 0), 1))
    assert contains_ellipsoid(box((-2, -2), (2, 2)).hrep, ball((1, 0), 1))
    # tangent is contained (closed sets)
    assert contains_ellipsoid(box((-1, -1), (1, 1)).hrep, disk)


@pytest.mark.parametrize("seed", range(20))
def test_contains_ellipsoid_agrees_with_boundary_sampling(seed):
    rng = np.random.default_rng(seed)
    body = ConvexBody(tuple(rand_polygon(rng, 9, scale=2)))
    L = rng.uniform(-0.8, 0.8, (2, 2))
    A = L @ L.T + 0.05 * np.eye(2)
    shape = tuple(tuple(F(x).limit_denominator(100) for x in row) for row in (A + A.T) / 2)
    e = Ellipsoid(shape, tuple(F(x).limit_denominator(50) for x in rng.uniform(-0.3, 0.3, 2)))
    claim = contains_ellipsoid(body.hrep, e)
    Af, b = body.hrep.as_arrays()
    P = e.boundary_points(10**4)
    sampled = bool(np.all(P @ Af.T <= b + 1e-12))
    if claim:
        assert sampled
    elif sampled:
        # sampling can only miss a violation by the gap between samples
        slack = (P @ Af.T - b).max()
        assert slack > -1e-6


def test_arrangement_examples():
    sq = box((-1, -1), (1, 1))
    cells = arrangement_cells([Hyperplane((1, 0), 0), Hyperplane((0, 1), 0)], sq)
    assert len(cells) == 4
    assert sum(c.volume for _, c in cells) == 4
    assert len(arrangement_cells([Hyperplane((1, 1), 0)], sq)) == 2


@pytest.mark.parametrize("m", range(1, 7))
def test_generic_lines_cell_count(m):
    rng = np.random.default_rng(m)
    planes = [Hyperplane((F(int(a), 7), F(int(b), 7)), F(int(c), 11))
              for a, b, c in rng.integers(1, 30, (m, 3)) * np.array([1, -1, 1]) ** rng.integers(0, 2, (m, 3))]
    region = box((-1000, -1000), (1000, 1000))
    cells = arrangement_cells(planes, region)
    # brute-force: distinct sign vectors on a dense sample of the region
    X = rng.uniform(-1000, 1000, (20000, 2))
    N = np.array([[float(v) for v in h.normal] for h in planes])
    off = np.array([float(h.offset) for h in planes])
    signs = {tuple(r) for r in (X @ N.T > off)}
    assert len(cells) == 1 + m + m * (m - 1) // 2
    assert len(signs) <= len(cells)
    assert sum(c.volume for _, c in cells) == region.volume
    for sample, cell in cells:
        for h in planes:
            vals = {np.sign(float(sum(a * x for a, x in zip(h.normal, v)) - h.offset)) for v in cell.extreme_vertices}
            assert not ({1.0, -1.0} <= vals)


def test_order_type_examples():
    ot = order_type_of([(0, 0), (1, 0), (0, 1)])
    assert set(ot.signs.values()) <= {1, -1} and len(ot) == 1
    sq = order_type_of([(0, 0), (1, 0), (1, 1), (0, 1)])
    assert all(v != 0 for v in sq.signs.values())
    for S, v in sq.signs.items():
        assert v == orientation([[(0, 0), (1, 0), (1, 1), (0, 1)][i] for i in S])
    assert order_type_of([(0, 0), (1, 1), (2, 2), (5, 0)])[(0, 1, 2)] == 0


def _tri(cx, cy, s=F(1, 10)):
    return ConvexBody(((cx, cy), (cx + s, cy), (cx, cy + s)))


def test_family_order_type_examples():
    ot = family_order_type([_tri(0, 0), _tri(10, 0), _tri(0, 10)])
    assert isinstance(ot, OrderType) and ot[(0, 1, 2)] == 1
    mixed = family_order_type([box((0, 0), (2, 2)), box((1, 1), (3, 3)), box((F(3, 2), 0), (2, F(1, 2)))])
    assert isinstance(mixed, Mixed)
    assert orientation(mixed.first) != orientation(mixed.second)
    pts = [(0, 0), (3, 1), (1, 4)]
    assert family_order_type([ConvexBody((p,)) for p in pts]).signs == order_type_of(pts).signs


@pytest.mark.parametrize("seed", range(10))
def test_family_order_type_holds_for_interior_selections(seed):
    rng = np.random.default_rng(seed)
    bodies = [ConvexBody(tuple((x / 8 + 5 * c[0], y / 8 + 5 * c[1]) for x, y in rand_polygon(rng, 5)))
              for c in [(0, 0), (1, 0), (0, 1), (1, 1)]]
    ot = family_order_type(bodies)
    if isinstance(ot, Mixed):
        return
    for _ in range(50):
        sel = []
        for b in bodies:
            w = rng.dirichlet(np.ones(len(b.extreme_vertices)))
            w = [F(x).limit_denominator(1000) for x in w]
            w[-1] = 1 - sum(w[:-1])
            sel.append(tuple(sum(wi * v[k] for wi, v in zip(w, b.extreme_vertices)) for k in range(2)))
        for S in itertools.combinations(range(4), 3):
            assert orientation([sel[i] for i in S]) == ot[S]


def test_point_in_hull():
    assert point_in_hull([(0, 0), (2, 0), (0, 2)], (F(1, 2), F(1, 2))) is not None
    assert point_in_hull([(0, 0), (2, 0), (0, 2)], (2, 2)) is None
