import itertools
from fractions import Fraction as F
from math import ceil

import numpy as np
import pytest
from scipy.spatial import Delaunay

from conftest import rand_polygon
from quantsel.errors import HalvingDegenerate, InvalidInput, NotFound, Unsupported
from quantsel.geometry import ConvexBody, Mixed, OrderType, box, contains_ellipsoid, family_order_type, orientation
from quantsel.sametype import (
    Counterexample, MeasureFamily, fractional_helly_search, ham_sandwich_2d, homogeneous_selection_bruteforce,
    measure_below, resize_to_volume, same_type_refine, separability_check,
)


def sq(x, y, s=1):
    return box((F(x), F(y)), (F(x) + s, F(y) + s))


def test_ham_sandwich_symmetric_examples():
    h = ham_sandwich_2d(MeasureFamily([sq(F(-1, 2), F(-1, 2))]), MeasureFamily([sq(F(19, 2), F(-1, 2))]))
    assert h.normal[0] == 0 and h.offset == 0
    h = ham_sandwich_2d(MeasureFamily([sq(F(-1, 2), F(-1, 2))]), MeasureFamily([sq(F(-1, 2), F(19, 2))]))
    assert h.normal[1] == 0 and h.offset == 0


def _mc_below(polys, normal, offset, rng, samples=10**6):
    """Monte Carlo mass of {<n, x> <= c} under the sum of polygon measures, with 3 sigma."""
    est, var = 0.0, 0.0
    n = np.array([float(v) for v in normal])
    per = samples // len(polys)
    for P in polys:
        V = np.array([[float(x) for x in v] for v in P.vertices])
        lo, hi = V.min(0), V.max(0)
        area = float(np.prod(hi - lo))
        X = lo + (hi - lo) * rng.random((per, 2))
        hit = (Delaunay(V).find_simplex(X) >= 0) & (X @ n <= float(offset))
        p = hit.mean()
        est += area * p
        var += area**2 * p * (1 - p) / per
    return est, 3 * np.sqrt(var)


@pytest.mark.parametrize("seed", range(3))
def test_ham_sandwich_random_hexagons(seed):
    rng = np.random.default_rng(seed)
    m1 = MeasureFamily([ConvexBody(tuple((x + 3 * k, y) for x, y in rand_polygon(rng, 6))) for k in range(2)])
    m2 = MeasureFamily([ConvexBody(tuple((x + 2 * k, y + 3) for x, y in rand_polygon(rng, 6))) for k in range(2)])
    h = ham_sandwich_2d(m1, m2)
    for mu in (m1, m2):
        below = measure_below(mu, h.normal, h.offset)
        assert abs(below - mu.total / 2) < F(1, 10**9) * mu.total
        # flipping orientation gives the complementary half
        above = measure_below(mu, tuple(-v for v in h.normal), -h.offset)
        assert abs(above - mu.total / 2) < F(1, 10**9) * mu.total
        est, err = _mc_below(mu.bodies, h.normal, h.offset, rng)
        assert abs(est - float(mu.total) / 2) <= err + 1e-9


def test_ham_sandwich_unsupported_in_3d():
    cube = MeasureFamily([box((0, 0, 0), (1, 1, 1))])
    with pytest.raises(Unsupported):
        ham_sandwich_2d(cube, cube)


def _tiny(cx, cy):
    return ConvexBody(((cx, cy), (cx + F(1, 10), cy), (cx, cy + F(1, 10))))


def test_separability_examples():
    fams = [[_tiny(0, 0)], [_tiny(100, 0)], [_tiny(0, 100)]]
    seps = separability_check(fams)
    assert len(seps) == 3
    for I, h in seps:
        for j, f in enumerate(fams):
            for v in f[0].vertices:
                s = sum(a * x for a, x in zip(h.normal, v)) - h.offset
                assert (s < 0) if j in I else (s > 0)
    inter = [[sq(0, 0), sq(4, 4)], [sq(4, 0), sq(0, 4)], [sq(2, 10)]]
    assert isinstance(separability_check(inter), Counterexample)


@pytest.mark.parametrize("seed", range(50))
def test_separated_implies_order_type(seed):
    rng = np.random.default_rng(seed)
    centers = rng.uniform(-20, 20, (3, 2))
    fams = [[ConvexBody(tuple((x + F(int(round(c[0]))), y + F(int(round(c[1]))))
                              for x, y in rand_polygon(rng, 4, scale=1.5))) for _ in range(2)] for c in centers]
    seps = separability_check(fams)
    if isinstance(seps, Counterexample):
        return
    hulls = [ConvexBody(tuple(v for b in f for v in b.vertices)) for f in fams]
    assert isinstance(family_order_type(hulls), OrderType)
    # exhaustive over vertex products
    vsets = [[v for b in f for v in b.vertices] for f in fams]
    assert len({orientation(sel) for sel in itertools.product(*vsets)}) == 1


def test_resize_to_volume_exact():
    tri = ConvexBody(((0, 0), (3, 0), (1, 2)))
    for t in (F(1, 3), F(2), F(3)):
        r = resize_to_volume(tri, t)
        assert r.volume == t
        assert all(tri.hrep.contains(v) for v in r.vertices)
    assert resize_to_volume(ConvexBody(((0,), (4,))), 1).volume == 1
    with pytest.raises(InvalidInput):
        resize_to_volume(tri, 4)


def _check_certificate(fams, cert, alpha=F(1, 3)):
    d = fams[0][0].dim
    m = len(fams)
    steps = (2**d - 1) * len(list(itertools.combinations(range(m), d + 1)))
    rho = min(b.volume for f in fams for b in f)
    for f, t, ps in zip(fams, cert.trimmed, cert.parents):
        assert len(t) >= (1 - 1 / (2 * (1 - alpha))) ** steps * len(f)
        for b, p in zip(t, ps):
            assert all(f[p].hrep.contains(v) for v in b.vertices)
            assert b.volume >= alpha**steps * rho
    hulls = [ConvexBody(tuple(v for b in t for v in b.vertices)) for t in cert.trimmed]
    ot = family_order_type(hulls)
    assert isinstance(ot, OrderType) and ot.signs == cert.order_type.signs
    vsets = [[v for b in t for v in b.vertices] for t in cert.trimmed]
    total = np.prod([len(v) for v in vsets])
    sels = itertools.product(*vsets) if total <= 10**5 else None
    if sels is not None:
        for sel in sels:
            for S in itertools.combinations(range(m), d + 1):
                assert orientation([sel[i] for i in S]) == ot[S]
    for J, I, h in cert.separators:
        for j in J:
            for b in cert.trimmed[j]:
                for v in b.vertices:
                    s = sum(a * x for a, x in zip(h.normal, v)) - h.offset
                    assert (s < 0) if j in I else (s > 0)


def test_same_type_stacked_squares_lose_nothing():
    fams = [[sq(0, 0)] * 4, [sq(100, 0)] * 4, [sq(50, 100)] * 4]
    cert = same_type_refine(fams)
    assert [len(t) for t in cert.trimmed] == [4, 4, 4]
    _check_certificate(fams, cert)


def test_same_type_grid_clusters():
    fams = [[sq(ox + 2 * (i % 2), oy + 2 * (i // 2)) for i in range(4)] for ox, oy in ((0, 0), (100, 0), (50, 100))]
    cert = same_type_refine(fams)
    _check_certificate(fams, cert)


def test_same_type_interleaved_eight():
    rng = np.random.default_rng(11)
    fams = [[sq(F(int(a), 16), F(int(b), 16)) for a, b in rng.integers(0, 64, (8, 2))] for _ in range(3)]
    cert = same_type_refine(fams)
    assert all(len(t) >= ceil(8 / 64) for t in cert.trimmed)
    assert min(b.volume for t in cert.trimmed for b in t) >= F(1, 27)
    _check_certificate(fams, cert)


def test_same_type_single_bodies_and_subbodies():
    fams = [[_tiny(0, 0)], [_tiny(100, 0)], [_tiny(0, 100)]]
    cert = same_type_refine(fams)
    _check_certificate(fams, cert)
    # order type is stable under passing to sub-bodies
    subs = [[resize_to_volume(b, b.volume / 7) for b in t] for t in cert.trimmed]
    hulls = [ConvexBody(tuple(v for b in t for v in b.vertices)) for t in subs]
    assert family_order_type(hulls).signs == cert.order_type.signs


def test_same_type_four_families_and_d1():
    fams = [[sq(x, y)] * 2 for x, y in ((0, 0), (50, 0), (0, 50), (60, 70))]
    cert = same_type_refine(fams)
    _check_certificate(fams, cert)
    line = [[ConvexBody(((F(c + k, 4),), (F(c + k, 4) + 1,))) for k in range(3)] for c in (0, 40)]
    cert = same_type_refine(line)
    _check_certificate(line, cert)


def test_same_type_rejects_bad_alpha():
    with pytest.raises(InvalidInput):
        same_type_refine([[sq(0, 0)]] * 3, alpha=F(1, 2))


def test_fractional_helly_examples():
    fam = [sq(0, 0)] * 5
    sub, w = fractional_helly_search(fam, 3, F(1, 2))
    assert sub == tuple(range(5))
    core = [sq(F(k, 10), F(k % 2, 10)) for k in range(6)]
    bodies = core + [sq(10, 10), sq(-10, 5)]
    sub, w = fractional_helly_search(bodies, 3, F(1, 8))
    assert set(range(6)) <= set(sub)
    assert w.volume >= 1 / 8 * (1 - 1e-4)
    for i, b in enumerate(bodies):
        assert contains_ellipsoid(b.hrep, w) == (i in sub)
    with pytest.raises(NotFound):
        fractional_helly_search([sq(3 * k, 0) for k in range(4)], 2, F(1, 100))


def test_homogeneous_examples():
    iv = lambda a, b: ConvexBody(((F(a),), (F(b),)))
    fa = [iv(-1 + F(k, 10), 1 + F(k, 10)) for k in range(4)]
    fb = [iv(-1 - F(k, 10), 1 - F(k, 10)) for k in range(4)]
    subs, w = homogeneous_selection_bruteforce([fa, fb], F(1, 2))
    assert [len(s) for s in subs] == [2, 2]
    for i, j in itertools.product(*subs):
        hull = ConvexBody(fa[i].vertices + fb[j].vertices)
        assert contains_ellipsoid(hull.hrep, w)
    with pytest.raises(NotFound):
        homogeneous_selection_bruteforce([[iv(0, 1), iv(10, 11)], [iv(20, 21), iv(-20, -19)]], 1)


def test_homogeneous_planar_tiny():
    fams = [[sq(x + F(k, 4), y) for k in range(3)] for x, y in ((0, 0), (20, 0), (10, 20))]
    subs, w = homogeneous_selection_bruteforce(fams, F(2, 3))
    assert [len(s) for s in subs] == [2, 2, 2]
    hulls = [ConvexBody(tuple(v for i in s for v in fams[j][i].vertices)) for j, s in enumerate(subs)]
    assert isinstance(family_order_type(hulls), OrderType)
    for T in itertools.product(*subs):
        hull = ConvexBody(tuple(v for j, i in enumerate(T) for v in fams[j][i].vertices))
        assert contains_ellipsoid(hull.hrep, w)
