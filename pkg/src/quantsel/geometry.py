"""Exact geometric primitives on V-polytopes.

All coordinates are :class:`fractions.Fraction`. Predicates are exact;
the 2-d orientation test runs a floating-point filter first and only
falls back to rationals when the float answer is too close to call.
"""
from dataclasses import dataclass, field
from functools import cached_property
from fractions import Fraction
from itertools import combinations, product
from math import factorial

import numpy as np

from . import _rational as R
from .errors import DegenerateHull, InvalidInput
from .lp import convex_weights

__all__ = [
    "Point", "point", "Hyperplane", "HRep", "ConvexBody", "OrderType", "Mixed",
    "orientation", "convex_hull", "polytope_volume", "intersect_bodies",
    "contains_ellipsoid", "arrangement_cells", "order_type_of", "family_order_type",
    "point_in_hull", "box", "clip_body",
]

Point = tuple  # tuple of Fractions


def point(*coords):
    if len(coords) == 1 and not isinstance(coords[0], (int, float, str, Fraction)):
        coords = tuple(coords[0])
    if not coords:
        raise InvalidInput("a point needs at least one coordinate")
    return R.qvec(coords)


@dataclass(frozen=True)
class Hyperplane:
    """The hyperplane ``<normal, x> = offset``."""

    normal: tuple
    offset: Fraction

    def __post_init__(self):
        object.__setattr__(self, "normal", R.qvec(self.normal))
        object.__setattr__(self, "offset", R.q(self.offset))
        if all(a == 0 for a in self.normal):
            raise InvalidInput("hyperplane normal must be nonzero")

    @property
    def dim(self):
        return len(self.normal)

    def side(self, x):
        v = R.dot(self.normal, x) - self.offset
        return (v > 0) - (v < 0)

    def flipped(self):
        return Hyperplane(tuple(-a for a in self.normal), -self.offset)

    @classmethod
    def through(cls, points):
        """Hyperplane spanned by ``d`` affinely independent points in R^d."""
        points = [R.qvec(p) for p in points]
        d = len(points[0])
        if len(points) != d:
            raise InvalidInput(f"need exactly {d} points to span a hyperplane in R^{d}")
        if d == 1:
            return cls((Fraction(1),), points[0][0])
        rows = [R.sub(p, points[0]) for p in points[1:]]
        ns = R.nullspace(rows, d)
        if len(ns) != 1:
            raise DegenerateHull(R.affine_dimension(points), "points do not span a hyperplane")
        a = _primitive(ns[0])
        return cls(a, R.dot(a, points[0]))


def _primitive(v):
    """Canonical positive multiple of a rational vector (integer, gcd 1, first nonzero > 0)."""
    from math import gcd, lcm

    den = 1
    for x in v:
        den = lcm(den, x.denominator)
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    first = next(x for x in ints if x != 0)
    s = g if first > 0 else -g
    return tuple(Fraction(x // s) for x in ints)


@dataclass(frozen=True)
class HRep:
    """Intersection of half-spaces ``<a, x> <= b``."""

    halfspaces: tuple
    dim: int

    def contains(self, x, strict=False):
        for a, b in self.halfspaces:
            v = R.dot(a, x)
            if v > b or (strict and v == b):
                return False
        return True

    def slack(self, x):
        return [b - R.dot(a, x) for a, b in self.halfspaces]

    def as_arrays(self):
        A = np.array([[float(v) for v in a] for a, _ in self.halfspaces], dtype=float)
        b = np.array([float(b) for _, b in self.halfspaces], dtype=float)
        return A, b


@dataclass(frozen=True, eq=False)
class ConvexBody:
    """A V-polytope: the convex hull of ``vertices``."""

    vertices: tuple

    def __post_init__(self):
        verts = tuple(R.qvec(v) for v in self.vertices)
        if not verts:
            raise InvalidInput("a convex body needs at least one vertex")
        d = len(verts[0])
        if d < 1 or any(len(v) != d for v in verts):
            raise InvalidInput("all vertices must share one dimension >= 1")
        object.__setattr__(self, "vertices", verts)

    def __eq__(self, other):
        return isinstance(other, ConvexBody) and set(self.vertices) == set(other.vertices)

    def __hash__(self):
        return hash(frozenset(self.vertices))

    def __repr__(self):
        return f"ConvexBody({len(self.vertices)} vertices, d={self.dim})"

    @property
    def dim(self):
        return len(self.vertices[0])

    @cached_property
    def affine_dim(self):
        return R.affine_dimension(set(self.vertices))

    @property
    def full_dimensional(self):
        return self.affine_dim == self.dim

    @cached_property
    def _hull(self):
        return convex_hull(self.vertices)

    @property
    def hrep(self):
        return self._hull[0]

    @property
    def extreme_vertices(self):
        return self._hull[1]

    @cached_property
    def volume(self):
        return polytope_volume(self)

    @cached_property
    def centroid(self):
        """Average of the distinct vertices (relatively interior point)."""
        vs = sorted(set(self.vertices))
        n = len(vs)
        return tuple(sum(v[k] for v in vs) / n for k in range(self.dim))

    def contains_point(self, x):
        if self.full_dimensional:
            return self.hrep.contains(x)
        return point_in_hull(self.vertices, x) is not None

    def map_affine(self, M, t):
        """Image under ``x -> M x + t``."""
        return ConvexBody(tuple(R.add(R.matvec(M, v), t) for v in self.vertices))

    def translate(self, t):
        return ConvexBody(tuple(R.add(v, t) for v in self.vertices))

    def scaled(self, s, about=None):
        s = R.q(s)
        c = self.centroid if about is None else R.qvec(about)
        return ConvexBody(tuple(R.add(c, R.scale(s, R.sub(v, c))) for v in self.vertices))

    def bounding_box(self):
        lo = tuple(min(v[k] for v in self.vertices) for k in range(self.dim))
        hi = tuple(max(v[k] for v in self.vertices) for k in range(self.dim))
        return lo, hi

    def as_array(self):
        return np.array([[float(x) for x in v] for v in self.vertices], dtype=float)


def box(lo, hi):
    """Axis-parallel box with corners ``lo`` and ``hi``."""
    lo, hi = R.qvec(lo), R.qvec(hi)
    return ConvexBody(tuple(product(*[(a, b) for a, b in zip(lo, hi)])))


# ---------------------------------------------------------------- orientation

_FILTER = 1e-13


def _orient2(a, b, c):
    fa = (float(a[0]), float(a[1]))
    fb = (float(b[0]), float(b[1]))
    fc = (float(c[0]), float(c[1]))
    det = (fa[0] - fc[0]) * (fb[1] - fc[1]) - (fa[1] - fc[1]) * (fb[0] - fc[0])
    m = max(abs(fa[0]), abs(fa[1]), abs(fb[0]), abs(fb[1]), abs(fc[0]), abs(fc[1]))
    if abs(det) > _FILTER * m * m and np.isfinite(det):
        return 1 if det > 0 else -1
    det = (a[0] - c[0]) * (b[1] - c[1]) - (a[1] - c[1]) * (b[0] - c[0])
    return (det > 0) - (det < 0)


def orientation(points):
    """Sign of ``det(x_1 - x_{d+1}, ..., x_d - x_{d+1})`` for ``d+1`` points in R^d."""
    points = [R.qvec(p) for p in points]
    if not points:
        raise InvalidInput("orientation needs d+1 points")
    d = len(points[0])
    if len(points) != d + 1 or any(len(p) != d for p in points):
        raise InvalidInput(f"orientation needs exactly {d + 1} points of dimension {d}")
    if d == 1:
        v = points[0][0] - points[1][0]
        return (v > 0) - (v < 0)
    if d == 2:
        return _orient2(*points)
    last = points[-1]
    v = R.det([R.sub(p, last) for p in points[:-1]])
    return (v > 0) - (v < 0)


# ---------------------------------------------------------------- hulls

def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _hull2(points):
    pts = sorted(set(points))
    if len(pts) == 1:
        raise DegenerateHull(0)
    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    ring = lower[:-1] + upper[:-1]
    if len(ring) < 3:
        raise DegenerateHull(1)
    halfspaces = []
    for i, p in enumerate(ring):
        nxt = ring[(i + 1) % len(ring)]
        a = (nxt[1] - p[1], p[0] - nxt[0])
        halfspaces.append((a, a[0] * p[0] + a[1] * p[1]))
    return HRep(tuple(halfspaces), 2), tuple(ring)


def _hull1(points):
    xs = [p[0] for p in points]
    lo, hi = min(xs), max(xs)
    if lo == hi:
        raise DegenerateHull(0)
    hs = (((Fraction(-1),), -lo), ((Fraction(1),), hi))
    return HRep(hs, 1), ((lo,), (hi,))


def _facet_from(points, idx, all_pts):
    d = len(points[0])
    base = points[idx[0]]
    rows = [R.sub(points[i], base) for i in idx[1:]]
    ns = R.nullspace(rows, d)
    if len(ns) != 1:
        return None
    a = _primitive(ns[0])
    b = R.dot(a, base)
    above = below = False
    for p in all_pts:
        v = R.dot(a, p) - b
        if v > 0:
            above = True
        elif v < 0:
            below = True
        if above and below:
            return None
    if above:
        a = tuple(-x for x in a)
        b = -b
    return a, b


def _hull_nd(points):
    pts = sorted(set(points))
    d = len(pts[0])
    adim = R.affine_dimension(pts)
    if adim < d:
        raise DegenerateHull(adim)
    facets = None
    try:
        from scipy.spatial import ConvexHull as _QH

        qh = _QH(np.array([[float(x) for x in p] for p in pts]))
        cand = {}
        ridges = {}
        ok = True
        for simplex in qh.simplices:
            simplex = tuple(sorted(int(i) for i in simplex))
            f = _facet_from(pts, simplex, pts)
            if f is None:
                ok = False
                break
            cand[f] = True
            for ridge in combinations(simplex, d - 1):
                ridges[ridge] = ridges.get(ridge, 0) + 1
        if ok and all(c == 2 for c in ridges.values()):
            facets = list(cand)
    except Exception:  # qhull precision trouble: fall through to brute force
        facets = None
    if facets is None:
        found = {}
        for idx in combinations(range(len(pts)), d):
            f = _facet_from(pts, idx, pts)
            if f is not None:
                found[f] = True
        facets = list(found)
    verts = []
    for p in pts:
        normals = [a for a, b in facets if R.dot(a, p) == b]
        if len(normals) >= d and R.rank(normals) == d:
            verts.append(p)
    return HRep(tuple(facets), d), tuple(verts)


def convex_hull(points):
    """Exact facet description and extreme vertices of ``conv(points)``.

    Returns ``(HRep, vertices)``. In the plane the vertices come in
    counter-clockwise order starting from the lexicographically smallest.
    Raises :class:`DegenerateHull` when the points are not full-dimensional.
    """
    points = [R.qvec(p) for p in points]
    if not points:
        raise InvalidInput("convex_hull of an empty set")
    d = len(points[0])
    if any(len(p) != d for p in points):
        raise InvalidInput("mixed dimensions")
    if d == 1:
        return _hull1(points)
    if d == 2:
        return _hull2(points)
    return _hull_nd(points)


# ---------------------------------------------------------------- volume

def _polygon_area(ring):
    s = Fraction(0)
    n = len(ring)
    for i in range(n):
        x1, y1 = ring[i]
        x2, y2 = ring[(i + 1) % n]
        s += x1 * y2 - x2 * y1
    return abs(s) / 2


def _triangulate(verts, facets):
    """Pulling triangulation of a full-dimensional polytope."""
    d = len(verts[0])
    incid = [frozenset(i for i, v in enumerate(verts) if R.dot(a, v) == b) for a, b in facets]
    dim_cache = {}

    def fdim(S):
        if S not in dim_cache:
            dim_cache[S] = R.affine_dimension([verts[i] for i in S])
        return dim_cache[S]

    def tri(S, k):
        if k == 0:
            return [[next(iter(S))]]
        v0 = min(S)
        subs = set()
        for F in incid:
            T = S & F
            if T != S and len(T) >= k and fdim(T) == k - 1:
                subs.add(T)
        out = []
        for T in subs:
            if v0 in T:
                continue
            for tau in tri(T, k - 1):
                out.append(tau + [v0])
        return out

    return tri(frozenset(range(len(verts))), d)


def polytope_volume(body):
    """Exact d-volume of a V-polytope (0 when it is lower-dimensional)."""
    if not isinstance(body, ConvexBody):
        body = ConvexBody(tuple(body))
    if not body.full_dimensional:
        return Fraction(0)
    d = body.dim
    verts = body.extreme_vertices
    if d == 1:
        return verts[1][0] - verts[0][0]
    if d == 2:
        return _polygon_area(verts)
    total = Fraction(0)
    for simplex in _triangulate(verts, body.hrep.halfspaces):
        base = verts[simplex[0]]
        total += abs(R.det([R.sub(verts[i], base) for i in simplex[1:]]))
    return total / factorial(d)


# ---------------------------------------------------------------- clipping

def _clip_ring(ring, a, b):
    """Sutherland-Hodgman: part of a ccw polygon with ``<a,x> <= b``."""
    out = []
    n = len(ring)
    vals = [a[0] * p[0] + a[1] * p[1] - b for p in ring]
    for i in range(n):
        p, vp = ring[i], vals[i]
        nxt, vn = ring[(i + 1) % n], vals[(i + 1) % n]
        if vp <= 0:
            out.append(p)
        if (vp < 0 < vn) or (vn < 0 < vp):
            t = vp / (vp - vn)
            out.append((p[0] + t * (nxt[0] - p[0]), p[1] + t * (nxt[1] - p[1])))
    cleaned = []
    for p in out:
        if not cleaned or cleaned[-1] != p:
            cleaned.append(p)
    if len(cleaned) > 1 and cleaned[0] == cleaned[-1]:
        cleaned.pop()
    # drop collinear middle points so the ring stays a vertex list
    changed = True
    while changed and len(cleaned) >= 3:
        changed = False
        for i in range(len(cleaned)):
            if _cross(cleaned[i - 1], cleaned[i], cleaned[(i + 1) % len(cleaned)]) == 0:
                del cleaned[i]
                changed = True
                break
    return cleaned


def _clip_generic(verts, a, b):
    inside = [v for v in verts if R.dot(a, v) <= b]
    plus = [(v, R.dot(a, v) - b) for v in verts]
    above = [(v, s) for v, s in plus if s > 0]
    below = [(v, s) for v, s in plus if s < 0]
    for (u, su), (w, sw) in product(below, above):
        t = su / (su - sw)
        inside.append(R.add(u, R.scale(t, R.sub(w, u))))
    return inside


def clip_body(body, a, b):
    """``body ∩ {<a,x> <= b}`` as a ConvexBody, or None if it has no interior."""
    a, b = R.qvec(a), R.q(b)
    if body.dim == 2:
        ring = _clip_ring(list(body.extreme_vertices), a, b)
        if len(ring) < 3:
            return None
        return _ring_body(ring)
    pts = _clip_generic(body.extreme_vertices, a, b)
    if not pts or R.affine_dimension(set(pts)) < body.dim:
        return None
    return _reduced_body(pts)


def _ring_body(ring):
    body = ConvexBody(tuple(ring))
    # the ring is already a ccw extreme-vertex list; seed the cache
    hs = []
    for i, p in enumerate(ring):
        nxt = ring[(i + 1) % len(ring)]
        a = (nxt[1] - p[1], p[0] - nxt[0])
        hs.append((a, a[0] * p[0] + a[1] * p[1]))
    start = min(range(len(ring)), key=lambda i: ring[i])
    ring = ring[start:] + ring[:start]
    hs = hs[start:] + hs[:start]
    body.__dict__["_hull"] = (HRep(tuple(hs), 2), tuple(ring))
    body.__dict__["affine_dim"] = 2
    object.__setattr__(body, "vertices", tuple(ring))
    return body


def _reduced_body(points):
    hrep, verts = convex_hull(points)
    body = ConvexBody(verts)
    body.__dict__["_hull"] = (hrep, verts)
    body.__dict__["affine_dim"] = len(verts[0])
    return body


def intersect_bodies(bodies):
    """Exact V-polytope of the intersection of the bodies' hulls.

    Returns None when the intersection is empty or has measure zero.
    """
    bodies = list(bodies)
    if not bodies:
        raise InvalidInput("intersect_bodies needs at least one body")
    d = bodies[0].dim
    if any(b.dim != d for b in bodies):
        raise InvalidInput("bodies must share a dimension")
    if any(not b.full_dimensional for b in bodies):
        return None
    if d == 1:
        lo = max(b.extreme_vertices[0][0] for b in bodies)
        hi = min(b.extreme_vertices[1][0] for b in bodies)
        return ConvexBody(((lo,), (hi,))) if lo < hi else None
    current = bodies[0]
    current = _ring_body(list(current.extreme_vertices)) if d == 2 else _reduced_body(current.extreme_vertices)
    for other in bodies[1:]:
        for a, b in other.hrep.halfspaces:
            if all(R.dot(a, v) <= b for v in current.extreme_vertices):
                continue
            current = clip_body(current, a, b)
            if current is None:
                return None
    return current


# ---------------------------------------------------------------- ellipsoids

def contains_ellipsoid(hrep, e):
    """Exact test of ``E ⊆ {x : <a,x> <= b for all facets}``.

    Uses ``<a,c> + |A a| <= b`` with squares compared instead of square
    roots. ``e`` needs ``shape`` (symmetric) and ``center``.
    """
    A, c = e.shape, e.center
    if len(c) != hrep.dim:
        raise InvalidInput("dimension mismatch between ellipsoid and H-representation")
    for a, b in hrep.halfspaces:
        s = b - R.dot(a, c)
        if s < 0:
            return False
        u = R.matvec(A, a)
        if s * s < R.dot(u, u):
            return False
    return True


# ---------------------------------------------------------------- arrangements

def arrangement_cells(planes, region):
    """Full-dimensional cells cut out of ``region`` by ``planes``.

    Returns ``(sample, cell)`` pairs sorted by sample point; each sample is
    the vertex centroid of its cell, hence strictly interior.
    """
    if not region.full_dimensional:
        raise DegenerateHull(region.affine_dim)
    d = region.dim
    planes = [p if isinstance(p, Hyperplane) else Hyperplane(*p) for p in planes]
    if any(p.dim != d for p in planes):
        raise InvalidInput("plane dimension does not match region")
    seen = set()
    uniq = []
    for p in planes:
        key = _primitive(p.normal + (p.offset,))
        if key not in seen:
            seen.add(key)
            uniq.append(p)
    if d == 1:
        lo, hi = region.extreme_vertices[0][0], region.extreme_vertices[1][0]
        cuts = sorted({p.offset / p.normal[0] for p in uniq if lo < p.offset / p.normal[0] < hi})
        bounds = [lo] + cuts + [hi]
        cells = [ConvexBody(((x,), (y,))) for x, y in zip(bounds, bounds[1:])]
    else:
        start = _ring_body(list(region.extreme_vertices)) if d == 2 else _reduced_body(region.extreme_vertices)
        cells = [start]
        for p in uniq:
            a, b = p.normal, p.offset
            neg_a = tuple(-x for x in a)
            nxt = []
            for cell in cells:
                vals = [R.dot(a, v) - b for v in cell.extreme_vertices]
                if all(v <= 0 for v in vals) or all(v >= 0 for v in vals):
                    nxt.append(cell)
                    continue
                for piece in (clip_body(cell, a, b), clip_body(cell, neg_a, -b)):
                    if piece is not None:
                        nxt.append(piece)
            cells = nxt
    out = [(c.centroid, c) for c in cells]
    out.sort(key=lambda t: t[0])
    return out


# ---------------------------------------------------------------- order types

@dataclass(frozen=True)
class OrderType:
    """Orientation sign of every (d+1)-subset of an indexed configuration."""

    signs: dict = field(hash=False)

    def __getitem__(self, key):
        return self.signs[tuple(key)]

    def __len__(self):
        return len(self.signs)


@dataclass(frozen=True)
class Mixed:
    """Two vertex selections of the same bodies with different order types."""

    subset: tuple
    first: tuple
    second: tuple
    signs: tuple


def order_type_of(points):
    points = [R.qvec(p) for p in points]
    d = len(points[0])
    if len(points) < d + 1:
        raise InvalidInput(f"need at least {d + 1} points")
    return OrderType({S: orientation([points[i] for i in S]) for S in combinations(range(len(points)), d + 1)})


def _subset_signs(vertex_sets):
    """Map sign -> one witness selection over the product of vertex sets."""
    found = {}
    for sel in product(*vertex_sets):
        s = orientation(sel)
        if s not in found:
            found[s] = sel
            if len(found) == 3:
                break
    return found


def family_order_type(bodies):
    """Common order type of all selections from ``bodies``, or a Mixed witness.

    Orientation is affine in each argument, so checking every selection of
    vertices decides the sign over the whole product of polytopes.
    """
    bodies = list(bodies)
    d = bodies[0].dim
    if len(bodies) < d + 1:
        raise InvalidInput(f"need at least {d + 1} bodies")
    vsets = [sorted(set(b.vertices)) for b in bodies]
    signs = {}
    for S in combinations(range(len(bodies)), d + 1):
        found = _subset_signs([vsets[i] for i in S])
        if len(found) > 1:
            (s1, w1), (s2, w2) = sorted(found.items())[:2]
            first = [vs[0] for vs in vsets]
            second = list(first)
            for pos, i in enumerate(S):
                first[i] = w1[pos]
                second[i] = w2[pos]
            return Mixed(S, tuple(first), tuple(second), (s1, s2))
        signs[S] = next(iter(found))
    return OrderType(signs)


def point_in_hull(points, x):
    """Convex weights expressing ``x`` in ``conv(points)``, or None."""
    return convex_weights([R.qvec(p) for p in points], R.qvec(x))
