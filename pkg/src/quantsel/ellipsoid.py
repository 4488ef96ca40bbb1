"""Ellipsoids ``A(B^d) + x`` and their parametrization as points of R^{d(d+3)/2}.

An ellipsoid is stored by a symmetric positive-definite rational matrix
``A`` and a rational center ``x``. :func:`encode` writes the upper
triangle of ``A`` (row-major) followed by ``x``; convex combinations of
encoded ellipsoids decode to ellipsoids contained in the hull of the
summands, which is what makes the lifting arguments work.

The maximum-volume inscribed ellipsoid is found in floating point and then
rationalized and shrunk until an exact containment check passes.
"""
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gamma, pi

import numpy as np

from . import _rational as R
from .errors import DegenerateHull, InvalidInput, NotPositiveDefinite, OptimizerFailed, Unsupported
from .geometry import ConvexBody, contains_ellipsoid, convex_hull

__all__ = [
    "Ellipsoid", "param_dim", "encode", "decode", "ellipsoid_volume", "unit_ball_volume",
    "combination_decode", "john_ellipsoid", "shrink", "inscribed_polytope",
    "certify_in_hull_of_ellipsoids", "ball",
]


@dataclass(frozen=True)
class Ellipsoid:
    """``{shape @ u + center : |u| <= 1}`` with ``shape`` symmetric PD."""

    shape: tuple
    center: tuple

    def __post_init__(self):
        A = tuple(R.qvec(row) for row in self.shape)
        c = R.qvec(self.center)
        d = len(c)
        if d < 1 or len(A) != d or any(len(row) != d for row in A):
            raise InvalidInput("shape must be a d x d matrix matching the center")
        if any(A[i][j] != A[j][i] for i in range(d) for j in range(i)):
            raise InvalidInput("shape matrix must be symmetric")
        if not R.leading_minors_positive(A):
            raise NotPositiveDefinite("shape matrix is not positive definite")
        object.__setattr__(self, "shape", A)
        object.__setattr__(self, "center", c)

    @property
    def dim(self):
        return len(self.center)

    @property
    def det(self):
        """Exact ``det(A)``; the volume is ``det * unit_ball_volume(d)``."""
        return R.det(self.shape)

    @property
    def volume(self):
        return ellipsoid_volume(self)

    def contains_point(self, x):
        y = R.solve(self.shape, R.sub(R.qvec(x), self.center))
        return R.dot(y, y) <= 1

    def shape_array(self):
        return R.to_float_array(self.shape)

    def center_array(self):
        return np.array([float(v) for v in self.center])

    def boundary_points(self, n=64):
        """Float boundary samples (for plotting and sampling oracles)."""
        A, c = self.shape_array(), self.center_array()
        if self.dim == 1:
            return np.array([[c[0] - A[0, 0]], [c[0] + A[0, 0]]])
        if self.dim == 2:
            t = np.linspace(0, 2 * np.pi, n, endpoint=False)
            u = np.stack([np.cos(t), np.sin(t)], axis=1)
        else:
            rng = np.random.default_rng(0)
            u = rng.normal(size=(n, self.dim))
            u /= np.linalg.norm(u, axis=1, keepdims=True)
        return u @ A.T + c


def ball(center, radius=1):
    center = R.qvec(center)
    d = len(center)
    r = R.q(radius)
    return Ellipsoid(tuple(tuple(r if i == j else Fraction(0) for j in range(d)) for i in range(d)), center)


def param_dim(d):
    return d * (d + 3) // 2


def encode(e):
    """Upper triangle of the shape (row-major) followed by the center."""
    d = e.dim
    tri = tuple(e.shape[i][j] for i in range(d) for j in range(i, d))
    return tri + tuple(e.center)


def decode(p, d):
    p = R.qvec(p)
    if len(p) != param_dim(d):
        raise InvalidInput(f"parameter vector for d={d} must have length {param_dim(d)}")
    A = [[Fraction(0)] * d for _ in range(d)]
    k = 0
    for i in range(d):
        for j in range(i, d):
            A[i][j] = A[j][i] = p[k]
            k += 1
    return Ellipsoid(tuple(map(tuple, A)), p[k:])


def unit_ball_volume(d):
    return pi ** (d / 2) / gamma(d / 2 + 1)


def ellipsoid_volume(e):
    return float(e.det) * unit_ball_volume(e.dim)


def combination_decode(points, weights):
    """Decode the convex combination ``sum w_i p_i`` of parameter points."""
    points = [R.qvec(p) for p in points]
    weights = R.qvec(weights)
    if len(points) != len(weights) or not points:
        raise InvalidInput("need one weight per point")
    if any(w < 0 for w in weights) or sum(weights) != 1:
        raise InvalidInput("weights must be nonnegative and sum to 1")
    n = len(points[0])
    d = next(k for k in range(1, n + 1) if param_dim(k) == n)
    mix = tuple(sum((w * p[k] for w, p in zip(weights, points)), Fraction(0)) for k in range(n))
    return decode(mix, d)


def shrink(e, factor):
    """Scale the shape by ``factor`` about the center."""
    f = R.q(factor)
    if not 0 < f <= 1:
        raise InvalidInput("shrink factor must lie in (0, 1]")
    return Ellipsoid(tuple(R.scale(f, row) for row in e.shape), e.center)


# ---------------------------------------------------------------- John ellipsoid

def _sym_basis(d):
    idx = [(i, j) for i in range(d) for j in range(i, d)]
    E = np.zeros((len(idx), d, d))
    for k, (i, j) in enumerate(idx):
        E[k, i, j] = E[k, j, i] = 1.0
    return idx, E


def _max_inscribed(Af, bf, x0, maxiter=500, gap_tol=1e-8):
    """Maximise log det A subject to |A a_i| + <a_i, c> <= b_i (barrier method)."""
    nrm = np.linalg.norm(Af, axis=1)
    Af = Af / nrm[:, None]
    bf = bf / nrm
    m, d = Af.shape
    idx, E = _sym_basis(d)
    na = len(idx)
    M = np.einsum("kij,mj->mik", E, Af)  # (m, d, na): u_i = M_i @ p_a
    slack0 = bf - Af @ x0
    if np.min(slack0) <= 0:
        raise OptimizerFailed("initial center is not interior")
    r0 = 0.5 * np.min(slack0)
    p = np.concatenate([np.array([r0 if i == j else 0.0 for i, j in idx]), x0])

    def split(p):
        A = np.einsum("k,kij->ij", p[:na], E)
        return A, p[na:]

    def value(p, t):
        A, c = split(p)
        try:
            L = np.linalg.cholesky(A)
        except np.linalg.LinAlgError:
            return np.inf
        s = bf - Af @ c
        u = np.einsum("mik,k->mi", M, p[:na])
        phi = s * s - np.sum(u * u, axis=1)
        if np.any(s <= 0) or np.any(phi <= 0):
            return np.inf
        logdet = 2 * np.sum(np.log(np.diag(L)))
        return -t * logdet - np.sum(np.log(phi))

    t = 1.0
    iters = 0
    while True:
        while iters < maxiter:
            iters += 1
            A, c = split(p)
            Ainv = np.linalg.inv(A)
            s = bf - Af @ c
            u = np.einsum("mik,k->mi", M, p[:na])
            phi = s * s - np.sum(u * u, axis=1)
            AE = np.einsum("ij,kjl->kil", Ainv, E)
            g_ld = np.einsum("kii->k", AE)
            H_ld = -np.einsum("kij,lji->kl", AE, AE)
            gphi = np.concatenate([-2 * np.einsum("mik,mi->mk", M, u), -2 * s[:, None] * Af], axis=1)
            grad = np.concatenate([-t * g_ld, np.zeros(d)]) - np.sum(gphi / phi[:, None], axis=0)
            hphi = np.zeros((m, na + d, na + d))
            hphi[:, :na, :na] = -2 * np.einsum("mik,mil->mkl", M, M)
            hphi[:, na:, na:] = 2 * np.einsum("mi,mj->mij", Af, Af)
            H = np.zeros((na + d, na + d))
            H[:na, :na] = -t * H_ld
            H += np.einsum("mk,ml->kl", gphi / phi[:, None], gphi / phi[:, None])
            H -= np.sum(hphi / phi[:, None, None], axis=0)
            try:
                step = -np.linalg.solve(H, grad)
            except np.linalg.LinAlgError:
                step = -grad
            dec = -grad @ step
            if dec / 2 < 1e-8:
                break
            f0 = value(p, t)
            h = 1.0
            while h > 1e-10:
                f1 = value(p + h * step, t)
                if f1 <= f0 - 0.25 * h * dec:
                    break
                h *= 0.5
            else:
                break  # roundoff floor reached
            p_new = p + h * step
            if np.array_equal(p_new, p):
                break
            p = p_new
        if 2 * m / t < gap_tol or iters >= maxiter:
            break
        t *= 10.0
    A, c = split(p)
    return A, c, iters


def john_ellipsoid(body, max_den=10**6):
    """Certified inscribed ellipsoid of (near) maximum volume.

    Float optimum -> continued-fraction rounding (denominator cap relative
    to the body's scale) -> geometric shrink until ``contains_ellipsoid``
    accepts exactly.
    """
    if not isinstance(body, ConvexBody):
        body = ConvexBody(tuple(body))
    d = body.dim
    if not body.full_dimensional:
        raise DegenerateHull(body.affine_dim)
    if d == 1:
        lo, hi = body.extreme_vertices[0][0], body.extreme_vertices[1][0]
        return Ellipsoid((((hi - lo) / 2,),), ((hi + lo) / 2,))
    hrep = body.hrep
    Af, bf = hrep.as_arrays()
    x0 = np.array([float(v) for v in body.centroid])
    A, c, _ = _max_inscribed(Af, bf, x0)
    lo, hi = body.bounding_box()
    extent = max(float(h - l) for h, l in zip(hi, lo))
    scale = Fraction(2) ** int(np.ceil(np.log2(extent)))
    shape = [[Fraction(0)] * d for _ in range(d)]
    for i in range(d):
        for j in range(i, d):
            shape[i][j] = shape[j][i] = R.rationalize(A[i, j], max_den, scale)
    center = tuple(R.rationalize(v, max_den, scale) for v in c)
    step = Fraction(1, 10**6)
    for _ in range(10):
        try:
            e = Ellipsoid(tuple(map(tuple, shape)), center)
        except NotPositiveDefinite:
            e = None
        if e is not None and contains_ellipsoid(hrep, e):
            bound = float(body.volume) * d ** (-d) * (1 - 1e-4)
            if ellipsoid_volume(e) < bound:
                raise OptimizerFailed("inscribed ellipsoid misses the d^-d volume guarantee")
            return e
        f = 1 - step
        shape = [[f * v for v in row] for row in shape]
        step *= 2
    raise OptimizerFailed("could not certify the inscribed ellipsoid after 10 shrink steps")


# ---------------------------------------------------------------- inscribed polytopes

def _circle_point(theta, max_den=10**6):
    if abs(abs(theta) - pi) < 1e-12:
        return (Fraction(-1), Fraction(0))
    t = Fraction(np.tan(theta / 2)).limit_denominator(max_den)
    den = 1 + t * t
    return ((1 - t * t) / den, 2 * t / den)


def _sphere_point(v, max_den=10**6):
    # inverse stereographic projection from the pole (0, ..., 0, 1)
    v = np.asarray(v, dtype=float)
    v = v / np.linalg.norm(v)
    if v[-1] > 1 - 1e-12:
        return tuple(Fraction(0) for _ in v[:-1]) + (Fraction(1),)
    w = [Fraction(x / (1 - v[-1])).limit_denominator(max_den) for x in v[:-1]]
    s = sum(x * x for x in w)
    return tuple(2 * x / (s + 1) for x in w) + ((s - 1) / (s + 1),)


def _icosphere(level):
    g = (1 + 5 ** 0.5) / 2
    V = [(-1, g, 0), (1, g, 0), (-1, -g, 0), (1, -g, 0), (0, -1, g), (0, 1, g),
         (0, -1, -g), (0, 1, -g), (g, 0, -1), (g, 0, 1), (-g, 0, -1), (-g, 0, 1)]
    F = [(0, 11, 5), (0, 5, 1), (0, 1, 7), (0, 7, 10), (0, 10, 11), (1, 5, 9), (5, 11, 4),
         (11, 10, 2), (10, 7, 6), (7, 1, 8), (3, 9, 4), (3, 4, 2), (3, 2, 6), (3, 6, 8),
         (3, 8, 9), (4, 9, 5), (2, 4, 11), (6, 2, 10), (8, 6, 7), (9, 8, 1)]
    V = [np.array(v, dtype=float) / np.linalg.norm(v) for v in V]
    for _ in range(level):
        cache = {}

        def mid(i, j):
            key = (min(i, j), max(i, j))
            if key not in cache:
                v = V[i] + V[j]
                V.append(v / np.linalg.norm(v))
                cache[key] = len(V) - 1
            return cache[key]

        F = [tuple(x) for a, b, c in F for x in
             ((a, mid(a, b), mid(a, c)), (b, mid(b, c), mid(a, b)), (c, mid(a, c), mid(b, c)),
              (mid(a, b), mid(b, c), mid(a, c)))]
    return V


@lru_cache(maxsize=None)
def _unit_polytope(d, n):
    """Rational polytope inscribed in the unit sphere and a rational inradius bound."""
    if d == 1:
        return ((Fraction(-1),), (Fraction(1),)), Fraction(1)
    if d == 2:
        pts = tuple(_circle_point(2 * pi * k / n - (2 * pi if 2 * pi * k / n > pi else 0)) for k in range(n))
        worst = None
        for i, p in enumerate(pts):
            qq = pts[(i + 1) % n]
            cr = p[0] * qq[1] - p[1] * qq[0]
            dist2 = cr * cr / R.norm2(R.sub(qq, p))
            worst = dist2 if worst is None else min(worst, dist2)
        return pts, R.rational_sqrt_below(worst)
    if d == 3:
        pts = tuple(sorted(set(_sphere_point(v) for v in _icosphere(n))))
        hrep, _ = convex_hull(pts)
        worst = min(b * b / R.norm2(a) for a, b in hrep.halfspaces)
        return pts, R.rational_sqrt_below(worst)
    raise Unsupported("inscribed polytopes are provided for d <= 3")


def inscribed_polytope(e, n=None):
    """Rational polytope ``P ⊆ E`` with ``shrink(E, factor) ⊆ P``.

    In the plane: 72 rational points on the circle; in R^3: a level-2
    subdivided icosahedron pushed to the sphere by rational stereographic
    projection. Returns ``(ConvexBody, factor)``.
    """
    d = e.dim
    if n is None:
        n = 72 if d == 2 else 2
    pts, factor = _unit_polytope(d, n)
    verts = tuple(R.add(R.matvec(e.shape, u), e.center) for u in pts)
    return ConvexBody(verts), factor


def certify_in_hull_of_ellipsoids(witness, ellipsoids, n=None):
    """Exact check that ``witness`` lies in ``conv(ellipsoids)`` up to the polytope factor.

    Returns the factor ``s`` such that ``shrink(witness, s)`` is contained in
    the hull of inscribed polytopes of the ``ellipsoids``, or None.
    """
    verts = []
    factor = Fraction(1)
    for e in ellipsoids:
        poly, s = inscribed_polytope(e, n)
        verts.extend(poly.vertices)
        factor = min(factor, s)
    try:
        hrep, _ = convex_hull(verts)
    except DegenerateHull:
        return None
    return factor if contains_ellipsoid(hrep, shrink(witness, factor)) else None
