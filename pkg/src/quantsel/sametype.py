"""Ham-sandwich cuts, the volumetric same-type refinement, and subfamily searches.

``same_type_refine`` repeatedly halves the first d family measures with a
ham-sandwich cut, keeps the pieces that retain at least an ``alpha`` share of
their volume, and resizes the survivors to a common volume. After one cut
per subset ``I`` of the first d families, every bipartition of the families
is strictly separated, which forces a single order type on all
transversals.
"""
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, comb, cos, pi, sin

import numpy as np

from . import _rational as R
from .ellipsoid import decode, encode, john_ellipsoid, param_dim
from .errors import HalvingDegenerate, InvalidInput, NotFound, Unsupported
from .geometry import (
    ConvexBody, Hyperplane, Mixed, clip_body, contains_ellipsoid, family_order_type, intersect_bodies,
)
from .lp import solve_lp

__all__ = [
    "MeasureFamily", "SameTypeCertificate", "Counterexample", "ham_sandwich_2d", "median_cut",
    "measure_below", "separability_check", "same_type_refine", "resize_to_volume",
    "fractional_helly_search", "homogeneous_selection_bruteforce", "subset_order",
]


@dataclass(frozen=True)
class MeasureFamily:
    """Sum of Lebesgue measures restricted to the bodies."""

    bodies: tuple

    def __post_init__(self):
        bodies = tuple(b if isinstance(b, ConvexBody) else ConvexBody(tuple(b)) for b in self.bodies)
        if not bodies:
            raise InvalidInput("measure needs at least one body")
        if any(b.volume <= 0 for b in bodies):
            raise InvalidInput("every body must have positive volume")
        object.__setattr__(self, "bodies", bodies)

    @property
    def weights(self):
        return tuple(b.volume for b in self.bodies)

    @property
    def total(self):
        return sum(self.weights, Fraction(0))


@dataclass
class SameTypeCertificate:
    trimmed: list  # per family: list of ConvexBody
    parents: list  # per family: index of each trimmed body's parent in the input
    separators: list  # (family subset J, I subset of J, Hyperplane with I on the negative side)
    order_type: object
    alpha: Fraction
    rho: Fraction  # common input volume after normalization
    meta: dict = field(default_factory=dict)


@dataclass(frozen=True)
class Counterexample:
    subset: tuple


def subset_order(d):
    """Nonempty subsets of range(d) by size, then lexicographically."""
    return [S for k in range(1, d + 1) for S in itertools.combinations(range(d), k)]


# ---------------------------------------------------------------- halving

def measure_below(mu, normal, offset):
    """Exact measure of ``{<normal, x> <= offset}``."""
    total = Fraction(0)
    for b in mu.bodies:
        piece = clip_body(b, normal, offset)
        if piece is not None:
            total += piece.volume
    return total


def _clip_area(P, n, c):
    """Area of polygon P (ccw float vertex tuples) intersected with {<n, x> <= c}."""
    nx, ny = n
    out = []
    k = len(P)
    s = [x * nx + y * ny - c for x, y in P]
    for i in range(k):
        a, b = P[i], P[(i + 1) % k]
        sa, sb = s[i], s[(i + 1) % k]
        if sa <= 0:
            out.append(a)
        if (sa < 0 < sb) or (sb < 0 < sa):
            t = sa / (sa - sb)
            out.append((a[0] + (b[0] - a[0]) * t, a[1] + (b[1] - a[1]) * t))
    if len(out) < 3:
        return 0.0
    acc = 0.0
    for i in range(len(out)):
        x0, y0 = out[i]
        x1, y1 = out[(i + 1) % len(out)]
        acc += x0 * y1 - x1 * y0
    return 0.5 * abs(acc)


def _polys(mu):
    return [[(float(p[0]), float(p[1])) for p in b.extreme_vertices] for b in mu.bodies]


def _area(polys, n, c):
    return sum(_clip_area(P, n, c) for P in polys)


def _halving_offset(polys, total, n, iters=64):
    proj = [x * n[0] + y * n[1] for P in polys for x, y in P]
    lo0, hi0 = min(proj), max(proj)
    half = total / 2
    # smallest c with F(c) >= half, largest c with F(c) <= half
    lo, hi = lo0, hi0
    for _ in range(iters):
        mid = (lo + hi) / 2
        if _area(polys, n, mid) >= half:
            hi = mid
        else:
            lo = mid
    c_lo = hi
    lo, hi = lo0, hi0
    for _ in range(iters):
        mid = (lo + hi) / 2
        if _area(polys, n, mid) <= half:
            lo = mid
        else:
            hi = mid
    return (c_lo + lo) / 2


def median_cut(mu):
    """Exact halving point of a measure on the line (returned as a Hyperplane)."""
    bodies = mu.bodies
    if bodies[0].dim != 1:
        raise InvalidInput("median_cut is for d = 1")
    half = mu.total / 2
    ivs = sorted((b.extreme_vertices[0][0], b.extreme_vertices[-1][0]) for b in bodies)
    breaks = sorted({x for iv in ivs for x in iv})

    def F(c):
        return sum((min(max(c, a), b) - a for a, b in ivs), Fraction(0))

    for x0, x1 in zip(breaks, breaks[1:]):
        f0, f1 = F(x0), F(x1)
        if f0 <= half <= f1:
            if f1 == f0:
                continue
            c = x0 + (half - f0) / (f1 - f0) * (x1 - x0)
            # flat stretch to the right: take its midpoint
            right = c
            for y in breaks:
                if y > c and F(y) == half:
                    right = y
            return Hyperplane((Fraction(1),), (c + right) / 2)
    raise HalvingDegenerate("no halving point found")


def ham_sandwich_2d(mu1, mu2, tol=1e-9):
    """Line halving both planar measures up to ``tol`` of each total (exact check)."""
    d = mu1.bodies[0].dim
    if d == 1:
        return median_cut(mu1)
    if d != 2:
        raise Unsupported("certified ham-sandwich cuts are implemented for d <= 2")
    P1, P2 = _polys(mu1), _polys(mu2)
    W1, W2 = float(mu1.total), float(mu2.total)

    def cut(theta):
        n = (cos(theta), sin(theta))
        c = _halving_offset(P1, W1, n)
        g = _area(P2, n, c) - W2 / 2
        return n, c, g

    lo, hi = 0.0, pi
    n, c, g_lo = cut(lo)
    best = (abs(g_lo), n, c)
    if g_lo != 0:
        for _ in range(200):
            mid = (lo + hi) / 2
            n, c, g = cut(mid)
            if abs(g) < best[0]:
                best = (abs(g), n, c)
            if g == 0 or hi - lo < 1e-14:
                break
            if (g < 0) == (g_lo < 0):
                lo, g_lo = mid, g
            else:
                hi = mid
    _, n, c = best
    normal = tuple(Fraction(float(x)).limit_denominator(10**12) for x in n)
    h = Hyperplane(normal, Fraction(float(c)).limit_denominator(10**12))
    t1 = abs(measure_below(mu1, h.normal, h.offset) - mu1.total / 2)
    t2 = abs(measure_below(mu2, h.normal, h.offset) - mu2.total / 2)
    if t1 > Fraction(tol) * mu1.total or t2 > Fraction(tol) * mu2.total:
        raise HalvingDegenerate(f"ham-sandwich cut misses tolerance ({float(t1)}, {float(t2)})")
    return h


# ---------------------------------------------------------------- separation

def _separator(A_pts, B_pts):
    """Exact strict separator: <a, x> <= b - 1 on A, >= b + 1 on B; None if none."""
    d = len(A_pts[0])
    rows, rhs = [], []
    for x in A_pts:
        rows.append(list(x) + [-1])
        rhs.append(-1)
    for y in B_pts:
        rows.append([-v for v in y] + [1])
        rhs.append(-1)
    res = solve_lp(None, A_ub=rows, b_ub=rhs, free=range(d + 1), n=d + 1)
    if not res.feasible:
        return None
    a, b = res.x[:d], res.x[d]
    if all(v == 0 for v in a):
        return None
    return Hyperplane(a, b)


def separability_check(families):
    """Strict separators for every bipartition of d+1 families, or a Counterexample.

    Only subsets I of the first d families are tried (I and its complement
    give the same bipartition). Returns a list of ``(I, Hyperplane)`` with
    the families in I on the negative side.
    """
    families = [list(f) for f in families]
    d = families[0][0].dim
    if len(families) != d + 1:
        raise InvalidInput(f"need exactly {d + 1} families")
    verts = [[v for b in f for v in b.extreme_vertices] for f in families]
    out = []
    for I in subset_order(d):
        A = [v for i in I for v in verts[i]]
        B = [v for j in range(d + 1) if j not in I for v in verts[j]]
        h = _separator(A, B)
        if h is None:
            return Counterexample(I)
        out.append((I, h))
    return out


# ---------------------------------------------------------------- same-type refinement

def _fan_trim(body, target):
    """Convex subset of a polygon with area exactly ``target`` (fan from the first vertex)."""
    ring = list(body.extreme_vertices)
    v0 = ring[0]
    acc = Fraction(0)
    for i in range(1, len(ring) - 1):
        a, b = ring[i], ring[i + 1]
        tri = ((a[0] - v0[0]) * (b[1] - v0[1]) - (a[1] - v0[1]) * (b[0] - v0[0])) / 2
        if acc + tri >= target:
            t = (target - acc) / tri
            q = R.add(a, R.scale(t, R.sub(b, a)))
            pts = ring[: i + 1] + ([q] if q != a else [])
            return ConvexBody(tuple(pts))
        acc += tri
    return body


def resize_to_volume(body, target):
    """A convex subset of ``body`` with volume exactly ``target`` (d <= 2).

    Scales about the vertex centroid by a rational factor just above the
    exact d-th root, then trims the small excess exactly.
    """
    target = R.q(target)
    vol = body.volume
    if target > vol:
        raise InvalidInput("target volume exceeds the body's volume")
    d = body.dim
    if d == 1:
        lo, hi = body.extreme_vertices[0][0], body.extreme_vertices[-1][0]
        mid = (lo + hi) / 2
        return ConvexBody(((mid - target / 2,), (mid + target / 2,)))
    if d != 2:
        raise Unsupported("exact resizing is implemented for d <= 2")
    if target == vol:
        return body
    s = min(R.rational_sqrt_above(target / vol), Fraction(1))
    scaled = body.scaled(s)
    if scaled.volume == target:
        return scaled
    return _fan_trim(scaled, target)


def _snap(x, h):
    return Fraction(round(x / h)) * h


def _pull_inside(piece, floor, bits=30):
    """A strictly interior copy of a cut piece with volume >= ``floor`` and short coordinates.

    Pulling toward the centroid keeps later separations strict; snapping to
    a dyadic grid stops coordinate sizes from compounding across cuts.
    """
    vol = piece.volume
    lo = R.rational_sqrt_above(floor / vol)
    if lo >= 1:
        return piece
    s = max(Fraction(2**20 - 1, 2**20), (lo + 1) / 2)
    scaled = piece.scaled(s)
    lo_box, hi_box = piece.bounding_box()
    size = max(b - a for a, b in zip(lo_box, hi_box))
    h = Fraction(1, 2**bits) * Fraction(2) ** (size.numerator.bit_length() - size.denominator.bit_length())
    snapped = ConvexBody(tuple(tuple(_snap(x, h) for x in v) for v in scaled.extreme_vertices))
    if (snapped.full_dimensional and all(piece.hrep.contains(v, strict=True) for v in snapped.extreme_vertices)
            and snapped.volume >= floor):
        return snapped
    return scaled


def _cut(body, h, side):
    if side < 0:
        return clip_body(body, h.normal, h.offset)
    return clip_body(body, tuple(-v for v in h.normal), -h.offset)


def _refine_block(fams, alpha, order):
    """One application of the refinement to d+1 families (lists of (body, parent))."""
    d = fams[0][0][0].dim
    rho = min(b.volume for f in fams for b, _ in f)
    fams = [[(resize_to_volume(b, rho), p) for b, p in f] for f in fams]
    separators = []
    for I in order:
        if d == 2:
            h = ham_sandwich_2d(MeasureFamily([b for b, _ in fams[0]]), MeasureFamily([b for b, _ in fams[1]]))
        else:
            h = median_cut(MeasureFamily([b for b, _ in fams[0]]))
        thresh = alpha * rho
        sides = {}
        for i, f in enumerate(fams):
            for side in (-1, 1):
                kept = []
                for b, p in f:
                    piece = _cut(b, h, side)
                    if piece is not None and piece.volume >= thresh:
                        kept.append((piece, p))
                sides[i, side] = kept
        last = d
        # families in I go to one side, the others (including the last) to the other
        other = 1 if len(sides[last, 1]) * 4 >= len(fams[last]) else -1
        if len(sides[last, other]) * (1 - 1 / (2 * (1 - alpha))) < 0:  # pragma: no cover
            raise HalvingDegenerate("last family lost too many bodies")
        new = []
        for i in range(d + 1):
            side = -other if i in I else other
            if not sides[i, side]:
                raise HalvingDegenerate(f"family {i} emptied by the cut")
            new.append([(resize_to_volume(_pull_inside(b, alpha * rho), alpha * rho), p) for b, p in sides[i, side]])
        fams = new
        rho = alpha * rho
        sep = h if -other < 0 else Hyperplane(tuple(-v for v in h.normal), -h.offset)
        separators.append((I, sep))
    return fams, separators


def same_type_refine(families, alpha=Fraction(1, 3)):
    """Trim families so that all transversals share one order type (d <= 2).

    Returns a SameTypeCertificate with trimmed bodies, their parents, the
    separating cuts and the common order type of the family hulls.
    """
    alpha = R.q(alpha)
    if not 0 < alpha < Fraction(1, 2):
        raise InvalidInput("alpha must lie in (0, 1/2)")
    families = [[b if isinstance(b, ConvexBody) else ConvexBody(tuple(b)) for b in f] for f in families]
    if not families or any(not f for f in families):
        raise InvalidInput("families must be nonempty")
    d = families[0][0].dim
    if d > 2:
        raise Unsupported("certified refinement is implemented for d <= 2")
    m = len(families)
    if m < d + 1:
        raise InvalidInput(f"need at least {d + 1} families")
    if any(b.volume <= 0 for f in families for b in f):
        raise InvalidInput("bodies must have positive volume")
    rho0 = min(b.volume for f in families for b in f)
    state = [[(b, i) for i, b in enumerate(f)] for f in families]
    order = subset_order(d)
    separators = []
    for J in itertools.combinations(range(m), d + 1):
        block, seps = _refine_block([state[j] for j in J], alpha, order)
        for j, f in zip(J, block):
            state[j] = f
        separators.extend((J, tuple(J[i] for i in I), h) for I, h in seps)
    # bring every family to the same final volume
    final = min(b.volume for f in state for b, _ in f)
    state = [[(resize_to_volume(b, final), p) for b, p in f] for f in state]
    hulls = [ConvexBody(tuple(v for b, _ in f for v in b.extreme_vertices)) for f in state]
    ot = family_order_type(hulls)
    steps = (2**d - 1) * comb(m, d + 1)
    meta = {
        "steps": steps,
        "sizeFactor": (1 - 1 / (2 * (1 - alpha))) ** steps,
        "volumeFactor": alpha**steps,
        "inputSizes": [len(f) for f in families],
        "mixed": isinstance(ot, Mixed),
    }
    return SameTypeCertificate([[b for b, _ in f] for f in state], [[p for _, p in f] for f in state],
                               separators, ot, alpha, rho0, meta)


# ---------------------------------------------------------------- fractional Helly

def _containing(bodies, e):
    return tuple(i for i, b in enumerate(bodies) if contains_ellipsoid(b.hrep, e))


def fractional_helly_search(bodies, k, volume_floor, limit=2000, seed=0):
    """A large subfamily whose intersection holds an ellipsoid of volume >= floor.

    Candidates: John ellipsoids of k-wise intersections, decoded combinations
    of their lifted parameters, and the John ellipsoid of the best subfamily
    found so far (grown greedily). Returns ``(indices, witness)`` where
    ``indices`` are all bodies containing the witness.
    """
    bodies = [b if isinstance(b, ConvexBody) else ConvexBody(tuple(b)) for b in bodies]
    n = len(bodies)
    if n == 0 or k < 1:
        raise InvalidInput("need bodies and k >= 1")
    k = min(k, n)
    floor = float(volume_floor) * (1 - 1e-4)
    rng = np.random.default_rng(seed)
    if comb(n, k) <= limit:
        tuples = list(itertools.combinations(range(n), k))
    else:
        tuples = sorted({tuple(sorted(rng.choice(n, k, replace=False).tolist())) for _ in range(limit)})
    qualifying = []
    for t in tuples:
        inter = intersect_bodies([bodies[i] for i in t])
        if inter is None:
            continue
        e = john_ellipsoid(inter)
        if e.volume >= floor:
            qualifying.append(e)
    if not qualifying:
        raise NotFound("no k-tuple intersection holds a large enough ellipsoid", {"k": k, "tuples": len(tuples)})
    d = bodies[0].dim
    pts = [encode(e) for e in qualifying]
    cands = list(qualifying[:50])
    w = [Fraction(1, len(pts))] * len(pts)
    cands.append(decode(tuple(sum((wi * p[j] for wi, p in zip(w, pts)), Fraction(0))
                              for j in range(param_dim(d))), d))
    if len(pts) > param_dim(d):
        from .selection import _deep_point

        deep, _, _ = _deep_point(pts, rng, 500)
        cands.append(decode(tuple(deep), d))
    best = None
    for e in cands:
        if e.volume < floor:
            continue
        sub = _containing(bodies, e)
        if best is None or len(sub) > len(best[0]):
            best = (sub, e)
    # grow: John ellipsoid of the current intersection, then greedy additions
    sub, e = best
    for j in range(n):
        if j in sub:
            continue
        inter = intersect_bodies([bodies[i] for i in sub + (j,)])
        if inter is None:
            continue
        f = john_ellipsoid(inter)
        if f.volume >= floor:
            grown = _containing(bodies, f)
            if len(grown) > len(sub):
                sub, e = grown, f
    return sub, e


# ---------------------------------------------------------------- homogeneous selection

def homogeneous_selection_bruteforce(families, target_fraction):
    """Subfamilies of size ceil(target * n_i) whose transversal hulls share an ellipsoid.

    Exhaustive and lexicographic; meant for families of at most 8 bodies.
    Returns ``(subfamilies, witness)``.
    """
    families = [[b if isinstance(b, ConvexBody) else ConvexBody(tuple(b)) for b in f] for f in families]
    frac = R.q(target_fraction)
    if not 0 < frac <= 1:
        raise InvalidInput("target fraction must lie in (0, 1]")
    d = families[0][0].dim
    if len(families) != d + 1:
        raise InvalidInput(f"need exactly {d + 1} families")
    if any(len(f) > 8 for f in families):
        raise InvalidInput("brute force is limited to families of at most 8 bodies")
    sizes = [max(1, ceil(frac * len(f))) for f in families]
    choices = [list(itertools.combinations(range(len(f)), s)) for f, s in zip(families, sizes)]
    hull_cache = {}

    def hull(T):
        if T not in hull_cache:
            hull_cache[T] = ConvexBody(tuple(v for j, i in enumerate(T) for v in families[j][i].extreme_vertices))
        return hull_cache[T]

    for subs in itertools.product(*choices):
        inter = None
        ok = True
        for T in itertools.product(*subs):
            h = hull(T)
            inter = h if inter is None else intersect_bodies([inter, h])
            if inter is None:
                ok = False
                break
        if ok and inter is not None and inter.full_dimensional:
            return subs, john_ellipsoid(inter)
    raise NotFound("no homogeneous subfamilies of the requested size", {"sizes": sizes})
