"""Volumetric selection for families of convex bodies, and weak epsilon-nets.

A selection witness is a set (ellipsoid, or segment in diameter mode)
lying in the hull of many small subfamilies. All three pipelines start from
John ellipsoids of the members:

* ``selection_quadratic`` lifts them to R^{d(d+3)/2} and picks a deep point
  there; tuples have d(d+3)/2 + 1 members.
* ``selection_2d`` runs an ellipsoid Tverberg partition, normalizes the
  common ellipsoid to the unit ball and keeps <= 2d members per part via
  quantitative Steinitz.
* ``selection_simplex`` additionally refines each part to d+1 members with
  the arrangement argument of ``vol_planes_refine``.

Hit tuples are always re-verified exactly in R^d.
"""
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, comb

import numpy as np

from . import _rational as R
from .ellipsoid import Ellipsoid, ball, decode, encode, john_ellipsoid, param_dim, shrink
from .errors import (
    DegenerateHull, DegeneratePosition, InvalidInput, NotFound, PreconditionFailed, TooFewBodies,
)
from .geometry import (
    ConvexBody, Hyperplane, arrangement_cells, box, contains_ellipsoid, convex_hull, intersect_bodies,
    orientation,
)
from .tverberg import Segment, cap_threshold_rational, common_direction, tverberg_ellipsoids

__all__ = [
    "SelectionWitness", "EpsNet", "VolPlanes", "point_selection", "simplex_depth", "vol_planes_refine",
    "steinitz_reduce", "selection_quadratic", "selection_2d", "selection_simplex", "weak_epsnet",
    "slab_instance", "ball_in_hull", "tuple_size", "volume_floor_factor", "tuple_hits", "chain_bound",
]


@dataclass
class SelectionWitness:
    witness: object  # Ellipsoid, or Segment in diameter mode
    hit_tuples: tuple
    tuple_size: int
    fraction: Fraction
    n: int
    sampled: bool = False
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.hit_tuples = tuple(tuple(t) for t in self.hit_tuples)
        if not self.hit_tuples:
            raise NotFound("witness lies in no tuple hull")
        self.fraction = Fraction(len(self.hit_tuples), comb(self.n, self.tuple_size))


@dataclass
class EpsNet:
    pieces: list
    epsilon: Fraction
    volume_floor: float
    variant: str
    alpha: int
    size_bound: Fraction = None  # None when the counting bound is vacuous
    complete: bool = True
    checked_subfamilies: int = 0
    meta: dict = field(default_factory=dict)


@dataclass
class VolPlanes:
    subsets: tuple  # per point set: indices of the d+1 chosen points
    cell: ConvexBody
    region: ConvexBody
    ratio: Fraction  # vol(cell) / vol(region)
    bound: Fraction  # (m C(k, d))^{-d}


def tuple_size(d, variant):
    return {"quadratic": param_dim(d) + 1, "steinitz": 2 * d, "simplex": d + 1}[variant]


def chain_bound(d, m=None):
    """(m C(2d,d))^{-d} (5d^2)^{-d} d^{-d}, relative to the Tverberg ellipsoid volume."""
    m = param_dim(d) if m is None else m
    return Fraction(1, (m * comb(2 * d, d)) ** d * (5 * d * d) ** d * d**d)


def volume_floor_factor(d, variant):
    """Guaranteed witness volume relative to the smallest member volume."""
    if variant == "quadratic":
        return Fraction(1, d**d)
    if variant == "steinitz":
        return Fraction(1, (5 * d**3) ** d)
    if variant == "simplex":
        return chain_bound(d) / d**d
    raise InvalidInput(f"unknown variant {variant!r}")


# ---------------------------------------------------------------- point selection

class _DepthCounter:
    """Counts closed simplices of a point set containing a query point.

    x lies in simplex T iff for every facet S = T - {t} the orientation of
    (S, x) is zero or agrees with that of (S, t).
    """

    def __init__(self, points):
        self.points = points
        n, d = len(points), len(points[0])
        self.d = d
        self.facets = list(itertools.combinations(range(n), d))
        self.simplices = []
        for T in itertools.combinations(range(n), d + 1):
            if orientation([points[i] for i in T]) == 0:
                continue
            facet_refs = []
            for t in T:
                S = tuple(i for i in T if i != t)
                facet_refs.append((S, orientation([points[i] for i in S] + [points[t]])))
            self.simplices.append(facet_refs)

    def depth(self, x):
        sign = {S: orientation([self.points[i] for i in S] + [x]) for S in self.facets}
        return sum(all(sign[S] == 0 or sign[S] == s for S, s in refs) for refs in self.simplices)


def simplex_depth(points, x):
    """Number of closed simplices spanned by ``points`` containing ``x`` (exact)."""
    points = [R.qvec(p) for p in points]
    return _DepthCounter(points).depth(R.qvec(x))


def _spanned_planes(points):
    d = len(points[0])
    planes = []
    for S in itertools.combinations(points, d):
        if R.affine_dimension(S) == d - 1:
            planes.append(Hyperplane.through(S))
    return planes


def _arrangement_vertices(planes, region):
    d = region.dim
    out = set()
    for S in itertools.combinations(planes, d):
        x = R.solve([p.normal for p in S], [p.offset for p in S])
        if x is not None and region.hrep.contains(x):
            out.add(x)
    return sorted(out)


def point_selection(points, include_vertices=False):
    """A deepest point for the closed-simplex count of ``points``.

    Depth is constant on open cells of the arrangement of hyperplanes
    spanned by d-subsets, so one sample per cell suffices. With
    ``include_vertices`` the arrangement vertices are probed too, which
    gives the maximum over all of R^d. Returns ``(point, depth)``.
    """
    points = [R.qvec(p) for p in points]
    if not points:
        raise InvalidInput("no points")
    d = len(points[0])
    if len(points) < d + 1 or R.affine_dimension(points) < d:
        raise DegeneratePosition("points do not span R^d")
    region = ConvexBody(tuple(points))
    counter = _DepthCounter(points)
    samples = [s for s, _ in arrangement_cells(_spanned_planes(points), region)]
    if include_vertices:
        samples += _arrangement_vertices(_spanned_planes(points), region)
    best = None
    for s in samples:
        k = counter.depth(s)
        if best is None or k > best[1]:
            best = (s, k)
    return best


# ---------------------------------------------------------------- arrangement refinement

def vol_planes_refine(point_sets):
    """Pick d+1 points from each set keeping a large common hull.

    Cuts the common hull by every hyperplane spanned by d points of any set,
    takes the largest cell and, for each set, the lexicographically first
    simplex containing that cell.
    """
    sets = [[R.qvec(p) for p in X] for X in point_sets]
    if not sets or any(not X for X in sets):
        raise InvalidInput("point sets must be nonempty")
    d = len(sets[0][0])
    if any(len(X) < d + 1 for X in sets):
        raise InvalidInput("each point set needs at least d+1 points")
    region = intersect_bodies([ConvexBody(tuple(X)) for X in sets])
    if region is None:
        raise DegenerateHull(d - 1, "common hull is not full-dimensional")
    planes = [h for X in sets for h in _spanned_planes(X)]
    cells = arrangement_cells(planes, region)
    cell = max(cells, key=lambda sc: sc[1].volume)[1]
    subsets = []
    for X in sets:
        chosen = None
        for T in itertools.combinations(range(len(X)), d + 1):
            simplex = [X[i] for i in T]
            if R.affine_dimension(simplex) < d:
                continue
            hull, _ = convex_hull(simplex)
            if all(hull.contains(v) for v in cell.extreme_vertices):
                chosen = T
                break
        if chosen is None:  # pragma: no cover - excluded by Carathéodory
            raise NotFound("no simplex covers the chosen cell")
        subsets.append(chosen)
    m, k = len(sets), max(len(X) for X in sets)
    bound = Fraction(1, (m * comb(k, d)) ** d)
    return VolPlanes(tuple(subsets), cell, region, cell.volume / region.volume, bound)


# ---------------------------------------------------------------- Steinitz

def _contains_ball(hrep, rho):
    r2 = rho * rho
    return all(b >= 0 and b * b >= r2 * R.norm2(a) for a, b in hrep.halfspaces)


def _subset_ok(points, idx, rho, d):
    sub = [points[i] for i in idx]
    if R.affine_dimension(sub) < d:
        return False
    hull, _ = convex_hull(sub)
    return _contains_ball(hull, rho)


def _directions(d, count=720):
    if d == 1:
        return np.array([[1.0], [-1.0]])
    if d == 2:
        t = np.linspace(0, 2 * np.pi, count, endpoint=False)
        return np.stack([np.cos(t), np.sin(t)], axis=1)
    rng = np.random.default_rng(0)
    u = rng.normal(size=(4 * count, d))
    return u / np.linalg.norm(u, axis=1, keepdims=True)


def _greedy_steinitz(points, d):
    X = np.array([[float(v) for v in p] for p in points])
    U = _directions(d)
    proj = U @ X.T  # (dirs, n)
    chosen = []
    support = np.full(len(U), -np.inf)
    for _ in range(2 * d):
        scores = np.min(np.maximum(support[:, None], proj), axis=0)
        scores[chosen] = -np.inf
        j = int(np.argmax(scores))
        chosen.append(j)
        support = np.maximum(support, proj[:, j])
    return tuple(sorted(chosen))


def steinitz_reduce(points, exhaustive_limit=16):
    """At most 2d of ``points`` whose hull contains the ball of radius 1/(5d^2).

    Requires the unit ball inside ``conv(points)`` (checked exactly).
    Returns indices into ``points``.
    """
    points = [R.qvec(p) for p in points]
    if not points:
        raise InvalidInput("no points")
    d = len(points[0])
    if R.affine_dimension(points) < d:
        raise PreconditionFailed("points are not full-dimensional")
    hull, extreme = convex_hull(points)
    if not _contains_ball(hull, Fraction(1)):
        raise PreconditionFailed("the unit ball is not contained in the hull")
    rho = Fraction(1, 5 * d * d)
    size = min(2 * d, len(points))
    pool = list(range(len(points)))
    if len(pool) > exhaustive_limit:
        ext = set(extreme)
        pool = [i for i, p in enumerate(points) if p in ext]
        first = {}
        for i in pool:
            first.setdefault(points[i], i)
        pool = sorted(first.values())
    if len(pool) > exhaustive_limit:
        idx = _greedy_steinitz([points[i] for i in pool], d)
        idx = tuple(pool[i] for i in idx)
        if _subset_ok(points, idx, rho, d):
            return idx
        if comb(len(pool), size) > 10**5:
            raise NotFound("greedy Steinitz reduction failed verification")
    for idx in itertools.combinations(pool, min(size, len(pool))):
        if _subset_ok(points, idx, rho, d):
            return idx
    raise NotFound("no 2d-subset contains the shrunken ball")  # pragma: no cover


# ---------------------------------------------------------------- tuple verification

def _hull_of(bodies, idx):
    verts = [v for i in idx for v in bodies[i].extreme_vertices]
    return convex_hull(verts)[0]


def _contains(hrep, witness):
    if isinstance(witness, Ellipsoid):
        return contains_ellipsoid(hrep, witness)
    return hrep.contains(witness.a) and hrep.contains(witness.b)


def tuple_hits(bodies, witness, alpha, limit=30000, seed=0):
    """Tuples of ``alpha`` bodies whose hull contains ``witness``.

    All C(n, alpha) tuples are checked when there are at most ``limit`` of
    them; otherwise ``limit`` random tuples. Returns ``(hits, sampled)``.
    """
    n = len(bodies)
    total = comb(n, alpha)
    if total <= limit:
        tuples = itertools.combinations(range(n), alpha)
        sampled = False
    else:
        rng = np.random.default_rng(seed)
        seen = set()
        while len(seen) < limit:
            seen.add(tuple(sorted(int(i) for i in rng.choice(n, alpha, replace=False))))
        tuples = sorted(seen)
        sampled = True
    hits = []
    for t in tuples:
        try:
            hull = _hull_of(bodies, t)
        except DegenerateHull:
            continue
        if _contains(hull, witness):
            hits.append(t)
    return hits, sampled


# ---------------------------------------------------------------- lifted deep points

def _exact_combination(points, weights):
    D = len(points[0])
    return tuple(sum((w * p[k] for w, p in zip(weights, points)), Fraction(0)) for k in range(D))


def _rational_weights(w, max_den=10**4):
    q = [Fraction(float(x)).limit_denominator(max_den) for x in w]
    q = [max(x, Fraction(0)) for x in q]
    s = sum(q)
    return [x / s for x in q]


def _sampled_deep_point(points, rng, samples):
    """Deep point by candidate sampling; returns (exact point, estimated depth)."""
    n, D = len(points), len(points[0])
    X = np.array([[float(v) for v in p] for p in points])
    alpha = D + 1
    all_simplices = comb(n, alpha)
    if all_simplices <= samples:
        simplices = list(itertools.combinations(range(n), alpha))
    else:
        simplices = sorted({tuple(sorted(rng.choice(n, alpha, replace=False).tolist())) for _ in range(samples)})
    inv = []
    for S in simplices:
        M = np.vstack([X[list(S)].T, np.ones(alpha)])
        if abs(np.linalg.det(M)) < 1e-12:
            continue
        inv.append(np.linalg.inv(M))
    cand_w = [np.full(n, 1.0 / n)]
    for S in simplices[: samples // 2]:
        w = np.zeros(n)
        w[list(S)] = 1.0 / alpha
        cand_w.append(w)
    for _ in range(samples // 2):
        cand_w.append(rng.dirichlet(np.ones(n)))
    W = np.array(cand_w)
    C = np.hstack([W @ X, np.ones((len(W), 1))])  # (cands, D+1)
    depth = np.zeros(len(W), dtype=int)
    for Minv in inv:
        bary = C @ Minv.T
        depth += np.all(bary >= -1e-12, axis=1)
    best = int(np.argmax(depth))
    weights = _rational_weights(W[best])
    return _exact_combination(points, weights), int(depth[best])


def _deep_point(points, rng, samples):
    D = len(points[0])
    if D <= 2 and len(points) <= 12 and R.affine_dimension(points) == D:
        p, depth = point_selection(points)
        return p, depth, "exact"
    p, depth = _sampled_deep_point(points, rng, samples)
    return p, depth, "sampled"


def _diameter_segment(body):
    verts = body.extreme_vertices
    best = None
    for a, b in itertools.combinations(verts, 2):
        l2 = R.norm2(R.sub(b, a))
        if best is None or l2 > best[0]:
            best = (l2, a, b)
    return Segment(best[1], best[2])


def _selection_diameter(bodies, seed, samples, limit):
    d = bodies[0].dim
    segs = [_diameter_segment(b) for b in bodies]
    cap = common_direction([segs], seed=seed)
    v, t = cap.direction, cap.threshold_rational
    kept = [(i, s.oriented(v)) for i, s in enumerate(segs) if s.width(v) ** 2 >= t * t * s.length2]
    alpha = 2 * d
    if len(kept) < alpha:
        raise NotFound("too few segments in the common cap", {"kept": len(kept)})
    tau = min(s.width(v) for _, s in kept)
    trunc = [s.scaled(tau / s.width(v)) for _, s in kept]
    # lifted points live on <v, y - x> = tau; drop the y-coordinate with v_k != 0
    k = max(range(d), key=lambda j: abs(v[j]))
    lifted = [s.a + s.b for s in trunc]
    proj = [p[: d + k] + p[d + k + 1:] for p in lifted]
    rng = np.random.default_rng(seed)
    q, depth, how = _deep_point(proj, rng, samples)
    x = q[:d]
    y_rest = list(q[d:])
    partial = sum((v[j] * (y_rest[j if j < k else j - 1]) for j in range(d) if j != k), Fraction(0))
    partial -= R.dot(v, x)
    yk = (tau - partial) / v[k]
    y = tuple(y_rest[:k]) + (yk,) + tuple(y_rest[k:])
    witness = Segment(x, y)
    hits, sampled = tuple_hits(bodies, witness, alpha, limit, seed)
    meta = {"mode": "diameter", "direction": v, "vwidth": R.dot(v, R.sub(y, x)), "threshold": t,
            "liftedDepth": depth, "deepPoint": how}
    return SelectionWitness(witness, hits, alpha, None, len(bodies), sampled, meta)


def selection_quadratic(family, mode="volume", seed=0, samples=2000, limit=30000):
    """Witness in the hull of many (d(d+3)/2 + 1)-tuples via the lifted point cloud."""
    bodies = [b if isinstance(b, ConvexBody) else ConvexBody(tuple(b)) for b in family]
    if not bodies:
        raise TooFewBodies("empty family")
    d = bodies[0].dim
    D = param_dim(d)
    if mode == "diameter":
        if len(bodies) < 2 * d + 1:
            raise TooFewBodies(f"need at least {2 * d + 1} bodies")
        return _selection_diameter(bodies, seed, samples, limit)
    if mode != "volume":
        raise InvalidInput(f"unknown mode {mode!r}")
    if len(bodies) < D + 1:
        raise TooFewBodies(f"need at least {D + 1} bodies in dimension {d}")
    johns = [john_ellipsoid(b) for b in bodies]
    pts = [encode(e) for e in johns]
    rng = np.random.default_rng(seed)
    p, depth, how = _deep_point(pts, rng, samples)
    witness = decode(p, d)
    hits, sampled = tuple_hits(bodies, witness, D + 1, limit, seed)
    min_vol = min(float(b.volume) for b in bodies)
    meta = {"mode": "volume", "variant": "quadratic", "liftedDepth": depth, "deepPoint": how,
            "volumeRatio": witness.volume / min_vol, "target": float(volume_floor_factor(d, "quadratic"))}
    return SelectionWitness(witness, hits, D + 1, None, len(bodies), sampled, meta)


# ---------------------------------------------------------------- Tverberg-based selection

def _tverberg_r(n, D):
    """Number of parts used for n ellipsoids lifted to R^D (full r = D when n >= f(d))."""
    r = D
    while r > 2 and (r - 1) * (D + 1) + 1 > n:
        r -= 1
    return r


def _normalize_map(e):
    Ainv = R.inverse(e.shape)
    return lambda x: R.matvec(Ainv, R.sub(x, e.center))


def _part_points(bodies, part, T):
    verts, owners = [], []
    for bi in part:
        for v in bodies[bi].extreme_vertices:
            tv = T(v)
            if tv not in verts:
                verts.append(tv)
                owners.append(bi)
    return verts, owners


def _pad(members, part, n, size):
    out = list(dict.fromkeys(members))
    for i in list(part) + list(range(n)):
        if len(out) >= size:
            break
        if i not in out:
            out.append(i)
    return tuple(sorted(out))


def _tverberg_candidates(bodies, variant, seed, max_samples):
    """Witnesses and candidate tuples from Tverberg partitions of sampled subfamilies."""
    n = len(bodies)
    d = bodies[0].dim
    D = param_dim(d)
    r = _tverberg_r(n, D)
    size = (r - 1) * (D + 1) + 1
    alpha = 2 * d if variant == "steinitz" else d + 1
    johns = [john_ellipsoid(b) for b in bodies]
    out = []
    subsets = itertools.islice(itertools.combinations(range(n), size), max_samples)
    for sub in subsets:
        part, E = tverberg_ellipsoids([johns[i] for i in sub], r, seed=seed)
        parts = [[sub[i] for i in p] for p in part.parts]
        T = _normalize_map(E)
        rho = Fraction(1, 5 * d * d)
        pts = []
        for p in parts:
            verts, owners = _part_points(bodies, p, T)
            sel = steinitz_reduce(verts)
            pts.append(([verts[i] for i in sel], [owners[i] for i in sel], p))
        if variant == "steinitz":
            tuples = [_pad(own, p, n, alpha) for _, own, p in pts]
            witness = shrink(E, rho)
            cell_ratio = None
        else:
            refined = vol_planes_refine([X for X, _, _ in pts])
            tuples = [_pad([own[i] for i in S], p, n, alpha) for (X, own, p), S in zip(pts, refined.subsets)]
            # map the cell back to the original coordinates and take its John ellipsoid
            back = tuple(R.add(R.matvec(E.shape, v), E.center) for v in refined.cell.extreme_vertices)
            witness = john_ellipsoid(ConvexBody(back))
            cell_ratio = refined.ratio
        out.append({"witness": witness, "tuples": tuples, "E": E, "r": r, "subfamily": sub,
                    "parts": parts, "cellRatio": cell_ratio})
    return out, r, alpha


def _selection_tverberg(family, variant, seed, max_samples, limit, helly):
    bodies = [b if isinstance(b, ConvexBody) else ConvexBody(tuple(b)) for b in family]
    if not bodies:
        raise TooFewBodies("empty family")
    n, d = len(bodies), bodies[0].dim
    D = param_dim(d)
    if n < D + 2 or n < 2 * d:
        raise TooFewBodies(f"need at least {max(D + 2, 2 * d)} bodies in dimension {d}")
    cands, r, alpha = _tverberg_candidates(bodies, variant, seed, max_samples)
    if not cands:
        raise NotFound("no Tverberg partition found", {"n": n, "r": r})
    min_vol = min(float(b.volume) for b in bodies)
    target = float(volume_floor_factor(d, variant)) * min_vol
    options = [(c["witness"], c) for c in cands]
    if helly:
        from .sametype import fractional_helly_search

        hull_tuples = sorted({t for c in cands for t in c["tuples"]})
        hulls = [ConvexBody(tuple(v for i in t for v in bodies[i].extreme_vertices)) for t in hull_tuples]
        try:
            _, W = fractional_helly_search(hulls, min(r, len(hulls)), target)
            options.append((W, None))
        except NotFound:
            pass
    best = None
    for W, c in options:
        hits, sampled = tuple_hits(bodies, W, alpha, limit, seed)
        if hits and (best is None or len(hits) > len(best[1])):
            best = (W, hits, sampled, c)
    if best is None:
        raise NotFound("no candidate witness lies in any tuple hull")
    W, hits, sampled, c = best
    meta = {"variant": variant, "r": r, "samples": len(cands), "target": target / min_vol,
            "volumeRatio": W.volume / min_vol, "source": "tverberg" if c else "fractionalHelly"}
    if variant == "simplex":
        E = (c or cands[0])["E"]
        meta["chainBound"] = float(chain_bound(d, r))
        meta["chainRatio"] = W.volume / E.volume
    return SelectionWitness(W, hits, alpha, None, n, sampled, meta)


def selection_2d(family, seed=0, max_samples=8, limit=30000, helly=True):
    """Witness in the hull of many 2d-tuples (Tverberg + quantitative Steinitz)."""
    return _selection_tverberg(family, "steinitz", seed, max_samples, limit, helly)


def selection_simplex(family, seed=0, max_samples=8, limit=30000, helly=True):
    """Witness in the hull of many (d+1)-tuples (adds arrangement refinement)."""
    return _selection_tverberg(family, "simplex", seed, max_samples, limit, helly)


# ---------------------------------------------------------------- weak epsilon-nets

def _lifted_centroid_piece(bodies):
    johns = [john_ellipsoid(b) for b in bodies]
    pts = [encode(e) for e in johns]
    w = [Fraction(1, len(pts))] * len(pts)
    return decode(_exact_combination(pts, w), bodies[0].dim)


def _piece_for(sub, variant, seed):
    d = sub[0].dim
    D = param_dim(d)
    try:
        if variant == "quadratic" and len(sub) >= D + 1:
            return selection_quadratic(sub, seed=seed).witness, "quadratic"
        if variant in ("steinitz", "simplex") and len(sub) >= max(D + 2, 2 * d):
            fn = selection_2d if variant == "steinitz" else selection_simplex
            return fn(sub, seed=seed, max_samples=2).witness, variant
    except NotFound:
        pass
    # too small for the variant's pipeline: the lifted centroid of all John ellipsoids
    return _lifted_centroid_piece(sub), "liftedCentroid"


def weak_epsnet(family, epsilon, variant="simplex", seed=0, exhaustive_limit=20, draws=10**4):
    """Greedy volumetric weak epsilon-net.

    While some ceil(eps n)-subfamily has no piece inside its hull, run the
    variant's selection on it and add the witness. Subfamilies are scanned
    lexicographically (exhaustively for n <= ``exhaustive_limit``).
    """
    bodies = [b if isinstance(b, ConvexBody) else ConvexBody(tuple(b)) for b in family]
    eps = R.q(epsilon)
    if not 0 < eps <= 1:
        raise InvalidInput("epsilon must lie in (0, 1]")
    if variant not in ("quadratic", "steinitz", "simplex"):
        raise InvalidInput(f"unknown variant {variant!r}")
    n = len(bodies)
    if n == 0:
        raise InvalidInput("empty family")
    d = bodies[0].dim
    m = ceil(eps * n)
    alpha = tuple_size(d, variant)
    floor = float(volume_floor_factor(d, variant)) * min(float(b.volume) for b in bodies) * (1 - 1e-4)
    bound = Fraction(comb(n, alpha), comb(m, alpha)) + 1 if comb(m, alpha) else None
    exhaustive = n <= exhaustive_limit
    if exhaustive:
        subfamilies = list(itertools.combinations(range(n), m))
    else:
        rng = np.random.default_rng(seed)
        subfamilies = sorted({tuple(sorted(rng.choice(n, m, replace=False).tolist())) for _ in range(draws)})
    hulls = {}

    def hull(S):
        if S not in hulls:
            try:
                hulls[S] = _hull_of(bodies, S)
            except DegenerateHull:
                hulls[S] = None
        return hulls[S]

    pieces, sources, targets = [], [], []
    unpierced = list(subfamilies)
    complete = True
    while unpierced:
        S = unpierced[0]
        if hull(S) is None:
            unpierced.pop(0)
            complete = False
            continue
        piece, how = _piece_for([bodies[i] for i in S], variant, seed)
        if not _contains(hull(S), piece) or piece.volume < floor:
            complete = False
            break
        pieces.append(piece)
        sources.append(how)
        targets.append(S)
        unpierced = [T for T in unpierced if hull(T) is None or not _contains(hull(T), piece)]
    meta = {"sources": sources, "targets": targets, "exhaustive": exhaustive, "subfamilySize": m}
    return EpsNet(pieces, eps, floor, variant, alpha, bound, complete and exhaustive, len(subfamilies), meta)


def slab_instance(d, epsilon, n):
    """1/eps groups of eps*n unit boxes, group i between x_d = 3i and x_d = 3i + 3."""
    eps = R.q(epsilon)
    if eps <= 0 or eps > 1 or (1 / eps).denominator != 1:
        raise InvalidInput("1/epsilon must be a positive integer")
    k = int(1 / eps)
    if n % k:
        raise InvalidInput("n must be divisible by 1/epsilon")
    per = n // k
    bodies = []
    for g in range(k):
        for j in range(per):
            lo = [Fraction(j, 2)] + [Fraction(0)] * (d - 2) + [Fraction(3 * g + 1)]
            if d == 1:
                lo = [Fraction(3 * g + 1) + Fraction(j, 4 * per)]
            hi = [x + 1 for x in lo]
            bodies.append(box(lo, hi))
    return bodies


def ball_in_hull(points, radius=1):
    """Exact test that the origin-centered ball of ``radius`` lies in ``conv(points)``."""
    hrep, _ = convex_hull([R.qvec(p) for p in points])
    return contains_ellipsoid(hrep, ball((0,) * hrep.dim, radius))
