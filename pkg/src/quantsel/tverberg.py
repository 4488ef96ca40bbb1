"""Tverberg partitions of points, ellipsoids and segments.

Every search here ends in an exact certificate: the returned common point
is re-derived by rational LP (``lp.common_point``), so heuristics can only
cost time, never correctness.

Point partitions use exhaustive enumeration when small, otherwise Radon's
affine dependence (r = 2) or Sarkaria's tensor lifting followed by
Bárány–Onn colorful Carathéodory pivoting (r >= 3). Ellipsoids and segments
are handled by lifting them to points (``ellipsoid.encode`` and
``[x, y] -> (x, y)``).
"""
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, comb, cos, pi, sqrt
from typing import NamedTuple

import numpy as np
from scipy.optimize import brentq, nnls
from scipy.special import betainc, betaincinv

from . import _rational as R
from .ellipsoid import decode, encode, john_ellipsoid, param_dim
from .errors import InvalidInput, NotFound, SearchExhausted
from .geometry import ConvexBody, intersect_bodies
from .lp import common_point

__all__ = [
    "Partition", "TransversalSet", "Segment", "CapWitness", "DiameterTverberg", "Reduction",
    "tverberg_points", "colorful_tverberg_points", "tverberg_ellipsoids",
    "colorful_tverberg_ellipsoids", "reduce_transversals", "reduced_colorful_tverberg",
    "cap_threshold", "cap_threshold_rational", "common_direction", "colorful_tverberg_segments",
    "tverberg_number", "stirling2",
]

EXHAUSTIVE_LIMIT = 10**6


@dataclass(frozen=True)
class Partition:
    parts: tuple

    def __post_init__(self):
        parts = tuple(tuple(sorted(p)) for p in self.parts)
        if not parts or any(not p for p in parts):
            raise InvalidInput("partition parts must be nonempty")
        flat = [i for p in parts for i in p]
        if len(flat) != len(set(flat)):
            raise InvalidInput("partition parts must be disjoint")
        object.__setattr__(self, "parts", parts)

    def __len__(self):
        return len(self.parts)


@dataclass(frozen=True)
class TransversalSet:
    """``transversals[i][j]`` is the member of family ``family_subset[j]`` used by transversal ``i``."""

    transversals: tuple
    family_subset: tuple = None

    def __post_init__(self):
        ts = tuple(tuple(t) for t in self.transversals)
        if not ts:
            raise InvalidInput("need at least one transversal")
        width = len(ts[0])
        if any(len(t) != width for t in ts):
            raise InvalidInput("transversals must have equal length")
        for j in range(width):
            col = [t[j] for t in ts if t[j] is not None]
            if len(col) != len(set(col)):
                raise InvalidInput(f"transversals reuse a member of family {j}")
        object.__setattr__(self, "transversals", ts)
        if self.family_subset is not None:
            fs = tuple(self.family_subset)
            if len(fs) != width:
                raise InvalidInput("family_subset must match transversal length")
            object.__setattr__(self, "family_subset", fs)

    @property
    def families(self):
        return self.family_subset if self.family_subset is not None else tuple(range(len(self.transversals[0])))

    def members(self, i):
        """(family, index) pairs of transversal ``i``."""
        return [(f, k) for f, k in zip(self.families, self.transversals[i]) if k is not None]


@dataclass(frozen=True)
class Segment:
    a: tuple
    b: tuple

    def __post_init__(self):
        a, b = R.qvec(self.a), R.qvec(self.b)
        if len(a) != len(b) or not a:
            raise InvalidInput("segment endpoints must share a dimension")
        if a == b:
            raise InvalidInput("segment endpoints must be distinct")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def dim(self):
        return len(self.a)

    @property
    def length2(self):
        return R.norm2(R.sub(self.b, self.a))

    @property
    def length(self):
        return sqrt(float(self.length2))

    def width(self, v):
        """Signed extent ``<v, b - a>``."""
        return R.dot(R.qvec(v), R.sub(self.b, self.a))

    def oriented(self, v):
        return self if self.width(v) >= 0 else Segment(self.b, self.a)

    def scaled(self, f):
        """Shrink (or grow) about the midpoint by factor ``f``."""
        f = R.q(f)
        mid = R.scale(Fraction(1, 2), R.add(self.a, self.b))
        half = R.scale(f / 2, R.sub(self.b, self.a))
        return Segment(R.sub(mid, half), R.add(mid, half))


@dataclass(frozen=True)
class CapWitness:
    direction: tuple
    threshold: float
    covered_counts: tuple
    threshold_rational: Fraction = field(default=None)


class DiameterTverberg(NamedTuple):
    transversals: TransversalSet
    witness: Segment
    cap: CapWitness


class Reduction(NamedTuple):
    indices: tuple  # per family: chosen member indices (<= d+1)
    intersection: ConvexBody  # of the reduced hulls
    ratio: Fraction  # vol(reduced intersection) / vol(original intersection)
    proven_bound: Fraction
    stated_bound: Fraction


def tverberg_number(d, r):
    return (r - 1) * (d + 1) + 1


def stirling2(n, k):
    """Number of partitions of an n-set into k nonempty blocks."""
    if k == 0:
        return int(n == 0)
    return sum((-1) ** i * comb(k, i) * (k - i) ** n for i in range(k + 1)) // _fact(k)


def _fact(k):
    out = 1
    for i in range(2, k + 1):
        out *= i
    return out


# ---------------------------------------------------------------- point Tverberg

def _set_partitions(n, r):
    """Restricted growth strings: block labels in first-occurrence order."""
    labels = [0] * n

    def rec(i, used):
        if n - i < r - used:
            return
        if i == n:
            if used == r:
                yield tuple(labels)
            return
        for b in range(min(used + 1, r)):
            labels[i] = b
            yield from rec(i + 1, max(used, b + 1))

    yield from rec(0, 0)


def _parts_from_labels(labels, r):
    parts = [[] for _ in range(r)]
    for i, b in enumerate(labels):
        parts[b].append(i)
    return parts


def _certify(points, parts):
    hit = common_point([[points[i] for i in p] for p in parts])
    if hit is None:
        return None
    return Partition(parts), hit[0]


def _exhaustive_points(points, r):
    for labels in _set_partitions(len(points), r):
        out = _certify(points, _parts_from_labels(labels, r))
        if out:
            return out
    raise NotFound("no Tverberg partition exists", {"n": len(points), "r": r, "method": "exhaustive"})


def _radon(points):
    n, d = len(points), len(points[0])
    M = [[p[k] for p in points] for k in range(d)] + [[Fraction(1)] * n]
    ns = R.nullspace(M, n)
    if not ns:
        return None
    lam = ns[0]
    pos = [i for i in range(n) if lam[i] > 0]
    neg = [i for i in range(n) if lam[i] <= 0]
    if not pos or not neg:
        return None
    return [pos, neg]


def _normalized(points):
    X = np.array([[float(v) for v in p] for p in points])
    X = X - X.mean(axis=0)
    s = np.abs(X).max()
    return X / s if s > 0 else X


def _min_norm_weights(T):
    """Convex weights of the min-norm point of conv(rows of T)."""
    n = T.shape[0]
    big = 1e3
    A = np.vstack([T.T, big * np.ones((1, n))])
    b = np.concatenate([np.zeros(T.shape[1]), [big]])
    lam, _ = nnls(A, b, maxiter=50 * n)
    s = lam.sum()
    return lam / s if s > 0 else np.full(n, 1.0 / n)


def _colorful_caratheodory(classes, rng, max_pivots):
    """Bárány–Onn pivoting: one vector per class with 0 in their hull.

    ``classes`` is a list of (k_i, D) arrays each containing 0 in its hull.
    Yields candidate choices (callers certify them exactly).
    """
    N = len(classes)
    choice = [int(rng.integers(len(c))) for c in classes]
    pivots = 0
    while pivots < max_pivots:
        pivots += 1
        T = np.array([classes[i][choice[i]] for i in range(N)])
        lam = _min_norm_weights(T)
        x = lam @ T
        nx = float(x @ x)
        if nx < 1e-18:
            yield tuple(choice)
            choice = [int(rng.integers(len(c))) for c in classes]
            continue
        order = np.argsort(lam, kind="stable")
        moved = False
        for i in order[: max(1, N // 4)]:
            scores = classes[i] @ x
            j = int(np.argmin(scores))
            if scores[j] < nx - 1e-15 and j != choice[i]:
                choice[i] = j
                moved = True
                break
        if not moved:
            choice = [int(rng.integers(len(c))) for c in classes]


def _sarkaria(points, r, rng, max_pivots):
    n, d = len(points), len(points[0])
    N = tverberg_number(d, r)
    X = _normalized(points[:N])
    U = np.vstack([np.eye(r - 1), -np.ones((1, r - 1))])
    classes = []
    for x in X:
        h = np.append(x, 1.0)
        classes.append(np.array([np.kron(h, u) for u in U]))
    seen = set()
    for choice in _colorful_caratheodory(classes, rng, max_pivots):
        if choice in seen:
            continue
        seen.add(choice)
        parts = [[i for i in range(N) if choice[i] == j] for j in range(r)]
        if any(not p for p in parts):
            continue
        parts[0].extend(range(N, n))
        out = _certify(points, parts)
        if out:
            return out
    return None


def _heuristic_points(points, r, rng, max_pivots):
    n, d = len(points), len(points[0])
    if r == 2:
        for sub in (range(min(n, d + 2)), range(n)):
            idx = list(sub)
            parts = _radon([points[i] for i in idx])
            if parts:
                parts = [[idx[i] for i in p] for p in parts]
                parts[1].extend(i for i in range(n) if i not in idx)
                out = _certify(points, parts)
                if out:
                    return out
        return None
    if n >= tverberg_number(d, r):
        out = _sarkaria(points, r, rng, max_pivots)
        if out:
            return out
    # below the Tverberg number: a short random probe
    for _ in range(min(200, max_pivots)):
        labels = rng.integers(r, size=n)
        parts = _parts_from_labels(labels, r)
        if all(parts):
            out = _certify(points, parts)
            if out:
                return out
    return None


def _complete(found, n):
    """Put unused points into the first part; hull containment is preserved."""
    part, x = found
    used = {i for p in part.parts for i in p}
    rest = [i for i in range(n) if i not in used]
    if not rest:
        return found
    return Partition([list(part.parts[0]) + rest] + [list(p) for p in part.parts[1:]]), x


def tverberg_points(points, r, method="auto", seed=0, max_pivots=10**4):
    """Partition ``points`` into ``r`` parts whose hulls share a point.

    ``method`` is ``"exhaustive"``, ``"heuristic"`` or ``"auto"`` (heuristic
    first when a partition is guaranteed to exist, exhaustive when the
    number of set partitions is at most 10^6). Returns ``(Partition, point)``.
    """
    points = [R.qvec(p) for p in points]
    if r < 1:
        raise InvalidInput("r must be positive")
    if not points:
        raise InvalidInput("no points")
    n, d = len(points), len(points[0])
    if any(len(p) != d for p in points):
        raise InvalidInput("dimension mismatch")
    if r == 1:
        return Partition([list(range(n))]), points[0]
    if n < r:
        raise NotFound("fewer points than parts", {"n": n, "r": r})
    count = stirling2(n, r)
    rng = np.random.default_rng(seed)
    if method == "exhaustive":
        if count > EXHAUSTIVE_LIMIT:
            raise InvalidInput(f"{count} set partitions exceed the exhaustive limit")
        return _exhaustive_points(points, r)
    guaranteed = n >= tverberg_number(d, r)
    if method == "heuristic" or guaranteed or count > EXHAUSTIVE_LIMIT:
        out = _heuristic_points(points, r, rng, max_pivots)
        if out:
            return _complete(out, n)
        if method == "heuristic" or count > EXHAUSTIVE_LIMIT:
            raise NotFound("heuristic search found no partition", {"n": n, "r": r, "method": "heuristic"})
    return _exhaustive_points(points, r)


# ---------------------------------------------------------------- colorful

def _transversal_sets(sizes, r):
    """Disjoint r-tuples of full transversals, class 0 unordered."""
    firsts = itertools.combinations(range(sizes[0]), r)
    rest = [list(itertools.permutations(range(s), r)) for s in sizes[1:]]
    for c0 in firsts:
        for combo in itertools.product(*rest):
            yield tuple(tuple([c0[t]] + [c[t] for c in combo]) for t in range(r))


def _transversal_count(sizes, r):
    total = comb(sizes[0], r)
    for s in sizes[1:]:
        total *= _fact(s) // _fact(s - r)
    return total


def colorful_tverberg_points(classes, r, seed=0, max_tries=10**4):
    """``r`` disjoint transversals (one point per class) with a common hull point.

    Returns ``(TransversalSet, point)``; raises NotFound.
    """
    classes = [[R.qvec(p) for p in c] for c in classes]
    if r < 1:
        raise InvalidInput("r must be positive")
    if not classes or any(len(c) < r for c in classes):
        raise NotFound("some class has fewer than r members", {"sizes": [len(c) for c in classes], "r": r})
    sizes = [len(c) for c in classes]

    def attempt(ts):
        hulls = [[classes[j][t[j]] for j in range(len(classes))] for t in ts]
        hit = common_point(hulls)
        return (TransversalSet(ts), hit[0]) if hit else None

    if r == 1:
        return attempt(((0,) * len(classes),))
    count = _transversal_count(sizes, r)
    if count <= EXHAUSTIVE_LIMIT:
        for ts in _transversal_sets(sizes, r):
            out = attempt(ts)
            if out:
                return out
        raise NotFound("no colorful Tverberg partition exists", {"sizes": sizes, "r": r, "method": "exhaustive"})
    rng = np.random.default_rng(seed)
    for _ in range(max_tries):
        picks = [rng.permutation(s)[:r] for s in sizes]
        ts = tuple(tuple(int(p[t]) for p in picks) for t in range(r))
        out = attempt(ts)
        if out:
            return out
    raise NotFound("random transversal search failed", {"sizes": sizes, "r": r, "tries": max_tries})


# ---------------------------------------------------------------- ellipsoids

def tverberg_ellipsoids(ellipsoids, r, method="auto", seed=0):
    """Partition ellipsoids so the hulls of the parts share a decoded ellipsoid."""
    ellipsoids = list(ellipsoids)
    if not ellipsoids:
        raise InvalidInput("no ellipsoids")
    d = ellipsoids[0].dim
    part, p = tverberg_points([encode(e) for e in ellipsoids], r, method=method, seed=seed)
    return part, decode(p, d)


def colorful_tverberg_ellipsoids(families, r, seed=0):
    """Disjoint transversals of ellipsoid families with a common decoded ellipsoid."""
    families = [list(f) for f in families]
    if not families or not families[0]:
        raise NotFound("empty family")
    d = families[0][0].dim
    ts, p = colorful_tverberg_points([[encode(e) for e in f] for f in families], r, seed=seed)
    return ts, decode(p, d)


def _normalizer(e):
    """Affine map x -> A^{-1}(x - c) sending ``e`` to the unit ball."""
    Ainv = R.inverse(e.shape)
    return lambda x: R.matvec(Ainv, R.sub(R.qvec(x), e.center))


def reduce_transversals(families):
    """Shrink each family to at most d+1 members keeping a large common hull.

    ``families`` are lists of ConvexBody. Pipeline: John ellipsoid of the
    intersection of hulls -> normalize it to the unit ball -> Steinitz
    reduction to <= 2d vertices per family -> arrangement refinement to d+1
    vertices -> cover the vertices by member bodies.
    """
    from .selection import steinitz_reduce, vol_planes_refine

    families = [list(f) for f in families]
    if not families or any(not f for f in families):
        raise InvalidInput("families must be nonempty")
    d = families[0][0].dim
    k = len(families)
    hulls = [ConvexBody(tuple(v for b in f for v in b.vertices)) for f in families]
    inter = intersect_bodies(hulls)
    if inter is None:
        from .errors import DegenerateHull
        raise DegenerateHull(d - 1, "intersection of hulls is not full-dimensional")
    proven = Fraction(1, (5 * d**3 * k * comb(2 * d, d)) ** d)
    stated = Fraction(5**d, (d**3 * k * 4**d) ** d)
    if all(len(f) <= d + 1 for f in families):
        idx = tuple(tuple(range(len(f))) for f in families)
        return Reduction(idx, inter, Fraction(1), proven, stated)
    E = john_ellipsoid(inter)
    T = _normalizer(E)
    chosen_pts = []
    owners = []
    for f in families:
        verts = []
        owner = []
        for bi, b in enumerate(f):
            for v in b.extreme_vertices:
                tv = T(v)
                if tv not in verts:
                    verts.append(tv)
                    owner.append(bi)
        sel = steinitz_reduce(verts)
        chosen_pts.append([verts[i] for i in sel])
        owners.append([owner[i] for i in sel])
    refined = vol_planes_refine(chosen_pts)
    indices = []
    for f, subset, own in zip(families, refined.subsets, owners):
        members = sorted(set(own[i] for i in subset))
        indices.append(tuple(members))
    reduced = [ConvexBody(tuple(v for i in idx for v in f[i].vertices)) for f, idx in zip(families, indices)]
    red_inter = intersect_bodies(reduced)
    ratio = red_inter.volume / inter.volume
    return Reduction(tuple(indices), red_inter, ratio, proven, stated)


def reduced_colorful_tverberg(families, r, seed=0):
    """d+1 of the d(d+3)/2 families with r disjoint transversals and a common ellipsoid.

    Returns ``(family_subset, TransversalSet, witness Ellipsoid)``.
    """
    families = [list(f) for f in families]
    d = families[0][0].dim
    D = param_dim(d)
    if len(families) != D:
        raise InvalidInput(f"need exactly {D} families in dimension {d}")
    k = comb(D, d + 1) * (r - 1) + 1
    johns = [[john_ellipsoid(b) for b in f] for f in families]
    ts, _ = colorful_tverberg_ellipsoids(johns, k, seed=seed)
    # reduce all k transversals jointly: their hulls share the decoded ellipsoid
    red = reduce_transversals([[families[j][t[j]] for j in range(D)] for t in ts.transversals])
    by_subset = {}
    for t, kept in zip(ts.transversals, red.indices):
        fams = sorted(kept)
        for j in range(D):  # pad to exactly d+1 families, smallest indices first
            if len(fams) >= d + 1:
                break
            if j not in fams:
                fams.append(j)
        fams = tuple(sorted(fams))
        by_subset.setdefault(fams, []).append(t)
    subset = min((s for s, ts_ in by_subset.items() if len(ts_) >= r), default=None)
    if subset is None:
        raise NotFound("pigeonhole failed", {"k": k, "r": r})
    chosen = by_subset[subset][:r]
    out = TransversalSet([[t[j] for j in subset] for t in chosen], family_subset=subset)
    hulls = [ConvexBody(tuple(v for j in subset for v in families[j][t[j]].vertices)) for t in chosen]
    inter = intersect_bodies(hulls)
    if inter is None:
        raise NotFound("reduced transversals lost their common interior", {"subset": subset})
    return subset, out, john_ellipsoid(inter)


# ---------------------------------------------------------------- diameter

def cap_threshold(d):
    """delta_d with mu{v in S^{d-1} : |<v, x>| > delta_d} = 1 - 1/(5d).

    ``<v, x>^2`` is Beta(1/2, (d-1)/2) for uniform v, so delta_d^2 is the
    1/(5d) quantile. d = 1 has no solution (two atoms); 4/5 is used.
    """
    if d < 1:
        raise InvalidInput("d must be positive")
    if d == 1:
        return 0.8
    if d == 2:
        return cos(9 * pi / 20)
    x = float(betaincinv(0.5, (d - 1) / 2, 1 / (5 * d)))
    if not 0 < x < 1:
        x = brentq(lambda t: betainc(0.5, (d - 1) / 2, t) - 1 / (5 * d), 0, 1)
    return sqrt(x)


def cap_threshold_rational(d):
    """Rational ``t`` with ``delta_d (1 - 1e-6) <= t <= delta_d``."""
    delta = cap_threshold(d)
    t = Fraction(delta * (1 - 5e-7)).limit_denominator(10**9)
    assert delta * (1 - 1e-6) <= t <= delta
    return t


def _rational_unit(v, max_den=10**6):
    """Exact rational unit vector near ``v`` (inverse stereographic projection)."""
    v = np.asarray(v, dtype=float)
    v = v / np.linalg.norm(v)
    if len(v) == 1:
        return (Fraction(1 if v[0] >= 0 else -1),)
    if v[-1] > 0:
        return tuple(-x for x in _rational_unit(-v, max_den))
    w = [Fraction(x / (1 - v[-1])).limit_denominator(max_den) for x in v[:-1]]
    s = sum(x * x for x in w)
    return tuple(2 * x / (s + 1) for x in w) + ((s - 1) / (s + 1),)


def common_direction(families, seed=0, max_samples=10**5, threshold=None):
    """Direction covered by the caps of at least half the segments of every family.

    Coordinate axes are tried first, then uniform random directions.
    A segment ``[x, y]`` counts when ``|<v, y - x>| >= t |y - x|`` where
    ``t`` is a rational lower bound for delta_d.
    """
    families = [list(f) for f in families]
    if not families or any(not f for f in families):
        raise InvalidInput("families must be nonempty")
    d = families[0][0].dim
    t = R.q(threshold) if threshold is not None else cap_threshold_rational(d)
    need = [ceil(len(f) / 2) for f in families]
    diffs = [[R.sub(s.b, s.a) for s in f] for f in families]
    lens = [[R.norm2(u) for u in f] for f in diffs]
    t2 = t * t

    def counts(v):
        out = []
        for fd, fl in zip(diffs, lens):
            c = 0
            for u, l2 in zip(fd, fl):
                w = R.dot(v, u)
                c += w * w >= t2 * l2
            out.append(c)
        return out

    rng = np.random.default_rng(seed)
    candidates = itertools.chain(
        (tuple(Fraction(int(i == j)) for j in range(d)) for i in range(d)),
        (_rational_unit(rng.normal(size=d)) for _ in range(max_samples)),
    )
    for v in candidates:
        c = counts(v)
        if all(ci >= ni for ci, ni in zip(c, need)):
            return CapWitness(v, cap_threshold(d) if threshold is None else float(t), tuple(c), t)
    raise SearchExhausted("no common cap direction found", {"samples": max_samples})


def colorful_tverberg_segments(families, r, seed=0, threshold=None):
    """Disjoint segment transversals whose hulls share a long segment.

    Returns ``DiameterTverberg(transversals, witness, cap)``; the witness has
    ``<v, y - x>`` equal to the rational threshold exactly.
    """
    families = [list(f) for f in families]
    if any(s.length2 < 1 for f in families for s in f):
        raise InvalidInput("segments must have length at least 1")
    cap = common_direction(families, seed=seed, threshold=threshold)
    v, t = cap.direction, cap.threshold_rational
    kept, lifted = [], []
    for f in families:
        idx, pts = [], []
        for i, s in enumerate(f):
            w = s.width(v)
            if w * w >= t * t * s.length2:
                o = s.oriented(v)
                # truncate to v-width exactly t about the midpoint
                o = o.scaled(t / o.width(v))
                idx.append(i)
                pts.append(o.a + o.b)
        kept.append(idx)
        lifted.append(pts)
    ts, p = colorful_tverberg_points(lifted, r, seed=seed)
    d = families[0][0].dim
    witness = Segment(p[:d], p[d:])
    mapped = TransversalSet([[kept[j][k] for j, k in enumerate(tr)] for tr in ts.transversals])
    return DiameterTverberg(mapped, witness, cap)
