"""Independent certificate checks.

Every claim in a certificate is re-derived from the instance and the
certificate alone, with exact arithmetic: containments, disjointness,
volumes, counts and the achieved bounds. Nothing from the search that
produced the certificate is reused.
"""
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, comb

from .. import _rational as R
from ..ellipsoid import Ellipsoid, encode, unit_ball_volume
from ..errors import DegenerateHull, InvalidInput, QuantselError
from ..geometry import ConvexBody, Mixed, contains_ellipsoid, convex_hull, family_order_type, point_in_hull
from ..lp import convex_weights
from ..selection import tuple_size, volume_floor_factor
from ..tverberg import Segment, cap_threshold
from .certify import TUPLE_LIMIT
from .io import Certificate, ellipsoid_from, qs, rat, rats, segment_from, witness_from

VOLUME_SLACK = 1e-4
EPSNET_EXHAUSTIVE = 20  # bodies; above this completeness is not re-checked


@dataclass
class Verdict:
    ok: bool
    failures: list = field(default_factory=list)

    def __bool__(self):
        return self.ok


class _Checker:
    def __init__(self):
        self.failures = []

    def require(self, cond, message):
        if not cond:
            self.failures.append(message)
        return bool(cond)


def _hull(points):
    try:
        return convex_hull(list(points))[0]
    except DegenerateHull:
        return None


def _volume(e):
    return unit_ball_volume(e.dim) * float(e.det)


def _ellipsoid_in_points_hull(points, e):
    h = _hull(points)
    return h is not None and h.dim == e.dim and contains_ellipsoid(h, e)


def _segment_in_points_hull(points, s):
    return point_in_hull(points, s.a) is not None and point_in_hull(points, s.b) is not None


def _index_list(c, seq, n, name):
    ok = isinstance(seq, list) and all(isinstance(i, int) and not isinstance(i, bool) for i in seq)
    ok = ok and all(0 <= i < n for i in seq) and len(set(seq)) == len(seq)
    return c.require(ok, f"{name}: indices must be distinct integers in [0, {n})")


def _check_john(c, inst, p, a):
    bodies = inst.members
    es = [ellipsoid_from(e) for e in p["ellipsoids"]]
    if not c.require(len(es) == len(bodies), "one ellipsoid per body"):
        return
    c.require(a["dets"] == [qs(e.det) for e in es], "achieved dets do not match")
    d = inst.dimension
    for i, (b, e) in enumerate(zip(bodies, es)):
        c.require(contains_ellipsoid(b.hrep, e), f"ellipsoid {i} is not inside its body")
        c.require(_volume(e) >= float(b.volume) * d**-d * (1 - VOLUME_SLACK), f"ellipsoid {i} below d^-d volume")


def _check_selection(c, inst, p, a):
    bodies = inst.members
    n, d = len(bodies), inst.dimension
    variant, mode = p["variant"], p["mode"]
    c.require(mode in ("volume", "diameter"), "mode must be volume or diameter")
    c.require(variant in ("quadratic", "steinitz", "simplex"), "unknown variant")
    if c.failures:
        return
    alpha = 2 * d if mode == "diameter" else tuple_size(d, variant)
    c.require(p["tupleSize"] == alpha, f"tuple size must be {alpha}")
    W = witness_from(p["witness"])
    c.require(isinstance(W, Ellipsoid if mode == "volume" else Segment), "witness type does not match mode")
    hits = p["hitTuples"]
    c.require(isinstance(hits, list) and hits, "no hit tuples")
    tuples = []
    for t in hits:
        if not (_index_list(c, t, n, "hit tuple") and c.require(len(t) == alpha and t == sorted(t),
                                                                  "hit tuples must be sorted alpha-sets")):
            return
        tuples.append(tuple(t))
    c.require(tuples == sorted(set(tuples)), "hit tuples must be listed once, in order")

    def hit(t):
        pts = [v for i in t for v in bodies[i].extreme_vertices]
        if isinstance(W, Ellipsoid):
            return _ellipsoid_in_points_hull(pts, W)
        return _hull(pts) is not None and _segment_in_points_hull(pts, W)

    for t in tuples:
        if not c.require(hit(t), f"witness not in the hull of tuple {t}"):
            return
    total = comb(n, alpha)
    c.require(p["sampled"] == (total > TUPLE_LIMIT), "sampled flag inconsistent with the tuple count")
    if not p["sampled"]:
        every = [t for t in itertools.combinations(range(n), alpha) if hit(t)]
        c.require(every == tuples, "hit list is not the complete set of hit tuples")
    c.require(rat(a["fraction"]) == Fraction(len(tuples), total), "fraction does not match")
    c.require(a["hits"] == len(tuples), "hit count does not match")
    if mode == "volume":
        c.require(rat(a["witnessDet"]) == W.det, "witness det does not match")
        floor = float(volume_floor_factor(d, variant)) * min(float(b.volume) for b in bodies)
        c.require(_volume(W) >= floor * (1 - VOLUME_SLACK), "witness volume below the variant floor")
    else:
        c.require(rat(a["witnessLength2"]) == W.length2, "witness length does not match")


def _check_epsnet(c, inst, p, a):
    bodies = inst.members
    n, d = len(bodies), inst.dimension
    eps = rat(p["epsilon"])
    variant = p["variant"]
    if not c.require(0 < eps <= 1 and variant in ("quadratic", "steinitz", "simplex"), "bad epsilon or variant"):
        return
    m = ceil(eps * n)
    alpha = tuple_size(d, variant)
    c.require(p["subfamilySize"] == m, "subfamily size must be ceil(eps n)")
    c.require(p["tupleSize"] == alpha, "tuple size does not match the variant")
    pieces = [ellipsoid_from(e) for e in p["pieces"]]
    c.require(a["size"] == len(pieces), "net size does not match")
    c.require(a["dets"] == [qs(e.det) for e in pieces], "piece dets do not match")
    floor = float(volume_floor_factor(d, variant)) * min(float(b.volume) for b in bodies)
    for i, e in enumerate(pieces):
        c.require(_volume(e) >= floor * (1 - VOLUME_SLACK), f"piece {i} below the volume floor")
    bound = Fraction(comb(n, alpha), comb(m, alpha)) + 1 if comb(m, alpha) else None
    c.require(a["sizeBound"] == (None if bound is None else qs(bound)), "size bound does not match")
    if bound is not None:
        c.require(len(pieces) <= bound, "net exceeds the counting bound")
    targets = p["targets"]
    if not c.require(len(targets) == len(pieces), "one target subfamily per piece"):
        return
    hulls = {}

    def hull(S):
        if S not in hulls:
            h = _hull(v for i in S for v in bodies[i].extreme_vertices)
            hulls[S] = h if h is not None and h.dim == d else None
        return hulls[S]

    for k, (S, e) in enumerate(zip(targets, pieces)):
        if not (_index_list(c, S, n, "target") and c.require(len(S) == m, "targets must have ceil(eps n) members")):
            return
        h = hull(tuple(sorted(S)))
        c.require(h is not None and contains_ellipsoid(h, e), f"piece {k} is not inside its target hull")
    c.require(isinstance(p["complete"], bool), "complete must be a boolean")
    if c.failures or n > EPSNET_EXHAUSTIVE:
        c.require(not p["complete"], "completeness cannot be checked for this many bodies")
        return
    pierced = True
    for S in itertools.combinations(range(n), m):
        h = hull(S)
        if h is None or not any(contains_ellipsoid(h, e) for e in pieces):
            pierced = False
            break
    c.require(p["complete"] == pierced, "completeness claim does not match the exhaustive check")


def _check_tverberg(c, inst, p, a, colorful):
    r = p["r"]
    W = ellipsoid_from(p["witness"])
    c.require(rat(a["witnessDet"]) == W.det, "witness det does not match")
    if not colorful:
        bodies = inst.members
        es = [ellipsoid_from(e) for e in p["ellipsoids"]]
        if not c.require(len(es) == len(bodies), "one ellipsoid per body"):
            return
        parts = p["parts"]
        c.require(len(parts) == r and a["parts"] == r, "need exactly r parts")
        if not c.require(all(isinstance(q, list) and q for q in parts), "parts must be nonempty lists"):
            return
        flat = [i for q in parts for i in q]
        if not _index_list(c, flat, len(bodies), "parts"):
            return
        c.require(len(flat) == len(bodies), "parts must cover every body")
        for i, (e, b) in enumerate(zip(es, bodies)):
            c.require(contains_ellipsoid(b.hrep, e), f"ellipsoid {i} is not inside its body")
        groups = [[es[i] for i in q] for q in parts]
    else:
        fams = inst.families
        es = [[ellipsoid_from(e) for e in f] for f in p["ellipsoids"]]
        if not c.require([len(f) for f in es] == [len(f) for f in fams], "one ellipsoid per body"):
            return
        ts = p["transversals"]
        c.require(len(ts) == r and a["transversals"] == r, "need exactly r transversals")
        if not c.require(all(isinstance(t, list) and len(t) == len(fams) for t in ts),
                         "each transversal picks one member per family"):
            return
        for j in range(len(fams)):
            if not _index_list(c, [t[j] for t in ts], len(fams[j]), f"family {j}"):
                return
        for j, f in enumerate(fams):
            for i, (e, b) in enumerate(zip(es[j], f)):
                c.require(contains_ellipsoid(b.hrep, e), f"ellipsoid {i} of family {j} is not inside its body")
        groups = [[es[j][t[j]] for j in range(len(fams))] for t in ts]
    target = encode(W)
    for k, g in enumerate(groups):
        c.require(convex_weights([encode(e) for e in g], target) is not None,
                  f"witness parameters are not a convex combination of part {k}")


def _check_diameter(c, inst, p, a):
    fams, d = inst.families, inst.dimension
    v = rats(p["direction"])
    t = rat(p["threshold"])
    W = segment_from(p["witness"])
    r = p["r"]
    c.require(len(v) == d and R.norm2(v) == 1, "direction must be an exact unit vector")
    c.require(float(t) >= cap_threshold(d) * (1 - 1e-6), "threshold below the cap constant")
    width = R.dot(v, R.sub(W.b, W.a))
    c.require(width >= t, "witness width below threshold")
    c.require(rat(a["width"]) == width, "achieved width does not match")
    ts = p["transversals"]
    c.require(len(ts) == r and a["transversals"] == r, "need exactly r transversals")
    if not c.require(all(isinstance(x, list) and len(x) == len(fams) for x in ts),
                     "each transversal picks one member per family"):
        return
    for j in range(len(fams)):
        if not _index_list(c, [x[j] for x in ts], len(fams[j]), f"family {j}"):
            return
    for k, x in enumerate(ts):
        pts = [e for j in range(len(fams)) for e in (fams[j][x[j]].a, fams[j][x[j]].b)]
        c.require(_segment_in_points_hull(pts, W), f"witness not in the hull of transversal {k}")


def _check_sametype(c, inst, p, a):
    fams, d = inst.families, inst.dimension
    alpha = rat(p["alpha"])
    if not c.require(0 < alpha < Fraction(1, 2), "alpha must lie in (0, 1/2)"):
        return
    m = len(fams)
    trimmed = p["trimmed"]
    if not c.require(len(trimmed) == m and all(trimmed), "one nonempty trimmed list per family"):
        return
    bodies = []
    for i, f in enumerate(trimmed):
        out = []
        parents = [g["parent"] for g in f]
        if not _index_list(c, parents, len(fams[i]), f"parents of family {i}"):
            return
        for g in f:
            b = ConvexBody(tuple(rats(v) for v in g["vertices"]))
            par = fams[i][g["parent"]].hrep
            c.require(all(par.contains(v) for v in b.vertices), f"trimmed body of family {i} leaves its parent")
            out.append(b)
        bodies.append(out)
    steps = (2**d - 1) * comb(m, d + 1)
    rho = min(b.volume for f in fams for b in f)
    vmin = min(b.volume for f in bodies for b in f)
    c.require(rat(a["minVolume"]) == vmin, "min volume does not match")
    c.require(vmin >= alpha**steps * rho, "trimmed volume below alpha^steps * rho")
    sizes = [len(f) for f in bodies]
    c.require(a["sizes"] == sizes, "sizes do not match")
    factor = (1 - 1 / (2 * (1 - alpha))) ** steps
    for i, f in enumerate(fams):
        c.require(sizes[i] >= factor * len(f), f"family {i} lost too many bodies")
    verts = [[v for b in f for v in b.vertices] for f in bodies]
    seps = p["separators"]
    needed = {(tuple(J), tuple(J[i] for i in I)) for J in itertools.combinations(range(m), d + 1)
              for k in range(1, d + 1) for I in itertools.combinations(range(d), k)}
    got = set()
    margins = []
    for s in seps:
        J, I = tuple(s["families"]), tuple(s["subset"])
        normal, off = rats(s["normal"]), rat(s["offset"])
        if not c.require(len(normal) == d and any(normal), "separator normal must be nonzero"):
            return
        got.add((J, I))
        A = [x for i in I for x in verts[i]]
        B = [y for j in J if j not in I for y in verts[j]]
        ma = min(off - R.dot(normal, x) for x in A)
        mb = min(R.dot(normal, y) - off for y in B)
        c.require(ma > 0 and mb > 0, f"separator for {I} within {J} is not strict")
        margins.append([qs(ma), qs(mb)])
    c.require(got == needed and len(seps) == len(needed), "separators must cover every bipartition once")
    c.require(a["margins"] == margins, "separator margins do not match")
    hulls = [ConvexBody(tuple(v)) for v in verts]
    ot = family_order_type(hulls)
    if c.require(not isinstance(ot, Mixed), "trimmed families have mixed order types"):
        claimed = {tuple(int(x) for x in k.split(",")): v for k, v in p["orderType"].items()}
        c.require(claimed == ot.signs, "order type does not match")


def _check_homogeneous(c, inst, p, a):
    fams = inst.families
    target = rat(p["target"])
    subs = p["subfamilies"]
    if not c.require(0 < target <= 1 and len(subs) == len(fams), "bad target or subfamily count"):
        return
    for j, s in enumerate(subs):
        if not _index_list(c, s, len(fams[j]), f"subfamily {j}"):
            return
        c.require(len(s) >= ceil(target * len(fams[j])), f"subfamily {j} is too small")
    c.require(a["sizes"] == [len(s) for s in subs], "sizes do not match")
    W = ellipsoid_from(p["witness"])
    c.require(rat(a["witnessDet"]) == W.det, "witness det does not match")
    for T in itertools.product(*subs):
        pts = [v for j, i in enumerate(T) for v in fams[j][i].extreme_vertices]
        if not c.require(_ellipsoid_in_points_hull(pts, W), f"witness not in the hull of transversal {T}"):
            return


def verify(inst, cert):
    """Check ``cert`` against ``inst``; returns a Verdict listing every failed claim."""
    if isinstance(cert, dict):
        cert = Certificate.from_json(cert)
    c = _Checker()
    if not c.require(cert.instance_hash == inst.digest(), "certificate was issued for a different instance"):
        return Verdict(False, c.failures)
    p, a = cert.payload, cert.achieved
    try:
        if cert.kind == "john":
            _check_john(c, inst, p, a)
        elif cert.kind == "selection":
            _check_selection(c, inst, p, a)
        elif cert.kind == "epsnet":
            _check_epsnet(c, inst, p, a)
        elif cert.kind == "tverberg":
            _check_tverberg(c, inst, p, a, False)
        elif cert.kind == "colorfulTverberg":
            _check_tverberg(c, inst, p, a, True)
        elif cert.kind == "diameterTverberg":
            _check_diameter(c, inst, p, a)
        elif cert.kind == "sametype":
            _check_sametype(c, inst, p, a)
        elif cert.kind == "homogeneous":
            _check_homogeneous(c, inst, p, a)
        else:
            c.require(False, f"unknown certificate kind {cert.kind!r}")
    except (QuantselError, InvalidInput, KeyError, TypeError, ValueError, IndexError, ZeroDivisionError) as exc:
        c.require(False, f"malformed certificate: {type(exc).__name__}: {exc}")
    return Verdict(not c.failures, c.failures)
