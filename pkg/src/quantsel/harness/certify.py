"""Run a pipeline on an instance and package the result as a Certificate."""
import itertools
from fractions import Fraction
from math import ceil

from .. import _rational as R
from ..ellipsoid import john_ellipsoid
from ..errors import InvalidInput
from ..sametype import _separator, homogeneous_selection_bruteforce, same_type_refine, subset_order
from ..selection import selection_2d, selection_quadratic, selection_simplex, weak_epsnet
from ..tverberg import colorful_tverberg_ellipsoids, colorful_tverberg_segments, tverberg_ellipsoids
from .io import Certificate, ellipsoid_json, point_json, qs, segment_json, witness_json

TUPLE_LIMIT = 30000  # above this many tuples, hit counts are sampled


def _need(inst, *kinds):
    if inst.kind not in kinds:
        raise InvalidInput(f"this command needs a {' or '.join(kinds)} instance, got {inst.kind!r}")


def _det(e):
    return qs(e.det)


def john(inst):
    _need(inst, "bodies", "colorFamilies")
    es = [john_ellipsoid(b) for b in inst.members]
    return Certificate("john", inst.digest(), {"ellipsoids": [ellipsoid_json(e) for e in es]},
                       {"dets": [_det(e) for e in es]})


def selection(inst, variant="simplex", mode="volume", seed=0, samples=2000):
    _need(inst, "bodies")
    family = inst.members
    if mode == "diameter":
        if variant != "quadratic":
            raise InvalidInput("diameter mode uses the quadratic variant")
        w = selection_quadratic(family, mode="diameter", seed=seed, samples=samples, limit=TUPLE_LIMIT)
    elif variant == "quadratic":
        w = selection_quadratic(family, seed=seed, samples=samples, limit=TUPLE_LIMIT)
    elif variant == "steinitz":
        w = selection_2d(family, seed=seed, limit=TUPLE_LIMIT)
    elif variant == "simplex":
        w = selection_simplex(family, seed=seed, limit=TUPLE_LIMIT)
    else:
        raise InvalidInput(f"unknown variant {variant!r}")
    payload = {"variant": variant, "mode": mode, "tupleSize": w.tuple_size, "witness": witness_json(w.witness),
               "hitTuples": [list(t) for t in sorted(w.hit_tuples)], "sampled": w.sampled}
    achieved = {"fraction": qs(w.fraction), "hits": len(w.hit_tuples)}
    achieved["witnessDet" if mode == "volume" else "witnessLength2"] = (
        _det(w.witness) if mode == "volume" else qs(w.witness.length2))
    return Certificate("selection", inst.digest(), payload, achieved)


def epsnet(inst, eps, variant="simplex", seed=0):
    _need(inst, "bodies")
    net = weak_epsnet(inst.members, eps, variant=variant, seed=seed)
    payload = {"epsilon": qs(net.epsilon), "variant": variant, "subfamilySize": ceil(net.epsilon * len(inst.members)),
               "tupleSize": net.alpha, "pieces": [ellipsoid_json(p) for p in net.pieces],
               "targets": [list(S) for S in net.meta["targets"]], "complete": net.complete}
    achieved = {"size": len(net.pieces), "sizeBound": None if net.size_bound is None else qs(net.size_bound),
                "dets": [_det(p) for p in net.pieces]}
    return Certificate("epsnet", inst.digest(), payload, achieved)


def tverberg(inst, r, seed=0, method="auto"):
    _need(inst, "bodies", "colorFamilies")
    if inst.kind == "bodies":
        es = [john_ellipsoid(b) for b in inst.members]
        part, W = tverberg_ellipsoids(es, r, method=method, seed=seed)
        payload = {"r": r, "ellipsoids": [ellipsoid_json(e) for e in es], "parts": [list(p) for p in part.parts],
                   "witness": ellipsoid_json(W)}
        return Certificate("tverberg", inst.digest(), payload, {"parts": len(part), "witnessDet": _det(W)})
    es = [[john_ellipsoid(b) for b in f] for f in inst.families]
    ts, W = colorful_tverberg_ellipsoids(es, r, seed=seed)
    payload = {"r": r, "ellipsoids": [[ellipsoid_json(e) for e in f] for f in es],
               "transversals": [list(t) for t in ts.transversals], "witness": ellipsoid_json(W)}
    return Certificate("colorfulTverberg", inst.digest(), payload,
                       {"transversals": len(ts.transversals), "witnessDet": _det(W)})


def tverberg_diameter(inst, r, seed=0):
    _need(inst, "segments")
    out = colorful_tverberg_segments(inst.families, r, seed=seed)
    v, t = out.cap.direction, out.cap.threshold_rational
    payload = {"r": r, "direction": point_json(v), "threshold": qs(t),
               "transversals": [list(x) for x in out.transversals.transversals], "witness": segment_json(out.witness)}
    return Certificate("diameterTverberg", inst.digest(), payload,
                       {"transversals": len(out.transversals.transversals), "width": qs(out.witness.width(v))})


def _separators(trimmed, d):
    """Unit-margin LP separators for every (d+1)-subset of the trimmed families."""
    verts = [[v for b in f for v in b.extreme_vertices] for f in trimmed]
    out = []
    for J in itertools.combinations(range(len(trimmed)), d + 1):
        for I in subset_order(d):
            A = [v for i in I for v in verts[J[i]]]
            B = [v for j in range(d + 1) if j not in I for v in verts[J[j]]]
            h = _separator(A, B)
            if h is None:
                return None
            out.append((J, tuple(J[i] for i in I), h, A, B))
    return out


def sametype(inst, alpha=Fraction(1, 3)):
    _need(inst, "colorFamilies")
    cert = same_type_refine(inst.families, alpha)
    d = inst.dimension
    seps = _separators(cert.trimmed, d)
    if seps is None:
        raise InvalidInput("refinement did not produce separable families")
    payload = {
        "alpha": qs(cert.alpha),
        "trimmed": [[{"vertices": [point_json(v) for v in b.extreme_vertices], "parent": p}
                     for b, p in zip(f, ps)] for f, ps in zip(cert.trimmed, cert.parents)],
        "separators": [{"families": list(J), "subset": list(I), "normal": point_json(h.normal), "offset": qs(h.offset)}
                       for J, I, h, _, _ in seps],
        "orderType": {",".join(map(str, k)): v for k, v in sorted(cert.order_type.signs.items())},
    }
    margins = [[qs(min(h.offset - R.dot(h.normal, x) for x in A)), qs(min(R.dot(h.normal, y) - h.offset for y in B))]
               for _, _, h, A, B in seps]
    achieved = {"sizes": [len(f) for f in cert.trimmed], "minVolume": qs(min(b.volume for f in cert.trimmed for b in f)),
                "margins": margins}
    return Certificate("sametype", inst.digest(), payload, achieved)


def homogeneous(inst, target=Fraction(1, 2)):
    _need(inst, "colorFamilies")
    subs, W = homogeneous_selection_bruteforce(inst.families, target)
    payload = {"target": qs(target), "subfamilies": [list(s) for s in subs], "witness": ellipsoid_json(W)}
    return Certificate("homogeneous", inst.digest(), payload,
                       {"sizes": [len(s) for s in subs], "witnessDet": _det(W)})


__all__ = ["john", "selection", "epsnet", "tverberg", "tverberg_diameter", "sametype", "homogeneous",
           "TUPLE_LIMIT"]
