"""Deterministic SVG drawings of planar instances and certificates."""
import numpy as np

from ..errors import Unsupported
from .io import ellipsoid_from, rats

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf")
SIZE = 480


def _f(x):
    return f"{x:.4f}"


def _colors(inst, cert):
    """Color index per (family, member) for selected tuples, parts or transversals."""
    colors = {}
    if cert is None:
        return colors
    p = cert.payload
    flat = [(j, i) for j, f in enumerate(inst.families) for i in range(len(f))]
    if cert.kind == "tverberg":
        for k, part in enumerate(p["parts"]):
            colors.update({flat[i]: k for i in part})
    elif cert.kind in ("colorfulTverberg", "diameterTverberg"):
        for k, t in enumerate(p["transversals"]):
            colors.update({(j, i): k for j, i in enumerate(t) if i is not None})
    elif cert.kind == "selection":
        colors.update({flat[i]: 0 for i in p["hitTuples"][0]})
    elif cert.kind == "homogeneous":
        for j, s in enumerate(p["subfamilies"]):
            colors.update({(j, i): j for i in s})
    return colors


def _witnesses(cert):
    if cert is None:
        return [], []
    p = cert.payload
    ells, segs = [], []
    if "witness" in p:
        w = p["witness"]
        if "segment" in w:
            segs.append(w["segment"])
        elif "ellipsoid" in w:
            ells.append(ellipsoid_from(w["ellipsoid"]))
        elif "a" in w:
            segs.append(w)
        else:
            ells.append(ellipsoid_from(w))
    for e in p.get("pieces", []):
        ells.append(ellipsoid_from(e))
    return ells, segs


def render_svg(inst, cert=None, path=None):
    """SVG text for a d = 2 instance (and optional certificate); written to ``path`` if given."""
    if inst.dimension != 2:
        raise Unsupported("rendering is only available in the plane")
    pts = [[float(x) for x in v] for m in inst.members
           for v in ((m.a, m.b) if inst.kind == "segments" else m.vertices)]
    P = np.array(pts)
    lo, hi = P.min(axis=0), P.max(axis=0)
    span = float(max(hi - lo)) or 1.0
    pad = 0.05 * span
    s = (SIZE - 20) / (span + 2 * pad)

    def xy(v):
        x = 10 + (float(v[0]) - lo[0] + pad) * s
        y = SIZE - 10 - (float(v[1]) - lo[1] + pad) * s
        return _f(x), _f(y)

    colors = _colors(inst, cert)
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">',
           f'<rect width="{SIZE}" height="{SIZE}" fill="white"/>']
    for j, f in enumerate(inst.families):
        for i, m in enumerate(f):
            col = PALETTE[colors[j, i] % len(PALETTE)] if (j, i) in colors else "#888888"
            if inst.kind == "segments":
                (x1, y1), (x2, y2) = xy(m.a), xy(m.b)
                out.append(f'<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="{col}" stroke-width="2"/>')
            else:
                ring = " ".join(",".join(xy(v)) for v in m.extreme_vertices)
                out.append(f'<polygon points="{ring}" fill="{col}" fill-opacity="0.15" stroke="{col}"/>')
    ells, segs = _witnesses(cert)
    for e in ells:
        A = e.shape_array()
        w, U = np.linalg.eigh(A)
        ang = np.degrees(np.arctan2(U[1, 1], U[0, 1]))
        cx, cy = xy(e.center)
        out.append(f'<ellipse cx="{cx}" cy="{cy}" rx="{_f(w[1] * s)}" ry="{_f(w[0] * s)}" '
                   f'transform="rotate({_f(-ang)} {cx} {cy})" fill="none" stroke="black" stroke-width="2"/>')
    for g in segs:
        (x1, y1), (x2, y2) = xy(rats(g["a"])), xy(rats(g["b"]))
        out.append(f'<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="black" stroke-width="3"/>')
    out.append("</svg>")
    text = "\n".join(out) + "\n"
    if path is not None:
        from .io import write_text

        write_text(path, text)
    return text
