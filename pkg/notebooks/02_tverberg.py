"""
Tverberg partitions of points, ellipses and segments
=====================================================

Point partitions through the lifting to the space of ellipse parameters,
then the colorful version for unit segments with a common long direction.
"""
import os
from fractions import Fraction

from quantsel.harness import certify, generate, render_svg, verify
from quantsel.tverberg import cap_threshold, tverberg_number, tverberg_points

OUT = os.path.join(os.path.dirname(os.path.abspath(__file__)), "out")
os.makedirs(OUT, exist_ok=True)

# %%
# Seven points in the plane always split into three parts with a common point.
pts = [(0, 0), (6, 0), (0, 6), (6, 6), (3, 1), (1, 3), (4, 4)]
part, x = tverberg_points(pts, 3)
print("parts", part.parts, "common point", [str(c) for c in x])

# %%
# Ellipses are points of R^5 (shape entries plus center), so two parts need
# tverberg_number(5, 2) ellipses.
print("ellipses needed for r=2:", tverberg_number(5, 2))
inst = generate("randomSquares", seed=2, n=7)
cert = certify.tverberg(inst, 2)
print("parts", cert.payload["parts"], "verified:", bool(verify(inst, cert)))

# %%
# Unit segments: two disjoint colorful transversals whose hulls share a
# segment that is long in a common direction v.
print("cap threshold in the plane:", round(cap_threshold(2), 6))
seg = generate("unitSegments", seed=3, families=4, per=4)
cert = certify.tverberg_diameter(seg, 2, seed=3)
print("width along v:", float(Fraction(cert.achieved["width"])), "verified:", bool(verify(seg, cert)))
render_svg(seg, cert, os.path.join(OUT, "segments.svg"))
