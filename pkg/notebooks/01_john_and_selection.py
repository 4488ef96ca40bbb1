"""
John ellipses and volumetric selection
======================================

Inscribed ellipses of random unit squares, then the three selection
pipelines on one family. Every number printed here is backed by an exact
certificate that ``verify`` re-checks.
"""
import os
from math import comb, pi

from quantsel import john_ellipsoid
from quantsel.harness import certify, generate, render_svg, verify

OUT = os.path.join(os.path.dirname(os.path.abspath(__file__)), "out")
os.makedirs(OUT, exist_ok=True)

# %%
# Eight unit squares with corners on a 1/64 grid inside a 2 x 2 window.
inst = generate("randomSquares", seed=4, n=8, window=2)
for b in inst.members[:3]:
    e = john_ellipsoid(b)
    print("square at", [str(x) for x in b.vertices[0]], "ellipse/area =", round(float(e.volume / b.volume), 4))

# %%
# The incircle of a unit square covers pi/4 of it, far above the 1/4 floor.
print("pi/4 =", round(pi / 4, 4))

# %%
# Selection: an ellipse lying in the hull of many alpha-tuples of squares.
for variant in ("quadratic", "steinitz", "simplex"):
    cert = certify.selection(inst, variant)
    alpha = cert.payload["tupleSize"]
    print(f"{variant:9s} alpha={alpha} hits {cert.achieved['hits']:3d} of {comb(8, alpha):3d} tuples,",
          "verified" if verify(inst, cert) else "REJECTED")

# %%
# Drawing of the simplex certificate: bodies in hit tuples are colored.
render_svg(inst, cert, os.path.join(OUT, "selection.svg"))
print("wrote", os.path.join(OUT, "selection.svg"))
