"""
Weak epsilon-nets and same-type refinement
==========================================

The slab instance forces at least 1/eps net pieces; the refinement of three
overlapping families ends with every transversal having the same orientation.
"""
import itertools
from fractions import Fraction

from quantsel.geometry import orientation
from quantsel.harness import certify, generate, verify
from quantsel.harness.io import rats

# %%
# Four stacked groups of four unit squares: a quarter of the family can sit
# in a single group, and groups are far apart, so each group needs its own piece.
inst = generate("slabs", d=2, eps=Fraction(1, 4), n=16)
cert = certify.epsnet(inst, Fraction(1, 4), "simplex")
print("net size", cert.achieved["size"], "bound", cert.achieved["sizeBound"], "verified:", bool(verify(inst, cert)))

# %%
# Three families of squares in one window. After refinement each family keeps
# at least one piece of area >= 1/27 and all transversals share one order type.
fams = generate("randomSquares", seed=5, n=8, families=3, window=2)
cert = certify.sametype(fams)
print("sizes", cert.achieved["sizes"], "min area", float(Fraction(cert.achieved["minVolume"])))
verts = [[[rats(v) for v in b["vertices"]] for b in f] for f in cert.payload["trimmed"]]
signs = {orientation(list(p)) for bodies in itertools.product(*verts) for p in itertools.product(*bodies)}
print("orientation signs over all vertex choices:", signs, "verified:", bool(verify(fams, cert)))
