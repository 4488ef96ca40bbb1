"""Quantitative selection: exact geometry for volumetric Helly, Tverberg and selection results."""
from .errors import *  # noqa: F401,F403
from .geometry import ConvexBody, Hyperplane, box, convex_hull, polytope_volume  # noqa: F401
from .ellipsoid import Ellipsoid, ball, decode, encode, john_ellipsoid  # noqa: F401

__version__ = "0.1.0"
