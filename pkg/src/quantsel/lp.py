"""Exact two-phase simplex over the rationals.

Tiny problems only (tens of rows and columns). Bland's rule keeps it
finite on degenerate inputs, which are the norm here: lifted Tverberg
points routinely sit in proper affine subspaces.
"""
from dataclasses import dataclass
from fractions import Fraction

from ._rational import q

__all__ = ["LPResult", "solve_lp", "convex_weights", "common_point"]


@dataclass
class LPResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    x: tuple = None
    value: Fraction = None

    @property
    def feasible(self):
        return self.status != "infeasible"


def _pivot(T, obj, basis, r, c):
    row = T[r]
    inv = 1 / row[c]
    if inv != 1:
        row = [v * inv for v in row]
        T[r] = row
    nz = [(j, v) for j, v in enumerate(row) if v != 0]
    for i, other in enumerate(T):
        if i != r:
            f = other[c]
            if f != 0:
                for j, v in nz:
                    other[j] -= f * v
    f = obj[c]
    if f != 0:
        for j, v in nz:
            obj[j] -= f * v
    basis[r] = c


def _run(T, obj, basis, ncols):
    while True:
        enter = next((j for j in range(ncols) if obj[j] < 0), None)
        if enter is None:
            return "optimal"
        best = None
        for i, row in enumerate(T):
            a = row[enter]
            if a > 0:
                ratio = row[-1] / a
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            return "unbounded"
        _pivot(T, obj, basis, best[1], enter)


def solve_lp(c=None, A_ub=(), b_ub=(), A_eq=(), b_eq=(), free=(), n=None):
    """Minimise ``c.x`` subject to ``A_ub x <= b_ub``, ``A_eq x = b_eq``.

    Variables are nonnegative unless listed in ``free``. With ``c=None``
    only feasibility is decided (phase 1) and any feasible point returned.
    """
    rows_ub = [list(map(q, r)) for r in A_ub]
    rows_eq = [list(map(q, r)) for r in A_eq]
    if n is None:
        n = len(c) if c is not None else len((rows_ub or rows_eq)[0])
    free = sorted(set(free))
    # column layout: x (n) | split negatives for free vars | slacks
    nf = len(free)
    nslack = len(rows_ub)
    nx = n + nf

    def expand(row):
        return row + [-row[j] for j in free]

    rows = []
    rhs = []
    for k, (row, b) in enumerate(zip(rows_ub, b_ub)):
        full = expand(row) + [Fraction(int(k == s)) for s in range(nslack)]
        rows.append(full)
        rhs.append(q(b))
    for row, b in zip(rows_eq, b_eq):
        rows.append(expand(row) + [Fraction(0)] * nslack)
        rhs.append(q(b))
    m = len(rows)
    ncore = nx + nslack
    T = []
    for i in range(m):
        row, b = rows[i], rhs[i]
        if b < 0:
            row = [-v for v in row]
            b = -b
        T.append(row + [Fraction(int(i == k)) for k in range(m)] + [b])
    basis = [ncore + i for i in range(m)]
    ntot = ncore + m
    obj = [Fraction(0)] * (ntot + 1)
    for row in T:
        for j in range(ncore):
            obj[j] -= row[j]
        obj[-1] -= row[-1]
    _run(T, obj, basis, ncore)
    if obj[-1] != 0:
        return LPResult("infeasible")
    # drive artificials out of the basis
    i = 0
    while i < len(T):
        if basis[i] >= ncore:
            c_in = next((j for j in range(ncore) if T[i][j] != 0), None)
            if c_in is None:
                del T[i]
                del basis[i]
                continue
            _pivot(T, obj, basis, i, c_in)
        i += 1
    for row in T:
        del row[ncore:ntot]
    if c is not None:
        cost = [q(v) for v in c] + [-q(c[j]) for j in free] + [Fraction(0)] * nslack
        obj = cost + [Fraction(0)]
        for i, row in enumerate(T):
            cb = cost[basis[i]]
            if cb != 0:
                for j in range(ncore + 1):
                    obj[j] -= cb * row[j]
        status = _run(T, obj, basis, ncore)
        if status == "unbounded":
            return LPResult("unbounded")
    vals = [Fraction(0)] * ncore
    for i, b in enumerate(basis):
        vals[b] = T[i][-1]
    x = vals[:n]
    for k, j in enumerate(free):
        x[j] -= vals[n + k]
    x = tuple(x)
    value = sum((q(ci) * xi for ci, xi in zip(c, x)), Fraction(0)) if c is not None else None
    return LPResult("optimal", x, value)


def convex_weights(points, target):
    """Weights ``w >= 0``, ``sum w = 1``, ``sum w_i p_i = target``; None if none exist."""
    points = list(points)
    if not points:
        return None
    dim = len(target)
    A_eq = [[p[k] for p in points] for k in range(dim)] + [[1] * len(points)]
    b_eq = list(target) + [1]
    res = solve_lp(None, A_eq=A_eq, b_eq=b_eq, n=len(points))
    return res.x if res.feasible else None


def common_point(parts):
    """Exact common point of the hulls of several point lists.

    Returns ``(point, weights)`` where ``weights[j]`` are convex weights on
    ``parts[j]``, or None when the hulls have no common point.
    """
    parts = [list(p) for p in parts]
    if any(not p for p in parts):
        return None
    dim = len(parts[0][0])
    sizes = [len(p) for p in parts]
    n = sum(sizes)
    offsets = [sum(sizes[:j]) for j in range(len(parts))]
    A_eq = []
    b_eq = []
    for j, p in enumerate(parts):
        row = [0] * n
        for i in range(len(p)):
            row[offsets[j] + i] = 1
        A_eq.append(row)
        b_eq.append(1)
    for j in range(1, len(parts)):
        for k in range(dim):
            row = [Fraction(0)] * n
            for i, pt in enumerate(parts[0]):
                row[i] = q(pt[k])
            for i, pt in enumerate(parts[j]):
                row[offsets[j] + i] = -q(pt[k])
            A_eq.append(row)
            b_eq.append(0)
    res = solve_lp(None, A_eq=A_eq, b_eq=b_eq, n=n)
    if not res.feasible:
        return None
    weights = [tuple(res.x[offsets[j]:offsets[j] + sizes[j]]) for j in range(len(parts))]
    point = tuple(
        sum((w * q(pt[k]) for w, pt in zip(weights[0], parts[0])), Fraction(0)) for k in range(dim)
    )
    return point, weights
