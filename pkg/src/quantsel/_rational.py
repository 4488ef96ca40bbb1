"""Small exact linear-algebra kit over :class:`fractions.Fraction`.

Everything here works on plain tuples/lists of Fractions. Matrices are
sequences of rows.
"""
from fractions import Fraction
from numbers import Rational

import numpy as np


def q(x):
    """Coerce ``x`` to an exact Fraction.

    Accepts ints, Fractions, ``"p/q"`` strings and floats (floats convert
    exactly, so ``q(0.1)`` is not ``1/10``).
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, (float, np.floating)):
        if not np.isfinite(x):
            raise ValueError(f"non-finite coordinate {x!r}")
        return Fraction(float(x))
    if isinstance(x, np.integer):
        return Fraction(int(x))
    raise TypeError(f"cannot interpret {x!r} as a rational")


def qvec(xs):
    return tuple(q(x) for x in xs)


def qstr(x):
    x = q(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def rationalize(x, max_den=10**6, scale=1):
    """Continued-fraction rounding of a float, relative to ``scale``."""
    scale = q(scale)
    return scale * Fraction(float(x) / float(scale)).limit_denominator(max_den)


def dot(u, v):
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def sub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def add(u, v):
    return tuple(a + b for a, b in zip(u, v))


def scale(c, u):
    return tuple(c * a for a in u)


def norm2(u):
    return dot(u, u)


def matvec(M, v):
    return tuple(dot(row, v) for row in M)


def matmul(A, B):
    cols = list(zip(*B))
    return tuple(tuple(dot(row, col) for col in cols) for row in A)


def transpose(A):
    return tuple(tuple(col) for col in zip(*A))


def identity(n):
    return tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))


def det(M):
    """Exact determinant by fraction-free Bareiss elimination."""
    n = len(M)
    if n == 0:
        return Fraction(1)
    if n == 1:
        return q(M[0][0])
    if n == 2:
        return q(M[0][0]) * q(M[1][1]) - q(M[0][1]) * q(M[1][0])
    A = [[q(x) for x in row] for row in M]
    sign = 1
    prev = Fraction(1)
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k] != 0:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return Fraction(0)
        akk = A[k][k]
        for i in range(k + 1, n):
            aik = A[i][k]
            row_i, row_k = A[i], A[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) / prev
        prev = akk
    return sign * A[n - 1][n - 1]


def rref(M):
    """Reduced row echelon form; returns (rows, pivot columns)."""
    A = [[q(x) for x in row] for row in M]
    rows = len(A)
    cols = len(A[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if A[i][c] != 0), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = 1 / A[r][c]
        A[r] = [x * inv for x in A[r]]
        for i in range(rows):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return A, pivots


def rank(M):
    if not M:
        return 0
    return len(rref(M)[1])


def nullspace(M, ncols=None):
    """Basis of the right nullspace of ``M`` (list of tuples)."""
    if not M:
        return [tuple(Fraction(int(i == j)) for i in range(ncols)) for j in range(ncols)]
    R, pivots = rref(M)
    n = len(R[0])
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for row, p in zip(R, pivots):
            v[p] = -row[f]
        basis.append(tuple(v))
    return basis


def solve(A, b):
    """Solve the square system ``A x = b`` exactly; None if singular."""
    n = len(A)
    aug = [list(map(q, row)) + [q(bi)] for row, bi in zip(A, b)]
    R, pivots = rref(aug)
    if pivots[:n] != list(range(n)) or len(pivots) > n:
        return None
    return tuple(R[i][n] for i in range(n))


def inverse(A):
    n = len(A)
    aug = [list(map(q, row)) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(A)]
    R, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return tuple(tuple(R[i][n:]) for i in range(n))


def affine_dimension(points):
    points = list(points)
    if not points:
        return -1
    base = points[0]
    return rank([sub(p, base) for p in points[1:]]) if len(points) > 1 else 0


def leading_minors_positive(M):
    return all(det([row[:k] for row in M[:k]]) > 0 for k in range(1, len(M) + 1))


def to_float_array(rows):
    return np.array([[float(x) for x in row] for row in rows], dtype=float)


def rational_sqrt_below(x, max_den=10**12):
    """A rational ``s`` with ``0 <= s`` and ``s*s <= x`` close to ``sqrt(x)``."""
    x = q(x)
    if x <= 0:
        return Fraction(0)
    s = Fraction(float(np.sqrt(float(x)))).limit_denominator(max_den)
    step = Fraction(1, max_den)
    while s * s > x:
        s -= step
        step *= 2
    return max(s, Fraction(0))


def rational_sqrt_above(x, max_den=10**12):
    x = q(x)
    if x <= 0:
        return Fraction(0)
    s = Fraction(float(np.sqrt(float(x)))).limit_denominator(max_den)
    step = Fraction(1, max_den)
    while s * s < x:
        s += step
        step *= 2
    return s
