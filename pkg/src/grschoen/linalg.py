"""Exact linear algebra over the rationals and integer facet enumeration."""
from __future__ import annotations

from fractions import Fraction
from math import gcd


def rref(rows):
    """Reduced row echelon form over Fractions. Returns (matrix, pivot columns)."""
    m = [[Fraction(x) for x in row] for row in rows]
    if not m:
        return m, []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows) -> int:
    return len(rref(rows)[1])


def integer_rank(rows) -> int:
    """Rank of an integer matrix by fraction-free elimination (faster than Fractions)."""
    m = [list(r) for r in rows]
    if not m:
        return 0
    ncols = len(m[0])
    rk = 0
    for c in range(ncols):
        piv = next((i for i in range(rk, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[rk], m[piv] = m[piv], m[rk]
        p = m[rk]
        pc = p[c]
        for i in range(rk + 1, len(m)):
            q = m[i]
            qc = q[c]
            if qc:
                row = [pc * a - qc * b for a, b in zip(q, p)]
                g = 0
                for x in row:
                    g = gcd(g, x)
                if g > 1:
                    row = [x // g for x in row]
                m[i] = row
        rk += 1
        if rk == len(m):
            break
    return rk


def nullspace(rows, ncols: int | None = None):
    """Basis of the right nullspace as integer vectors."""
    if ncols is None:
        ncols = len(rows[0])
    red, piv = rref(rows) if rows else ([], [])
    free = [c for c in range(ncols) if c not in piv]
    out = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, p in zip(red, piv):
            v[p] = -row[f]
        out.append(primitive(v))
    return out


def primitive(v):
    """Scale a rational vector to a primitive integer vector (same direction)."""
    den = 1
    for x in v:
        x = Fraction(x)
        den = den * x.denominator // gcd(den, x.denominator)
    iv = [int(Fraction(x) * den) for x in v]
    g = 0
    for x in iv:
        g = gcd(g, x)
    if g > 1:
        iv = [x // g for x in iv]
    return iv


def solve(rows, rhs):
    """One solution of rows * x = rhs over the rationals, or None if inconsistent."""
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    red, piv = rref(aug)
    ncols = len(rows[0])
    if ncols in piv:
        return None
    x = [Fraction(0)] * ncols
    for row, p in zip(red, piv):
        x[p] = row[-1]
    return x


def _eliminate(rows):
    """Fraction-free Gauss-Jordan on [rows | I]; returns the diagonal and right block."""
    d = len(rows)
    m = [[int(x) for x in r] + [int(i == j) for j in range(d)] for i, r in enumerate(rows)]
    for c in range(d):
        piv = next((i for i in range(c, d) if m[i][c]), None)
        if piv is None:
            raise ValueError("matrix is singular")
        m[c], m[piv] = m[piv], m[c]
        p = m[c][c]
        for i in range(d):
            if i != c and m[i][c]:
                f = m[i][c]
                row = [p * a - f * b for a, b in zip(m[i], m[c])]
                g = 0
                for x in row:
                    g = gcd(g, x)
                m[i] = [x // g for x in row] if g > 1 else row
    return [m[i][i] for i in range(d)], [m[i][d:] for i in range(d)]


def inverse(rows):
    """Inverse of a square invertible integer matrix, by fraction-free elimination."""
    diag, right = _eliminate(rows)
    return [[Fraction(x, q) for x in row] for q, row in zip(diag, right)]


def inverse_directions(rows):
    """Columns of the inverse, each scaled by a positive number to an integer vector."""
    diag, right = _eliminate(rows)
    L = 1
    for q in diag:
        L = L * abs(q) // gcd(L, abs(q))
    scale = [L // q for q in diag]  # exact; carries the sign of q
    d = len(rows)
    return [[right[i][j] * scale[i] for i in range(d)] for j in range(d)]


def independent_rows(rows):
    """Indices of a maximal linearly independent subset of rows, greedy in order."""
    chosen = []
    basis = []
    for i, row in enumerate(rows):
        if integer_rank(basis + [list(row)]) > len(basis):
            basis.append(list(row))
            chosen.append(i)
    return chosen


def affine_chart(points):
    """Choose coordinates giving an injective projection of the affine hull.

    Returns (dim, coords) where ``coords`` lists ``dim`` coordinate indices such
    that the differences ``p - p0`` restricted to them have full rank ``dim``.
    """
    p0 = points[0]
    diffs = [[a - b for a, b in zip(p, p0)] for p in points[1:]]
    if not diffs:
        return 0, []
    red, piv = rref(diffs)
    return len(piv), piv


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def _normalize(v):
    g = 0
    for x in v:
        g = gcd(g, x)
    if g > 1:
        return tuple(x // g for x in v)
    return tuple(v)


def _popcount(x: int) -> int:
    return bin(x).count("1")


def facets(points):
    """Facet inequalities of the convex hull of full-dimensional integer points.

    ``points`` are integer vectors in Z^D whose affine hull is all of R^D.
    Returns a list of ``(c, zero_mask)`` where ``c = (c0, c1, ..., cD)`` is a
    primitive integer vector with ``c0 + c.x >= 0`` on all points, and
    ``zero_mask`` is the bitmask of point indices on the facet. Uses the double
    description method on the homogenized rows ``(1, p)``.
    """
    rows = [(1,) + tuple(p) for p in points]
    d = len(rows[0])
    base = independent_rows(rows)
    if len(base) != d:
        raise ValueError("points are not full-dimensional")
    # initial simplicial cone: rays are columns of the inverse of the base block
    block = [rows[i] for i in base]
    rays = [_normalize(primitive(col)) for col in inverse_directions(block)]
    zeros = []
    for ray in rays:
        z = 0
        for i in base:
            if _dot(rows[i], ray) == 0:
                z |= 1 << i
        zeros.append(z)
    processed = set(base)
    for i in range(len(rows)):
        if i in processed:
            continue
        row = rows[i]
        vals = [_dot(row, ray) for ray in rays]
        pos = [k for k, v in enumerate(vals) if v > 0]
        neg = [k for k, v in enumerate(vals) if v < 0]
        bit = 1 << i
        if not neg:
            for k, v in enumerate(vals):
                if v == 0:
                    zeros[k] |= bit
            processed.add(i)
            continue
        new_rays = []
        new_zeros = []
        nz = len(rays)
        for kp in pos:
            zp = zeros[kp]
            for kn in neg:
                common = zp & zeros[kn]
                if _popcount(common) < d - 2:
                    continue
                adjacent = True
                for k in range(nz):
                    if k != kp and k != kn and zeros[k] & common == common:
                        adjacent = False
                        break
                if not adjacent:
                    continue
                vp, vn = vals[kp], -vals[kn]
                r = _normalize([vn * a + vp * b for a, b in zip(rays[kp], rays[kn])])
                new_rays.append(r)
                new_zeros.append(common | bit)
        keep_r, keep_z = [], []
        for k, v in enumerate(vals):
            if v > 0:
                keep_r.append(rays[k])
                keep_z.append(zeros[k])
            elif v == 0:
                keep_r.append(rays[k])
                keep_z.append(zeros[k] | bit)
        rays = keep_r + new_rays
        zeros = keep_z + new_zeros
        processed.add(i)
    return list(zip(rays, zeros))
