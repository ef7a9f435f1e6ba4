"""Exact rational linear programming (two-phase simplex with Bland's rule)."""
from __future__ import annotations

from fractions import Fraction


class Infeasible(Exception):
    pass


class Unbounded(Exception):
    pass


def _pivot(tab, basis, row, col):
    piv = tab[row][col]
    tab[row] = [x / piv for x in tab[row]]
    for i in range(len(tab)):
        if i != row and tab[i][col] != 0:
            f = tab[i][col]
            tab[i] = [a - f * b for a, b in zip(tab[i], tab[row])]
    basis[row] = col


def _run(tab, basis, cost_row, allowed):
    """Minimize; ``tab[cost_row]`` holds reduced costs with objective value in the last slot."""
    m = len(basis)
    while True:
        cost = tab[cost_row]
        col = next((j for j in allowed if cost[j] < 0), None)
        if col is None:
            return
        best = None
        row = None
        for i in range(m):
            a = tab[i][col]
            if a > 0:
                ratio = tab[i][-1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[row]):
                    best, row = ratio, i
        if row is None:
            raise Unbounded()
        _pivot(tab, basis, row, col)


def simplex_standard(c, A, b):
    """Minimize c.x subject to A x = b, x >= 0. Returns (value, x)."""
    m, n = len(A), len(c)
    A = [[Fraction(x) for x in row] for row in A]
    b = [Fraction(x) for x in b]
    for i in range(m):
        if b[i] < 0:
            A[i] = [-x for x in A[i]]
            b[i] = -b[i]
    # phase 1 with artificial variables n..n+m-1
    tab = [A[i] + [Fraction(int(i == k)) for k in range(m)] + [b[i]] for i in range(m)]
    basis = [n + i for i in range(m)]
    phase1 = [Fraction(0)] * (n + m + 1)
    for i in range(m):
        phase1 = [p - t for p, t in zip(phase1, tab[i])]
    for k in range(m):
        phase1[n + k] = Fraction(0)
    tab.append(phase1)
    _run(tab, basis, m, range(n + m))
    if tab[m][-1] != 0:
        raise Infeasible()
    # drive artificials out of the basis where possible
    for i in range(m):
        if basis[i] >= n:
            col = next((j for j in range(n) if tab[i][j] != 0), None)
            if col is not None:
                _pivot(tab, basis, i, col)
    tab.pop()
    cost = [Fraction(x) for x in c] + [Fraction(0)] * m + [Fraction(0)]
    for i in range(m):
        j = basis[i]
        if j < n and cost[j] != 0:
            f = cost[j]
            cost = [a - f * t for a, t in zip(cost, tab[i])]
    tab.append(cost)
    _run(tab, basis, m, range(n))
    x = [Fraction(0)] * n
    for i in range(m):
        if basis[i] < n:
            x[basis[i]] = tab[i][-1]
    return -tab[m][-1], x


def maximize(c, A_ub=(), b_ub=(), A_eq=(), b_eq=(), free=None):
    """Maximize c.x subject to A_ub x <= b_ub, A_eq x = b_eq.

    Variables listed in ``free`` (all, if None) are unrestricted in sign; the
    rest are nonnegative. Returns (value, x).
    """
    n = len(c)
    free = set(range(n)) if free is None else set(free)
    cols = []  # (original index, sign)
    for j in range(n):
        cols.append((j, 1))
        if j in free:
            cols.append((j, -1))
    n_ub = len(A_ub)
    rows, rhs = [], []
    for k, (row, bb) in enumerate(zip(A_ub, b_ub)):
        rows.append([s * row[j] for j, s in cols] + [int(k == t) for t in range(n_ub)])
        rhs.append(bb)
    for row, bb in zip(A_eq, b_eq):
        rows.append([s * row[j] for j, s in cols] + [0] * n_ub)
        rhs.append(bb)
    cost = [-s * c[j] for j, s in cols] + [0] * n_ub
    if not rows:
        if any(cost):
            raise Unbounded()
        return Fraction(0), [Fraction(0)] * n
    val, y = simplex_standard(cost, rows, rhs)
    x = [Fraction(0)] * n
    for k, (j, s) in enumerate(cols):
        x[j] += s * y[k]
    return -val, x


def lower_face_witness(points, heights, subset):
    """Affine functional certifying ``subset`` is exactly a lower face.

    Finds ``(a, b)`` with ``a.p + b = h_p`` on ``subset`` and ``a.p + b < h_p``
    elsewhere. Returns ``(a, b)`` or None when no such functional exists.
    """
    D = len(points[0])
    subset = set(subset)
    # variables: a_1..a_D, b, s ; maximize s (capped at 1)
    A_eq, b_eq, A_ub, b_ub = [], [], [], []
    for i, (p, h) in enumerate(zip(points, heights)):
        row = list(p) + [1]
        if i in subset:
            A_eq.append(row + [0])
            b_eq.append(h)
        else:
            A_ub.append(row + [1])
            b_ub.append(h)
    A_ub.append([0] * (D + 1) + [1])
    b_ub.append(1)
    try:
        val, x = maximize([0] * (D + 1) + [1], A_ub, b_ub, A_eq, b_eq)
    except Infeasible:
        return None
    if val <= 0 and len(subset) < len(points):
        return None
    return x[:D], x[D]
