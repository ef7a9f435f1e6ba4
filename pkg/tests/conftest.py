"""Shared strategies and independent oracles for the test suite."""
from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations

from hypothesis import settings, strategies as st

from grschoen.matroid import uniform
from grschoen.quadext import QuadExtScalar, TPoly, minors
from grschoen.subdivision import Weight

settings.register_profile("default", deadline=None, print_blob=True)
settings.load_profile("default")


def small_lifts(r: int, n: int, top: int = 3):
    """Weights on the uniform matroid with integer values in [0, top]."""
    amb = uniform(r, n)
    size = len(amb.sorted_bases())
    return st.lists(st.integers(0, top), min_size=size, max_size=size).map(lambda v: Weight(amb, v))


permutations8 = st.permutations(list(range(1, 9)))


def _gauss_solve(M, rhs):
    """Unique solution of a square system by Gaussian elimination, or None if singular."""
    d = len(M)
    A = [[Fraction(x) for x in row] + [Fraction(b)] for row, b in zip(M, rhs)]
    for c in range(d):
        piv = next((i for i in range(c, d) if A[i][c] != 0), None)
        if piv is None:
            return None
        A[c], A[piv] = A[piv], A[c]
        for i in range(d):
            if i != c and A[i][c] != 0:
                f = A[i][c] / A[c][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[c])]
    return [A[i][d] / A[i][i] for i in range(d)]


def brute_force_cells(w: Weight) -> frozenset:
    """Maximal cells of the regular subdivision by exhaustive search.

    The hypersimplex is full-dimensional after dropping the last coordinate, so
    every maximal lower face is spanned by D + 1 affinely independent lifted
    vertices. Solve for the affine function through each such set and keep the
    ones that stay weakly below every lifted point.
    """
    bases = w.bases
    n = w.ambient.n
    pts = [[1 if e in b else 0 for e in range(1, n)] for b in bases]
    D = n - 1
    heights = list(w.values)
    cells = set()
    for sub in combinations(range(len(pts)), D + 1):
        sol = _gauss_solve([pts[i] + [1] for i in sub], [heights[i] for i in sub])
        if sol is None:
            continue
        vals = [sum(a * x for a, x in zip(sol[:-1], p)) + sol[-1] for p in pts]
        if all(v <= h for v, h in zip(vals, heights)):
            cells.add(tuple(b for b, v, h in zip(bases, vals, heights) if v == h))
    return frozenset(cells)


def random_tpoly_matrix(r: int, n: int, rng: random.Random, degree: int = 2, spread: int = 5, shift: int = 0,
                        normal_form: bool = True):
    """r x n matrix over Q[t], in normal form [I | random polynomials] unless ``normal_form`` is False.

    Each free entry is multiplied by t**k with k uniform in 0..shift, which
    spreads the valuations and gives finer subdivisions.
    """
    rows = []
    for i in range(r):
        row = []
        for j in range(n):
            if normal_form and j < r:
                row.append(TPoly([Fraction(int(i == j))]))
            else:
                low = [Fraction(0)] * rng.randint(0, shift)
                row.append(TPoly(low + [Fraction(rng.randint(-spread, spread)) for _ in range(degree + 1)]))
        rows.append(row)
    return rows


def valuation_weight(matrix) -> Weight | None:
    """Valuations of the maximal minors, or None if some minor vanishes."""
    r, n = len(matrix), len(matrix[0])
    vals = {}
    for lam, d in minors(matrix).items():
        if not d:
            return None
        vals[lam] = d.valuation()
    return Weight(uniform(r, n), [vals[b] for b in combinations(range(1, n + 1), r)])


__all__ = ["small_lifts", "permutations8", "brute_force_cells", "random_tpoly_matrix", "valuation_weight",
           "QuadExtScalar"]


# ----------------------------------------------------------------------
# every elimination performed in this process is checked by back-substitution
# ----------------------------------------------------------------------

import importlib  # noqa: E402

from grschoen import rings  # noqa: E402

verify_module = importlib.import_module("grschoen.verify")

SOUNDNESS = {"reductions": 0, "checked": 0}


def _checked_reduce(P):
    out = _ORIGINAL_REDUCE(P)
    SOUNDNESS["reductions"] += 1
    # random points lie on the variety only once every generator has been eliminated
    if out.log and rings.is_regular_domain(out):
        assert rings.check_soundness(out, count=20, seed=SOUNDNESS["reductions"]), "unsound elimination"
        SOUNDNESS["checked"] += 1
    return out


_ORIGINAL_REDUCE = rings.reduce_ideal


# installed at collection time so modules that import the name directly see the checked version
rings.reduce_ideal = _checked_reduce
verify_module.reduce_ideal = _checked_reduce


# acceptance criteria register one line each; the lines are repeated at the end of the run
ACCEPTANCE: dict = {}


def pytest_terminal_summary(terminalreporter):
    terminalreporter.write_line(
        f"elimination soundness: {SOUNDNESS['checked']} reductions back-substituted at 20 points "
        f"({SOUNDNESS['reductions']} reductions in total)"
    )
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for key in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[key])
