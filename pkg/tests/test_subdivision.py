import random
from fractions import Fraction
from math import lcm

import pytest
from hypothesis import given, settings, strategies as st

from grschoen.examples import MANTIS, STAR_FINS, TREE, W_SP
from grschoen.lp import maximize
from grschoen.matroid import uniform
from grschoen.subdivision import (
    Weight,
    check_witness,
    is_matroidal,
    lineality_vector,
    regular_subdivision,
)

from conftest import brute_force_cells, permutations8, small_lifts


def lower_envelope(w: Weight, x) -> Fraction:
    """min sum(l_b w_b) over l >= 0 with sum(l_b chi_b) = x, by linear programming."""
    bases = w.bases
    n = w.ambient.n
    A_eq = [[1 if e in b else 0 for b in bases] for e in range(1, n + 1)]
    val, _ = maximize([-v for v in w.values], A_eq=A_eq, b_eq=list(x), free=[])
    return -val


def affine_at(cell, x):
    a, b = cell.witness
    return b + sum(ai * xi for ai, xi in zip(a, x))


def assert_invariants(w: Weight, seed: int = 0):
    S = regular_subdivision(w)
    n = w.ambient.n
    # witness: each cell is exactly the tight set of its affine functional
    for cell in S.cells:
        a, b = cell.witness
        den = lcm(b.denominator, *(x.denominator for x in a), *(h.denominator for h in w.values))
        ai, bi = [int(x * den) for x in a], int(b * den)
        vals = [bi + sum(ai[e - 1] for e in base) for base in S.bases]
        hs = [int(h * den) for h in w.values]
        assert all(v <= h for v, h in zip(vals, hs))
        assert tuple(base for base, v, h in zip(S.bases, vals, hs) if v == h) == cell.bases
        assert S.affine_rank(cell.mask) == S.dim
    assert all(check_witness(S, cell) for cell in S.cells[:5])
    # adjacency: shared faces are exactly the intersections and have codimension one
    for i, j, fmask in S.adjacency:
        assert fmask == S.cells[i].mask & S.cells[j].mask
        assert S.affine_rank(fmask) == S.dim - 1
    # every interior facet of a cell has exactly one neighbour across it
    across = {}
    for i, j, fmask in S.adjacency:
        across[(i, fmask)] = across.get((i, fmask), 0) + 1
        across[(j, fmask)] = across.get((j, fmask), 0) + 1
    for k, cell in enumerate(S.cells):
        for fmask, interior in cell.facets:
            assert across.get((k, fmask), 0) == (1 if interior else 0)
    # coverage: every basis lies in a cell, and the cells' affine pieces realize
    # the lower envelope at random points of the polytope
    covered = 0
    for cell in S.cells:
        covered |= cell.mask
    assert covered == (1 << len(S.bases)) - 1
    rng = random.Random(seed)
    for _ in range(2):
        picks = rng.sample(range(len(S.bases)), min(4, len(S.bases)))
        coeffs = [Fraction(rng.randint(1, 5)) for _ in picks]
        tot = sum(coeffs)
        x = [sum(c * (e in S.bases[k]) for c, k in zip(coeffs, picks)) / tot for e in range(1, n + 1)]
        assert max(affine_at(c, x) for c in S.cells) == lower_envelope(w, x)
    return S


@pytest.mark.parametrize("r,n", [(2, 4), (2, 5), (3, 5)])
@given(data=st.data())
@settings(max_examples=25)
def test_matches_brute_force(r, n, data):
    w = data.draw(small_lifts(r, n))
    assert regular_subdivision(w).cell_sets() == brute_force_cells(w)


def _invariants(n):
    @given(small_lifts(3, n), st.integers(0, 10**6))
    def run(w, seed):
        assert_invariants(w, seed)
    return run


test_invariants_delta36 = settings(max_examples=80)(_invariants(6))
test_invariants_delta37 = settings(max_examples=70)(_invariants(7))
test_invariants_delta38 = settings(max_examples=50)(_invariants(8))


@pytest.mark.parametrize("w,cells", [(W_SP, 9), (TREE, 6), (MANTIS, 14), (STAR_FINS, 15)],
                         ids=["w_sp", "tree", "mantis", "star_fins"])
def test_worked_examples(w, cells):
    S = assert_invariants(w)
    assert len(S.cells) == cells
    assert is_matroidal(S)


def test_zero_weight_is_trivial():
    S = regular_subdivision(Weight(uniform(3, 6), [0] * 20))
    assert len(S.cells) == 1
    assert S.adjacency == []


@settings(max_examples=25)
@given(small_lifts(3, 8, top=2), permutations8)
def test_equivariance(w, perm):
    S = regular_subdivision(w)
    P = regular_subdivision(w.permuted(perm))
    f = {i + 1: p for i, p in enumerate(perm)}
    image = frozenset(tuple(sorted(tuple(sorted(f[e] for e in b)) for b in c)) for c in S.cell_sets())
    assert P.cell_sets() == image
    assert len(P.adjacency) == len(S.adjacency)


@settings(max_examples=25)
@given(small_lifts(3, 8, top=2), st.lists(st.integers(-5, 5), min_size=8, max_size=8))
def test_lineality_invariance(w, coeffs):
    shifted = w + lineality_vector(w.ambient, coeffs)
    assert regular_subdivision(shifted).cell_sets() == regular_subdivision(w).cell_sets()
    assert shifted.canonical_L() == w.canonical_L()
    assert lineality_vector(w.ambient, coeffs).is_lineal()


def test_weight_json_roundtrip():
    assert Weight.from_json(MANTIS.to_json()) == MANTIS
