import random
from itertools import combinations

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from grschoen.examples import MANTIS, STAR_FINS, TREE
from grschoen.matroid import (
    Matroid,
    classify_template,
    parse_template,
    qsp,
    template_U,
    template_U_prime,
    template_V,
    template_W,
    uniform,
)
from grschoen.rings import (
    PreconditionError,
    RingPresentation,
    _unit_primes,
    build_presentation,
    build_sigma_presentation,
    check_soundness,
    d_value,
    dim_thin_schubert,
    is_B_maximal,
    is_regular_domain,
    jacobian_check,
    poly_ring,
    reduce_ideal,
    reduce_poly,
    upper_triangular_check,
)
from grschoen.subdivision import regular_subdivision

from conftest import random_tpoly_matrix, valuation_weight


def presentation_oracle(Q: Matroid, mu):
    """Variables and ideal of the thin Schubert cell, recomputed with sympy."""
    r, n = Q.r, Q.n
    comp = [e for e in range(1, n + 1) if e not in mu]
    X = {}
    M = sympy.zeros(r, n)
    for i, e in enumerate(mu):
        M[i, e - 1] = 1
    for j, e in enumerate(comp, start=1):
        for i in range(1, r + 1):
            swapped = tuple(sorted(set(mu) - {mu[i - 1]} | {e}))
            if swapped in Q:
                X[(i, j)] = sympy.Symbol(f"x_{i}_{j}")
                M[i - 1, e - 1] = X[(i, j)]
    ideal = set()
    for lam in combinations(range(1, n + 1), r):
        if lam in Q:
            continue
        d = sympy.expand(M[:, [e - 1 for e in lam]].det())
        if d != 0:
            ideal.add(d)
    return {str(x) for x in X.values()}, ideal


def same_up_to_sign(ours, theirs):
    ours = [sympy.expand(sympy.sympify(str(f.as_expr()))) for f in ours]
    remaining = list(theirs)
    for f in ours:
        hit = next((g for g in remaining if sympy.expand(f - g) == 0 or sympy.expand(f + g) == 0), None)
        if hit is None:
            return False
        remaining.remove(hit)
    return not remaining


def random_partition(rng, n, parts):
    elems = list(range(1, n + 1))
    rng.shuffle(elems)
    cuts = sorted(rng.sample(range(1, n), parts - 1))
    return [tuple(sorted(elems[a:b])) for a, b in zip([0] + cuts, cuts + [n])]


def random_template(seed: int) -> Matroid:
    rng = random.Random(seed)
    kind = rng.choice(["U", "U'", "V", "W"])
    if kind in ("U", "U'"):
        parts = random_partition(rng, 8, 4)
        return (template_U if kind == "U" else template_U_prime)(*parts)
    parts = random_partition(rng, 8, 5)
    return (template_V if kind == "V" else template_W)(*parts)


templates = st.integers(0, 10**6).map(random_template)


def corpus_matroids():
    out = []
    for w in (TREE, MANTIS, STAR_FINS):
        out += [c.matroid for c in regular_subdivision(w).cells]
    return out


CORPUS = corpus_matroids()


# -- presentations -------------------------------------------------------

def test_uniform_presentation():
    P = build_presentation(uniform(3, 8), (1, 2, 3))
    assert len(P.variables) == 15
    assert P.ideal == []
    assert len(P.semigroup) == 56


def test_qsp_presentation():
    P = build_presentation(qsp(), (1, 2, 3))
    assert len(P.variables) == 13
    assert set(poly_ring(3, 8)[1]) - set(P.variables) == {"x_1_2", "x_3_3"}
    assert len(P.ideal) == 6


@pytest.mark.parametrize("Q", [qsp(), parse_template("W(5678;1,3;2,4)"), parse_template("U(34578,1,2,6)")], ids=str)
def test_presentation_matches_oracle(Q):
    for mu in Q.sorted_bases()[:6]:
        P = build_presentation(Q, mu)
        names, ideal = presentation_oracle(Q, mu)
        assert set(P.variables) == names
        assert same_up_to_sign(P.ideal, ideal)


@settings(max_examples=20)
@given(templates, st.integers(0, 47))
def test_presentation_matches_oracle_random(Q, k):
    mu = Q.sorted_bases()[k % len(Q.sorted_bases())]
    P = build_presentation(Q, mu)
    names, ideal = presentation_oracle(Q, mu)
    assert set(P.variables) == names
    assert same_up_to_sign(P.ideal, ideal)


def test_presentation_needs_a_basis():
    with pytest.raises(PreconditionError):
        build_presentation(qsp(), (1, 2, 6))
    with pytest.raises(PreconditionError):
        d_value(qsp(), (1, 2, 6))


def test_small_W_reduces_to_four_variables():
    Q = parse_template("W(1;2,4;3,5)")
    for mu in Q.sorted_bases():
        red = reduce_ideal(build_presentation(Q, mu))
        assert is_regular_domain(red)
        assert len(red.variables) == 4


# -- d values and B-maximality --------------------------------------------

def test_d_values():
    assert d_value(uniform(3, 8), (1, 2, 3)) == 15
    assert d_value(qsp(), (1, 2, 3)) == 13


@given(st.sampled_from(CORPUS + [qsp()]), st.integers(0, 100))
def test_d_value_counts_variables(Q, k):
    mu = Q.sorted_bases()[k % len(Q.sorted_bases())]
    oracle = sum(1 for b in Q.sorted_bases() if len(set(b) ^ set(mu)) == 2)
    assert d_value(Q, mu) == oracle == len(build_presentation(Q, mu).variables)


@pytest.mark.parametrize("Q", CORPUS + [qsp()], ids=str)
def test_dimension_at_most_d(Q):
    res = dim_thin_schubert(Q)
    assert res.known
    assert all(res.dim <= d_value(Q, mu) for mu in Q.sorted_bases())


def test_tree_example_B_maximality():
    cells = {c.matroid for c in regular_subdivision(TREE).cells}
    named = {i: parse_template(t) for i, t in
             {1: "U(34578,1,2,6)", 4: "U(14567,2,3,8)", 5: "U(12347,5,6,8)", 6: "U(12356,4,7,8)"}.items()}
    assert set(named.values()) <= cells
    others = [Q for Q in cells if Q not in named.values()]
    by_dim = {dim_thin_schubert(Q).dim: Q for Q in others}
    assert sorted(by_dim) == [9, 10]
    named[2], named[3] = by_dim[10], by_dim[9]
    for i in (1, 2, 4, 5):
        assert is_B_maximal(named[i], (2, 6, 8), dim_thin_schubert(named[i]).dim)
    assert is_B_maximal(named[6], (1, 4, 7), 7)
    Q3 = named[3]
    assert not any(is_B_maximal(Q3, mu, 9) for mu in Q3.sorted_bases())
    assert is_B_maximal(uniform(3, 8), (4, 5, 6), 15)


# -- dimensions ------------------------------------------------------------

def test_dimension_examples():
    assert dim_thin_schubert(parse_template("U(34578,1,2,6)")).dim == 7
    assert dim_thin_schubert(parse_template("V(12,34,56;7,8)")).dim == 8
    res = dim_thin_schubert(qsp())
    assert (res.dim, res.components) == (7, 2)
    assert dim_thin_schubert(uniform(3, 8)).dim == 15


def presentation_dimension(Q):
    for mu in Q.sorted_bases():
        P = build_presentation(Q, mu)
        red = reduce_ideal(P)
        if is_regular_domain(red):
            return len(red.variables)
    return None


@pytest.mark.parametrize("Q", [Q for Q in CORPUS if classify_template(Q).kind != "none"], ids=str)
def test_template_formula_agrees_with_elimination(Q):
    assert presentation_dimension(Q) == classify_template(Q).dimension()


@settings(max_examples=30)
@given(templates)
def test_template_formula_agrees_with_elimination_random(Q):
    assert presentation_dimension(Q) == classify_template(Q).dimension()


# -- triangular criterion and elimination -----------------------------------

def _presentation(R, names, ideal, semigroup=()):
    P = RingPresentation(R, (1, 2, 3), list(names), list(ideal), list(semigroup))
    P.units = _unit_primes(list(semigroup) + [R.gens[[str(s) for s in R.symbols].index(v)] for v in names])
    return P


def test_triangular_examples():
    R, g = poly_ring(3, 6)
    x1, x2, x3 = g["x_1_1"], g["x_1_2"], g["x_1_3"]
    P = _presentation(R, ["x_1_1", "x_1_2", "x_1_3"], [x1 - x2 * x3])
    assert upper_triangular_check(P) is not None
    Q = _presentation(R, ["x_1_1", "x_1_2"], [x1**2 * x2**2 - 1])
    assert upper_triangular_check(Q) is None


def test_reduce_examples():
    R, g = poly_ring(3, 6)
    x1, x2, x3, x4 = g["x_1_1"], g["x_1_2"], g["x_1_3"], g["x_2_1"]
    empty = _presentation(R, ["x_1_1"], [])
    assert reduce_ideal(empty).variables == ["x_1_1"]
    P = _presentation(R, ["x_1_1", "x_1_2", "x_1_3", "x_2_1"], [x1 * x2 - x3 * x4])
    red = reduce_ideal(P)
    assert is_regular_domain(red)
    assert len(red.variables) == 3
    assert check_soundness(red, count=20, seed=1)


def test_reduce_poly_examples():
    R, g = poly_ring(3, 6)
    x1, x2, x3 = g["x_1_1"], g["x_1_2"], g["x_1_3"]
    assert reduce_poly(x1**2 * x2 - x1 * x3, []) == x1 * x2 - x3
    unit = x1 + x3 + 1
    assert reduce_poly(unit * (x1 - x2), _unit_primes([unit])) == x1 - x2
    assert reduce_poly(x1 * x2 - x3 * g["x_2_1"], []) == x1 * x2 - x3 * g["x_2_1"]


def corpus_presentations():
    out = []
    for Q in CORPUS + [qsp()]:
        for mu in Q.sorted_bases()[:4]:
            out.append(build_presentation(Q, mu))
    return out


@pytest.mark.parametrize("P", corpus_presentations(), ids=lambda P: str(P.mu))
def test_triangular_implies_elimination(P):
    tri = upper_triangular_check(P)
    red = reduce_ideal(P)
    if tri is not None:
        assert is_regular_domain(red)
        assert len(red.variables) == len(P.variables) - len(P.ideal)
    if is_regular_domain(red) and P.ideal:
        assert jacobian_check(red, len(red.variables))


@settings(max_examples=15)
@given(st.integers(0, 10**6))
def test_sigma_presentations_of_random_realizable(seed):
    rng = random.Random(seed)
    w = valuation_weight(random_tpoly_matrix(3, 6, rng))
    if w is None:
        return
    S = regular_subdivision(w)
    mats = [c.matroid for c in S.cells]
    common = set(mats[0].sorted_bases())
    for M in mats[1:]:
        common &= set(M.sorted_bases())
    for mu in sorted(common)[:2]:
        P = build_sigma_presentation(mats, mu)
        tri = upper_triangular_check(P)
        red = reduce_ideal(P)
        if tri is not None:
            assert is_regular_domain(red) and len(red.variables) == len(P.variables) - len(P.ideal)
