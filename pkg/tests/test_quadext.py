from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from grschoen.batch import canonical_rep
from grschoen.examples import W_SP, matrix_At
from grschoen.matroid import QSP_NONBASES
from grschoen.quadext import A, QuadExtScalar, T, TPoly, det3, minors, qsp_matrix, verify_qsp_algebra
from grschoen.verify import DegenerateMatrix, plucker_valuations

ROOT = (1 + sympy.sqrt(3) * sympy.I) / 2  # a root of x^2 - x + 1

fractions_ = st.fractions(min_value=-5, max_value=5, max_denominator=6)
scalars = st.builds(QuadExtScalar, fractions_, fractions_)


def to_sympy(x: QuadExtScalar):
    return sympy.Rational(x.p.numerator, x.p.denominator) + sympy.Rational(x.q.numerator, x.q.denominator) * ROOT


def test_defining_relation():
    assert A * A == A - 1
    assert A * A * A == -1
    assert sympy.expand(ROOT**2 - ROOT + 1) == 0


@given(scalars, scalars)
def test_product_matches_complex_root(x, y):
    assert sympy.simplify(to_sympy(x * y) - to_sympy(x) * to_sympy(y)) == 0
    assert sympy.simplify(to_sympy(x + y) - to_sympy(x) - to_sympy(y)) == 0


@given(scalars, scalars, scalars)
def test_ring_axioms(x, y, z):
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x * y == y * x


@given(scalars)
def test_inverse_and_norm(x):
    assert x.norm() == to_norm_oracle(x)
    if x:
        assert x * x.inverse() == 1
    else:
        with pytest.raises(ZeroDivisionError):
            x.inverse()


def to_norm_oracle(x):
    z = to_sympy(x)
    return Fraction(str(sympy.nsimplify(sympy.expand(z * sympy.conjugate(z)))))


@given(scalars, scalars)
def test_norm_is_multiplicative(x, y):
    assert (x * y).norm() == x.norm() * y.norm()


@given(st.lists(st.integers(-3, 3), max_size=4), st.lists(st.integers(-3, 3), max_size=4))
def test_valuation_is_additive(a, b):
    f, g = TPoly(a), TPoly(b)
    if f and g:
        assert (f * g).valuation() == f.valuation() + g.valuation()
    else:
        with pytest.raises(ZeroDivisionError):
            (f * g).valuation()


def test_tpoly_arithmetic():
    assert (1 + T) * (1 - T) == 1 - T * T
    assert (T * T).valuation() == 2
    assert TPoly([0, 0]).coeffs == ()


def test_det_small():
    assert det3([[1, 2], [3, 4]]) == -2
    assert det3([[2, 0, 0], [0, 3, 0], [0, 0, 4]]) == 24


def test_qsp_minors_vanish_exactly_on_nonbases():
    report = verify_qsp_algebra()
    assert report["ok"]
    assert [tuple(v) for v in report["vanishing"]] == sorted(QSP_NONBASES)
    assert report["nonzero"] == 48
    assert report["discriminant"] == -3


def test_qsp_minors_oracle():
    """Recompute every maximal minor with sympy at the complex root."""
    M = sympy.Matrix([[to_sympy(x) for x in row] for row in qsp_matrix()])
    ours = minors(qsp_matrix())
    for lam, d in ours.items():
        cols = [e - 1 for e in lam]
        expected = sympy.simplify(M[:, cols].det())
        assert sympy.simplify(expected - to_sympy(d)) == 0
        assert (expected == 0) == (lam in QSP_NONBASES)


def test_At_valuations_recover_special_weight():
    w = plucker_valuations(matrix_At())
    assert canonical_rep(w) == canonical_rep(W_SP)
    assert w.canonical_L() == W_SP.canonical_L()


def test_At_specializes_to_normal_form():
    At = matrix_At()
    for row_t, row in zip(At, qsp_matrix()):
        for f, x in zip(row_t, row):
            assert (f.coeffs[0] if f.coeffs else 0) == x


def test_degenerate_matrix():
    M = [[TPoly([1]), TPoly([0]), TPoly([1])], [TPoly([0]), TPoly([1]), TPoly([0])]]
    M = [row + [TPoly([1])] for row in M]
    with pytest.raises(DegenerateMatrix):
        plucker_valuations(M)
