"""Exact scalars p + q*a with a^2 = a - 1, and polynomials in one variable t.

The scalar field is the splitting field of x^2 - x + 1 over the rationals. It
is the only extension needed to realize the special 8-element matroid. The
polynomial class works over any exact field whose elements support +, -, *
and == 0 (Fraction or QuadExtScalar).
"""
from __future__ import annotations

from fractions import Fraction
from itertools import combinations, permutations

from .matroid import QSP_NONBASES


class QuadExtScalar:
    __slots__ = ("p", "q")

    def __init__(self, p=0, q=0):
        self.p = Fraction(p)
        self.q = Fraction(q)

    @staticmethod
    def _lift(x) -> "QuadExtScalar":
        return x if isinstance(x, QuadExtScalar) else QuadExtScalar(x)

    def __add__(self, other):
        o = self._lift(other)
        return QuadExtScalar(self.p + o.p, self.q + o.q)

    __radd__ = __add__

    def __neg__(self):
        return QuadExtScalar(-self.p, -self.q)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        o = self._lift(other)
        # (p1 + q1 a)(p2 + q2 a) with a^2 = a - 1
        qq = self.q * o.q
        return QuadExtScalar(self.p * o.p - qq, self.p * o.q + self.q * o.p + qq)

    __rmul__ = __mul__

    def norm(self) -> Fraction:
        """Product with the conjugate (a -> 1 - a): p^2 + p q + q^2."""
        return self.p * self.p + self.p * self.q + self.q * self.q

    def inverse(self) -> "QuadExtScalar":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("zero has no inverse")
        return QuadExtScalar((self.p + self.q) / n, -self.q / n)

    def __truediv__(self, other):
        return self * self._lift(other).inverse()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.q == 0 and self.p == other
        if isinstance(other, QuadExtScalar):
            return self.p == other.p and self.q == other.q
        return NotImplemented

    def __hash__(self):
        return hash((self.p, self.q))

    def __bool__(self):
        return bool(self.p) or bool(self.q)

    def __repr__(self):
        return f"QuadExtScalar({self.p}, {self.q})"

    def __str__(self):
        if not self.q:
            return str(self.p)
        return f"{self.p}+{self.q}*a"


A = QuadExtScalar(0, 1)


# ----------------------------------------------------------------------
# polynomials in t
# ----------------------------------------------------------------------

class TPoly:
    """Dense univariate polynomial; ``coeffs[k]`` multiplies t^k."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        cs = list(coeffs)
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def const(cls, c) -> "TPoly":
        return cls([c])

    @classmethod
    def lift(cls, x) -> "TPoly":
        return x if isinstance(x, TPoly) else cls([x])

    def __add__(self, other):
        o = TPoly.lift(other)
        a, b = self.coeffs, o.coeffs
        n = max(len(a), len(b))
        return TPoly([(a[k] if k < len(a) else 0) + (b[k] if k < len(b) else 0) for k in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return TPoly([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-TPoly.lift(other))

    def __rsub__(self, other):
        return TPoly.lift(other) - self

    def __mul__(self, other):
        o = TPoly.lift(other)
        if not self.coeffs or not o.coeffs:
            return TPoly([])
        out = [0] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            if not x:
                continue
            for j, y in enumerate(o.coeffs):
                out[i + j] = out[i + j] + x * y
        return TPoly(out)

    __rmul__ = __mul__

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        return isinstance(other, TPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def valuation(self) -> int:
        """Lowest exponent with a nonzero coefficient."""
        for k, c in enumerate(self.coeffs):
            if c:
                return k
        raise ZeroDivisionError("the zero polynomial has no valuation")

    def __repr__(self):
        return f"TPoly({list(self.coeffs)})"


T = TPoly([0, 1])


def det3(m):
    """Determinant by permutation expansion; works over any commutative ring."""
    n = len(m)
    total = None
    for perm in permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = m[0][perm[0]]
        for i in range(1, n):
            term = term * m[i][perm[i]]
        if inv % 2:
            term = -term
        total = term if total is None else total + term
    return total


def minors(matrix):
    """Map r-subset (1-based) -> maximal minor of an r x n matrix."""
    r, n = len(matrix), len(matrix[0])
    out = {}
    for lam in combinations(range(1, n + 1), r):
        out[lam] = det3([[row[e - 1] for e in lam] for row in matrix])
    return out


# ----------------------------------------------------------------------
# the realization of the special matroid
# ----------------------------------------------------------------------

def qsp_matrix():
    """The 3x8 normal-form realization over the extension field."""
    one, zero = QuadExtScalar(1), QuadExtScalar(0)
    return [
        [one, zero, zero, one, zero, one, one, one],
        [zero, one, zero, one, one, A, one, A],
        [zero, zero, one, one, one, zero, one - A, one],
    ]


def verify_qsp_algebra() -> dict:
    """Minors of the normal form vanish exactly on the eight nonbases.

    Also reports the discriminant of x^2 - x + 1, whose negativity means the
    two admissible values of ``a`` are not real.
    """
    m = minors(qsp_matrix())
    nonbases = set(QSP_NONBASES)
    vanishing = sorted(lam for lam, d in m.items() if not d)
    nonzero_bases = [lam for lam, d in m.items() if d and lam not in nonbases]
    discriminant = (-1) ** 2 - 4 * 1 * 1
    ok = set(vanishing) == nonbases and len(nonzero_bases) == 48 and discriminant < 0
    return {
        "ok": ok,
        "vanishing": [list(v) for v in vanishing],
        "nonzero": len(nonzero_bases),
        "discriminant": discriminant,
        "minors": {"".join(map(str, k)): str(v) for k, v in m.items()},
    }
