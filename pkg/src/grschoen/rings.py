"""Affine presentations of thin Schubert cells and their inverse limits.

A presentation is a polynomial ring in variables ``x_i_j``, an ideal given by
generators and a multiplicative semigroup that is inverted. Polynomials are
sympy sparse ring elements over the rationals.

Inverting the semigroup makes every irreducible factor of a semigroup element
a unit. The presentation tracks that set of unit primes explicitly, so
"is this coefficient invertible" and "strip unit factors" are exact.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations

from sympy import QQ
from sympy.polys.rings import ring as _make_ring

from . import linalg
from .matroid import Matroid, classify_template, is_isomorphic, qsp


class PreconditionError(ValueError):
    pass


# ----------------------------------------------------------------------
# polynomial rings
# ----------------------------------------------------------------------

def var_name(i: int, j: int) -> str:
    return f"x_{i}_{j}"


@lru_cache(maxsize=None)
def poly_ring(r: int, n: int):
    """Polynomial ring in the r(n-r) variables x_i_j, row-major order."""
    names = [var_name(i, j) for i in range(1, r + 1) for j in range(1, n - r + 1)]
    R, *gens = _make_ring(",".join(names), QQ)
    return R, dict(zip(names, gens))


def _sign(perm) -> int:
    s = 1
    p = list(perm)
    for i in range(len(p)):
        while p[i] != i:
            j = p[i]
            p[i], p[j] = p[j], p[i]
            s = -s
    return s


def det(matrix, zero):
    """Leibniz expansion; fine for the 3x3 (and smaller) minors used here."""
    k = len(matrix)
    total = zero
    for perm in permutations(range(k)):
        term = _sign(perm)
        for row, col in enumerate(perm):
            term = term * matrix[row][col]
            if not term:
                break
        if term:
            total = total + term
    return total


def variables_of(f) -> set:
    """Indices of ring generators occurring in ``f``."""
    out = set()
    for mon in f.monoms():
        for k, e in enumerate(mon):
            if e:
                out.add(k)
    return out


def poly_to_json(f) -> list:
    names = [str(s) for s in f.ring.symbols]
    out = []
    for mon, c in sorted(f.terms(), reverse=True):
        out.append({"coeff": str(Fraction(int(c.numerator), int(c.denominator))),
                    "monomial": {names[k]: e for k, e in enumerate(mon) if e}})
    return out


def poly_from_json(R, data):
    names = [str(s) for s in R.symbols]
    f = R.zero
    for term in data:
        mon = [0] * len(names)
        for name, e in term["monomial"].items():
            mon[names.index(name)] = int(e)
        f += R({tuple(mon): R.domain.convert(Fraction(term["coeff"]))})
    return f


# ----------------------------------------------------------------------
# presentations
# ----------------------------------------------------------------------

@dataclass
class RingPresentation:
    ring: object
    mu: tuple
    variables: list  # names, in ring order
    ideal: list  # nonzero polynomials
    semigroup: list  # nonzero polynomials (their inverses are adjoined)
    log: list = field(default_factory=list)  # (variable name, numerator, denominator)
    units: list = field(default_factory=list)  # monic irreducible factors of the semigroup
    empty: bool = False  # the localization is the zero ring
    original: "RingPresentation | None" = field(default=None, repr=False)

    @property
    def dimension_bound(self) -> int:
        return len(self.variables)

    def var_index(self, name) -> int:
        return [str(s) for s in self.ring.symbols].index(name)

    def to_json(self) -> dict:
        return {
            "mu": list(self.mu),
            "variables": list(self.variables),
            "ideal": [poly_to_json(f) for f in self.ideal],
            "semigroup_size": len(self.semigroup),
            "substitutions": [
                {"variable": v, "numerator": poly_to_json(h), "denominator": poly_to_json(g)}
                for v, h, g in self.log
            ],
            "empty": self.empty,
        }


def a_map(mu, n):
    """Order-preserving bijection from 1..n-r onto the complement of ``mu``."""
    return [e for e in range(1, n + 1) if e not in mu]


def _variable_basis(mu, i, j, comp):
    """The basis obtained from ``mu`` by swapping its i-th element for a_mu(j)."""
    return tuple(sorted(set(mu) - {mu[i - 1]} | {comp[j - 1]}))


def build_presentation(Q: Matroid, mu) -> RingPresentation:
    mu = tuple(sorted(mu))
    if mu not in Q:
        raise PreconditionError(f"{mu} is not a basis")
    r, n = Q.r, Q.n
    if Q.ground != tuple(range(1, n + 1)):
        raise PreconditionError("presentations need ground set 1..n")
    R, gens = poly_ring(r, n)
    comp = a_map(mu, n)
    col = {}
    for i, e in enumerate(mu):
        col[e] = [R.one if k == i else R.zero for k in range(r)]
    names = []
    for j, e in enumerate(comp, start=1):
        column = []
        for i in range(1, r + 1):
            if _variable_basis(mu, i, j, comp) in Q:
                column.append(gens[var_name(i, j)])
            else:
                column.append(R.zero)
        col[e] = column
    names = [var_name(i, j) for i in range(1, r + 1) for j in range(1, n - r + 1)
             if _variable_basis(mu, i, j, comp) in Q]
    ideal, semigroup = [], []
    empty = False
    for lam in combinations(range(1, n + 1), r):
        m = [[col[e][row] for e in lam] for row in range(r)]
        d = det(m, R.zero)
        if lam in Q:
            if not d:
                empty = True
            semigroup.append(d)
        elif d:
            ideal.append(d)
    P = RingPresentation(R, mu, names, ideal, semigroup, empty=empty)
    P.units = _unit_primes(semigroup + [gens[v] for v in names])
    P.original = _snapshot(P)
    return P


def _snapshot(P: RingPresentation) -> RingPresentation:
    return RingPresentation(P.ring, P.mu, list(P.variables), list(P.ideal), list(P.semigroup),
                            [], list(P.units), P.empty)


def d_value(Q: Matroid, mu) -> int:
    mu = tuple(sorted(mu))
    if mu not in Q:
        raise PreconditionError(f"{mu} is not a basis")
    s = set(mu)
    return sum(1 for b in Q.bases if len(s.symmetric_difference(b)) == 2)


def build_sigma_presentation(matroids, mu, connecting: bool = True) -> RingPresentation:
    """Union of vertex variables, sum of vertex ideals, join of vertex semigroups."""
    mu = tuple(sorted(mu))
    if not connecting:
        raise PreconditionError("sub-complex is not vertex-connecting")
    parts = []
    for Q in matroids:
        if mu not in Q:
            raise PreconditionError(f"{mu} is not common to all vertex matroids")
        parts.append(build_presentation(Q, mu))
    R = parts[0].ring
    order = [str(s) for s in R.symbols]
    names = sorted({v for P in parts for v in P.variables}, key=order.index)
    ideal = _dedupe([f for P in parts for f in P.ideal])
    semigroup = _dedupe([f for P in parts for f in P.semigroup])
    P = RingPresentation(R, mu, names, ideal, semigroup, empty=any(p.empty for p in parts))
    _, gens = poly_ring(matroids[0].r, matroids[0].n)
    P.units = _unit_primes(semigroup + [gens[v] for v in names])
    P.ideal = _dedupe([reduce_poly(f, P.units) for f in ideal])
    P.original = _snapshot(P)
    P.original.ideal = list(ideal)
    return P


# ----------------------------------------------------------------------
# units and reduction
# ----------------------------------------------------------------------

def _normalize(f):
    """Monic representative (leading coefficient 1)."""
    return f.monic()


def _dedupe(polys):
    seen = set()
    out = []
    for f in polys:
        if not f:
            continue
        key = _normalize(f)
        if key not in seen:
            seen.add(key)
            out.append(f)
    return out


def _unit_primes(polys) -> list:
    primes = []
    seen = set()
    for f in polys:
        if not f or f.is_ground:
            continue
        for p in _factors(f):
            if p not in seen:
                seen.add(p)
                primes.append(p)
    return primes


def _factors(f) -> list:
    """Monic irreducible factors of ``f`` (monomial factors split into variables)."""
    out = []
    for p, _ in f.factor_list()[1]:
        if not p.is_ground:
            out.append(_normalize(p))
    return out


def is_unit(g, units) -> bool:
    """True iff ``g`` is a nonzero scalar times a product of the unit primes."""
    if not g:
        return False
    if g.is_ground:
        return True
    uset = set(units)
    return all(p in uset for p in _factors(g))


def reduce_poly(f, units):
    """Divide out the monomial content and every unit prime factor; primitive result."""
    if not f:
        return f
    R = f.ring
    monoms = f.monoms()
    low = tuple(min(m[k] for m in monoms) for k in range(R.ngens))
    if any(low):
        f = f.exquo(R({low: R.domain.one}))
    for p in units:
        if p.is_monomial:
            continue
        while True:
            q, rem = f.div(p)
            if rem or not q:
                break
            f = q
    return _primitive(f)


def _primitive(f):
    """Scale to integer coefficients with gcd 1 and positive leading coefficient."""
    if not f or f.is_ground:
        return f.ring.one if f else f
    _, prim = f.clear_denoms()
    content = prim.content()
    if content != 1:
        prim = prim.quo_ground(content)
    if prim.LC < 0:
        prim = -prim
    return prim


def _substitute(f, k: int, h, g):
    """``g**deg_k(f) * f(x_k = h/g)`` as a polynomial."""
    R = f.ring
    x = R.gens[k]
    D = f.degree(x)
    if D <= 0:
        return f
    total = R.zero
    for d in range(D + 1):
        c = f.coeff_wrt(x, d)
        if c:
            total += c * h ** d * g ** (D - d)
    return total


# ----------------------------------------------------------------------
# triangular check
# ----------------------------------------------------------------------

def exponent_sum(f, var_indices) -> list[int]:
    """Sum of the exponent vectors of all terms of ``f`` over the given variables."""
    out = [0] * len(var_indices)
    for mon in f.monoms():
        for c, k in enumerate(var_indices):
            out[c] += mon[k]
    return out


def upper_triangular_check(P: RingPresentation):
    """Row order and columns giving an upper unitriangular square block, or None.

    Rows are the exponent-sum vectors of the generators. Greedy: repeatedly
    choose a remaining row with an entry 1 in a column that is 0 in all other
    remaining rows. Any valid order survives the removal of such a row, so the
    greedy search is complete.
    """
    idx = [P.var_index(v) for v in P.variables]
    rows = {i: exponent_sum(f, idx) for i, f in enumerate(P.ideal)}
    if len(rows) > len(idx):
        return None
    order, cols = [], []
    remaining = set(rows)
    while remaining:
        pick = None
        for i in sorted(remaining):
            for c, val in enumerate(rows[i]):
                if val == 1 and all(rows[o][c] == 0 for o in remaining if o != i):
                    pick = (i, c)
                    break
            if pick:
                break
        if pick is None:
            return None
        order.append(pick[0])
        cols.append(P.variables[pick[1]])
        remaining.discard(pick[0])
    return order, cols


# ----------------------------------------------------------------------
# elimination
# ----------------------------------------------------------------------

def reduce_ideal(P: RingPresentation) -> RingPresentation:
    """Eliminate variables that occur linearly with an invertible coefficient.

    Pair choice is deterministic: lowest variable index first, then lowest
    generator index. Every step is logged as (variable, numerator, denominator)
    meaning ``variable = numerator / denominator``.
    """
    R = P.ring
    names = [str(s) for s in R.symbols]
    variables = list(P.variables)
    ideal = _dedupe([reduce_poly(f, P.units) for f in P.ideal])
    semigroup = list(P.semigroup)
    units = list(P.units)
    log = list(P.log)
    empty = P.empty
    while ideal and not empty:
        step = None
        for v in variables:
            k = names.index(v)
            x = R.gens[k]
            for f in ideal:
                if f.degree(x) == 1:
                    g = f.coeff_wrt(x, 1)
                    if is_unit(g, units):
                        step = (v, k, f, g)
                        break
            if step:
                break
        if step is None:
            break
        v, k, f, g = step
        h = -f.coeff_wrt(R.gens[k], 0)
        log.append((v, h, g))
        variables.remove(v)
        new_ideal = []
        for F in ideal:
            G = _substitute(F, k, h, g)
            if not G:
                continue
            G = reduce_poly(G, units)
            if G.is_ground:
                empty = True
            new_ideal.append(G)
        new_semi = []
        for s in semigroup:
            t = _substitute(s, k, h, g)
            if not t:
                empty = True
                continue
            new_semi.append(t)
        semigroup = new_semi
        known = set(units)
        for p in _unit_primes(new_semi + ([h] if h and not h.is_ground else [])):
            if p not in known:
                known.add(p)
                units.append(p)
        ideal = _dedupe([reduce_poly(G, units) for G in new_ideal])
        if any(G.is_ground for G in ideal):
            empty = True
    out = RingPresentation(R, P.mu, variables, ideal, semigroup, log, units, empty)
    out.original = P.original or _snapshot(P)
    return out


def is_regular_domain(P: RingPresentation) -> bool:
    return not P.ideal and not P.empty


# ----------------------------------------------------------------------
# soundness checks
# ----------------------------------------------------------------------

def _eval(f, point):
    """Evaluate at a full point (dict index -> Fraction); returns Fraction."""
    total = Fraction(0)
    for mon, c in f.terms():
        term = Fraction(int(c.numerator), int(c.denominator))
        for k, e in enumerate(mon):
            if e:
                term *= point[k] ** e
        total += term
    return total


def sample_points(P: RingPresentation, count: int = 20, seed: int = 0, bound: int = 30, max_tries: int = 20000):
    """Random points of the original variety obtained by back-substitution.

    Free variables get random nonzero integers; eliminated variables are
    recovered from the log in reverse. Points where a denominator or an original
    semigroup element vanishes are rejected.
    """
    rng = random.Random(seed)
    R = P.ring
    names = [str(s) for s in R.symbols]
    orig = P.original or P
    points = []
    tries = 0
    while len(points) < count and tries < max_tries:
        tries += 1
        point = {k: Fraction(0) for k in range(R.ngens)}
        for v in P.variables:
            point[names.index(v)] = Fraction(rng.choice([i for i in range(-bound, bound + 1) if i]))
        ok = True
        for v, h, g in reversed(P.log):
            den = _eval(g, point)
            if den == 0:
                ok = False
                break
            point[names.index(v)] = _eval(h, point) / den
        if not ok:
            continue
        if any(_eval(s, point) == 0 for s in orig.semigroup):
            continue
        points.append(point)
    return points


def check_soundness(P: RingPresentation, count: int = 20, seed: int = 0) -> bool:
    """Original generators vanish and original semigroup elements do not, at sampled points."""
    orig = P.original or P
    pts = sample_points(P, count, seed)
    if len(pts) < count:
        return False
    for pt in pts:
        if any(_eval(f, pt) != 0 for f in orig.ideal):
            return False
        if any(_eval(s, pt) == 0 for s in orig.semigroup):
            return False
    return True


def jacobian_rank(P: RingPresentation, point) -> int:
    orig = P.original or P
    R = P.ring
    names = [str(s) for s in R.symbols]
    idx = [names.index(v) for v in orig.variables]
    rows = []
    for f in orig.ideal:
        rows.append([_eval(f.diff(R.gens[k]), point) for k in idx])
    if not rows:
        return 0
    return linalg.rank(rows)


def jacobian_check(P: RingPresentation, dim: int, seed: int = 0, count: int = 3) -> bool:
    """Tangent-space cross-check: Jacobian rank equals (#original variables - dim)."""
    orig = P.original or P
    pts = sample_points(P, count, seed)
    if not pts:
        return False
    return all(jacobian_rank(P, pt) == len(orig.variables) - dim for pt in pts)


# ----------------------------------------------------------------------
# dimensions of thin Schubert cells
# ----------------------------------------------------------------------

@dataclass
class DimensionResult:
    dim: int | None
    components: int
    rule: str
    data: dict = field(default_factory=dict)

    @property
    def known(self) -> bool:
        return self.dim is not None


_DIM_CACHE: dict = {}


def dim_thin_schubert(Q: Matroid, cross_check: bool = True) -> DimensionResult:
    """Certified dimension of the thin Schubert cell, or an unknown result."""
    key = (Q.ground, Q.masks)
    if key in _DIM_CACHE:
        return _DIM_CACHE[key]
    res = _dim_uncached(Q, cross_check)
    _DIM_CACHE[key] = res
    return res


def _dim_uncached(Q: Matroid, cross_check: bool) -> DimensionResult:
    if Q.r == 3 and Q.n == 8 and len(Q.masks) == 48 and is_isomorphic(Q, qsp()) is not None:
        return DimensionResult(7, 2, "qsp", {})
    t = classify_template(Q)
    if t.kind in ("U", "U'", "V", "W"):
        return DimensionResult(t.dimension(), 1, "template", {"template": str(t)})
    # presentation reduction, trying bases in lex order
    for mu in Q.sorted_bases():
        P = build_presentation(Q, mu)
        if P.empty:
            return DimensionResult(None, 0, "empty", {"mu": list(mu)})
        tri = upper_triangular_check(P)
        red = reduce_ideal(P)
        if red.empty:
            return DimensionResult(None, 0, "empty", {"mu": list(mu)})
        if tri is not None or is_regular_domain(red):
            dim = len(P.variables) - len(P.ideal) if tri is not None else len(red.variables)
            data = {"mu": list(mu), "variables": len(P.variables), "generators": len(P.ideal),
                    "triangular": tri is not None, "eliminated": len(red.log)}
            if tri is not None and is_regular_domain(red):
                assert len(red.variables) == dim, "triangular and elimination dimensions disagree"
            if cross_check and red.ideal == [] and P.ideal:
                data["jacobian"] = jacobian_check(red, dim)
            return DimensionResult(dim, 1, "presentation", data)
    return DimensionResult(None, 1, "unknown", {})


def is_B_maximal(Q: Matroid, mu, dim_Q: int) -> bool:
    return tuple(sorted(mu)) in Q and d_value(Q, mu) == dim_Q


def B_maximal_witness(Q: Matroid, dim_Q: int, candidates=None):
    """Least basis ``mu`` (among ``candidates``) with d(Q, mu) = dim_Q, or None."""
    pool = Q.sorted_bases() if candidates is None else sorted(tuple(sorted(c)) for c in candidates)
    for mu in pool:
        if mu in Q and d_value(Q, mu) == dim_Q:
            return mu
    return None
