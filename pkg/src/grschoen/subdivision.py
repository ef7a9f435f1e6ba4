"""Regular subdivisions of matroid polytopes induced by height functions.

Points are the indicator vectors of the bases of an ambient matroid. A weight
lifts each point; the maximal cells are the maximal lower faces of the lift.
Everything is exact: heights are scaled to integers, facets come from the
double description method, and each cell carries the affine functional that
exposes it as a lower face.
"""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import gcd, lcm

from . import linalg
from .matroid import Matroid, from_mask, is_matroid, to_mask, uniform


class DegenerateStar(RuntimeError):
    """The maximal cells around an interior codimension-2 face do not form a cycle."""


# ----------------------------------------------------------------------
# weights
# ----------------------------------------------------------------------

class Weight:
    """Exact rational height for every basis of ``ambient`` (lex order of bases)."""

    __slots__ = ("ambient", "values", "_index")

    def __init__(self, ambient: Matroid, values):
        self.ambient = ambient
        self.values = tuple(Fraction(v) for v in values)
        if len(self.values) != len(ambient.masks):
            raise ValueError(f"expected {len(ambient.masks)} values, got {len(self.values)}")
        self._index = None

    @classmethod
    def from_terms(cls, terms, n: int = 8, r: int = 3, ambient: Matroid | None = None):
        """Build from a mapping basis -> value; unspecified bases get 0.

        Keys may be tuples or digit strings such as ``"126"``.
        """
        ambient = ambient or uniform(r, n)
        index = {b: k for k, b in enumerate(ambient.sorted_bases())}
        vals = [Fraction(0)] * len(index)
        for key, v in dict(terms).items():
            b = tuple(sorted(int(c) for c in key)) if isinstance(key, str) else tuple(sorted(key))
            vals[index[b]] += Fraction(v)
        return cls(ambient, vals)

    @classmethod
    def zero(cls, ambient: Matroid):
        return cls(ambient, [0] * len(ambient.masks))

    @property
    def bases(self):
        return self.ambient.sorted_bases()

    @property
    def index(self) -> dict:
        if self._index is None:
            self._index = {b: k for k, b in enumerate(self.bases)}
        return self._index

    def __getitem__(self, basis) -> Fraction:
        return self.values[self.index[tuple(sorted(basis))]]

    def __add__(self, other: "Weight") -> "Weight":
        assert self.ambient == other.ambient
        return Weight(self.ambient, [a + b for a, b in zip(self.values, other.values)])

    def scaled(self, c) -> "Weight":
        return Weight(self.ambient, [Fraction(c) * v for v in self.values])

    def __eq__(self, other) -> bool:
        return isinstance(other, Weight) and self.ambient == other.ambient and self.values == other.values

    def __hash__(self):
        return hash(self.values)

    def __repr__(self) -> str:
        nz = {"".join(map(str, b)): str(v) for b, v in zip(self.bases, self.values) if v}
        return f"Weight({nz})"

    def permuted(self, perm) -> "Weight":
        """Relabel elements: the value of ``b`` moves to the image of ``b``."""
        f = perm if isinstance(perm, dict) else {i + 1: p for i, p in enumerate(perm)}
        amb = self.ambient.permuted(f)
        index = {b: k for k, b in enumerate(amb.sorted_bases())}
        vals = [Fraction(0)] * len(index)
        for b, v in zip(self.bases, self.values):
            vals[index[tuple(sorted(f[e] for e in b))]] = v
        return Weight(amb, vals)

    def integer_heights(self) -> tuple[list[int], int]:
        """(heights, scale) with heights = scale * values, all integers."""
        den = 1
        for v in self.values:
            den = lcm(den, v.denominator)
        return [int(v * den) for v in self.values], den

    def lineality_component(self) -> list[Fraction]:
        """Orthogonal projection of the weight onto the lineality space."""
        amb = self.ambient
        chis = [[1 if e in b else 0 for b in self.bases] for e in amb.ground]
        keep = linalg.independent_rows(chis)
        chis = [chis[i] for i in keep]
        gram = [[sum(x * y for x, y in zip(a, b)) for b in chis] for a in chis]
        rhs = [sum(x * v for x, v in zip(a, self.values)) for a in chis]
        coeffs = linalg.solve(gram, rhs)
        return [sum(c * chi[k] for c, chi in zip(coeffs, chis)) for k in range(len(self.values))]

    def canonical_L(self) -> "Weight":
        """Representative modulo lineality: every element's incident values sum to 0."""
        comp = self.lineality_component()
        return Weight(self.ambient, [v - c for v, c in zip(self.values, comp)])

    def is_lineal(self) -> bool:
        return not any(self.canonical_L().values)

    # -- serialization -------------------------------------------------
    def to_json(self) -> dict:
        out = {"n": self.ambient.n, "r": self.ambient.r}
        if self.ambient != uniform(self.ambient.r, self.ambient.n):
            out["ambient"] = self.ambient.to_json()
        out["entries"] = [
            {"basis": list(b), "value": str(v)} for b, v in zip(self.bases, self.values) if v != 0
        ]
        return out

    @classmethod
    def from_json(cls, data) -> "Weight":
        if isinstance(data, str):
            data = json.loads(data)
        n, r = int(data["n"]), int(data["r"])
        ambient = Matroid.from_json(data["ambient"]) if "ambient" in data else uniform(r, n)
        terms = {}
        for ent in data.get("entries", []):
            b = tuple(sorted(int(x) for x in ent["basis"]))
            if len(b) != r or not all(1 <= x <= n for x in b):
                raise ValueError(f"bad basis {ent['basis']}")
            terms[b] = terms.get(b, 0) + Fraction(str(ent["value"]))
        return cls.from_terms(terms, ambient=ambient)


def lineality_vector(ambient: Matroid, coeffs) -> Weight:
    """The element of the lineality space given by per-element coefficients."""
    bases = ambient.sorted_bases()
    return Weight(ambient, [sum(Fraction(coeffs[e - 1]) for e in b) for b in bases])


# ----------------------------------------------------------------------
# cells and complexes
# ----------------------------------------------------------------------

@dataclass
class Cell:
    """A maximal lower face of the lifted point configuration."""

    mask: int  # bitmask over ambient basis indices
    bases: tuple  # the basis tuples in the cell, lex order
    dim: int
    witness: tuple  # (a, b): a over elements, b constant
    facets: list = field(default_factory=list)  # (ambient mask, interior?)

    _ground: tuple = ()

    @cached_property
    def matroid(self) -> Matroid:
        return Matroid(self.bases, ground=self._ground or None)

    def is_matroid(self) -> bool:
        return is_matroid(self.bases)


@dataclass
class Ridge:
    """An interior codimension-2 face with its cyclically ordered star of maximal cells."""

    mask: int
    star: tuple  # cell indices in cyclic order


class SubdivisionComplex:
    def __init__(self, weight: Weight, cells, adjacency, points, chart, delta_facets):
        self.weight = weight
        self.ambient = weight.ambient
        self.cells: list[Cell] = cells
        self.adjacency: list[tuple[int, int, int]] = adjacency  # (i, j, face mask), i < j
        self._points = points  # projected integer coordinates of all ambient bases
        self.dim = chart
        self.delta_facets = delta_facets
        self._ridges = None

    @property
    def maximal_cells(self) -> list[Cell]:
        return self.cells

    @property
    def bases(self):
        return self.ambient.sorted_bases()

    def cell_matroids(self) -> list[Matroid]:
        return [c.matroid for c in self.cells]

    def mask_to_bases(self, mask: int):
        return tuple(b for k, b in enumerate(self.bases) if mask >> k & 1)

    def face_matroid(self, mask: int) -> Matroid:
        return Matroid(self.mask_to_bases(mask), ground=self.ambient.ground)

    def affine_rank(self, mask: int) -> int:
        idx = [k for k in range(len(self._points)) if mask >> k & 1]
        if not idx:
            return -1
        p0 = self._points[idx[0]]
        return linalg.integer_rank([[a - b for a, b in zip(self._points[k], p0)] for k in idx[1:]])

    def is_interior(self, mask: int) -> bool:
        """True iff the face is not contained in a facet of the ambient polytope."""
        return not any(mask & f == mask for f in self.delta_facets)

    def ridges(self) -> list[Ridge]:
        """Interior codimension-2 faces, each with its star ordered cyclically."""
        if self._ridges is not None:
            return self._ridges
        D = self.dim
        found = {}
        for cell in self.cells:
            fm = [m for m, _ in cell.facets]
            for i in range(len(fm)):
                for j in range(i + 1, len(fm)):
                    g = fm[i] & fm[j]
                    if g in found or not self.is_interior(g):
                        continue
                    if self.affine_rank(g) == D - 2:
                        found[g] = None
        ridges = []
        for g in sorted(found):
            star = [k for k, c in enumerate(self.cells) if c.mask & g == g]
            nbrs = {k: [] for k in star}
            for i, j, f in self.adjacency:
                if f & g == g and i in nbrs and j in nbrs:
                    nbrs[i].append(j)
                    nbrs[j].append(i)
            if len(star) < 3 or any(len(v) != 2 for v in nbrs.values()):
                raise DegenerateStar(f"star of face {self.mask_to_bases(g)} is not a cycle: {nbrs}")
            start = star[0]
            order = [start]
            prev, cur = start, min(nbrs[start])
            while cur != start:
                order.append(cur)
                a, b = nbrs[cur]
                prev, cur = cur, (b if a == prev else a)
            if len(order) != len(star):
                raise DegenerateStar(f"star of face {self.mask_to_bases(g)} is disconnected")
            ridges.append(Ridge(g, tuple(order)))
        self._ridges = ridges
        return ridges

    def interior_faces(self, codim: int):
        if codim == 0:
            return [c.mask for c in self.cells]
        if codim == 1:
            return [f for _, _, f in self.adjacency]
        if codim == 2:
            return [r.mask for r in self.ridges()]
        raise ValueError("only codimension 0, 1, 2 are computed")

    def cell_sets(self) -> frozenset:
        return frozenset(c.bases for c in self.cells)


# ----------------------------------------------------------------------
# the algorithm
# ----------------------------------------------------------------------

# Affine functionals are kept as (coefficients, denominator) with integer
# coefficients (c0, c1, ..., cD) meaning x -> (c0 + c.x) / denominator.

def _affine_value(h, p):
    return h[0] + sum(c * x for c, x in zip(h[1:], p))


def _int_value(hi, support):
    """Value at a 0/1 point given by the (1-based) coordinates where it is 1."""
    v = hi[0]
    for j in support:
        v += hi[j]
    return v


def _supports(pts):
    return [tuple(j for j, x in enumerate(p, start=1) if x) for p in pts]


def _reduced(coeffs, den):
    g = den
    for c in coeffs:
        g = gcd(g, c)
    return tuple(c // g for c in coeffs), den // g


def _tight(h, sup, heights):
    hi, den = h
    m = 0
    for k, (p, w) in enumerate(zip(sup, heights)):
        if _int_value(hi, p) == den * w:
            m |= 1 << k
    return m


def _indices(mask):
    out = []
    k = 0
    while mask:
        if mask & 1:
            out.append(k)
        mask >>= 1
        k += 1
    return out


def _tilt(h, g, sup, heights):
    """Largest step ``t`` keeping ``h + t g`` below the heights; returns the new functional.

    ``g`` is an integer direction.
    """
    hi, hden = h
    best = None  # ratio (num, den) with den > 0
    for p, w in zip(sup, heights):
        gv = _int_value(g, p)
        if gv > 0:
            num = hden * w - _int_value(hi, p)  # t = num / (hden * gv)
            den = hden * gv
            if best is None or num * best[1] < best[0] * den:
                best = (num, den)
    if best is None:
        return None
    num, den = best
    # h + t g = hi / hden + num g / den, and den is a multiple of hden
    k = den // hden
    return _reduced([a * k + num * b for a, b in zip(hi, g)], den)


def _start_cell(pts, sup, heights, D):
    h = ((min(heights),) + (0,) * D, 1)
    tight = _tight(h, sup, heights)
    while True:
        idx = _indices(tight)
        rows = [(1,) + tuple(pts[k]) for k in idx]
        if linalg.integer_rank(rows) == D + 1:
            return h, tight
        g = [int(x) for x in linalg.nullspace(rows, D + 1)[0]]
        if not any(_affine_value(g, p) > 0 for p in pts):
            g = [-x for x in g]
        h = _tilt(h, g, sup, heights)
        tight = _tight(h, sup, heights)


def regular_subdivision(w: Weight) -> SubdivisionComplex:
    """Maximal cells of the regular subdivision induced by ``w``, with adjacency."""
    ambient = w.ambient
    bases = ambient.sorted_bases()
    n = ambient.n
    ground = ambient.ground
    full = [[1 if e in b else 0 for e in ground] for b in bases]
    D, chart = linalg.affine_chart(full)
    pts = [tuple(p[j] for j in chart) for p in full]
    sup = _supports(pts)
    heights, scale = w.integer_heights()
    delta_facets = [m for _, m in linalg.facets(pts)] if D > 0 else []

    def make_cell(h, tight):
        idx = _indices(tight)
        local = [pts[k] for k in idx]
        fcts = []
        for ineq, zmask in linalg.facets(local) if D > 0 else []:
            amb = 0
            for pos, k in enumerate(idx):
                if zmask >> pos & 1:
                    amb |= 1 << k
            fcts.append((amb, ineq))
        hi, hden = h
        a = [Fraction(0)] * n
        for pos, j in enumerate(chart):
            a[j] = Fraction(hi[1 + pos], hden * scale)
        witness = (tuple(a), Fraction(hi[0], hden * scale))
        return Cell(tight, tuple(bases[k] for k in idx), D, witness, fcts, ground)

    h0, t0 = _start_cell(pts, sup, heights, D)
    cells = {t0: (make_cell(h0, t0), h0)}
    queue = deque([t0])
    adjacency = {}
    while queue:
        cur = queue.popleft()
        cell, h = cells[cur]
        new_facets = []
        for fmask, ineq in cell.facets:
            g = tuple(-int(x) for x in ineq)
            h2 = _tilt(h, g, sup, heights)
            if h2 is None:
                new_facets.append((fmask, False))
                continue
            nxt = _tight(h2, sup, heights)
            new_facets.append((fmask, True))
            if nxt not in cells:
                cells[nxt] = (make_cell(h2, nxt), h2)
                queue.append(nxt)
            adjacency.setdefault(fmask, set()).update({cur, nxt})
        cell.facets = new_facets

    order = sorted(cells, key=lambda m: cells[m][0].bases)
    pos = {m: k for k, m in enumerate(order)}
    cell_list = [cells[m][0] for m in order]
    adj = []
    for fmask, pair in adjacency.items():
        if len(pair) != 2:
            raise RuntimeError(f"interior facet shared by {len(pair)} cells")
        i, j = sorted(pos[m] for m in pair)
        adj.append((i, j, fmask))
    adj.sort()
    return SubdivisionComplex(w, cell_list, adj, pts, D, delta_facets)


def is_matroidal(S: SubdivisionComplex) -> bool:
    return all(c.is_matroid() for c in S.cells)


def check_witness(S: SubdivisionComplex, cell: Cell) -> bool:
    """Exact check: witness equals the weight on the cell and is strictly below elsewhere."""
    a, b = cell.witness
    for k, (base, wv) in enumerate(zip(S.bases, S.weight.values)):
        val = b + sum(a[e - 1] for e in base)
        if cell.mask >> k & 1:
            if val != wv:
                return False
        elif not val < wv:
            return False
    return True


def cells_containing(S: SubdivisionComplex, basis) -> list[int]:
    k = S.weight.index[tuple(sorted(basis))]
    return [i for i, c in enumerate(S.cells) if c.mask >> k & 1]


__all__ = [
    "Weight",
    "Cell",
    "Ridge",
    "SubdivisionComplex",
    "DegenerateStar",
    "regular_subdivision",
    "is_matroidal",
    "check_witness",
    "lineality_vector",
    "from_mask",
    "to_mask",
]
