"""Matroids of small rank on small ground sets, stored by their bases.

Elements are 1-based integer labels. A basis is kept internally as a bitmask
over labels (bit ``i - 1`` for element ``i``); the public view is a sorted
tuple of labels.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, permutations
from math import comb


class MalformedInput(ValueError):
    pass


class LoopError(ValueError):
    def __init__(self, element):
        super().__init__(f"matroid has a loop at element {element}")
        self.element = element


class DegenerateInput(ValueError):
    pass


def to_mask(subset) -> int:
    m = 0
    for i in subset:
        m |= 1 << (i - 1)
    return m


def from_mask(mask: int) -> tuple[int, ...]:
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low
        mask ^= low


@lru_cache(maxsize=None)
def lex_subsets(n: int, r: int) -> tuple[tuple[int, ...], ...]:
    """All r-subsets of [n] in lexicographic order (the canonical basis index)."""
    return tuple(combinations(range(1, n + 1), r))


@lru_cache(maxsize=None)
def _lex_index(n: int, r: int) -> dict[int, int]:
    return {to_mask(s): k for k, s in enumerate(lex_subsets(n, r))}


@lru_cache(maxsize=200_000)
def _exchange_holds(masks: frozenset) -> bool:
    for b1 in masks:
        for b2 in masks:
            if b1 == b2:
                continue
            only2 = b2 & ~b1
            for x in _bits(b1 & ~b2):
                base = b1 ^ x
                if not any((base | y) in masks for y in _bits(only2)):
                    return False
    return True


def is_matroid(bases) -> bool:
    """True iff the collection satisfies the basis-exchange axiom.

    An empty collection is not a matroid. Subsets of mixed sizes raise
    ``MalformedInput``.
    """
    masks = set()
    sizes = set()
    for b in bases:
        b = tuple(b)
        if len(set(b)) != len(b):
            raise MalformedInput(f"repeated element in {b}")
        sizes.add(len(b))
        masks.add(to_mask(b))
    if len(sizes) > 1:
        raise MalformedInput(f"subsets of mixed sizes {sorted(sizes)}")
    if not masks:
        return False
    return _exchange_holds(frozenset(masks))


class Matroid:
    """A matroid given by its bases.

    ``ground`` defaults to ``1..n``. Construction asserts the exchange axiom
    unless ``check=False`` (used only for candidate sets that are tested
    separately).
    """

    __slots__ = ("ground", "r", "masks", "_hash", "_cache")

    def __init__(self, bases, n: int | None = None, ground=None, check: bool = True):
        masks = set()
        r = None
        for b in bases:
            m = b if isinstance(b, int) else to_mask(b)
            k = m.bit_count() if hasattr(m, "bit_count") else bin(m).count("1")
            if r is None:
                r = k
            elif r != k:
                raise MalformedInput("bases of different sizes")
            masks.add(m)
        if not masks:
            raise MalformedInput("a matroid needs at least one basis")
        if ground is None:
            if n is None:
                n = max(masks).bit_length()
            ground = tuple(range(1, n + 1))
        self.ground = tuple(sorted(ground))
        gmask = to_mask(self.ground)
        if any(m & ~gmask for m in masks):
            raise MalformedInput("basis outside the ground set")
        self.r = r
        self.masks = frozenset(masks)
        self._hash = hash((self.ground, self.masks))
        self._cache = {}
        if check and not _exchange_holds(self.masks):
            raise MalformedInput("basis-exchange axiom fails")

    # -- basic views ---------------------------------------------------
    @property
    def n(self) -> int:
        return len(self.ground)

    @property
    def bases(self) -> frozenset:
        return frozenset(from_mask(m) for m in self.masks)

    def sorted_bases(self) -> list[tuple[int, ...]]:
        return sorted(from_mask(m) for m in self.masks)

    def nonbases(self) -> list[tuple[int, ...]]:
        return [s for s in combinations(self.ground, self.r) if to_mask(s) not in self.masks]

    def __contains__(self, subset) -> bool:
        return to_mask(subset) in self.masks

    def __len__(self) -> int:
        return len(self.masks)

    def __eq__(self, other) -> bool:
        return isinstance(other, Matroid) and self.ground == other.ground and self.masks == other.masks

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"Matroid(r={self.r}, n={self.n}, |bases|={len(self.masks)})"

    @property
    def mask(self) -> int:
        """Bitmask over the lexicographic list of r-subsets of the ground set."""
        out = 0
        for k, s in enumerate(combinations(self.ground, self.r)):
            if to_mask(s) in self.masks:
                out |= 1 << k
        return out

    # -- rank, closure, flats ------------------------------------------
    def rank(self, subset) -> int:
        s = subset if isinstance(subset, int) else to_mask(subset)
        key = ("rank", s)
        if key not in self._cache:
            best = 0
            for b in self.masks:
                k = bin(b & s).count("1")
                if k > best:
                    best = k
                    if best == self.r:
                        break
            self._cache[key] = best
        return self._cache[key]

    def closure(self, subset) -> tuple[int, ...]:
        s = subset if isinstance(subset, int) else to_mask(subset)
        rk = self.rank(s)
        return tuple(e for e in self.ground if self.rank(s | (1 << (e - 1))) == rk)

    def loops(self) -> tuple[int, ...]:
        return tuple(e for e in self.ground if self.rank([e]) == 0)

    def coloops(self) -> tuple[int, ...]:
        return tuple(e for e in self.ground if all(m >> (e - 1) & 1 for m in self.masks))

    def parallel_classes(self) -> list[tuple[int, ...]]:
        """Rank-1 flats of a loopless matroid, ordered by least element."""
        lp = self.loops()
        if lp:
            raise LoopError(lp[0])
        seen = set()
        out = []
        for e in self.ground:
            if e in seen:
                continue
            cls = self.closure([e])
            seen.update(cls)
            out.append(cls)
        return out

    def is_connected(self) -> bool:
        # connected iff no proper nonempty separator: r(A) + r(E-A) = r
        g = list(self.ground)
        if len(g) <= 1:
            return True
        full = to_mask(g)
        first = 1 << (g[0] - 1)
        rest = g[1:]
        for k in range(0, len(rest)):
            for extra in combinations(rest, k):
                a = first | to_mask(extra)
                if a == full:
                    continue
                if self.rank(a) + self.rank(full & ~a) == self.r:
                    return False
        return True

    def permuted(self, perm) -> "Matroid":
        """Image under a relabelling; ``perm`` maps labels (dict or 1-based sequence)."""
        f = _perm_map(perm)
        ground = tuple(f[e] for e in self.ground)
        masks = [to_mask(f[e] for e in from_mask(m)) for m in self.masks]
        return Matroid(masks, ground=ground, check=False)

    # -- serialization -------------------------------------------------
    def to_json(self) -> dict:
        nb = self.nonbases()
        out = {"n": self.n, "r": self.r}
        if self.ground != tuple(range(1, self.n + 1)):
            out["ground"] = list(self.ground)
        if len(nb) < len(self.masks):
            out["nonbases"] = [list(s) for s in nb]
        else:
            out["bases"] = [list(s) for s in self.sorted_bases()]
        return out

    @classmethod
    def from_json(cls, data) -> "Matroid":
        if isinstance(data, str):
            data = json.loads(data)
        n, r = int(data["n"]), int(data["r"])
        ground = tuple(data.get("ground", range(1, n + 1)))
        if "bases" in data:
            return cls([tuple(b) for b in data["bases"]], ground=ground)
        nonbases = {to_mask(b) for b in data.get("nonbases", [])}
        if any(bin(m).count("1") != r for m in nonbases):
            raise MalformedInput("nonbasis of wrong size")
        bases = [to_mask(s) for s in combinations(ground, r) if to_mask(s) not in nonbases]
        return cls(bases, ground=ground)


def _perm_map(perm) -> dict:
    if isinstance(perm, dict):
        return perm
    return {i + 1: p for i, p in enumerate(perm)}


# ----------------------------------------------------------------------
# constructors
# ----------------------------------------------------------------------

def uniform(r: int, n: int) -> Matroid:
    return Matroid(lex_subsets(n, r), n=n)


def from_nonbases(n: int, r: int, nonbases) -> Matroid:
    return Matroid.from_json({"n": n, "r": r, "nonbases": [tuple(b) for b in nonbases]})


def rank3_configuration(blocks, lines=(), ground=None) -> Matroid:
    """Rank-3 matroid of points in the plane.

    ``blocks`` are the parallel classes; ``lines`` are sets of block indices
    that are collinear (each of size at least 3). A triple is a basis iff it
    meets three distinct blocks that are not all on one line.
    """
    blocks = [tuple(sorted(b)) for b in blocks]
    where = {}
    for k, b in enumerate(blocks):
        for e in b:
            where[e] = k
    line_sets = [frozenset(l) for l in lines]
    if ground is None:
        ground = tuple(sorted(where))
    bases = []
    for t in combinations(ground, 3):
        ks = {where[e] for e in t}
        if len(ks) < 3:
            continue
        if any(ks <= l for l in line_sets):
            continue
        bases.append(t)
    return Matroid(bases, ground=ground)


def _blocks(spec):
    """Accept blocks as iterables, or as digit strings / ints like '126' or 126."""
    out = []
    for b in spec:
        if isinstance(b, int):
            out.append(tuple(int(c) for c in str(b)))
        elif isinstance(b, str):
            out.append(tuple(int(c) for c in b))
        else:
            out.append(tuple(b))
    return out


def template_U(*parts) -> Matroid:
    """Four parallel classes in general position."""
    b = _blocks(parts)
    assert len(b) == 4
    return rank3_configuration(b)


def template_U_prime(l1, l2, l3, l4) -> Matroid:
    """Three collinear classes ``l1, l2, l3`` and a class ``l4`` off the line."""
    b = _blocks([l1, l2, l3, l4])
    return rank3_configuration(b, lines=[{0, 1, 2}])


def template_V(l1, l2, l3, l4, l5) -> Matroid:
    """Collinear ``l1, l2, l3``; ``l4, l5`` in general position."""
    b = _blocks([l1, l2, l3, l4, l5])
    return rank3_configuration(b, lines=[{0, 1, 2}])


def template_W(l1, l2, l3, l4, l5) -> Matroid:
    """Two lines ``l1 l2 l3`` and ``l1 l4 l5`` meeting at ``l1``."""
    b = _blocks([l1, l2, l3, l4, l5])
    return rank3_configuration(b, lines=[{0, 1, 2}, {0, 3, 4}])


QSP_NONBASES = ((1, 2, 6), (1, 4, 5), (1, 7, 8), (2, 3, 5), (2, 4, 8), (3, 4, 7), (3, 6, 8), (5, 6, 7))


@lru_cache(maxsize=None)
def qsp() -> Matroid:
    """The sparse paving (3,8)-matroid with eight three-point lines."""
    return from_nonbases(8, 3, QSP_NONBASES)


# ----------------------------------------------------------------------
# operations
# ----------------------------------------------------------------------

def rank(Q: Matroid, subset) -> int:
    return Q.rank(subset)


def restriction_contraction(Q: Matroid, subset) -> tuple[Matroid, Matroid]:
    lam = tuple(sorted(set(subset)))
    if not lam or set(lam) >= set(Q.ground):
        raise DegenerateInput("subset must be proper and nonempty")
    if not set(lam) <= set(Q.ground):
        raise DegenerateInput("subset outside the ground set")
    s = to_mask(lam)
    rk = Q.rank(s)
    rest = tuple(e for e in Q.ground if e not in lam)
    restr = {b & s for b in Q.masks if bin(b & s).count("1") == rk}
    contr = {b & ~s for b in Q.masks if bin(b & s).count("1") == rk}
    return Matroid(restr, ground=lam), Matroid(contr, ground=rest)


def rank2_flats(Q: Matroid) -> list[tuple[int, ...]]:
    out = set()
    classes = Q.parallel_classes()
    for c1, c2 in combinations(classes, 2):
        out.add(Q.closure([c1[0], c2[0]]))
    return sorted(x for x in out if Q.rank(x) == 2)


def is_cyclic(Q: Matroid, flat) -> bool:
    s = to_mask(flat)
    rk = Q.rank(s)
    return all(Q.rank(s & ~(1 << (e - 1))) == rk for e in flat)


def simplifying_set(Q: Matroid, rng=None) -> tuple[int, ...]:
    classes = Q.parallel_classes()
    if rng is None:
        return tuple(c[0] for c in classes)
    return tuple(sorted(rng.choice(c) for c in classes))


def lines(Q: Matroid, S=None) -> list[tuple[int, ...]]:
    """Rank-2 flats meeting the simplifying set ``S`` in at least three points."""
    if S is None:
        S = simplifying_set(Q)
    S = set(S)
    return [f for f in rank2_flats(Q) if len(S.intersection(f)) >= 3]


def flats_and_lines(Q: Matroid, S=None):
    """(rank-1 flats, rank-2 cyclic flats, lines). Raises ``LoopError`` on a loop."""
    ones = Q.parallel_classes()
    twos = [f for f in rank2_flats(Q) if is_cyclic(Q, f)]
    return ones, twos, lines(Q, S)


def face_matroid(Q: Matroid, v) -> Matroid:
    """Bases minimizing the sum of ``v`` over their elements.

    ``v`` is a dict label -> int or a sequence indexed by label - 1.
    """
    if isinstance(v, dict):
        val = lambda e: v.get(e, 0)  # noqa: E731
    else:
        val = lambda e: v[e - 1]  # noqa: E731
    scores = {m: sum(val(e) for e in from_mask(m)) for m in Q.masks}
    best = min(scores.values())
    return Matroid([m for m, s in scores.items() if s == best], ground=Q.ground)


def indicator(subset, n: int) -> list[int]:
    s = set(subset)
    return [1 if i in s else 0 for i in range(1, n + 1)]


def is_internal(P: Matroid) -> bool:
    """The polytope of ``P`` meets the interior of the hypersimplex: no loops, no coloops."""
    return not P.loops() and not P.coloops()


# ----------------------------------------------------------------------
# isomorphism
# ----------------------------------------------------------------------

def _degrees(Q: Matroid) -> dict:
    return {e: sum(1 for m in Q.masks if m >> (e - 1) & 1) for e in Q.ground}


def is_isomorphic(Q1: Matroid, Q2: Matroid) -> dict | None:
    """A relabelling (dict) carrying bases of ``Q1`` onto bases of ``Q2``, or None."""
    if Q1.n != Q2.n or Q1.r != Q2.r:
        raise MalformedInput("isomorphism test needs equal (r, n)")
    if len(Q1.masks) != len(Q2.masks):
        return None
    d1, d2 = _degrees(Q1), _degrees(Q2)
    if sorted(d1.values()) != sorted(d2.values()):
        return None
    g1 = sorted(Q1.ground, key=lambda e: (d1[e], e))
    targets = list(Q2.ground)
    r = Q1.r
    assign: dict = {}
    used: set = set()

    def consistent(k):
        # check every r-subset of assigned elements containing the newest one
        newest = g1[k]
        placed = g1[:k]
        for rest in combinations(placed, r - 1):
            src = to_mask((newest,) + rest)
            dst = to_mask([assign[newest]] + [assign[e] for e in rest])
            if (src in Q1.masks) != (dst in Q2.masks):
                return False
        return True

    def search(k):
        if k == len(g1):
            return True
        e = g1[k]
        for t in targets:
            if t in used or d2[t] != d1[e]:
                continue
            assign[e] = t
            used.add(t)
            if consistent(k) and search(k + 1):
                return True
            used.discard(t)
            del assign[e]
        return False

    if search(0):
        return dict(assign)
    return None


def all_permutations(n: int):
    for p in permutations(range(1, n + 1)):
        yield {i + 1: p[i] for i in range(n)}


# ----------------------------------------------------------------------
# templates
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class GroupedTemplate:
    kind: str  # "U", "U'", "V", "W", "Qsp" or "none"
    parts: tuple[tuple[int, ...], ...] = ()

    def structure(self):
        """Order-insensitive description used for equality up to block listing."""
        p = self.parts
        if self.kind == "U":
            return ("U", frozenset(p))
        if self.kind == "U'":
            return ("U'", frozenset(p[:3]), p[3])
        if self.kind == "V":
            return ("V", frozenset(p[:3]), frozenset(p[3:]))
        if self.kind == "W":
            return ("W", p[0], frozenset({frozenset(p[1:3]), frozenset(p[3:5])}))
        return (self.kind, p)

    def permuted(self, perm) -> "GroupedTemplate":
        f = _perm_map(perm)
        return GroupedTemplate(self.kind, tuple(tuple(sorted(f[e] for e in b)) for b in self.parts))

    def dimension(self) -> int | None:
        """Dimension of the thin Schubert cell of a template matroid."""
        size = sum(len(b) for b in self.parts)
        return {"U": size - 1, "U'": size - 2, "V": size, "W": size - 1, "Qsp": 7}.get(self.kind)

    def __str__(self) -> str:
        blk = ["".join(map(str, b)) for b in self.parts]
        if self.kind == "U":
            return "U(" + ",".join(blk) + ")"
        if self.kind == "U'":
            return "U'(" + ",".join(blk[:3]) + ";" + blk[3] + ")"
        if self.kind == "V":
            return "V(" + ",".join(blk[:3]) + ";" + ",".join(blk[3:]) + ")"
        if self.kind == "W":
            return "W(" + blk[0] + ";" + ",".join(blk[1:3]) + ";" + ",".join(blk[3:]) + ")"
        return self.kind


def classify_template(Q: Matroid) -> GroupedTemplate:
    none = GroupedTemplate("none")
    if Q.r != 3 or Q.loops():
        return none
    classes = Q.parallel_classes()
    reps = [c[0] for c in classes]
    k = len(classes)
    where = {c[0]: c for c in classes}
    simple_lines = []
    for f in rank2_flats(Q):
        pts = [e for e in reps if e in f]
        if len(pts) >= 3:
            simple_lines.append(tuple(pts))
    key = lambda b: b[0]  # noqa: E731
    cand = None
    if k == 4 and not simple_lines:
        cand = GroupedTemplate("U", tuple(sorted(classes, key=key)))
    elif k == 4 and len(simple_lines) == 1 and len(simple_lines[0]) == 3:
        on = sorted((where[e] for e in simple_lines[0]), key=key)
        off = [c for c in classes if c not in on]
        cand = GroupedTemplate("U'", tuple(on) + tuple(off))
    elif k == 5 and len(simple_lines) == 1 and len(simple_lines[0]) == 3:
        on = sorted((where[e] for e in simple_lines[0]), key=key)
        off = sorted((c for c in classes if c not in on), key=key)
        cand = GroupedTemplate("V", tuple(on) + tuple(off))
    elif k == 5 and len(simple_lines) == 2 and all(len(l) == 3 for l in simple_lines):
        common = set(simple_lines[0]) & set(simple_lines[1])
        if len(common) == 1:
            c = common.pop()
            l1 = sorted((where[e] for e in simple_lines[0] if e != c), key=key)
            l2 = sorted((where[e] for e in simple_lines[1] if e != c), key=key)
            first, second = sorted([l1, l2], key=lambda l: l[0][0])
            cand = GroupedTemplate("W", (where[c],) + tuple(first) + tuple(second))
    elif k == 8 == Q.n and len(Q.masks) == 48 and len(simple_lines) == 8:
        if is_isomorphic(Q, qsp()) is not None:
            return GroupedTemplate("Qsp", tuple((e,) for e in Q.ground))
        return none
    if cand is None:
        return none
    builder = {"U": template_U, "U'": template_U_prime, "V": template_V, "W": template_W}[cand.kind]
    if builder(*cand.parts).masks == Q.masks and set(Q.ground) == {e for b in cand.parts for e in b}:
        return cand
    return none


def template_matroid(t: GroupedTemplate) -> Matroid:
    if t.kind == "Qsp":
        raise ValueError("Qsp templates are only identified up to relabelling")
    builder = {"U": template_U, "U'": template_U_prime, "V": template_V, "W": template_W}[t.kind]
    return builder(*t.parts)


def parse_template(text: str) -> Matroid:
    """Parse notation like ``W(5678;1,3;2,4)`` or ``U(34578,1,2,6)``."""
    text = text.replace(" ", "").replace("’", "'")
    name, body = text.split("(", 1)
    body = body.rstrip(")")
    groups = [g.split(",") for g in body.split(";")]
    flat = [b for g in groups for b in g]
    builder = {"U": template_U, "U'": template_U_prime, "V": template_V, "W": template_W}[name]
    return builder(*flat)


def n_choose(n, r):
    return comb(n, r)


def lex_index(subset, n: int) -> int:
    s = tuple(sorted(subset))
    return _lex_index(n, len(s))[to_mask(s)]
