"""The tight span of a regular subdivision, up to dual dimension two.

Vertices are maximal cells, edges are interior codimension-1 faces and 2-cells
are interior codimension-2 faces. Sub-complexes are described by which
vertices, edges and 2-cells they keep; they share the underlying face data.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from .matroid import Matroid
from .subdivision import SubdivisionComplex, regular_subdivision


def _edge(u, v):
    return (u, v) if u < v else (v, u)


class TightSpan:
    """Face data shared by every sub-complex of the tight span."""

    def __init__(self, S: SubdivisionComplex):
        self.subdivision = S
        self.vertex_masks = [c.mask for c in S.cells]
        self.edge_masks = {(i, j): f for i, j, f in S.adjacency}
        self.ridges = S.ridges()
        self.face_cycles = [r.star for r in self.ridges]
        self.face_masks = [r.mask for r in self.ridges]
        self._matroids = {}

    @classmethod
    def of(cls, weight) -> "TightSpan":
        return cls(regular_subdivision(weight))

    def matroid_of_mask(self, mask: int) -> Matroid:
        if mask not in self._matroids:
            self._matroids[mask] = self.subdivision.face_matroid(mask)
        return self._matroids[mask]

    def vertex_matroid(self, v) -> Matroid:
        return self.subdivision.cells[v].matroid

    def edge_matroid(self, e) -> Matroid:
        return self.matroid_of_mask(self.edge_masks[_edge(*e)])

    def face_matroid(self, f) -> Matroid:
        return self.matroid_of_mask(self.face_masks[f])

    def face_edges(self, f):
        cyc = self.face_cycles[f]
        return [_edge(cyc[i], cyc[(i + 1) % len(cyc)]) for i in range(len(cyc))]

    @cached_property
    def full(self) -> "SubComplex":
        return SubComplex(
            self,
            frozenset(range(len(self.vertex_masks))),
            frozenset(self.edge_masks),
            frozenset(range(len(self.face_masks))),
        )

    # convenience views of the whole complex
    @property
    def graph(self):
        return sorted(self.full.verts), sorted(self.full.edges)


@dataclass(frozen=True)
class SubComplex:
    ts: TightSpan
    verts: frozenset
    edges: frozenset
    faces: frozenset

    def __post_init__(self):
        for u, v in self.edges:
            assert u in self.verts and v in self.verts, "edge without its endpoints"
        for f in self.faces:
            assert all(e in self.edges for e in self.ts.face_edges(f)), "2-cell without its boundary"

    def __eq__(self, other):
        return (self.verts, self.edges, self.faces) == (other.verts, other.edges, other.faces)

    def __hash__(self):
        return hash((self.verts, self.edges, self.faces))

    def __repr__(self):
        return f"SubComplex(V={sorted(self.verts)}, E={sorted(self.edges)}, F={sorted(self.faces)})"

    def neighbors(self, v):
        return sorted(b if a == v else a for a, b in self.edges if v in (a, b))

    def degree(self, v) -> int:
        return sum(1 for e in self.edges if v in e)

    def is_connected(self) -> bool:
        return _connected(self.verts, self.edges)

    def is_tree(self) -> bool:
        return bool(self.verts) and self.is_connected() and len(self.edges) == len(self.verts) - 1

    def leaves(self) -> list:
        return sorted(v for v in self.verts if self.degree(v) == 1)

    def without(self, verts=(), edges=(), faces=()) -> "SubComplex":
        verts, edges, faces = set(verts), set(edges), set(faces)
        new_edges = frozenset(e for e in self.edges if e not in edges and not (set(e) & verts))
        new_faces = frozenset(
            f for f in self.faces
            if f not in faces and all(e in new_edges for e in self.ts.face_edges(f))
        )
        return SubComplex(self.ts, self.verts - verts, new_edges, new_faces)


def _connected(verts, edges) -> bool:
    verts = set(verts)
    if not verts:
        return True
    adj = {v: [] for v in verts}
    for a, b in edges:
        if a in adj and b in adj:
            adj[a].append(b)
            adj[b].append(a)
    start = min(verts)
    seen = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        for u in adj[v]:
            if u not in seen:
                seen.add(u)
                stack.append(u)
    return seen == verts


# ----------------------------------------------------------------------
# leaves and branches
# ----------------------------------------------------------------------

def tight_span(S: SubdivisionComplex) -> SubComplex:
    return TightSpan(S).full


def prune_leaves(sigma: SubComplex):
    """Remove every leaf together with its edge. Returns (sub-complex, leaf-pairs).

    When the complex is a single edge both ends are leaves; only the pair of the
    larger vertex is removed so that a vertex remains.
    """
    pairs = []
    for v in sigma.leaves():
        e = next(e for e in sigma.edges if v in e)
        pairs.append((v, e))
    if len(sigma.verts) == 2 and len(pairs) == 2:
        pairs = pairs[1:]
    return sigma.without(verts=[v for v, _ in pairs]), pairs


@dataclass
class Branches:
    core: SubComplex
    branches: list  # each branch: sorted list of vertices
    branch_vertices: list
    branch_edges: list


def prune_branches(sigma: SubComplex) -> Branches:
    """Iterate leaf removal to a fixpoint; a tree prunes to the empty complex."""
    if sigma.is_tree():
        core = sigma.without(verts=sigma.verts)
    else:
        core = sigma
        while True:
            nxt, pairs = prune_leaves(core)
            if not pairs:
                break
            core = nxt
    removed = sigma.verts - core.verts
    inner = [e for e in sigma.edges if set(e) <= removed]
    comps = _components(removed, inner)
    bedges = sorted(e for e in sigma.edges if set(e) & removed)
    return Branches(core, comps, sorted(removed), bedges)


def _components(verts, edges):
    verts = set(verts)
    adj = {v: set() for v in verts}
    for a, b in edges:
        adj[a].add(b)
        adj[b].add(a)
    out = []
    seen = set()
    for v in sorted(verts):
        if v in seen:
            continue
        comp = {v}
        stack = [v]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in comp:
                    comp.add(y)
                    stack.append(y)
        seen |= comp
        out.append(sorted(comp))
    return out


def is_path(sigma_verts, edges) -> bool:
    verts = set(sigma_verts)
    if len(edges) != len(verts) - 1 or not _connected(verts, edges):
        return False
    deg = {v: 0 for v in verts}
    for a, b in edges:
        deg[a] += 1
        deg[b] += 1
    return all(d <= 2 for d in deg.values())


# ----------------------------------------------------------------------
# fins
# ----------------------------------------------------------------------

@dataclass
class Fin:
    face: int  # index of the 2-cell
    order: tuple  # cyclic order, exposed vertices first
    path: tuple  # connecting path vertices
    length: int  # edges in the connecting path
    exposed_vertices: tuple
    exposed_edges: tuple
    mask: int = field(repr=False, default=0)


def find_fins(sigma: SubComplex) -> list[Fin]:
    ts = sigma.ts
    fins = []
    for f in sorted(sigma.faces):
        cyc = ts.face_cycles[f]
        k = len(cyc)
        fedges = ts.face_edges(f)
        fedge_set = set(fedges)
        others = [g for g in sigma.faces if g != f]
        covered_edges = {e for g in others for e in ts.face_edges(g)}
        covered_verts = {v for g in others for v in ts.face_cycles[g]}
        for e in sigma.edges:
            if e not in fedge_set:
                covered_verts.update(e)
        shared_edges = [e for e in fedges if e in covered_edges]
        shared_verts = {v for v in cyc if v in covered_verts}
        ell = len(shared_edges)
        if not 1 <= ell <= k - 2:
            continue
        path_verts = {v for e in shared_edges for v in e}
        if not is_path(path_verts, shared_edges) or path_verts != shared_verts:
            continue
        exposed = [v for v in cyc if v not in shared_verts]
        order = _fin_order(cyc, set(exposed))
        path = order[k - ell - 1:]
        fins.append(Fin(
            face=f,
            order=order,
            path=path,
            length=ell,
            exposed_vertices=tuple(order[: k - ell - 1]),
            exposed_edges=tuple(e for e in fedges if e not in covered_edges),
            mask=ts.face_masks[f],
        ))
    return fins


def _fin_order(cyc, exposed):
    """Rotation/reflection of the cycle listing exposed vertices first; lexicographically least."""
    k = len(cyc)
    best = None
    for seq in (list(cyc), list(reversed(cyc))):
        for s in range(k):
            rot = tuple(seq[s:] + seq[:s])
            m = len(exposed)
            if set(rot[:m]) == exposed and (best is None or rot < best):
                best = rot
    return best


def remove_fins(sigma: SubComplex, fins) -> SubComplex:
    verts, edges, faces = set(), set(), set()
    for F in fins:
        faces.add(F.face)
        verts.update(F.exposed_vertices)
        edges.update(F.exposed_edges)
    return sigma.without(verts=verts, edges=edges, faces=faces)


# ----------------------------------------------------------------------
# basis conditions
# ----------------------------------------------------------------------

def vertex_intersecting(sigma: SubComplex):
    """The lex-least ambient basis common to all vertex matroids, or None."""
    if not sigma.verts:
        return None
    common = -1
    for v in sigma.verts:
        common &= sigma.ts.vertex_masks[v]
    if common == 0:
        return None
    low = (common & -common).bit_length() - 1
    return sigma.ts.subdivision.bases[low]


def vertex_connecting(sigma: SubComplex) -> bool:
    """Every ambient basis is carried by a connected set of vertices and edges."""
    ts = sigma.ts
    union = 0
    for v in sigma.verts:
        union |= ts.vertex_masks[v]
    k = 0
    while union >> k:
        if union >> k & 1:
            vs = [v for v in sigma.verts if ts.vertex_masks[v] >> k & 1]
            es = [e for e in sigma.edges if ts.edge_masks[e] >> k & 1]
            if not _connected(vs, es):
                return False
        k += 1
    return True
