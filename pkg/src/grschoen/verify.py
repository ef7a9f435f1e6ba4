"""Classification of tight spans and certificates for initial degenerations.

A certificate records which structural rules were applied, the hypotheses that
were machine-checked for each rule, and every dimension contribution, so that
the final dimension can be re-summed independently by ``dimension_audit``.
The scheme-theoretic statements behind the rules are cited, not re-proved.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property

from . import lp
from .linalg import primitive
from .matroid import (
    Matroid,
    classify_template,
    face_matroid,
    indicator,
    is_internal,
    is_isomorphic,
    lines,
    qsp,
    template_U,
    uniform,
)
from .quadext import minors
from .rings import (
    B_maximal_witness,
    build_sigma_presentation,
    check_soundness,
    d_value,
    dim_thin_schubert,
    is_regular_domain,
    poly_to_json,
    reduce_ideal,
    upper_triangular_check,
)
from .subdivision import DegenerateStar, Weight, is_matroidal, regular_subdivision
from .tightspan import (
    SubComplex,
    TightSpan,
    find_fins,
    is_path,
    prune_branches,
    prune_leaves,
    remove_fins,
    vertex_connecting,
    vertex_intersecting,
)


class ClassificationFailure(RuntimeError):
    """None of the six structural conditions holds."""


class NotMatroidal(ValueError):
    """Some maximal cell of the subdivision is not a matroid polytope."""


class DegenerateMatrix(ValueError):
    def __init__(self, subset):
        super().__init__(f"maximal minor {''.join(map(str, subset))} vanishes identically")
        self.subset = subset


class AuditFailure(AssertionError):
    pass


# ----------------------------------------------------------------------
# certificates
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class GroupLabel:
    group: int
    h_index: int | None = None

    def __post_init__(self):
        if self.h_index is not None and self.group != 6:
            raise ValueError("only group 6 carries an H index")

    def __str__(self) -> str:
        s = f"G{self.group}"
        return s if self.h_index is None else f"{s}/H{self.h_index}"


@dataclass
class Step:
    rule: str
    refs: list = field(default_factory=list)
    data: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"rule": self.rule, "refs": list(self.refs), "data": self.data}


@dataclass
class Certificate:
    weight: Weight
    group: str
    smooth: bool | None
    components: int | None
    dimension: int | None
    evidence: list
    csp: bool = False
    status: str = "verified"
    failure: str | None = None

    @property
    def verified(self) -> bool:
        return self.status == "verified"

    def to_json(self) -> dict:
        return {
            "weight": self.weight.to_json(),
            "group": self.group,
            "csp": self.csp,
            "smooth": self.smooth,
            "components": self.components,
            "dimension": self.dimension,
            "status": self.status,
            "failure": self.failure,
            "evidence": [s.to_json() for s in self.evidence],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, data) -> "Certificate":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(
            weight=Weight.from_json(data["weight"]),
            group=data["group"],
            smooth=data["smooth"],
            components=data["components"],
            dimension=data["dimension"],
            evidence=[Step(e["rule"], e.get("refs", []), e.get("data", {})) for e in data["evidence"]],
            csp=data.get("csp", False),
            status=data.get("status", "verified"),
            failure=data.get("failure"),
        )

    def summary(self) -> tuple:
        """Label-free content, used to compare certificates across relabellings."""
        terms = sorted((t["sign"], t["dim"], t["label"].split()[0]) for t in all_terms(self))
        return (self.group, self.csp, self.smooth, self.components, self.dimension, self.status,
                tuple(s.rule for s in self.evidence), tuple(terms))


def all_terms(c: Certificate) -> list:
    return [t for s in c.evidence for t in s.data.get("terms", [])]


# ----------------------------------------------------------------------
# the analysis of one weight
# ----------------------------------------------------------------------

def _vname(v) -> str:
    return f"v{v + 1}"


def _ename(e) -> str:
    return f"v{e[0] + 1}-v{e[1] + 1}"


class Analysis:
    """Subdivision, tight span and the derived sub-complexes of one weight."""

    def __init__(self, w: Weight):
        self.weight = w
        self.S = regular_subdivision(w)
        if not is_matroidal(self.S):
            raise NotMatroidal("the subdivision has a non-matroidal cell")
        self.ts = TightSpan(self.S)
        self.full = self.ts.full
        amb = w.ambient
        self.target = amb.r * (amb.n - amb.r)

    @cached_property
    def leaf_pruned(self):
        return prune_leaves(self.full)

    @property
    def sigma_L(self) -> SubComplex:
        return self.leaf_pruned[0]

    @property
    def leaf_pairs(self):
        return self.leaf_pruned[1]

    @cached_property
    def branches(self):
        return prune_branches(self.full)

    @cached_property
    def fins(self):
        return find_fins(self.sigma_L)

    @cached_property
    def short_fins(self):
        return [F for F in self.fins if F.length == 1]

    @cached_property
    def without_short_fins(self) -> SubComplex:
        return remove_fins(self.sigma_L, self.short_fins)

    @cached_property
    def without_fins(self) -> SubComplex:
        return remove_fins(self.sigma_L, self.fins)

    # matroids and dimensions
    def vmat(self, v) -> Matroid:
        return self.ts.vertex_matroid(v)

    def emat(self, e) -> Matroid:
        return self.ts.edge_matroid(e)

    def fmat(self, f) -> Matroid:
        return self.ts.face_matroid(f)

    def term(self, kind, ref, sign, Q: Matroid) -> dict:
        res = dim_thin_schubert(Q)
        if not res.known:
            raise _StepFailed(f"dimension of {kind} {ref} is unknown")
        if res.components != 1:
            raise _StepFailed(f"thin Schubert cell of {kind} {ref} is not connected")
        return {"label": f"{kind} {ref}", "sign": sign, "dim": res.dim,
                "matroid": Q.to_json(), "source": res.rule}


class _StepFailed(Exception):
    pass


# ----------------------------------------------------------------------
# classification
# ----------------------------------------------------------------------

_CENTER = template_U("12", "34", "56", "78")


def star_tree_index(T: SubComplex):
    """Number of leaves isomorphic to V when ``T`` is the 4-leaf star with a U(2,2,2,2) center."""
    ts = T.ts
    if not T.is_tree() or len(T.verts) != 5:
        return None
    centers = [v for v in T.verts if T.degree(v) == 4]
    if len(centers) != 1:
        return None
    c = centers[0]
    Qc = ts.vertex_matroid(c)
    if Qc.n != 8 or is_isomorphic(Qc, _CENTER) is None:
        return None
    kinds = [classify_template(ts.vertex_matroid(v)).kind for v in T.verts if v != c]
    if any(k not in ("V", "W") for k in kinds):
        return None
    return kinds.count("V")


def _classify(an: Analysis) -> GroupLabel:
    if vertex_intersecting(an.full) is not None:
        return GroupLabel(1)
    if an.full.is_tree():
        return GroupLabel(2)
    if vertex_intersecting(an.sigma_L) is not None:
        return GroupLabel(3)
    if vertex_intersecting(an.branches.core) is not None:
        return GroupLabel(4)
    if an.short_fins and vertex_intersecting(an.without_short_fins) is not None:
        return GroupLabel(5)
    if an.without_fins.is_tree():
        return GroupLabel(6, star_tree_index(an.without_fins) if an.weight.ambient.n == 8 else 0)
    raise ClassificationFailure("none of the six structural conditions holds")


def classify(w: Weight) -> GroupLabel:
    return _classify(Analysis(w))


def _detect_csp(an: Analysis) -> bool:
    amb = an.weight.ambient
    if (amb.r, amb.n) != (3, 8) or not an.full.is_tree():
        return False
    special = qsp()
    for v in an.full.verts:
        Q = an.vmat(v)
        if len(Q.masks) == 48 and is_isomorphic(Q, special) is not None:
            others = an.full.verts - {v}
            star = len(others) == 8 and all(v in e for e in an.full.edges)
            return star and all(classify_template(an.vmat(u)).kind == "U" for u in others)
    return False


def detect_csp(w: Weight) -> bool:
    return _detect_csp(Analysis(w))


# ----------------------------------------------------------------------
# SDC justifications for face maps
# ----------------------------------------------------------------------

class PreconditionError(ValueError):
    pass


def face_covector(Q: Matroid, P: Matroid):
    """An integer covector whose face matroid on ``Q`` is ``P``, or None."""
    if not P.bases <= Q.bases:
        return None
    bases = Q.sorted_bases()
    pts = [indicator(b, Q.n) for b in bases]
    subset = [k for k, b in enumerate(bases) if b in P]
    wit = lp.lower_face_witness(pts, [0] * len(pts), subset)
    if wit is None:
        return None
    a, _ = wit
    v = primitive([-x for x in a]) if any(a) else [0] * Q.n
    if face_matroid(Q, v).masks != P.masks:
        return None
    return v


SDC_ORDER = ("few-lines", "template", "B-maximal", "parallel-elements")


def sdc_check(Q: Matroid, P: Matroid, order=SDC_ORDER, check_face: bool = True):
    """First rule (in ``order``) certifying that the face map from Q to P is SDC.

    Returns ``{"rule": ..., **data}`` or None.
    """
    if check_face and face_covector(Q, P) is None:
        raise PreconditionError("P is not a face of Q")
    for rule in order:
        just = _RULES[rule](Q, P)
        if just is not None:
            return {"rule": rule, **just}
    return None


def _rule_few_lines(Q, P):
    if Q.r != 3 or Q.loops() or not Q.is_connected() or not is_internal(P):
        return None
    ls = lines(Q)
    if len(ls) <= 2:
        return {"lines": [list(l) for l in ls]}
    return None


def _rule_template(Q, P):
    t = classify_template(Q)
    if t.kind in ("U", "V", "W"):
        return {"template": str(t)}
    return None


def _rule_B_maximal(Q, P):
    res = dim_thin_schubert(Q)
    if not res.known or res.components != 1:
        return None
    mu = B_maximal_witness(Q, res.dim, candidates=P.sorted_bases())
    if mu is None:
        return None
    return {"mu": list(mu), "d": d_value(Q, mu), "dim": res.dim}


def _rule_parallel(Q, P):
    if Q.loops():
        return None
    k = len(Q.parallel_classes())
    if Q.r == 3 and k <= 6:
        return {"simple_size": k}
    if Q.r == 3 and k == 7 and k == Q.n and Q.is_connected() and is_internal(P):
        return {"simple_size": k}
    return None


_RULES = {
    "few-lines": _rule_few_lines,
    "template": _rule_template,
    "B-maximal": _rule_B_maximal,
    "parallel-elements": _rule_parallel,
}


# ----------------------------------------------------------------------
# building blocks of the strategies
# ----------------------------------------------------------------------

def _justify(an: Analysis, v, e, order=SDC_ORDER):
    j = sdc_check(an.vmat(v), an.emat(e), order=order, check_face=False)
    if j is None:
        raise _StepFailed(f"no SDC rule for {_vname(v)} -> {_ename(e)}")
    return j


def _tree_limit(an: Analysis, T: SubComplex, order, allow_special=False):
    """Tree rule: every vertex but one has SDC maps to all its edges.

    Returns (step, components).
    """
    if not T.is_tree():
        raise _StepFailed("sub-complex is not a tree")
    good, bad, justs = [], [], {}
    for v in sorted(T.verts):
        try:
            justs[v] = {_ename(e): _justify(an, v, e, order) for e in sorted(T.edges) if v in e}
            good.append(v)
        except _StepFailed:
            bad.append(v)
    if len(bad) > 1:
        raise _StepFailed("more than one vertex lacks SDC maps: " + ", ".join(map(_vname, bad)))
    components = 1
    terms = []
    for v in sorted(T.verts):
        Q = an.vmat(v)
        res = dim_thin_schubert(Q)
        if allow_special and v in bad and res.known and res.components == 2:
            # the exceptional vertex may be disconnected when all other maps are SDC
            components = 2
            terms.append({"label": f"vertex {_vname(v)}", "sign": 1, "dim": res.dim,
                          "matroid": Q.to_json(), "source": res.rule})
            continue
        terms.append(an.term("vertex", _vname(v), 1, Q))
    for e in sorted(T.edges):
        terms.append(an.term("edge", _ename(e), -1, an.emat(e)))
    step = Step("tree-limit", [_vname(v) for v in sorted(T.verts)], {
        "exceptional": _vname(bad[0]) if bad else None,
        "sdc": {_vname(v): j for v, j in justs.items()},
        "terms": terms,
    })
    return step, components


def _pair_removal(an: Analysis, rule: str, pairs, vertices, edges):
    """SDC maps for (vertex, edge) pairs plus their dimension terms."""
    sdc = {}
    for v, e in pairs:
        sdc[f"{_vname(v)}->{_ename(e)}"] = _justify(an, v, e)
    terms = [an.term("vertex", _vname(v), 1, an.vmat(v)) for v in sorted(vertices)]
    terms += [an.term("edge", _ename(e), -1, an.emat(e)) for e in sorted(edges)]
    return Step(rule, [_vname(v) for v in sorted(vertices)], {"sdc": sdc, "terms": terms})


def certify_presentation(an: Analysis, sub: SubComplex, label: str, seed: int = 0,
                         max_bases: int | None = None) -> Step:
    """Present the limit over ``sub`` and show it is a regular domain.

    Tries common bases in lex order. Both the triangular criterion and the
    elimination algorithm are run; where both succeed their dimensions must
    agree, and every elimination is checked by random back-substitution.
    """
    ts = an.ts
    common = -1
    for v in sub.verts:
        common &= ts.vertex_masks[v]
    bases = [an.S.bases[k] for k in range(common.bit_length()) if common >> k & 1]
    if not bases:
        raise _StepFailed(f"{label} is not vertex-intersecting")
    connecting = vertex_connecting(sub)
    if not connecting:
        raise _StepFailed(f"{label} is not vertex-connecting")
    mats = [an.vmat(v) for v in sorted(sub.verts)]
    attempts = []
    for mu in bases[:max_bases]:
        P = build_sigma_presentation(mats, mu, connecting=connecting)
        if P.empty:
            attempts.append({"mu": list(mu), "outcome": "empty"})
            continue
        tri = upper_triangular_check(P)
        red = reduce_ideal(P)
        tri_dim = len(P.variables) - len(P.ideal) if tri is not None else None
        red_dim = len(red.variables) if is_regular_domain(red) else None
        sound = check_soundness(red, count=20, seed=seed) if red.log else True
        if tri_dim is not None and red_dim is not None and tri_dim != red_dim:
            raise _StepFailed(f"triangular and elimination dimensions disagree on {label}")
        if red_dim is not None and not sound:
            raise _StepFailed(f"substitution soundness failed on {label}")
        dim = red_dim if red_dim is not None else tri_dim
        if dim is None:
            attempts.append({"mu": list(mu), "outcome": "stuck", "remaining": len(red.ideal)})
            continue
        data = {
            "mu": list(mu),
            "variables": list(P.variables),
            "generators": [poly_to_json(f) for f in P.ideal],
            "triangular": None if tri is None else {"rows": tri[0], "columns": tri[1]},
            "substitutions": [
                {"variable": v, "numerator": poly_to_json(h), "denominator": poly_to_json(g)}
                for v, h, g in red.log
            ],
            "remaining": list(red.variables),
            "soundness": sound,
            "attempts": attempts,
            "terms": [{"label": f"limit {label}", "sign": 1, "dim": dim, "source": "presentation"}],
        }
        return Step("presentation", [_vname(v) for v in sorted(sub.verts)], data)
    raise _StepFailed(f"no common basis certifies {label}: {attempts}")


def _vertex_dims(an: Analysis, vertices) -> dict:
    dims = {}
    for v in vertices:
        res = dim_thin_schubert(an.vmat(v))
        dims[v] = res.dim if res.known and res.components == 1 else None
    return dims


def _maximal_on(an: Analysis, mu, dims: dict, vertices) -> bool:
    return all(dims[v] is not None and mu in an.vmat(v) and d_value(an.vmat(v), mu) == dims[v]
               for v in vertices)


def fin_is_maximal(an: Analysis, F, mu) -> bool:
    """True when ``mu`` is a basis of the fin cell and is B-maximal on its exposed vertices."""
    mu = tuple(sorted(mu))
    if mu not in an.fmat(F.face):
        return False
    return _maximal_on(an, mu, _vertex_dims(an, F.exposed_vertices), F.exposed_vertices)


def fin_witness(an: Analysis, F):
    """B-maximal witness of a fin, checked on its exposed vertices.

    Also reports whether the same basis works on the first k - l vertices of
    the cyclic order (one path vertex more).
    """
    dims = _vertex_dims(an, F.order)
    exposed = list(F.exposed_vertices)
    if any(dims[v] is None for v in exposed):
        return None, False
    k = len(F.order)
    strict_vertices = list(F.order[: k - F.length])
    for mu in an.fmat(F.face).sorted_bases():
        if _maximal_on(an, mu, dims, exposed):
            return mu, _maximal_on(an, mu, dims, strict_vertices)
    return None, False


def _fin_step(an: Analysis, fins, label) -> Step:
    records = []
    terms = []
    for F in fins:
        mu, strict = fin_witness(an, F)
        if mu is None:
            raise _StepFailed(f"fin {F.order} is not B-maximal")
        ref = "F(" + ",".join(_vname(v) for v in F.order) + ")"
        records.append({"fin": ref, "length": F.length, "mu": list(mu), "all_first_vertices": strict,
                        "exposed_vertices": [_vname(v) for v in F.exposed_vertices],
                        "exposed_edges": [_ename(e) for e in F.exposed_edges]})
        terms.append(an.term("fin", ref, 1, an.fmat(F.face)))
        terms += [an.term("edge", _ename(e), -1, an.emat(e)) for e in F.exposed_edges]
        terms += [an.term("vertex", _vname(v), 1, an.vmat(v)) for v in F.exposed_vertices]
    return Step(label, [r["fin"] for r in records], {"fins": records, "terms": terms})


# ----------------------------------------------------------------------
# strategies
# ----------------------------------------------------------------------

def _strategy_csp(an):
    step, comps = _tree_limit(an, an.full, order=("template", "B-maximal"), allow_special=True)
    if comps != 2:
        raise _StepFailed("center of the special star is not the two-component cell")
    step.rule = "special-star"
    return [step], comps


def _strategy_g1(an):
    mu = vertex_intersecting(an.full)
    steps = [Step("vertex-intersecting", [], {
        "mu": list(mu),
        "terms": [{"label": "affine-open all", "sign": 1, "dim": an.target, "source": "vertex-intersecting"}],
    })]
    # second route: the presentation of the whole complex must give the same dimension
    try:
        pres = certify_presentation(an, an.full, "TS", max_bases=1)
        got = pres.data["terms"][0]["dim"]
        pres.data["terms"] = []
        pres.rule = "presentation-crosscheck"
        pres.data["dimension"] = got
        if got != an.target:
            raise _StepFailed(f"presentation dimension {got} contradicts {an.target}")
        steps.append(pres)
    except _StepFailed as exc:
        if "contradicts" in str(exc):
            raise
        steps.append(Step("presentation-crosscheck", [], {"outcome": str(exc)}))
    return steps, 1


def _strategy_g2(an):
    step, comps = _tree_limit(an, an.full, order=("B-maximal", "parallel-elements", "few-lines", "template"))
    return [step], comps


def _leaf_step(an):
    pairs = an.leaf_pairs
    return _pair_removal(an, "leaf-removal", pairs, [v for v, _ in pairs], [e for _, e in pairs])


def _strategy_g3(an):
    return [_leaf_step(an), certify_presentation(an, an.sigma_L, "Sigma_L")], 1


def _strategy_g4(an):
    br = an.branches
    full = an.full
    for comp in br.branches:
        inner = [e for e in full.edges if set(e) <= set(comp)]
        if not is_path(comp, inner):
            raise _StepFailed("a branch is not a path")
    pairs = [(v, e) for v in br.branch_vertices for e in sorted(full.edges) if v in e]
    step = _pair_removal(an, "branch-removal", pairs, br.branch_vertices, br.branch_edges)
    step.data["branches"] = [[_vname(v) for v in b] for b in br.branches]
    return [step, certify_presentation(an, br.core, "Sigma_Br")], 1


def _strategy_g5(an):
    steps = [_leaf_step(an), _fin_step(an, an.short_fins, "fin-removal")]
    steps.append(certify_presentation(an, an.without_short_fins, "Sigma_L(F)"))
    return steps, 1


def _strategy_g6(an, h_index):
    T = an.without_fins
    tree, comps = _tree_limit(an, T, order=("template", "B-maximal", "few-lines", "parallel-elements"))
    tdim = sum(t["sign"] * t["dim"] for t in tree.data["terms"])
    if h_index is not None:
        tree.data["star_dimension"] = 11 + h_index
        if tdim != 11 + h_index:
            raise _StepFailed(f"star limit dimension {tdim} differs from {11 + h_index}")
    return [_leaf_step(an), _fin_step(an, an.fins, "fin-removal"), tree], 1


def verify(w: Weight, seed: int = 0) -> Certificate:
    """Classify ``w`` and run the matching strategy; never raises on bad structure."""
    group = "unclassified"
    evidence = []
    csp = False
    try:
        an = Analysis(w)
        label = _classify(an)
        group = str(label)
        csp = _detect_csp(an)
        if csp:
            steps, comps = _strategy_csp(an)
        elif label.group == 1:
            steps, comps = _strategy_g1(an)
        elif label.group == 2:
            steps, comps = _strategy_g2(an)
        elif label.group == 3:
            steps, comps = _strategy_g3(an)
        elif label.group == 4:
            steps, comps = _strategy_g4(an)
        elif label.group == 5:
            steps, comps = _strategy_g5(an)
        else:
            steps, comps = _strategy_g6(an, label.h_index)
        evidence = steps
        total = sum(t["sign"] * t["dim"] for s in steps for t in s.data.get("terms", []))
        evidence.append(Step("dimension", [], {"total": total, "expected": an.target}))
        if total != an.target:
            return Certificate(w, group, None, None, total, evidence, csp, "unverified",
                               f"dimension {total} differs from {an.target}")
        return Certificate(w, group, True, comps, total, evidence, csp)
    except (_StepFailed, ClassificationFailure, NotMatroidal, DegenerateStar) as exc:
        return Certificate(w, group, None, None, None, evidence, csp, "unverified", str(exc))


# ----------------------------------------------------------------------
# valuations and audit
# ----------------------------------------------------------------------

def plucker_valuations(M) -> Weight:
    """Lowest t-degree of every maximal minor of a matrix of TPoly entries."""
    r, n = len(M), len(M[0])
    vals = []
    for lam, d in minors(M).items():
        if not d:
            raise DegenerateMatrix(lam)
        vals.append(d.valuation())
    return Weight(uniform(r, n), vals)


def dimension_audit(c: Certificate, recompute: bool = False) -> bool:
    """Re-sum every dimension term of the evidence and compare with the claim.

    With ``recompute`` the dimension of every term carrying a matroid is
    derived again from scratch. Returns False for unverified certificates.
    """
    if not c.verified:
        return False
    amb = c.weight.ambient
    expected = amb.r * (amb.n - amb.r)
    total = 0
    for t in all_terms(c):
        if t["sign"] not in (1, -1):
            raise AuditFailure(f"bad sign in term {t['label']}")
        if recompute and "matroid" in t:
            res = dim_thin_schubert(Matroid.from_json(t["matroid"]))
            if res.dim != t["dim"]:
                raise AuditFailure(f"term {t['label']}: recorded {t['dim']}, recomputed {res.dim}")
        total += t["sign"] * t["dim"]
    if total != c.dimension:
        raise AuditFailure(f"terms sum to {total}, certificate states {c.dimension}")
    if total != expected:
        raise AuditFailure(f"terms sum to {total}, expected {expected}")
    return True


__all__ = [
    "AuditFailure",
    "Certificate",
    "ClassificationFailure",
    "DegenerateMatrix",
    "GroupLabel",
    "NotMatroidal",
    "PreconditionError",
    "Step",
    "classify",
    "detect_csp",
    "dimension_audit",
    "face_covector",
    "fin_is_maximal",
    "fin_witness",
    "plucker_valuations",
    "sdc_check",
    "star_tree_index",
    "verify",
]
