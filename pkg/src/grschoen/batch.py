"""Batch verification of cone data: canonical representatives and certificate files."""
from __future__ import annotations

import hashlib
import json
import os
import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations
from math import lcm
from multiprocessing import get_context
from pathlib import Path

import numpy as np

from .matroid import uniform
from .subdivision import Weight
from .verify import Certificate, verify

JOBS_ENV = "GRSCHOEN_JOBS"


class ParseError(ValueError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass
class ConeRecord:
    rays: list
    id: str

    @classmethod
    def from_json(cls, data, line: int = 0) -> "ConeRecord":
        try:
            if isinstance(data, str):
                data = json.loads(data)
            rays = [Weight.from_json(r) for r in data["rays"]]
            rid = str(data.get("id", line))
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(line, str(exc)) from exc
        for ray in rays:
            if ray.is_lineal():
                raise ParseError(line, "a ray lies in the lineality space")
        return cls(rays, rid)

    def to_json(self) -> dict:
        return {"id": self.id, "rays": [r.to_json() for r in self.rays]}


def interior_point(c: ConeRecord) -> Weight:
    """Sum of the L-canonical rays, a point in the relative interior of the cone."""
    if not c.rays:
        raise ValueError(f"cone {c.id} has no rays")
    total = c.rays[0].canonical_L()
    for ray in c.rays[1:]:
        total = total + ray.canonical_L()
    return total


# ----------------------------------------------------------------------
# canonical representatives
# ----------------------------------------------------------------------

@lru_cache(maxsize=None)
def _orbit_table(r: int, n: int) -> np.ndarray:
    """Row s lists, for each target basis position k, the source position under permutation s."""
    bases = list(combinations(range(n), r))
    code = np.full((n,) * r, -1, dtype=np.int64)
    for k, b in enumerate(bases):
        code[b] = k
    perms = np.array(list(permutations(range(n))), dtype=np.int64)
    B = np.array(bases, dtype=np.int64)
    images = np.sort(perms[:, B], axis=2)  # image of basis k under permutation s
    target = code[tuple(images[:, :, i] for i in range(r))]
    table = np.empty_like(target)
    rows = np.arange(len(perms))[:, None]
    table[rows, target] = np.arange(len(bases))[None, :]
    return table


def _lexmin_row(M: np.ndarray) -> int:
    cand = np.arange(M.shape[0])
    for col in range(M.shape[1]):
        vals = M[cand, col]
        cand = cand[vals == vals.min()]
        if len(cand) == 1:
            break
    return int(cand[0])


def canonical_rep(w: Weight) -> Weight:
    """L-projection followed by the lexicographically least relabelling."""
    amb = w.ambient
    if amb != uniform(amb.r, amb.n):
        raise ValueError("canonical representatives need a uniform ambient matroid")
    v = w.canonical_L().values
    den = 1
    for x in v:
        den = lcm(den, x.denominator)
    ints = [int(x * den) for x in v]
    dtype = np.int64 if max(map(abs, ints), default=0) < 2**62 else object
    arr = np.array(ints, dtype=dtype)
    M = arr[_orbit_table(amb.r, amb.n)]
    best = M[_lexmin_row(M)]
    return Weight(amb, [Fraction(int(x), den) for x in best])


def content_hash(w: Weight) -> str:
    payload = json.dumps(w.to_json(), sort_keys=True).encode()
    return hashlib.sha256(payload).hexdigest()[:20]


# ----------------------------------------------------------------------
# running
# ----------------------------------------------------------------------

@dataclass
class RunSummary:
    counts: dict = field(default_factory=dict)
    h_counts: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)
    unverified: list = field(default_factory=list)
    two_components: int = 0
    csp: int = 0
    processed: int = 0
    duplicates: int = 0
    seconds: float = 0.0
    max_seconds: float = 0.0

    def to_json(self) -> dict:
        return dict(self.__dict__)

    @property
    def ok(self) -> bool:
        return not self.failures


def read_records(path) -> list[ConeRecord]:
    out = []
    with open(path) as fh:
        for k, line in enumerate(fh, start=1):
            if line.strip():
                out.append(ConeRecord.from_json(line, k))
    return out


def _work(args):
    rid, wjson, seed = args
    t = time.time()
    try:
        cert = verify(Weight.from_json(wjson), seed=seed)
        return rid, cert.to_json(), None, time.time() - t
    except Exception as exc:  # a record must never abort the run
        return rid, None, f"{type(exc).__name__}: {exc}", time.time() - t


def default_jobs() -> int:
    return max(1, int(os.environ.get(JOBS_ENV, "1")))


def run_batch(path, out_dir=None, jobs: int | None = None, mode: str = "orbits",
              seed: int = 0, strict: bool = False) -> RunSummary:
    """Verify one representative per record and write one certificate file each.

    ``mode`` is "orbits" (records are orbit representatives) or "all-cones"
    (records may repeat orbits; duplicates are skipped). Existing certificate
    files are reused, so an interrupted run can be resumed.
    """
    if mode not in ("orbits", "all-cones"):
        raise ValueError(f"unknown mode {mode}")
    t0 = time.time()
    records = read_records(path)
    jobs = jobs or default_jobs()
    out = Path(out_dir) if out_dir else None
    if out:
        out.mkdir(parents=True, exist_ok=True)
    summary = RunSummary()
    todo, seen, done = [], set(), []
    for rec in records:
        rep = canonical_rep(interior_point(rec))
        key = content_hash(rep)
        if key in seen:
            if mode == "all-cones":
                summary.duplicates += 1
                continue
        seen.add(key)
        target = out / f"{key}.json" if out else None
        if target and target.exists():
            done.append((rec.id, json.loads(target.read_text()), None, 0.0))
        else:
            todo.append((rec.id, rep.to_json(), seed))
    if jobs > 1 and len(todo) > 1:
        with get_context("spawn").Pool(jobs) as pool:
            results = list(pool.imap_unordered(_work, todo, chunksize=1))
    else:
        results = [_work(a) for a in todo]
    for rid, cert, err, dt in done + results:
        summary.processed += 1
        summary.max_seconds = max(summary.max_seconds, dt)
        if err is not None:
            summary.failures.append(rid)
            continue
        c = Certificate.from_json(cert)
        if out:
            target = out / f"{content_hash(c.weight)}.json"
            if not target.exists():
                target.write_text(json.dumps(cert, sort_keys=True))
        group = c.group.split("/")[0]
        summary.counts[group] = summary.counts.get(group, 0) + 1
        if "/" in c.group:
            h = c.group.split("/")[1]
            summary.h_counts[h] = summary.h_counts.get(h, 0) + 1
        if c.components == 2:
            summary.two_components += 1
        if c.csp:
            summary.csp += 1
        if not c.verified:
            summary.unverified.append(rid)
            if strict:
                summary.failures.append(rid)
    summary.counts = dict(sorted(summary.counts.items()))
    summary.h_counts = dict(sorted(summary.h_counts.items()))
    summary.failures.sort()
    summary.unverified.sort()
    summary.seconds = time.time() - t0
    if out:
        (out / "summary.json").write_text(json.dumps(summary.to_json(), indent=1, sort_keys=True))
    return summary


__all__ = [
    "ConeRecord",
    "JOBS_ENV",
    "ParseError",
    "RunSummary",
    "canonical_rep",
    "content_hash",
    "default_jobs",
    "interior_point",
    "read_records",
    "run_batch",
]
