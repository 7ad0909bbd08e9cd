"""Cohomology of torus-invariant Weil divisors on complete simplicial toric threefolds.

For a divisor ``D = sum a_rho D_rho`` and a character ``m`` the degree-``m``
piece of ``H^p(X, O(D))`` has dimension ``b~_{p-1}(V_{D,m})``, where
``V_{D,m}`` is the full subcomplex of the fan's boundary complex on the rays
with ``<m, u_rho> < -a_rho``.  The full subcomplex only depends on which rays
are "negative", so the lattice is cut into sign chambers; each chamber with
nonzero reduced homology is a bounded polyhedron whose lattice points are
counted in one go.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import math
import os
import tempfile
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from pathlib import Path

import numpy as np
from filelock import FileLock

from ._intmat import cross, dot, solve3
from .geometry import RationalPolyhedron, SimplicialComplex, reduced_betti
from .toric import (
    ToricThreefold,
    Verdict,
    WeilDivisor,
    canonical_divisor,
    support_function,
)


@dataclass(frozen=True)
class CohomologyTable:
    h: tuple[int, int, int, int]

    def __post_init__(self):
        h = tuple(int(x) for x in self.h)
        if len(h) != 4 or min(h) < 0:
            raise ValueError("cohomology table needs four non-negative integers")
        object.__setattr__(self, "h", h)

    @property
    def chi(self) -> int:
        h0, h1, h2, h3 = self.h
        return h0 - h1 + h2 - h3

    def __getitem__(self, i: int) -> int:
        return self.h[i]

    def to_dict(self) -> dict:
        return {"h": list(self.h), "chi": self.chi}


# positivity -----------------------------------------------------------------


def _nef_test(x: ToricThreefold, d: WeilDivisor, strict: bool) -> Verdict:
    try:
        cert = support_function(x, d)
    except ValueError:
        raise ValueError("not Q-Cartier") from None
    for cone, m in zip(x.max_cones, cert.cone_vectors):
        for rho, u in enumerate(x.rays):
            if rho in cone:
                continue
            val = dot(m, u) + d.coeffs[rho]
            if val < 0 or (strict and val == 0):
                return Verdict(
                    False,
                    {"cone": list(cone), "ray": rho, "value": str(val)},
                    f"<m_sigma, u_{rho}> + a_{rho} = {val} on cone {list(cone)}",
                )
    return Verdict(True, {"cartier_index": cert.index})


def is_nef(x: ToricThreefold, d: WeilDivisor) -> Verdict:
    """Nef test through the (index-cleared) support function."""
    return _nef_test(x, d, strict=False)


def is_ample(x: ToricThreefold, d: WeilDivisor) -> Verdict:
    return _nef_test(x, d, strict=True)


def is_globally_generated(x: ToricThreefold, d: WeilDivisor) -> Verdict:
    """Vertex-realization criterion.

    For every maximal cone there must be a lattice point of ``P_D`` on which
    all rays of the cone are tight.  For Cartier ``D`` this is the same as nef;
    for a non-Cartier ``D`` it fails on any cone where ``m_sigma`` is not
    integral.
    """
    cert = support_function(x, d)
    for cone, m in zip(x.max_cones, cert.cone_vectors):
        if any(v.denominator != 1 for v in m):
            return Verdict(False, {"cone": list(cone), "m_sigma": [str(v) for v in m]},
                           f"no lattice point is tight on cone {list(cone)}")
        if not x.section_polytope(d).contains(m):
            return Verdict(False, {"cone": list(cone), "m_sigma": [int(v) for v in m]},
                           f"m_sigma of cone {list(cone)} lies outside P_D")
    return Verdict(True)


def _dual_edges(x: ToricThreefold, cone):
    """Primitive edge generators ``v_i`` of the dual cone, with ``<v_i, u_i> > 0``."""
    out = []
    for i in cone:
        others = [x.rays[j] for j in cone if j != i]
        v = cross(others[0], others[1])
        g = math.gcd(*v)
        v = [c // g for c in v]
        if dot(v, x.rays[i]) < 0:
            v = [-c for c in v]
        out.append(tuple(v))
    return out


def sheaf_generated_by_sections(x: ToricThreefold, d: WeilDivisor) -> Verdict:
    """Surjectivity of ``H^0(O(D)) (x) O_X -> O(D)``, checked chart by chart.

    On the affine chart of a cone ``sigma`` the module of ``O(D)`` is spanned
    by ``chi^m`` with ``<m, u_rho> >= -a_rho`` for ``rho in sigma``; its
    generators sit in a half-open parallelepiped over the dual-cone edges.
    Each generator must be a multiple (inside the chart) of a global section.
    """
    p = x.section_polytope(d)
    for cone in x.max_cones:
        edges = _dual_edges(x, cone)
        rows = []
        for i, v in zip(cone, edges):
            c = dot(v, x.rays[i])
            rows.append((x.rays[i], d.coeffs[i]))
            rows.append((tuple(-t for t in x.rays[i]), -d.coeffs[i] + c - 1))
        gens = RationalPolyhedron.from_inequalities(rows).lattice_points()
        for g in gens:
            below = [(tuple(-t for t in x.rays[i]), dot(g, x.rays[i])) for i in cone]
            if p.intersect(RationalPolyhedron.from_inequalities(below)).count_lattice_points() == 0:
                return Verdict(False, {"cone": list(cone), "local_generator": list(g)},
                               f"local generator {list(g)} on cone {list(cone)} is not hit by sections")
    return Verdict(True)


def is_very_ample(x: ToricThreefold, d: WeilDivisor) -> Verdict:
    """Exact test for ample Cartier ``D``.

    ``D`` is very ample iff for every vertex ``m_sigma`` of ``P_D`` the
    semigroup generated by ``P_D cap M - m_sigma`` is all of
    ``sigma^dual cap M``.  Checked on the generators of the latter.
    """
    cert = support_function(x, d)
    if not cert.cartier:
        return Verdict(False, {"cartier_index": cert.index}, "not Cartier")
    amp = is_ample(x, d)
    if not amp:
        return Verdict(False, amp.witness, "not ample")
    points = x.section_polytope(d).lattice_points()
    for cone, m in zip(x.max_cones, cert.cone_vectors):
        m = tuple(int(v) for v in m)
        gens = [tuple(a - b for a, b in zip(pt, m)) for pt in points]
        gens = [g for g in gens if any(g)]
        edges = _dual_edges(x, cone)
        weight = tuple(sum(x.rays[i][k] for i in cone) for k in range(3))
        rows = []
        for i, v in zip(cone, edges):
            rows.append((x.rays[i], 0))
            rows.append((tuple(-t for t in x.rays[i]), dot(v, x.rays[i]) - 1))
        targets = list(edges) + [t for t in RationalPolyhedron.from_inequalities(rows).lattice_points() if any(t)]

        @lru_cache(maxsize=None)
        def reachable(w):
            if not any(w):
                return True
            lvl = dot(w, weight)
            for g in gens:
                if dot(g, weight) > lvl:
                    continue
                r = tuple(a - b for a, b in zip(w, g))
                if all(dot(r, x.rays[i]) >= 0 for i in cone) and reachable(r):
                    return True
            return False

        for t in targets:
            if not reachable(tuple(t)):
                return Verdict(False, {"cone": list(cone), "missing": list(t)},
                               f"{list(t)} not generated at vertex of cone {list(cone)}")
    return Verdict(True)


# sections and cohomology ----------------------------------------------------


def h0(x: ToricThreefold, d: WeilDivisor) -> int:
    """Number of lattice points of ``P_D``."""
    p = x.section_polytope(d)
    if not p.is_bounded:
        raise RuntimeError("section polytope unbounded: fan is not complete")
    return p.count_lattice_points()


@lru_cache(maxsize=64)
def contributing_subsets(x: ToricThreefold) -> tuple[tuple[int, tuple[int, ...]], ...]:
    """``(mask, reduced betti)`` for ray subsets whose full subcomplex has homology."""
    n = x.n_rays
    out = []
    for mask in range(1 << n):
        chosen = [i for i in range(n) if mask >> i & 1]
        facets = {frozenset(i for i in c if mask >> i & 1) for c in x.max_cones}
        facets = tuple(f for f in facets if f)
        betti = reduced_betti(SimplicialComplex(tuple(chosen), facets))[:4]
        if any(betti):
            out.append((mask, betti))
    return tuple(out)


def chamber(x: ToricThreefold, d: WeilDivisor, mask: int) -> RationalPolyhedron:
    """Lattice region where exactly the rays in ``mask`` satisfy ``<m,u> < -a``."""
    rows = []
    for i, (u, a) in enumerate(zip(x.rays, d.coeffs)):
        if mask >> i & 1:
            rows.append((tuple(-t for t in u), -a - 1))
        else:
            rows.append((u, a))
    return RationalPolyhedron.from_inequalities(rows)


def _chamber_cohomology(x: ToricThreefold, d: WeilDivisor) -> CohomologyTable:
    h = [0, 0, 0, 0]
    for mask, betti in contributing_subsets(x):
        region = chamber(x, d, mask)
        if region.is_empty:
            continue
        if not region.is_bounded:
            raise RuntimeError(f"unbounded contributing chamber (ray mask {mask:b})")
        count = region.count_lattice_points()
        for p in range(4):
            h[p] += count * betti[p]
    return CohomologyTable(tuple(h))


class CohomologyCache:
    """JSON file mapping a content hash to a cohomology table.

    Unreadable or corrupt files are ignored (the entries get recomputed);
    writes go through a temporary file and an atomic rename.
    """

    filename = "cohomology.json"

    def __init__(self, directory: str | os.PathLike):
        self.directory = Path(directory)
        self.path = self.directory / self.filename
        self._lock = threading.Lock()
        self._data: dict[str, list[int]] | None = None

    @staticmethod
    def key(x: ToricThreefold, d: WeilDivisor) -> str:
        blob = x.fan.content_hash + ":" + ",".join(map(str, d.coeffs))
        return hashlib.sha256(blob.encode()).hexdigest()

    def _load(self) -> dict:
        if self._data is None:
            try:
                data = json.loads(self.path.read_text())
                if not isinstance(data, dict):
                    raise ValueError
                self._data = {
                    k: v for k, v in data.items()
                    if isinstance(v, list) and len(v) == 4 and all(isinstance(t, int) and t >= 0 for t in v)
                }
            except (OSError, ValueError):
                self._data = {}
        return self._data

    def get(self, x, d) -> CohomologyTable | None:
        with self._lock:
            v = self._load().get(self.key(x, d))
        return CohomologyTable(tuple(v)) if v is not None else None

    def put(self, x, d, table: CohomologyTable) -> None:
        self.directory.mkdir(parents=True, exist_ok=True)
        with self._lock, FileLock(str(self.path) + ".lock"):
            # merge with whatever other processes wrote since we last read
            self._data = None
            data = self._load()
            data[self.key(x, d)] = list(table.h)
            fd, tmp = tempfile.mkstemp(dir=self.directory, prefix=".cohomology-", suffix=".json")
            with os.fdopen(fd, "w") as fh:
                json.dump(data, fh, sort_keys=True)
            os.replace(tmp, self.path)


_default_cache: CohomologyCache | None = None


def set_cache(cache: CohomologyCache | None) -> None:
    """Install (or remove) the process-wide persistent cache."""
    global _default_cache
    _default_cache = cache


@lru_cache(maxsize=4096)
def _cohomology_memo(x: ToricThreefold, d: WeilDivisor) -> CohomologyTable:
    return _chamber_cohomology(x, d)


def cohomology(x: ToricThreefold, d: WeilDivisor, cache: CohomologyCache | None = None) -> CohomologyTable:
    """``(h^0, h^1, h^2, h^3)`` of ``O_X(D)`` by the chamber method."""
    if len(d) != x.n_rays:
        raise ValueError("divisor length does not match the number of rays")
    cache = cache if cache is not None else _default_cache
    if cache is not None:
        hit = cache.get(x, d)
        if hit is not None:
            return hit
    table = _cohomology_memo(x, d)
    if cache is not None:
        cache.put(x, d, table)
    return table


def certified_radius(x: ToricThreefold, d: WeilDivisor) -> int:
    """Radius of a box containing every bounded chamber of the shifted arrangement.

    Bounded chambers have their vertices among intersections of three planes
    ``<m, u> = c`` with ``c`` in ``{-a, -a-1}``.
    """
    planes = [(u, c) for u, a in zip(x.rays, d.coeffs) for c in (-a, -a - 1)]
    r = 0
    for (u1, c1), (u2, c2), (u3, c3) in itertools.combinations(planes, 3):
        m = solve3((u1, u2, u3), (c1, c2, c3))
        if m is not None:
            r = max(r, *(math.ceil(abs(t)) for t in m))
    return r + 1


def brute_force_cohomology(x: ToricThreefold, d: WeilDivisor, radius: int | None = None) -> CohomologyTable:
    """Point-by-point summation of ``b~_{p-1}(V_{D,m})`` over a box of lattice points.

    Independent of the chamber bookkeeping: every ``m`` in the box gets its own
    full subcomplex, whose homology is computed from scratch (memoised on the
    vertex set only).
    """
    r = certified_radius(x, d) if radius is None else radius
    grid = np.arange(-r, r + 1, dtype=np.int64)
    ms = np.stack(np.meshgrid(grid, grid, grid, indexing="ij"), axis=-1).reshape(-1, 3)
    rays = np.array(x.rays, dtype=np.int64)
    a = np.array(d.coeffs, dtype=np.int64)
    neg = (ms @ rays.T) < -a
    masks = (neg * (1 << np.arange(x.n_rays, dtype=np.int64))).sum(axis=1)
    uniq, counts = np.unique(masks, return_counts=True)
    h = [0, 0, 0, 0]
    for mask, count in zip(uniq.tolist(), counts.tolist()):
        chosen = [i for i in range(x.n_rays) if mask >> i & 1]
        facets = []
        for c in x.max_cones:
            f = frozenset(i for i in c if i in chosen)
            if f:
                facets.append(f)
        betti = reduced_betti(SimplicialComplex(tuple(chosen), tuple(facets)))
        for p in range(4):
            h[p] += count * betti[p]
    return CohomologyTable(tuple(h))


def euler_char(x: ToricThreefold, d: WeilDivisor) -> int:
    return cohomology(x, d).chi


def triple_intersection(x: ToricThreefold, d1: WeilDivisor, d2: WeilDivisor, d3: WeilDivisor) -> Fraction:
    """``D1 . D2 . D3`` for nef Cartier divisors as a mixed normalized volume.

    Inclusion-exclusion over Minkowski sums of the section polytopes:
    ``6 * MV = sum_S (-1)^(3-|S|) Vol(sum_{i in S} P_i)`` with normalized
    volumes.
    """
    from .geometry import minkowski_sum

    ds = (d1, d2, d3)
    for i, d in enumerate(ds):
        cert = support_function(x, d)
        if not cert.cartier or not is_nef(x, d):
            raise ValueError(f"not nef Cartier: argument {i + 1}")
    polys = [x.section_polytope(d) for d in ds]
    total = Fraction(0)
    for k in (1, 2, 3):
        for subset in itertools.combinations(range(3), k):
            p = polys[subset[0]]
            for j in subset[1:]:
                p = minkowski_sum(p, polys[j])
            total += (-1) ** (3 - k) * p.normalized_volume()
    return total / 6


def serre_dual(x: ToricThreefold, d: WeilDivisor) -> WeilDivisor:
    return canonical_divisor(x) - d
