"""Exact lattice geometry in dimension three.

Everything here works over the integers and rationals: lattice vectors,
rational polyhedra given by half-spaces, lattice-point enumeration, normalized
volumes and reduced simplicial homology over Q.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from ._intmat import cross, det3, dot, rank, solve3

Vector = tuple[int, int, int]


def primitive(v: Sequence[int]) -> Vector:
    """Return ``v`` divided by the gcd of its coordinates (sign preserved)."""
    v = tuple(int(x) for x in v)
    g = math.gcd(*v)
    if g == 0:
        raise ValueError("zero vector has no primitive representative")
    return tuple(x // g for x in v)


def is_primitive(v: Sequence[int]) -> bool:
    return math.gcd(*(int(x) for x in v)) == 1


@dataclass(frozen=True)
class RationalPolyhedron:
    """The set ``{m : <m, normal_i> >= -offset_i for all i}`` in Q^3.

    Normals are integer vectors and offsets integers, which is the shape of
    every section polytope ``P_D`` and every cohomology chamber.
    """

    normals: tuple[Vector, ...]
    offsets: tuple[int, ...]

    def __post_init__(self):
        normals = tuple(tuple(int(x) for x in n) for n in self.normals)
        offsets = tuple(int(b) for b in self.offsets)
        if len(normals) != len(offsets):
            raise ValueError("need one offset per normal")
        if any(len(n) != 3 for n in normals):
            raise ValueError("normals must be 3-vectors")
        object.__setattr__(self, "normals", normals)
        object.__setattr__(self, "offsets", offsets)

    # construction helpers -------------------------------------------------

    @classmethod
    def from_inequalities(cls, rows: Iterable[tuple[Sequence[int], int]]) -> "RationalPolyhedron":
        rows = list(rows)
        return cls(tuple(tuple(n) for n, _ in rows), tuple(b for _, b in rows))

    @classmethod
    def simplex(cls, scale: int = 1) -> "RationalPolyhedron":
        """``scale`` times the standard simplex conv{0, e1, e2, e3}."""
        return cls(((1, 0, 0), (0, 1, 0), (0, 0, 1), (-1, -1, -1)), (0, 0, 0, scale))

    @classmethod
    def box(cls, lo: Sequence[int], hi: Sequence[int]) -> "RationalPolyhedron":
        normals, offsets = [], []
        for i in range(3):
            e = [0, 0, 0]
            e[i] = 1
            normals.append(tuple(e))
            offsets.append(-lo[i])
            normals.append(tuple(-x for x in e))
            offsets.append(hi[i])
        return cls(tuple(normals), tuple(offsets))

    def intersect(self, other: "RationalPolyhedron") -> "RationalPolyhedron":
        return RationalPolyhedron(self.normals + other.normals, self.offsets + other.offsets)

    def translate(self, t: Sequence[int]) -> "RationalPolyhedron":
        """The polyhedron ``P + t`` for an integer vector ``t``."""
        return RationalPolyhedron(
            self.normals, tuple(b - dot(n, t) for n, b in zip(self.normals, self.offsets))
        )

    def transform(self, t: Sequence[Sequence[int]]) -> "RationalPolyhedron":
        """Image ``{T m : m in P}`` under a unimodular integer matrix ``T``."""
        if abs(det3(*t)) != 1:
            raise ValueError("transform must be unimodular")
        # normals transform by the inverse transpose
        tinv = _inverse_unimodular(t)
        normals = tuple(tuple(sum(n[i] * tinv[i][j] for i in range(3)) for j in range(3)) for n in self.normals)
        return RationalPolyhedron(normals, self.offsets)

    def contains(self, m: Sequence) -> bool:
        return all(dot(n, m) >= -b for n, b in zip(self.normals, self.offsets))

    # structure ------------------------------------------------------------

    @cached_property
    def normal_rank(self) -> int:
        return rank(self.normals) if self.normals else 0

    @cached_property
    def vertices(self) -> tuple[tuple[Fraction, Fraction, Fraction], ...]:
        """Vertices (exact rationals), sorted.  Empty when the polyhedron has none."""
        seen = set()
        rows = list(zip(self.normals, self.offsets))
        for (n1, b1), (n2, b2), (n3, b3) in itertools.combinations(rows, 3):
            x = solve3((n1, n2, n3), (-b1, -b2, -b3))
            if x is not None and x not in seen and self.contains(x):
                seen.add(x)
        return tuple(sorted(seen))

    @cached_property
    def is_empty(self) -> bool:
        if self.normal_rank == 3:
            # pointed: nonempty iff it has a vertex
            return not self.vertices
        return _fourier_motzkin_empty(
            [(list(map(Fraction, n)), Fraction(-b)) for n, b in zip(self.normals, self.offsets)]
        )

    @cached_property
    def is_bounded(self) -> bool:
        """True when empty or when the recession cone is ``{0}``."""
        if self.is_empty:
            return True
        if self.normal_rank < 3:
            return False
        for n1, n2 in itertools.combinations(self.normals, 2):
            r = cross(n1, n2)
            if r == (0, 0, 0):
                continue
            for ray in (r, tuple(-x for x in r)):
                if all(dot(n, ray) >= 0 for n in self.normals):
                    return False
        return True

    def _require_bounded(self):
        if not self.is_bounded:
            raise ValueError("polyhedron unbounded")

    def bounding_box(self) -> tuple[Vector, Vector] | None:
        """Integer box containing every lattice point, or None if there are none."""
        self._require_bounded()
        if self.is_empty:
            return None
        vs = self.vertices
        lo = tuple(math.ceil(min(v[i] for v in vs)) for i in range(3))
        hi = tuple(math.floor(max(v[i] for v in vs)) for i in range(3))
        if any(a > b for a, b in zip(lo, hi)):
            return None
        return lo, hi

    def _z_ranges(self):
        """Per (x, y) column of the bounding box, the admissible z interval."""
        box = self.bounding_box()
        if box is None:
            return None
        lo, hi = box
        xs, ys = np.meshgrid(
            np.arange(lo[0], hi[0] + 1, dtype=np.int64),
            np.arange(lo[1], hi[1] + 1, dtype=np.int64),
            indexing="ij",
        )
        xs, ys = xs.ravel(), ys.ravel()
        zlo = np.full(xs.shape, lo[2], dtype=np.int64)
        zhi = np.full(xs.shape, hi[2], dtype=np.int64)
        ok = np.ones(xs.shape, dtype=bool)
        for (nx, ny, nz), b in zip(self.normals, self.offsets):
            # nz * z >= r
            r = -b - nx * xs - ny * ys
            if nz > 0:
                zlo = np.maximum(zlo, -((-r) // nz))
            elif nz < 0:
                zhi = np.minimum(zhi, r // nz)
            else:
                ok &= r <= 0
        return xs, ys, zlo, zhi, ok

    def count_lattice_points(self) -> int:
        ranges = self._z_ranges()
        if ranges is None:
            return 0
        _, _, zlo, zhi, ok = ranges
        return int(np.where(ok, np.maximum(zhi - zlo + 1, 0), 0).sum())

    def lattice_points(self) -> list[Vector]:
        """Integer points of the polyhedron in lexicographic order."""
        ranges = self._z_ranges()
        if ranges is None:
            return []
        xs, ys, zlo, zhi, ok = ranges
        out = []
        for x, y, a, b, good in zip(xs.tolist(), ys.tolist(), zlo.tolist(), zhi.tolist(), ok.tolist()):
            if good:
                out.extend((x, y, z) for z in range(a, b + 1))
        return out

    def normalized_volume(self) -> Fraction:
        """``3!`` times the Euclidean volume, exactly."""
        self._require_bounded()
        if self.is_empty:
            return Fraction(0)
        return hull_normalized_volume(self.vertices)


def lattice_points(p: RationalPolyhedron) -> list[Vector]:
    return p.lattice_points()


def normalized_volume(p: RationalPolyhedron) -> Fraction:
    return p.normalized_volume()


def minkowski_sum(p: RationalPolyhedron, q: RationalPolyhedron) -> RationalPolyhedron:
    """Minkowski sum of two polytopes sharing their facet normals.

    Valid whenever every facet normal of ``p + q`` appears among the normals
    of ``p`` (equivalently ``q``), as for section polytopes of nef divisors on
    one fan.  Offsets add as support functions.
    """
    if set(p.normals) != set(q.normals):
        raise ValueError("polytopes must share one list of normals")
    p._require_bounded()
    q._require_bounded()
    if p.is_empty or q.is_empty:
        raise ValueError("empty summand")
    normals = tuple(dict.fromkeys(p.normals))
    offsets = []
    for n in normals:
        lo_p = min(dot(n, v) for v in p.vertices)
        lo_q = min(dot(n, v) for v in q.vertices)
        s = lo_p + lo_q
        if s.denominator != 1:
            raise ValueError("support values must be integral")
        offsets.append(-int(s))
    return RationalPolyhedron(normals, tuple(offsets))


def hull_normalized_volume(points: Sequence[Sequence]) -> Fraction:
    """Normalized volume of the convex hull of finitely many rational points.

    Facets are found by brute force over point triples, then every facet is
    fan-triangulated and coned off from a fixed point (pulling triangulation).
    """
    pts = list(dict.fromkeys(tuple(Fraction(x) for x in p) for p in points))
    if len(pts) < 4:
        return Fraction(0)
    den = math.lcm(*(x.denominator for p in pts for x in p))
    ipts = [tuple(int(x * den) for x in p) for p in pts]
    base = ipts[0]
    diffs = [tuple(a - b for a, b in zip(p, base)) for p in ipts]
    if rank(diffs) < 3:
        return Fraction(0)

    facets: dict[frozenset, None] = {}
    for i, j, k in itertools.combinations(range(len(ipts)), 3):
        a, b, c = ipts[i], ipts[j], ipts[k]
        n = cross(tuple(x - y for x, y in zip(b, a)), tuple(x - y for x, y in zip(c, a)))
        if n == (0, 0, 0):
            continue
        vals = [dot(n, p) - dot(n, a) for p in ipts]
        if all(v >= 0 for v in vals) or all(v <= 0 for v in vals):
            facets[frozenset(idx for idx, v in enumerate(vals) if v == 0)] = None
    facet_list = list(facets)

    def collinear_extremes(idx):
        idx = sorted(idx)
        p0 = ipts[idx[0]]
        d = next(
            (tuple(x - y for x, y in zip(ipts[t], p0)) for t in idx[1:] if ipts[t] != p0), None
        )
        if d is None:
            return None
        for t in idx:
            if cross(tuple(x - y for x, y in zip(ipts[t], p0)), d) != (0, 0, 0):
                return None
        key = lambda t: dot(tuple(x - y for x, y in zip(ipts[t], p0)), d)
        return min(idx, key=key), max(idx, key=key)

    edges_of = {f: set() for f in facet_list}
    for f, g in itertools.combinations(facet_list, 2):
        common = f & g
        if len(common) >= 2:
            e = collinear_extremes(common)
            if e is not None:
                edges_of[f].add(e)
                edges_of[g].add(e)

    total = 0
    v0 = ipts[0]
    for f in facet_list:
        w0 = ipts[min(f)]
        for a, b in edges_of[f]:
            total += abs(
                det3(
                    tuple(x - y for x, y in zip(w0, v0)),
                    tuple(x - y for x, y in zip(ipts[a], v0)),
                    tuple(x - y for x, y in zip(ipts[b], v0)),
                )
            )
    return Fraction(total, den**3)


def _inverse_unimodular(t):
    d = det3(*t)
    # adjugate: inverse[i][j] = cofactor[j][i] / det
    cols = [tuple(t[r][c] for r in range(3)) for c in range(3)]
    adj_rows = [cross(cols[(i + 1) % 3], cols[(i + 2) % 3]) for i in range(3)]
    return [[adj_rows[i][j] // d for j in range(3)] for i in range(3)]


def _fourier_motzkin_empty(rows: list[tuple[list[Fraction], Fraction]]) -> bool:
    """Emptiness of ``{x : a.x >= c}`` by Fourier-Motzkin elimination."""
    nvar = len(rows[0][0]) if rows else 0
    for var in range(nvar):
        pos, neg, zero = [], [], []
        for a, c in rows:
            (pos if a[var] > 0 else neg if a[var] < 0 else zero).append((a, c))
        new = list(zero)
        for ap, cp in pos:
            for an, cn in neg:
                sp, sn = ap[var], -an[var]
                a = [sn * x + sp * y for x, y in zip(ap, an)]
                new.append((a, sn * cp + sp * cn))
        rows = _dedupe_rows(new)
    return any(c > 0 for _, c in rows)


def _dedupe_rows(rows):
    out = {}
    for a, c in rows:
        g = 0
        for x in a:
            g = math.gcd(g, x.numerator)
        if g == 0:
            key = (tuple(a), None)
            out[key] = max(out.get(key, c), c)
            continue
        scale = Fraction(1, g)
        key = (tuple(x * scale for x in a), None)
        out[key] = max(out.get(key, c * scale), c * scale)
    return [(list(k[0]), c) for k, c in out.items()]


# simplicial homology -------------------------------------------------------


@dataclass(frozen=True)
class SimplicialComplex:
    """Downward closure of ``facets`` on the vertex set ``vertices``."""

    vertices: tuple
    facets: tuple[frozenset, ...] = field(default=())

    def __post_init__(self):
        verts = tuple(self.vertices)
        facets = tuple(frozenset(f) for f in self.facets)
        known = set(verts)
        for f in facets:
            extra = set(f) - known
            if extra:
                raise ValueError(f"facet {sorted(f)} references unknown vertex {sorted(extra)}")
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "facets", facets)

    @cached_property
    def faces(self) -> dict[int, list[tuple]]:
        """All nonempty faces grouped by dimension, each as a sorted tuple."""
        by_dim: dict[int, set] = {}
        for f in self.facets:
            f = sorted(f)
            for k in range(1, len(f) + 1):
                for s in itertools.combinations(f, k):
                    by_dim.setdefault(k - 1, set()).add(s)
        return {d: sorted(s) for d, s in sorted(by_dim.items())}

    @property
    def dimension(self) -> int:
        return max(self.faces, default=-1)

    def face_counts(self) -> list[int]:
        return [len(self.faces.get(d, [])) for d in range(self.dimension + 1)]

    def cone(self, apex) -> "SimplicialComplex":
        """The cone over the complex with a new vertex ``apex``."""
        if apex in self.vertices:
            raise ValueError("apex must be a new vertex")
        facets = tuple(f | {apex} for f in self.facets) or (frozenset([apex]),)
        return SimplicialComplex(self.vertices + (apex,), facets)


def _boundary_rank(lower: list[tuple], upper: list[tuple]) -> int:
    if not lower or not upper:
        return 0
    index = {s: i for i, s in enumerate(lower)}
    mat = [[0] * len(upper) for _ in lower]
    for j, s in enumerate(upper):
        for k in range(len(s)):
            mat[index[s[:k] + s[k + 1 :]]][j] = (-1) ** k
    return rank(mat)


def reduced_betti(k: SimplicialComplex) -> tuple[int, ...]:
    """Reduced Betti numbers over Q, ``(b_-1, b_0, b_1, b_2, ...)``.

    At least four entries are returned; the empty complex has ``b_-1 = 1``.
    """
    faces = k.faces
    top = max(faces, default=-1)
    chains = {-1: [()]}
    chains.update(faces)
    dims = range(-1, max(top, 2) + 1)
    ranks = {d: _boundary_rank(chains.get(d - 1, []), chains.get(d, [])) for d in range(0, top + 2)}
    out = []
    for d in dims:
        size = len(chains.get(d, []))
        out.append(size - ranks.get(d, 0) - ranks.get(d + 1, 0))
    return tuple(out)
