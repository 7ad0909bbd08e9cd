"""Complete simplicial toric threefolds: fans, class groups, Weil divisors.

A variety is described by its fan.  ``validate_fan`` checks the fan and
computes the class group ``Cl(X) = Z^rays / M`` through the Smith normal form
of the ray matrix; the resulting ``degree_map`` sends ray-coefficient vectors
to class coordinates.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from pathlib import Path
from typing import Any, Mapping, Sequence

from ._intmat import cross, det3, dot, smith_normal_form, solve3
from .geometry import RationalPolyhedron, Vector, is_primitive, primitive


class FanError(ValueError):
    """Raised when a fan fails validation; ``cones`` names the offenders."""

    def __init__(self, message: str, cones: Sequence = ()):
        super().__init__(message)
        self.cones = list(cones)


@dataclass(frozen=True)
class Verdict:
    """A boolean answer with the evidence behind it."""

    holds: bool
    witness: Any = None
    detail: str = ""

    def __bool__(self) -> bool:
        return self.holds


@dataclass(frozen=True)
class Fan:
    rays: tuple[Vector, ...]
    max_cones: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "rays", tuple(tuple(int(x) for x in r) for r in self.rays))
        object.__setattr__(
            self, "max_cones", tuple(tuple(sorted(int(i) for i in c)) for c in self.max_cones)
        )

    @property
    def n_rays(self) -> int:
        return len(self.rays)

    def to_json(self) -> dict:
        return {"rays": [list(r) for r in self.rays], "max_cones": [list(c) for c in self.max_cones]}

    @cached_property
    def content_hash(self) -> str:
        # cone order is presentation only; ray order matters since divisors index rays
        data = {"rays": [list(r) for r in self.rays], "max_cones": sorted(list(c) for c in self.max_cones)}
        blob = json.dumps(data, sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()

    @cached_property
    def cones(self) -> tuple[tuple[int, ...], ...]:
        """All cones (including the zero cone) as sorted ray-index tuples."""
        out = {()}
        for c in self.max_cones:
            for k in range(1, 4):
                out.update(itertools.combinations(c, k))
        return tuple(sorted(out, key=lambda c: (len(c), c)))


@dataclass(frozen=True)
class WeilDivisor:
    """The divisor ``sum_rho coeffs[rho] * D_rho``."""

    coeffs: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(int(a) for a in self.coeffs))

    def __len__(self):
        return len(self.coeffs)

    def __add__(self, other: "WeilDivisor") -> "WeilDivisor":
        if len(other) != len(self):
            raise ValueError("divisors live on different fans")
        return WeilDivisor(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "WeilDivisor":
        return WeilDivisor(tuple(-a for a in self.coeffs))

    def __sub__(self, other: "WeilDivisor") -> "WeilDivisor":
        return self + (-other)

    def __mul__(self, k: int) -> "WeilDivisor":
        return WeilDivisor(tuple(k * a for a in self.coeffs))

    __rmul__ = __mul__

    @classmethod
    def zero(cls, n: int) -> "WeilDivisor":
        return cls((0,) * n)


@dataclass(frozen=True)
class ToricThreefold:
    """A validated complete simplicial toric threefold.

    ``degree_map`` holds the free part of ``Z^rays -> Cl(X)``; the torsion part
    is ``torsion_map`` with moduli ``class_group_torsion``.  ``named`` carries
    distinguished divisors (``H``, ``eta0``, ...), ``class_basis`` the names
    used for class coordinates.
    """

    fan: Fan
    class_group_rank: int
    class_group_torsion: tuple[int, ...]
    degree_map: tuple[tuple[int, ...], ...]
    torsion_map: tuple[tuple[int, ...], ...] = ()
    name: str = ""
    named: tuple[tuple[str, WeilDivisor], ...] = field(default=(), compare=False)
    class_basis: tuple[str, ...] = field(default=(), compare=False)

    @property
    def rays(self) -> tuple[Vector, ...]:
        return self.fan.rays

    @property
    def max_cones(self):
        return self.fan.max_cones

    @property
    def n_rays(self) -> int:
        return self.fan.n_rays

    def ray_divisor(self, i: int) -> WeilDivisor:
        c = [0] * self.n_rays
        c[i] = 1
        return WeilDivisor(tuple(c))

    def divisor(self, name: str) -> WeilDivisor:
        """Look up a named divisor; ``K`` and ``D<i>`` are always available."""
        table = dict(self.named)
        if name in table:
            return table[name]
        if name == "K":
            return canonical_divisor(self)
        if name.startswith("D") and name[1:].isdigit() and int(name[1:]) < self.n_rays:
            return self.ray_divisor(int(name[1:]))
        raise KeyError(f"unknown divisor name {name!r} on {self.name or 'this variety'}")

    def with_names(self, name: str, named: Mapping[str, WeilDivisor], basis: Sequence[str]) -> "ToricThreefold":
        return ToricThreefold(
            self.fan,
            self.class_group_rank,
            self.class_group_torsion,
            self.degree_map,
            self.torsion_map,
            name,
            tuple(named.items()),
            tuple(basis),
        )

    # class group -----------------------------------------------------------

    def degree(self, d: WeilDivisor) -> tuple[tuple[int, ...], tuple[int, ...]]:
        """Class of ``d`` as (free coordinates, torsion residues)."""
        if len(d) != self.n_rays:
            raise ValueError(f"divisor has {len(d)} coefficients, fan has {self.n_rays} rays")
        free = tuple(dot(row, d.coeffs) for row in self.degree_map)
        tors = tuple(dot(row, d.coeffs) % t for row, t in zip(self.torsion_map, self.class_group_torsion))
        return free, tors

    def linearly_equivalent(self, d1: WeilDivisor, d2: WeilDivisor) -> bool:
        free, tors = self.degree(d1 - d2)
        return not any(free) and not any(tors)

    def numerically_equivalent(self, d1: WeilDivisor, d2: WeilDivisor) -> bool:
        """Equality in ``Cl(X) (x) Q``."""
        return not any(self.degree(d1 - d2)[0])

    def class_coordinates(self, d: WeilDivisor) -> tuple[Fraction, ...]:
        """Coordinates of the class of ``d`` in ``Cl (x) Q`` w.r.t. ``class_basis``."""
        if not self.class_basis:
            raise ValueError("variety has no named class basis")
        basis = [self.degree(self.divisor(b))[0] for b in self.class_basis]
        r = self.class_group_rank
        target = self.degree(d)[0]
        mat = [[Fraction(basis[j][i]) for j in range(r)] for i in range(r)]
        return tuple(_solve_rational(mat, [Fraction(t) for t in target]))

    def from_class_coordinates(self, coords: Sequence[int]) -> WeilDivisor:
        if len(coords) != len(self.class_basis):
            raise ValueError(
                f"expected {len(self.class_basis)} class coordinates ({', '.join(self.class_basis)})"
            )
        out = WeilDivisor.zero(self.n_rays)
        for c, b in zip(coords, self.class_basis):
            out = out + int(c) * self.divisor(b)
        return out

    def character_divisor(self, m: Sequence[int]) -> WeilDivisor:
        """``div(chi^m) = sum <m, u_rho> D_rho``."""
        return WeilDivisor(tuple(dot(m, u) for u in self.rays))

    # polyhedra -------------------------------------------------------------

    def section_polytope(self, d: WeilDivisor) -> RationalPolyhedron:
        """``P_D = {m : <m, u_rho> >= -a_rho}``."""
        if len(d) != self.n_rays:
            raise ValueError("divisor length does not match the number of rays")
        return RationalPolyhedron(self.rays, d.coeffs)

    @cached_property
    def singular_cones(self) -> tuple[tuple[int, ...], ...]:
        """Non-smooth cones of dimension 2 and 3 (their orbit closures form Sing X)."""
        return tuple(c for c in self.fan.cones if len(c) >= 2 and not cone_is_smooth(self.rays, c))


def _solve_rational(mat, rhs):
    n = len(mat)
    a = [row[:] + [r] for row, r in zip(mat, rhs)]
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c]), None)
        if piv is None:
            raise ValueError("class basis is degenerate")
        a[c], a[piv] = a[piv], a[c]
        for i in range(n):
            if i != c and a[i][c]:
                f = a[i][c] / a[c][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return [a[i][n] / a[i][i] for i in range(n)]


def cone_is_smooth(rays: Sequence[Vector], cone: Sequence[int]) -> bool:
    """Rays of ``cone`` extend to a Z-basis (gcd of maximal minors is 1)."""
    vecs = [rays[i] for i in cone]
    if len(vecs) <= 1:
        return True
    if len(vecs) == 2:
        return math.gcd(*cross(vecs[0], vecs[1])) == 1
    return abs(det3(*vecs)) == 1


# validation ---------------------------------------------------------------


def _generic_directions():
    # fixed, deterministic probe directions for the covering-degree count
    for a in range(1, 200):
        yield (7 * a + 1, 13 * a * a + 3, -(a**3) - 5 * a - 2)


def validate_fan(fan: Fan | Mapping) -> ToricThreefold:
    """Check a fan and compute its class group.

    Completeness is decided by the 2-face pairing criterion (every 2-face lies
    in exactly two maximal cones, on opposite sides of it) together with a
    covering-degree count along a generic direction, which must be 1.
    """
    if isinstance(fan, Mapping):
        fan = Fan(tuple(map(tuple, fan["rays"])), tuple(map(tuple, fan["max_cones"])))
    rays = fan.rays
    n = len(rays)
    if any(len(r) != 3 for r in rays):
        raise FanError("rays must be 3-vectors")
    for i, r in enumerate(rays):
        if not any(r):
            raise FanError(f"ray {i} is zero", [i])
        if not is_primitive(r):
            raise FanError(f"ray {i} = {list(r)} is not primitive; use {list(primitive(r))}", [i])
    if len(set(rays)) != n:
        raise FanError("rays are not distinct")
    cones = fan.max_cones
    for c in cones:
        if len(c) != 3 or len(set(c)) != 3 or any(not 0 <= i < n for i in c):
            raise FanError(f"malformed maximal cone {list(c)}", [c])
    if len(set(cones)) != len(cones):
        raise FanError("repeated maximal cone", [c for c in cones if cones.count(c) > 1])
    flat = [c for c in cones if det3(*(rays[i] for i in c)) == 0]
    if flat:
        raise FanError("not simplicial: cone rays are linearly dependent", flat)

    faces: dict[tuple, list] = {}
    for c in cones:
        for f in itertools.combinations(c, 2):
            faces.setdefault(f, []).append(c)
    for f, owners in faces.items():
        if len(owners) > 2:
            raise FanError(f"cones overlap badly: 2-face {list(f)} lies in {len(owners)} cones", owners)
    lonely = [owners[0] for f, owners in faces.items() if len(owners) == 1]
    if lonely:
        raise FanError("not complete: some 2-faces bound only one maximal cone", lonely)
    for f, (c1, c2) in faces.items():
        u, v = rays[f[0]], rays[f[1]]
        w1 = rays[next(i for i in c1 if i not in f)]
        w2 = rays[next(i for i in c2 if i not in f)]
        if (det3(u, v, w1) > 0) == (det3(u, v, w2) > 0):
            raise FanError(f"cones overlap badly: cones {list(c1)} and {list(c2)} fold over face {list(f)}", [c1, c2])
    for c in cones:
        for i in range(n):
            if i in c:
                continue
            lam = solve3([[rays[j][k] for j in c] for k in range(3)], rays[i])
            if all(x >= 0 for x in lam):
                raise FanError(f"cones overlap badly: ray {i} lies in cone {list(c)}", [c])

    for probe in _generic_directions():
        coverage = 0
        generic = True
        for c in cones:
            lam = solve3([[rays[j][k] for j in c] for k in range(3)], probe)
            if any(x == 0 for x in lam):
                generic = False
                break
            coverage += all(x > 0 for x in lam)
        if generic:
            break
    if coverage == 0:
        raise FanError("not complete: generic direction is not covered")
    if coverage > 1:
        raise FanError(f"cones overlap badly: generic direction covered {coverage} times", list(cones))

    snf, u, _ = smith_normal_form([list(r) for r in rays])
    diag = [snf[i][i] for i in range(3)]
    if 0 in diag:
        raise FanError("not complete: rays do not span N (x) R")
    torsion = tuple(d for d in diag if d > 1)
    torsion_map = tuple(tuple(u[i]) for i, d in enumerate(diag) if d > 1)
    degree_map = tuple(tuple(row) for row in u[3:])
    return ToricThreefold(fan, n - 3, torsion, degree_map, torsion_map)


def load_fan_json(path: str | Path) -> ToricThreefold:
    """Read ``{"rays": [...], "max_cones": [...]}`` (0-based indices) and validate."""
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise FanError(f"cannot read fan file {path}: {exc}") from exc
    if not isinstance(data, dict) or "rays" not in data or "max_cones" not in data:
        raise FanError('fan file must contain "rays" and "max_cones"')
    x = validate_fan(data)
    # optional {"named": {"H": [coeffs...]}, "class_basis": ["H"]}
    named = {}
    for key, coeffs in (data.get("named") or {}).items():
        if not isinstance(coeffs, list) or len(coeffs) != x.n_rays:
            raise FanError(f"named divisor {key!r} needs {x.n_rays} integer coefficients")
        named[key] = WeilDivisor(tuple(int(c) for c in coeffs))
    basis = tuple(data.get("class_basis") or ())
    if basis and (len(basis) != x.class_group_rank or any(b not in named for b in basis)):
        raise FanError("class_basis must list class_group_rank named divisors")
    return x.with_names(Path(path).stem, named, basis)


# divisors on X ----------------------------------------------------------------


def canonical_divisor(x: ToricThreefold) -> WeilDivisor:
    return WeilDivisor((-1,) * x.n_rays)


@dataclass(frozen=True)
class SupportFunctionCertificate:
    """Per-cone solutions ``m_sigma`` of ``<m_sigma, u_rho> = -a_rho`` (rho in sigma)."""

    cone_vectors: tuple[tuple[Fraction, Fraction, Fraction], ...]
    cartier: bool
    index: int


def support_function(x: ToricThreefold, d: WeilDivisor) -> SupportFunctionCertificate:
    vecs = []
    for c in x.max_cones:
        m = solve3([x.rays[i] for i in c], [-d.coeffs[i] for i in c])
        if m is None:
            raise ValueError("not Q-Cartier")
        vecs.append(m)
    index = math.lcm(*(v.denominator for m in vecs for v in m))
    return SupportFunctionCertificate(tuple(vecs), index == 1, index)


def is_cartier(x: ToricThreefold, d: WeilDivisor) -> Verdict:
    cert = support_function(x, d)
    if cert.cartier:
        return Verdict(True, None, "integral support function")
    bad = [c for c, m in zip(x.max_cones, cert.cone_vectors) if any(v.denominator != 1 for v in m)]
    return Verdict(False, {"cone": list(bad[0]), "m_sigma": [str(v) for v in cert.cone_vectors[x.max_cones.index(bad[0])]]},
                   f"Cartier index {cert.index}")


def is_smooth(x: ToricThreefold) -> Verdict:
    for c in x.max_cones:
        d = det3(*(x.rays[i] for i in c))
        if abs(d) != 1:
            return Verdict(False, {"cone": list(c), "determinant": d}, "cone determinant is not +-1")
    return Verdict(True, None, "every maximal cone is unimodular")


def is_gorenstein(x: ToricThreefold) -> Verdict:
    v = is_cartier(x, canonical_divisor(x))
    if v:
        return Verdict(True, None, "K is Cartier")
    return Verdict(False, v.witness, "K is not Cartier (" + v.detail + ")")


def is_qfactorial(x: ToricThreefold) -> Verdict:
    return Verdict(True, None, "simplicial fan: every Weil divisor is Q-Cartier")


def is_fano(x: ToricThreefold) -> Verdict:
    from .cohomology import is_ample

    v = is_ample(x, -canonical_divisor(x))
    return Verdict(v.holds, v.witness, "-K ample" if v else "-K not ample")
