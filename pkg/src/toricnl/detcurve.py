"""Determinantal curves cut out by the maximal minors of a k x (k-1) matrix of sections.

The matrix entries are random sections of ``O(H)`` over ``F_p``, written in
the monomial basis indexed by lattice points of ``P_H``.  The avoidance check
asks whether two maximal minors can vanish simultaneously on a singular torus
orbit.  It does this two ways:

* sampling: random Cox points on each singular orbit, as many as trials;
* exact: on a 2-cone orbit the entries restrict to Laurent polynomials in one
  torus coordinate, so two minors share a zero on the orbit iff their
  restricted determinants have a common root in ``F_p-bar^*``, which a gcd
  decides.  On a 3-cone (fixed point) every entry is a constant.

Smoothness and irreducibility of the curve are *not* verified.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np
from sympy import isprime

from ._intmat import cross, dot
from .cohomology import cohomology, euler_char, is_globally_generated, is_nef, triple_intersection
from .toric import ToricThreefold, WeilDivisor, canonical_divisor, is_cartier

SMOOTHNESS_DISCLAIMER = (
    "only singular-locus avoidance is tested; smoothness and irreducibility of the curve are not verified"
)


@dataclass(frozen=True)
class SectionBasis:
    divisor: WeilDivisor
    points: tuple[tuple[int, int, int], ...]
    monomials: tuple[tuple[int, ...], ...]

    def __len__(self) -> int:
        return len(self.monomials)

    def evaluate(self, x: Sequence[int], p: int) -> np.ndarray:
        """Values of every monomial at the Cox point ``x`` modulo ``p``."""
        return np.array([math.prod(pow(int(c), e, p) for c, e in zip(x, mono)) % p for mono in self.monomials],
                        dtype=np.int64)


def section_basis(x: ToricThreefold, d: WeilDivisor) -> SectionBasis:
    """Monomial basis of ``H^0(O(D))`` in lexicographic order of lattice points."""
    pts = tuple(x.section_polytope(d).lattice_points())
    if not pts:
        raise ValueError("no sections")
    monos = tuple(tuple(dot(m, u) + a for u, a in zip(x.rays, d.coeffs)) for m in pts)
    return SectionBasis(d, pts, monos)


@dataclass(frozen=True)
class SectionMatrix:
    """``k x (k-1)`` matrix whose entries are coefficient vectors over the basis."""

    k: int
    p: int
    seed: int
    basis: SectionBasis
    entries: np.ndarray = field(repr=False, compare=False)
    spawn_key: tuple[int, ...] = ()

    @classmethod
    def random(cls, basis: SectionBasis, k: int, p: int, seed: int, spawn_key: Sequence[int] = ()) -> "SectionMatrix":
        """Uniform coefficients in ``F_p``, determined by ``(p, seed, spawn_key, basis)``."""
        rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=tuple(spawn_key)))
        entries = rng.integers(0, p, size=(k, k - 1, len(basis)), dtype=np.int64)
        return cls(k, p, seed, basis, entries, tuple(spawn_key))

    def at(self, x: Sequence[int]) -> list[list[int]]:
        vals = self.basis.evaluate(x, self.p)
        return [[int(v) for v in row] for row in (self.entries @ vals) % self.p]


def det_mod(a: list[list[int]], p: int) -> int:
    """Determinant over ``F_p`` by Gaussian elimination."""
    a = [[v % p for v in row] for row in a]
    n = len(a)
    result = 1
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c]), None)
        if piv is None:
            return 0
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            result = -result
        result = result * a[c][c] % p
        inv = pow(a[c][c], -1, p)
        for r in range(c + 1, n):
            f = a[r][c] * inv % p
            if f:
                a[r] = [(v - f * w) % p for v, w in zip(a[r], a[c])]
    return result % p


def _laplace_last_row(a: list[list[int]], p: int) -> int:
    """Determinant by cofactor expansion along the last row, recursing on the top block."""
    n = len(a)
    if n == 0:
        return 1
    if n == 1:
        return a[0][0] % p
    top, last = a[:-1], a[-1]
    total = 0
    for i in range(n):
        sub = [row[:i] + row[i + 1:] for row in top]
        total += (-1) ** (i + n - 1) * last[i] * _laplace_last_row(sub, p)
    return total % p


def minor_eval(m: SectionMatrix, i: int, x: Sequence[int], debug: bool = False) -> int:
    """Value at ``x`` of the maximal minor with row ``i`` (1-based) removed."""
    if not 1 <= i <= m.k:
        raise ValueError(f"row index must be in 1..{m.k}")
    vals = m.at(x)
    sub = vals[: i - 1] + vals[i:]
    direct = det_mod(sub, m.p)
    if debug:
        expanded = _laplace_last_row(sub, m.p)
        if expanded != direct:
            raise AssertionError(f"cofactor expansion {expanded} != elimination {direct}")
    return direct


def adversarial_matrix(basis: SectionBasis, k: int, p: int, seed: int, vanish_on: Sequence[int]) -> SectionMatrix:
    """A matrix with two equal rows built only from sections vanishing on the orbit of ``vanish_on``.

    Every maximal minor then contains a row that vanishes on that orbit, or
    (for the minor dropping a third row) two equal rows, so all minors vanish
    there and any detector must flag it.
    """
    m = SectionMatrix.random(basis, k, p, seed)
    entries = m.entries.copy()
    mask = np.array([any(mono[r] > 0 for r in vanish_on) for mono in basis.monomials], dtype=np.int64)
    if not mask.any():
        raise ValueError("no section vanishes on the requested stratum")
    entries[0] = entries[0] * mask
    entries[1] = entries[0]
    return SectionMatrix(k, p, m.seed, basis, entries, m.spawn_key)


# avoidance ----------------------------------------------------------------------


@dataclass
class StratumResult:
    cone: tuple[int, ...]
    samples: int = 0
    vanishing_minors: int = 0
    fail_points: list = field(default_factory=list)
    exact_failures: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"cone": list(self.cone), "samples": self.samples, "vanishing_minors": self.vanishing_minors,
                "fail_points": self.fail_points, "exact_failures": self.exact_failures}


@dataclass
class AvoidanceVerdict:
    k: int
    p: int
    seed: int
    trials: int
    strata: list[StratumResult]
    note: str = ""

    @property
    def passed(self) -> bool:
        return all(not s.fail_points and not s.exact_failures for s in self.strata)

    @property
    def pass_count(self) -> int:
        return self.trials - len({f["trial"] for s in self.strata for f in s.fail_points + s.exact_failures})

    def to_dict(self) -> dict:
        return {"k": self.k, "p": self.p, "seed": self.seed, "trials": self.trials, "pass_count": self.pass_count,
                "strata": [s.to_dict() for s in self.strata], "pass": self.passed, "note": self.note,
                "disclaimer": SMOOTHNESS_DISCLAIMER}


def _orbit_parameter(x: ToricThreefold, cone: Sequence[int]) -> tuple[int, int, int]:
    """Primitive generator of ``cone^perp`` for a 2-cone."""
    w = cross(x.rays[cone[0]], x.rays[cone[1]])
    g = math.gcd(*w)
    return tuple(c // g for c in w)


def _poly_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a = a[:-1]
    return a


def _poly_gcd(a: list[int], b: list[int], p: int) -> list[int] | None:
    """Monic gcd over ``F_p`` (coefficient lists, constant term first); ``None`` for gcd(0, 0)."""
    a, b = _poly_trim(a), _poly_trim(b)
    while b:
        inv = pow(b[-1], -1, p)
        while len(a) >= len(b):
            f = a[-1] * inv % p
            shift = len(a) - len(b)
            for i, c in enumerate(b):
                a[i + shift] = (a[i + shift] - f * c) % p
            a = _poly_trim(a)
            if not a:
                break
        a, b = b, a
    if not a:
        return None
    inv = pow(a[-1], -1, p)
    return [c * inv % p for c in a]


def _interpolate(xs: list[int], ys: list[int], p: int) -> list[int]:
    """Newton interpolation over ``F_p``; returns coefficients, constant term first."""
    n = len(xs)
    coef = list(ys)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) * pow(xs[i] - xs[i - j], -1, p) % p
    poly = [0]
    for i in range(n - 1, -1, -1):
        # poly = poly * (X - xs[i]) + coef[i]
        new = [0] * (len(poly) + 1)
        for t, c in enumerate(poly):
            new[t + 1] = (new[t + 1] + c) % p
            new[t] = (new[t] - c * xs[i]) % p
        new[0] = (new[0] + coef[i]) % p
        poly = new
    return _poly_trim(poly)


def _exact_orbit_pairs(x: ToricThreefold, m: SectionMatrix, cone: tuple[int, ...]) -> list[tuple[int, int]]:
    """Pairs of minors (1-based rows removed) with a common zero on the orbit of ``cone``."""
    basis, p, k = m.basis, m.p, m.k
    live = [j for j, mono in enumerate(basis.monomials) if all(mono[r] == 0 for r in cone)]
    if len(cone) == 3 or len(live) <= 1:
        # constant entries up to one common nonzero monomial factor
        mat = [[int(sum(int(m.entries[r, c, j]) for j in live) % p) for c in range(k - 1)] for r in range(k)]
        vals = [det_mod(mat[: i - 1] + mat[i:], p) for i in range(1, k + 1)]
        zero = [i for i, v in enumerate(vals, 1) if v == 0]
        return list(itertools.combinations(zero, 2))
    w = _orbit_parameter(x, cone)
    steps = [dot(basis.points[j], w) for j in live]
    lo = min(steps)
    powers = [s - lo for s in steps]
    top = max(powers)
    # entry (r, c) restricted to the orbit is a polynomial in lambda = chi^w
    polys = np.zeros((k, k - 1, top + 1), dtype=np.int64)
    for j, e in zip(live, powers):
        polys[:, :, e] = (polys[:, :, e] + m.entries[:, :, j]) % p
    deg_bound = (k - 1) * top
    if deg_bound + 1 >= p:
        raise ValueError("k too large for the field: not enough evaluation points")
    xs = list(range(1, deg_bound + 2))
    minors: list[list[int]] = []
    evals = []
    for t in xs:
        pw = np.array([pow(t, e, p) for e in range(top + 1)], dtype=np.int64)
        evals.append([[int(v) for v in row] for row in (polys @ pw) % p])
    for i in range(1, k + 1):
        ys = [det_mod(ev[: i - 1] + ev[i:], p) for ev in evals]
        minors.append(_interpolate(xs, ys, p))
    bad = []
    for a, b in itertools.combinations(range(k), 2):
        g = _poly_gcd(list(minors[a]), list(minors[b]), p)
        if g is None:
            bad.append((a + 1, b + 1))
            continue
        while g and g[0] == 0:  # roots at lambda = 0 are not on the orbit
            g = g[1:]
        if len(g) > 1:
            bad.append((a + 1, b + 1))
    return bad


def _sample_point(x: ToricThreefold, cone: Sequence[int], rng: np.random.Generator, p: int) -> list[int]:
    pt = [int(v) for v in rng.integers(1, p, size=x.n_rays)]
    for r in cone:
        pt[r] = 0
    return pt


def _validate_params(k: int, p: int, trials: int) -> None:
    if k < 2:
        raise ValueError("k >= 2 required")
    if p < 1000 or not isprime(p):
        raise ValueError("field prime must be a prime >= 1000")
    if trials < 1:
        raise ValueError("trials must be >= 1")


def check_avoidance(
    x: ToricThreefold, h: WeilDivisor, k: int, p: int = 10007, trials: int = 20, seed: int = 0,
    exact: bool = True, matrices: Sequence[SectionMatrix] | None = None,
) -> AvoidanceVerdict:
    """Test that no two maximal minors vanish together on a singular orbit.

    A fresh random matrix is drawn per trial (seeds spawned from ``seed``), or
    the given ``matrices`` are used instead.
    """
    _validate_params(k, p, trials)
    basis = section_basis(x, h)
    strata = [StratumResult(c) for c in x.singular_cones]
    if not strata:
        return AvoidanceVerdict(k, p, seed, trials, [], note="X is smooth: avoidance holds vacuously")
    for t in range(trials):
        # trial t uses spawn keys (t, 0) for the matrix and (t, 1) for the points
        m = matrices[t % len(matrices)] if matrices else SectionMatrix.random(basis, k, p, seed, (t, 0))
        rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(t, 1)))
        for s in strata:
            pt = _sample_point(x, s.cone, rng, p)
            zero = [i for i in range(1, k + 1) if minor_eval(m, i, pt) == 0]
            s.samples += 1
            s.vanishing_minors = max(s.vanishing_minors, len(zero))
            if len(zero) >= 2:
                s.fail_points.append({"trial": t, "point": pt, "vanishing": zero})
            if exact:
                pairs = _exact_orbit_pairs(x, m, s.cone)
                if pairs:
                    s.exact_failures.append({"trial": t, "pairs": [list(q) for q in pairs]})
    return AvoidanceVerdict(k, p, seed, trials, strata)


# invariants -------------------------------------------------------------------------


@dataclass(frozen=True)
class CurveInvariants:
    k: int
    degree_H: Fraction | None
    genus: int
    notes: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        deg = None if self.degree_H is None else (
            int(self.degree_H) if self.degree_H.denominator == 1 else str(self.degree_H))
        return {"k": self.k, "degree_H": deg, "expected genus (generic matrix)": self.genus, "notes": list(self.notes)}


def bundle_shape(x: ToricThreefold, h: WeilDivisor, k: int) -> tuple[list[WeilDivisor], list[WeilDivisor]]:
    """Summands of ``E = O(-kH)^(k-1)`` and ``F = O((1-k)H)^k``; asserts ``det E = det F``."""
    e = [(-k) * h] * (k - 1)
    f = [(1 - k) * h] * k
    det_e = sum(e[1:], e[0]) if e else WeilDivisor.zero(x.n_rays)
    det_f = sum(f[1:], f[0])
    assert x.linearly_equivalent(det_e, det_f), "det E and det F differ"
    return e, f


def curve_invariants(x: ToricThreefold, h: WeilDivisor, k: int) -> CurveInvariants:
    """``H``-degree and expected genus of the degeneracy curve.

    degree = ``k(k-1)/2 * H^3``; genus = ``chi(F) - chi(E)``.
    """
    if k < 2:
        raise ValueError("k >= 2 required")
    bundle_shape(x, h, k)
    genus = k * euler_char(x, (1 - k) * h) - (k - 1) * euler_char(x, (-k) * h)
    notes = []
    degree = None
    try:
        ok = is_cartier(x, h).holds and is_nef(x, h).holds
    except ValueError:
        ok = False
    if ok:
        degree = Fraction(k * (k - 1), 2) * triple_intersection(x, h, h, h)
    else:
        notes.append("degree refused: H is not nef Cartier")
    return CurveInvariants(k, degree, genus, tuple(notes))


# condition battery --------------------------------------------------------------------


@dataclass(frozen=True)
class BatteryCondition:
    label: str
    verdict: bool
    witness: object = None

    def to_dict(self) -> dict:
        return {"label": self.label, "verdict": self.verdict, "witness": self.witness}


def corollary44_check(x: ToricThreefold, l: WeilDivisor, h: WeilDivisor, k: int) -> list[BatteryCondition]:
    """Conditions (a)-(h) for the split resolution ``0 -> E -> F -> J_C -> 0``."""
    if k < 2:
        raise ValueError("k >= 2 required")
    bundle_shape(x, h, k)
    kx = canonical_divisor(x)
    o = WeilDivisor.zero(x.n_rays)

    def vanish(label, parts):
        bad = []
        for d, name, degrees in parts:
            t = cohomology(x, d)
            bad += [{"divisor": name, "coeffs": list(d.coeffs), "degree": i, "h": t[i]} for i in degrees if t[i]]
        return BatteryCondition(label, not bad, bad or None)

    out = [
        vanish("(a) h^i(O) = 0, i > 0", [(o, "O", (1, 2, 3))]),
        vanish("(b) h^1(F(L)) = 0", [((1 - k) * h + l, "(1-k)H+L", (1,))]),
        vanish("(c) h^2(E(L)) = 0", [((-k) * h + l, "-kH+L", (2,))]),
        vanish("(d) h^0 = h^1 = 0 for K+(1-k)H+L", [(kx + (1 - k) * h + l, "K+(1-k)H+L", (0, 1))]),
        vanish("(e) h^1 = h^2 = 0 for K-kH+L", [(kx + (-k) * h + l, "K-kH+L", (1, 2))]),
        vanish("(f) h^2(O) = 0 and h^3(-H) = 0", [(o, "O", (2,)), (-h, "-H", (3,))]),
        vanish("(g) h^1(H) = 0 and h^2(O) = 0", [(h, "H", (1,)), (o, "O", (2,))]),
    ]
    target = (1 - k) * h + l - h
    gg = is_globally_generated(x, target)
    out.append(BatteryCondition("(h) F(L-H) globally generated", gg.holds,
                                None if gg.holds else {"divisor": "(1-k)H+L-H", "coeffs": list(target.coeffs),
                                                       **(gg.witness or {})}))
    return out


def preset(x: ToricThreefold, h: WeilDivisor, name: str, d: int) -> tuple[int, WeilDivisor]:
    """``(k, L)`` for a named parameterization."""
    if name == "theorem3":
        if d < 0:
            raise ValueError("theorem3 preset needs d >= 0")
        return d + 2, -canonical_divisor(x) + d * h
    if name == "theorem1":
        if d < 2:
            raise ValueError("theorem1 preset needs d >= 2")
        return d, d * h
    raise ValueError(f"unknown preset {name!r}")
