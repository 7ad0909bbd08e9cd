"""Weighted projective 3-spaces and the delta < sigma classification scan."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterator, Sequence

from ._intmat import smith_normal_form
from .toric import Fan, ToricThreefold, WeilDivisor, validate_fan

SPORADIC = ((1, 1, 2, 3), (1, 2, 2, 3), (3, 3, 4, 4), (3, 3, 5, 5))
FAMILIES = ("P[1,1,1,q]", "P[1,2,2q-1,2q-1]", "P[2,2,2q-1,2q-1]")
UNEXPECTED = "UNEXPECTED"


@dataclass(frozen=True)
class WeightTuple:
    q: tuple[int, int, int, int]

    def __post_init__(self):
        q = tuple(int(x) for x in self.q)
        if len(q) != 4 or min(q) < 1:
            raise ValueError("weights must be four positive integers")
        object.__setattr__(self, "q", q)

    @property
    def sorted(self) -> tuple[int, ...]:
        return tuple(sorted(self.q))

    def offending_triple(self) -> tuple[int, int, int] | None:
        for t in itertools.combinations(self.q, 3):
            if math.gcd(*t) != 1:
                return t
        return None

    @property
    def well_formed(self) -> bool:
        return self.offending_triple() is None


@dataclass(frozen=True)
class WpsInvariants:
    delta: int
    sigma: int
    satisfies: bool


def delta_sigma(q: WeightTuple | Sequence[int]) -> WpsInvariants:
    """``(lcm, sum, lcm < sum)`` of the weights."""
    q = q if isinstance(q, WeightTuple) else WeightTuple(tuple(q))
    if not q.well_formed:
        raise ValueError(f"weights {q.q} are not well-formed: gcd{q.offending_triple()} != 1")
    delta, sigma = math.lcm(*q.q), sum(q.q)
    return WpsInvariants(delta, sigma, delta < sigma)


def wps_fan(q: WeightTuple | Sequence[int]) -> ToricThreefold:
    """Fan of ``P[q0,q1,q2,q3]`` with named classes ``eta0``, ``eta``, ``H``.

    The rays are the images of the standard basis of ``Z^4`` in
    ``Z^4 / Z q``, read off from a unimodular ``U`` with ``U q = e_0``.
    """
    q = q if isinstance(q, WeightTuple) else WeightTuple(tuple(q))
    bad = q.offending_triple()
    if bad is not None:
        raise ValueError(f"weights {list(q.q)} are not well-formed: gcd{bad} = {math.gcd(*bad)}")
    snf, u, v = smith_normal_form([[w] for w in q.q])
    # U q V = e_0 with V = (+-1), so rows 1..3 of U kill q
    rays = tuple(tuple(u[r][i] for r in (1, 2, 3)) for i in range(4))
    cones = tuple(tuple(j for j in range(4) if j != i) for i in range(4))
    x = validate_fan(Fan(rays, cones))
    # eta0: any integer combination of ray divisors of weighted degree 1
    coeffs = _bezout(q.q)
    eta0 = WeilDivisor(coeffs)
    delta = math.lcm(*q.q)
    named = {"eta0": eta0, "eta": delta * eta0, "H": delta * eta0}
    return x.with_names("wps:" + ",".join(map(str, q.q)), named, ("eta0",))


def _bezout(q: Sequence[int]) -> tuple[int, ...]:
    """Integers ``c`` with ``sum c_i q_i = gcd(q) = 1``."""
    coeffs = [1] + [0] * (len(q) - 1)
    g = q[0]
    for i in range(1, len(q)):
        g2, s, t = _xgcd(g, q[i])
        coeffs = [c * s for c in coeffs]
        coeffs[i] = t
        g = g2
    if g != 1:
        raise ValueError("weights are not coprime")
    return tuple(coeffs)


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        k, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - k * x1
        y0, y1 = y1, y0 - k * y1
    return a, x0, y0


def family_of(q: Sequence[int]) -> str:
    """Tag a weight tuple; infinite families take precedence over sporadic ones."""
    s = tuple(sorted(q))
    if s[:3] == (1, 1, 1):
        return FAMILIES[0]
    odd = [c for c in set(s) if c % 2 == 1]
    if any(tuple(sorted((1, 2, c, c))) == s for c in odd):
        return FAMILIES[1]
    if any(tuple(sorted((2, 2, c, c))) == s for c in odd):
        return FAMILIES[2]
    if s in SPORADIC:
        return "sporadic"
    return UNEXPECTED


@dataclass(frozen=True)
class ScanEntry:
    weights: tuple[int, int, int, int]
    delta: int
    sigma: int
    family: str

    def to_dict(self) -> dict:
        return {"weights": list(self.weights), "delta": self.delta, "sigma": self.sigma, "family": self.family}


def iter_weight_tuples(max_weight: int) -> Iterator[tuple[int, int, int, int]]:
    """Well-formed non-decreasing weight tuples with entries <= ``max_weight``."""
    for q in itertools.combinations_with_replacement(range(1, max_weight + 1), 4):
        if WeightTuple(q).well_formed:
            yield q


def scan(max_weight: int) -> list[ScanEntry]:
    """All well-formed tuples up to ``max_weight`` with ``delta < sigma``, tagged."""
    if max_weight < 1:
        raise ValueError("max_weight must be >= 1")
    out = []
    for q in iter_weight_tuples(max_weight):
        inv = delta_sigma(q)
        if inv.satisfies:
            out.append(ScanEntry(q, inv.delta, inv.sigma, family_of(q)))
    return out


def family_members(max_weight: int) -> set[tuple[int, ...]]:
    """Sorted members of the three infinite families and the sporadic list up to a bound."""
    out = set()
    for k in range(1, max_weight + 1):
        for t in ((1, 1, 1, k), (1, 2, 2 * k - 1, 2 * k - 1), (2, 2, 2 * k - 1, 2 * k - 1)):
            if max(t) <= max_weight:
                out.add(tuple(sorted(t)))
    out.update(t for t in SPORADIC if max(t) <= max_weight)
    return out
