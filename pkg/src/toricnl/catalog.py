"""Builtin varieties and the named-divisor expression language."""

from __future__ import annotations

import re
from fractions import Fraction

from .toric import Fan, ToricThreefold, WeilDivisor, validate_fan
from .wps import wps_fan

NAMES = ("P3", "P1xP1xP1", "P1xP2", "BlowupP3Line")


def _p3() -> ToricThreefold:
    rays = ((1, 0, 0), (0, 1, 0), (0, 0, 1), (-1, -1, -1))
    cones = ((1, 2, 3), (0, 2, 3), (0, 1, 3), (0, 1, 2))
    x = validate_fan(Fan(rays, cones))
    return x.with_names("P3", {"H": x.ray_divisor(0)}, ("H",))


def _p1xp1xp1() -> ToricThreefold:
    rays = ((1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1))
    cones = tuple((a, b, c) for a in (0, 1) for b in (2, 3) for c in (4, 5))
    x = validate_fan(Fan(rays, cones))
    h1, h2, h3 = x.ray_divisor(0), x.ray_divisor(2), x.ray_divisor(4)
    return x.with_names("P1xP1xP1", {"H1": h1, "H2": h2, "H3": h3, "H": h1 + h2 + h3}, ("H1", "H2", "H3"))


def _p1xp2() -> ToricThreefold:
    rays = ((1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, 0, 1), (0, -1, -1))
    cones = tuple((a, b, c) for a in (0, 1) for b, c in ((2, 3), (2, 4), (3, 4)))
    x = validate_fan(Fan(rays, cones))
    h1, h2 = x.ray_divisor(0), x.ray_divisor(2)
    return x.with_names("P1xP2", {"H1": h1, "H2": h2, "H": h1 + h2}, ("H1", "H2"))


def _blowup_p3_line() -> ToricThreefold:
    # star subdivision of cone(e3, -e1-e2-e3): the blown-up line is D2 . D3 of P3
    rays = ((1, 0, 0), (0, 1, 0), (0, 0, 1), (-1, -1, -1), (-1, -1, 0))
    cones = ((0, 1, 2), (0, 1, 3), (0, 2, 4), (0, 3, 4), (1, 2, 4), (1, 3, 4))
    x = validate_fan(Fan(rays, cones))
    eta1 = x.ray_divisor(0)  # pullback of a plane missing the line
    e = x.ray_divisor(4)
    eta2 = eta1 - e
    return x.with_names("BlowupP3Line", {"eta1": eta1, "eta2": eta2, "E": e, "H": eta1 + eta2}, ("eta1", "eta2"))


_BUILDERS = {"P3": _p3, "P1xP1xP1": _p1xp1xp1, "P1xP2": _p1xp2, "BlowupP3Line": _blowup_p3_line}
_CACHE: dict[str, ToricThreefold] = {}


def catalog(name: str) -> ToricThreefold:
    """A builtin variety: one of ``NAMES`` or ``wps:q0,q1,q2,q3``."""
    if name in _CACHE:
        return _CACHE[name]
    if name in _BUILDERS:
        x = _BUILDERS[name]()
    elif name.lower().startswith("wps:"):
        try:
            q = tuple(int(t) for t in name[4:].split(","))
        except ValueError:
            raise ValueError(f"bad weight list in {name!r}") from None
        if len(q) != 4:
            raise ValueError("wps shorthand needs exactly four weights")
        x = wps_fan(q)
    else:
        raise KeyError(f"unknown variety {name!r}; known: {', '.join(NAMES)}, wps:q0,q1,q2,q3")
    _CACHE[name] = x
    return x


def catalog_entries() -> list[dict]:
    out = []
    for n in NAMES:
        x = catalog(n)
        out.append({"name": n, "rays": len(x.rays), "class_group_rank": x.class_group_rank,
                    "named": [k for k, _ in x.named], "class_basis": list(x.class_basis)})
    out.append({"name": "wps:q0,q1,q2,q3", "named": ["eta0", "eta", "H"], "class_basis": ["eta0"]})
    return out


_TERM = re.compile(r"\s*([+-]?)\s*(\d*)\s*\*?\s*([A-Za-z_][A-Za-z0-9_]*)?\s*")


def parse_divisor(x: ToricThreefold, text: str) -> WeilDivisor:
    """Parse a divisor specification.

    Accepted forms: comma-separated ray coefficients (one per ray), class
    coordinates w.r.t. ``x.class_basis`` (one per basis element), or a linear
    expression in named classes such as ``-K-2H`` or ``3eta0 + E``.
    """
    text = text.strip()
    if re.fullmatch(r"-?\d+(\s*,\s*-?\d+)*", text):
        vals = [int(t) for t in text.split(",")]
        if len(vals) == x.n_rays:
            return WeilDivisor(tuple(vals))
        if x.class_basis and len(vals) == len(x.class_basis):
            return x.from_class_coordinates(vals)
        if len(vals) == 1 and not x.class_basis:
            raise ValueError("a bare integer needs a named class basis")
        raise ValueError(
            f"expected {x.n_rays} ray coefficients"
            + (f" or {len(x.class_basis)} class coordinates ({', '.join(x.class_basis)})" if x.class_basis else "")
            + f", got {len(vals)} numbers"
        )
    out = WeilDivisor.zero(x.n_rays)
    pos = 0
    seen = False
    while pos < len(text):
        m = _TERM.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse divisor expression {text!r} at position {pos}")
        sign, coef, name = m.groups()
        if not name:
            raise ValueError(f"missing class name in {text!r}")
        if seen and not sign:
            raise ValueError(f"missing operator before {name!r} in {text!r}")
        k = int(coef) if coef else 1
        k = -k if sign == "-" else k
        out = out + k * x.divisor(name)
        pos = m.end()
        seen = True
    if not seen:
        raise ValueError("empty divisor expression")
    return out


def format_class(x: ToricThreefold, d: WeilDivisor) -> str:
    """Human-readable class, in basis coordinates when the variety has a basis."""
    if not x.class_basis:
        return "(" + ",".join(map(str, d.coeffs)) + ")"
    coords = x.class_coordinates(d)
    parts = []
    for c, b in zip(coords, x.class_basis):
        if c:
            c = int(c) if Fraction(c).denominator == 1 else c
            parts.append(f"{c}*{b}")
    return " + ".join(parts) if parts else "0"
