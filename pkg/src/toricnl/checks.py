"""Hypothesis checkers for Noether-Lefschetz statements on toric threefolds.

Every checker returns a :class:`HypothesisReport`.  Reports are total: each
condition is evaluated on its own and carries evidence when it fails, and a
codimension is only attached when every condition holds.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any

from .cohomology import (
    CohomologyTable,
    cohomology,
    h0,
    is_globally_generated,
    is_nef,
    is_very_ample,
    sheaf_generated_by_sections,
)
from .toric import ToricThreefold, Verdict, WeilDivisor, canonical_divisor, is_gorenstein, is_qfactorial

SCHEMA_VERSION = 1

# Verdicts asserted in the literature for specific varieties, keyed by sorted
# weights; the checkers compare their own answer and flag any disagreement.
KNOWN_CLAIMS: dict[tuple[int, ...], dict[str, bool]] = {
    (1, 1, 1, 2): {"gorenstein": True},
    (1, 1, 2, 2): {"gorenstein": True},
}


@dataclass(frozen=True)
class Condition:
    label: str
    verdict: bool
    witness: Any = None
    detail: str = ""

    def to_dict(self) -> dict:
        return {"label": self.label, "verdict": self.verdict, "witness": self.witness, "detail": self.detail}


@dataclass
class HypothesisReport:
    theorem_id: str
    variety: str
    conditions: list[Condition] = field(default_factory=list)
    codim: int | None = None
    bounds: dict | None = None
    notes: list[str] = field(default_factory=list)
    flags: dict[str, bool] = field(default_factory=dict)
    values: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        for c in self.conditions:
            if not c.verdict and c.witness is None:
                raise ValueError(f"failed condition {c.label!r} has no witness")
        if self.codim is not None and not self.passed:
            raise ValueError("a codimension is only defined when every hypothesis holds")

    @property
    def passed(self) -> bool:
        return all(c.verdict for c in self.conditions)

    def condition(self, label_prefix: str) -> Condition:
        for c in self.conditions:
            if c.label.startswith(label_prefix):
                return c
        raise KeyError(label_prefix)

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "theorem_id": self.theorem_id,
            "variety": self.variety,
            "passed": self.passed,
            "conditions": [c.to_dict() for c in self.conditions],
            "codim": self.codim,
            "bounds": self.bounds,
            "flags": self.flags,
            "values": self.values,
            "notes": list(self.notes),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    def to_markdown(self) -> str:
        lines = [f"## {self.theorem_id} on `{self.variety}`", "",
                 f"**Result:** {'all hypotheses hold' if self.passed else 'some hypotheses fail'}", "",
                 "| condition | verdict | witness |", "|---|---|---|"]
        for c in self.conditions:
            w = "" if c.witness is None else json.dumps(c.witness, sort_keys=True)
            lines.append(f"| {c.label} | {'pass' if c.verdict else 'FAIL'} | {w} |")
        lines.append("")
        if self.codim is not None:
            lines.append(f"**Codimension:** {self.codim}")
        if self.bounds is not None:
            lines.append(f"**Bounds:** {self.bounds['lower']} <= codim <= {self.bounds['upper']}"
                         + (" (conditional)" if self.bounds.get("conditional") else ""))
        for k, v in self.values.items():
            lines.append(f"- {k}: {v}")
        for k, v in self.flags.items():
            lines.append(f"- flag `{k}`: {v}")
        for n in self.notes:
            lines.append(f"> {n}")
        return "\n".join(lines) + "\n"


# helpers ---------------------------------------------------------------------


def _coh(x: ToricThreefold, d: WeilDivisor) -> CohomologyTable:
    return cohomology(x, d)


def _vanishing(x: ToricThreefold, label: str, parts: list[tuple[WeilDivisor, str, tuple[int, ...]]]) -> Condition:
    """Condition that ``h^i(D) = 0`` for each (divisor, description, degrees) triple."""
    bad = []
    for d, desc, degrees in parts:
        t = _coh(x, d)
        for i in degrees:
            if t[i] != 0:
                bad.append({"divisor": desc, "coeffs": list(d.coeffs), "degree": i, "h": t[i], "table": list(t.h)})
    return Condition(label, not bad, bad or None)


def _from_verdict(label: str, v: Verdict) -> Condition:
    witness = v.witness if v.witness is not None or v.holds else {"detail": v.detail}
    return Condition(label, v.holds, witness if not v.holds else None, v.detail)


def _very_ample_condition(x: ToricThreefold, h: WeilDivisor) -> Condition:
    try:
        v = is_very_ample(x, h)
    except ValueError as exc:
        return Condition("H very ample", False, {"error": str(exc)})
    return _from_verdict("H very ample", v)


def _weights_of(x: ToricThreefold) -> tuple[int, ...] | None:
    if x.name.startswith("wps:"):
        return tuple(sorted(int(t) for t in x.name[4:].split(",")))
    return None


def claim_discrepancies(x: ToricThreefold) -> list[str]:
    """Notes for every recorded literature claim that the computation contradicts."""
    q = _weights_of(x)
    if q is None or q not in KNOWN_CLAIMS:
        return []
    notes = []
    claims = KNOWN_CLAIMS[q]
    if "gorenstein" in claims:
        g = is_gorenstein(x)
        if g.holds != claims["gorenstein"]:
            sigma = sum(q)
            bad = [w for w in q if sigma % w]
            notes.append(
                f"DISCREPANCY: literature claim says {x.name} is "
                f"{'Gorenstein' if claims['gorenstein'] else 'not Gorenstein'}; computed verdict: "
                f"{'Gorenstein' if g.holds else 'not Gorenstein'}"
                + (f" (weights {bad} do not divide sigma={sigma})" if bad else "")
            )
    return notes


# regularity --------------------------------------------------------------------


def is_m_regular(x: ToricThreefold, h: WeilDivisor, m: int) -> HypothesisReport:
    """Castelnuovo-Mumford regularity of ``O_X`` with respect to ``H``."""
    conds = [
        _vanishing(x, f"h^{q}(({m + 1 - q})H) = 0", [((m + 1 - q) * h, f"({m + 1 - q})H", (q,))])
        for q in (1, 2, 3)
    ]
    rep = HypothesisReport("regularity", x.name, conds, values={"m": m})
    va = _very_ample_condition(x, h)
    if not va.verdict:
        rep.notes.append("warning: H is not certified very ample; regularity evaluated anyway")
    return rep


# theorem-level checks ------------------------------------------------------------


def theorem1_check(x: ToricThreefold, h: WeilDivisor, d: int) -> HypothesisReport:
    """Hypotheses (i)-(iv) for a component ``W(dH)`` and its codimension ``h^0(K + dH)``."""
    if d < 2:
        raise ValueError("theorem1 requires d >= 2")
    k = canonical_divisor(x)
    o = WeilDivisor.zero(x.n_rays)
    conds = [
        _very_ample_condition(x, h),
        _vanishing(x, "(i) h^i(O) = 0 for i > 0", [(o, "O", (1, 2, 3))]),
        _vanishing(x, "(ii) h^1(H) = 0", [(h, "H", (1,))]),
        _vanishing(x, "(iii) h^0(K+H) = 0", [(k + h, "K+H", (0,))]),
    ]
    kd = k + d * h
    gg = is_globally_generated(x, kd)
    conds.append(_from_verdict(f"(iv) K+{d}H globally generated", gg))
    notes = []
    sheaf = sheaf_generated_by_sections(x, kd)
    if sheaf.holds != gg.holds:
        notes.append(
            f"note: vertex criterion says K+{d}H is {'' if gg.holds else 'not '}globally generated, "
            f"while the chart-by-chart surjectivity check says it is {'' if sheaf.holds else 'not '}"
            "generated by sections; the verdict uses the vertex criterion"
        )
    rep = HypothesisReport("theorem1", x.name, conds, notes=notes + claim_discrepancies(x),
                           values={"d": d, "h0(K+dH)": h0(x, kd)})
    if rep.passed:
        rep.codim = h0(x, kd)
    return rep


def theorem3_check(x: ToricThreefold, h: WeilDivisor, d: int) -> HypothesisReport:
    """Toric hypotheses for ``W(d)`` in ``|-K + dH|`` and its codimension ``h^0(dH)``."""
    if d < 0:
        raise ValueError("theorem3 requires d >= 0")
    k = canonical_divisor(x)
    conds = [
        _from_verdict("simplicial", is_qfactorial(x)),
        _from_verdict("Gorenstein", is_gorenstein(x)),
        _very_ample_condition(x, h),
    ]
    try:
        nef = is_nef(x, -k - 2 * h)
        conds.append(_from_verdict("-K-2H nef", nef))
    except ValueError as exc:
        conds.append(Condition("-K-2H nef", False, {"error": str(exc)}))
    rep = HypothesisReport("theorem3", x.name, conds, notes=claim_discrepancies(x),
                           values={"d": d, "h0(dH)": h0(x, d * h)})
    if rep.passed:
        rep.codim = h0(x, d * h)
    return rep


def anticanonical_is_twice(x: ToricThreefold, h: WeilDivisor) -> dict[str, bool]:
    """Whether ``-K = 2H`` integrally in ``Cl(X)`` and numerically in ``Cl(X) (x) Q``."""
    k = canonical_divisor(x)
    return {"integral": x.linearly_equivalent(-k, 2 * h), "rational": x.numerically_equivalent(-k, 2 * h)}


def corollary4_bounds(x: ToricThreefold, h: WeilDivisor, d: int) -> HypothesisReport:
    """``d <= codim NL(-K + dH) <= h^0(dH)`` with its provisos."""
    base = theorem3_check(x, h, d)
    eq = anticanonical_is_twice(x, h)
    conds = list(base.conditions)
    conds.append(Condition("-K != 2H", not eq["integral"],
                           None if not eq["integral"] else {"class": "-K = 2H", **eq}))
    conds.append(Condition("d >= 3", d >= 3, None if d >= 3 else {"d": d}))
    not_applicable = eq["integral"] or d < 3
    upper = h0(x, d * h)
    rep = HypothesisReport(
        "corollary4", x.name, conds,
        bounds={"lower": d, "upper": upper, "conditional": not_applicable},
        flags={"minus_K_equals_2H": eq["integral"], "minus_K_equals_2H_rational": eq["rational"],
               "d_below_3": d < 3, "not_applicable": not_applicable},
        notes=list(base.notes), values={"d": d},
    )
    return rep


def codim_upper_bound(x: ToricThreefold, l: WeilDivisor) -> int:
    """``h^0(K+L) + h^2(O) - h^3(O)``."""
    o = _coh(x, WeilDivisor.zero(x.n_rays))
    return h0(x, canonical_divisor(x) + l) + o[2] - o[3]


def codim_bound_report(x: ToricThreefold, l: WeilDivisor) -> HypothesisReport:
    kl = canonical_divisor(x) + l
    value = codim_upper_bound(x, l)
    rep = HypothesisReport("codim-bound", x.name, [], bounds={"lower": None, "upper": value, "conditional": False},
                           values={"h0(K+L)": h0(x, kl)})
    if not is_globally_generated(x, kl):
        rep.bounds["conditional"] = True
        rep.notes.append("warning: K+L is not globally generated; the bound assumes it is")
    return rep


# Riemann-Roch ledger ----------------------------------------------------------------


@dataclass(frozen=True)
class LedgerInput:
    deg_omegaL_C: int
    genus: int
    h0_target: int

    def __post_init__(self):
        if self.genus < 0 or self.h0_target < 0:
            raise ValueError("genus and h0_target must be non-negative")


@dataclass(frozen=True)
class LedgerResult:
    implied_h1: int
    passed: bool
    line: str

    def to_dict(self) -> dict:
        return {"implied_h1": self.implied_h1, "pass": self.passed, "line": self.line}


def lemma41_ledger(inp: LedgerInput) -> LedgerResult:
    """Riemann-Roch on the curve: ``h^0 = deg - g + 1 + h^1`` solved for ``h^1``."""
    rr = inp.deg_omegaL_C - inp.genus + 1
    h1 = inp.h0_target - rr
    line = f"{inp.deg_omegaL_C} - {inp.genus} + 1 + h1 = {inp.h0_target}  =>  h1 = {h1}"
    return LedgerResult(h1, h1 >= 0, line)


def binomial_codim(d: int) -> int:
    """Classical maximal codimension ``C(s-1, 3)`` for surfaces of degree ``s = d + 4`` in P^3."""
    return math.comb(d + 3, 3)
