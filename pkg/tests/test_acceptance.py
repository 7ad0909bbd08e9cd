"""Acceptance gate: one printed PASS/FAIL line per criterion."""

import math
import random
import time

import pytest

from toricnl.catalog import NAMES, catalog, parse_divisor
from toricnl.checks import (
    LedgerInput,
    is_m_regular,
    lemma41_ledger,
    theorem1_check,
    theorem3_check,
)
from toricnl.cohomology import brute_force_cohomology, cohomology, h0, is_nef, is_very_ample, serre_dual
from toricnl.detcurve import adversarial_matrix, check_avoidance, curve_invariants, section_basis
from toricnl.toric import WeilDivisor, canonical_divisor
from toricnl.wps import UNEXPECTED, family_members, scan

WPS_CATALOG = ("wps:1,1,2,3", "wps:1,1,2,2", "wps:1,2,2,3", "wps:3,3,4,4", "wps:3,3,5,5")
CATALOG = NAMES + WPS_CATALOG


@pytest.fixture
def report(capsys):
    def emit(n: int, ok: bool, summary: str):
        with capsys.disabled():
            print(f"\nACCEPTANCE {n} {'PASS' if ok else 'FAIL'}: {summary}")
    return emit


def test_criterion_1_wps_classification(report):
    t0 = time.perf_counter()
    entries = scan(25)
    elapsed = time.perf_counter() - t0
    found = {e.weights for e in entries}
    expected = family_members(25)
    unexpected = sorted(e.weights for e in entries if e.family == UNEXPECTED)
    missing = sorted(expected - found)
    ok = found == expected and not unexpected and elapsed < 60
    report(1, ok, f"{len(entries)} tuples with delta<sigma, {len(unexpected)} UNEXPECTED "
                  f"(first: {unexpected[:5]}), {len(missing)} listed tuples missing, {elapsed:.1f}s")
    assert elapsed < 60
    assert not missing
    assert not unexpected, f"{len(unexpected)} tuples satisfy delta<sigma outside the listed cases, e.g. {unexpected[:10]}"


def test_criterion_2_paper_example_verdicts(report):
    problems = []
    for name in ("wps:1,1,2,3", "wps:3,3,4,4", "wps:3,3,5,5", "wps:1,2,2,3"):
        x = catalog(name)
        rep = theorem1_check(x, x.divisor("eta"), 2)
        for label in ("(i)", "(ii)", "(iii)"):
            if not rep.condition(label).verdict:
                problems.append(f"{name} {label}")
    for name, h in (("P1xP2", "1,1"), ("P1xP1xP1", "1,1,1")):
        x = catalog(name)
        if not theorem3_check(x, parse_divisor(x, h), 2).passed:
            problems.append(f"theorem3 {name}")
    blow = catalog("BlowupP3Line")
    hb = blow.divisor("H")
    if theorem3_check(blow, hb, 2).condition("-K-2H nef").verdict:
        problems.append("blow-up nef")
    if not is_m_regular(blow, hb, 0).passed:
        problems.append("blow-up 0-regularity")
    if h0(blow, canonical_divisor(blow) + hb) != 0:
        problems.append("blow-up h0(K+H)")
    w = catalog("wps:1,1,1,2")
    rep = theorem3_check(w, w.divisor("eta"), 1)
    if rep.condition("Gorenstein").verdict or not any(n.startswith("DISCREPANCY") for n in rep.notes):
        problems.append("P[1,1,1,2] discrepancy not flagged")
    report(2, not problems, "all example verdicts agree; P[1,1,1,2] Gorenstein discrepancy flagged"
           if not problems else f"mismatches: {problems}")
    assert not problems


def test_criterion_3_classical_codimension(report):
    p3 = catalog("P3")
    h = p3.divisor("H")
    bad = [d for d in range(0, 11)
           if theorem3_check(p3, h, d).codim != math.comb(d + 3, 3) or math.comb(d + 3, 3) != math.comb(d + 4 - 1, 3)]
    report(3, not bad, "theorem3 codim on P3 equals C(d+3,3) for d in 0..10" if not bad else f"bad d: {bad}")
    assert not bad


def test_criterion_4_cohomology_engine(report):
    t0 = time.perf_counter()
    rng = random.Random(20240613)
    failures = []
    samples = nef_count = 0
    for name in CATALOG:
        x = catalog(name)
        for _ in range(100):
            d = WeilDivisor(tuple(rng.randint(-6, 6) for _ in range(x.n_rays)))
            a = cohomology(x, d)
            samples += 1
            if a != brute_force_cohomology(x, d):
                failures.append(("oracle", name, d.coeffs))
            if a.h != cohomology(x, serre_dual(x, d)).h[::-1]:
                failures.append(("serre", name, d.coeffs))
        found = 0
        while found < 50:
            d = WeilDivisor(tuple(rng.randint(-2, 6) for _ in range(x.n_rays)))
            if is_nef(x, d):
                found += 1
                if cohomology(x, d).h[1:] != (0, 0, 0):
                    failures.append(("demazure", name, d.coeffs))
        nef_count += found
    elapsed = time.perf_counter() - t0
    ok = not failures and elapsed < 300
    report(4, ok, f"{samples} random divisors (oracle + Serre), {nef_count} nef divisors (Demazure), "
                  f"{len(failures)} failures, {elapsed:.1f}s")
    assert not failures, failures[:5]
    assert elapsed < 300


def test_criterion_5_ledger_closure(report):
    p3 = catalog("P3")
    h = p3.divisor("H")
    classical = {2: (1, 0), 3: (3, 0), 4: (6, 3), 5: (10, 11)}
    bad = []
    for d in range(0, 6):
        k = d + 2
        inv = curve_invariants(p3, h, k)
        if inv.degree_H != k * (k - 1) // 2 or (k in classical and (inv.degree_H, inv.genus) != classical[k]):
            bad.append((k, inv.degree_H, inv.genus))
        res = lemma41_ledger(LedgerInput(int(d * inv.degree_H), inv.genus, h0(p3, d * h)))
        if not res.passed or res.implied_h1 != 0:
            bad.append((d, res.line))
    report(5, not bad, "P3 curves (1,0),(3,0),(6,3),(10,11),...; ledger h1 = 0 for d in 0..5"
           if not bad else f"mismatches: {bad}")
    assert not bad


def test_criterion_6_avoidance(report):
    seed = 6
    bad = []
    for name in ("wps:1,1,2,3", "wps:1,1,2,2"):
        x = catalog(name)
        eta = x.divisor("eta")
        basis = section_basis(x, eta)
        for k in (2, 3, 4):
            v = check_avoidance(x, eta, k, 10007, 20, seed=seed)
            if not v.passed:
                bad.append(("random", name, k, seed, v.to_dict()))
            for cone in x.singular_cones:
                adv = adversarial_matrix(basis, k, 10007, seed, cone)
                w = check_avoidance(x, eta, k, 10007, 20, seed=seed, matrices=[adv])
                if w.passed:
                    bad.append(("adversarial undetected", name, k, cone))
    report(6, not bad, "random matrices avoid Sing(X) in all 20 trials (seed 6); adversarial equal rows always caught"
           if not bad else f"{len(bad)} problems (seed {seed}): {bad[:3]}")
    assert not bad


def _very_ample_divisors(x, n, rng):
    out = []
    while len(out) < n:
        d = WeilDivisor(tuple(rng.randint(0, 3) for _ in range(x.n_rays)))
        if is_very_ample(x, d):
            out.append(d)
    return out


def test_criterion_7_regularity_equivalences(report):
    rng = random.Random(7)
    bad = []
    checked = 0
    for name in CATALOG:
        x = catalog(name)
        o = WeilDivisor.zero(x.n_rays)
        h1_o = cohomology(x, o)[1]
        for h in [x.divisor("H")] + _very_ample_divisors(x, 20, rng):
            checked += 1
            zero_reg = is_m_regular(x, h, 0).passed
            if zero_reg != (h1_o == 0 and h0(x, canonical_divisor(x) + 2 * h) == 0):
                bad.append(("0-regular", name, h.coeffs))
            rep = theorem1_check(x, h, 2)
            i_to_iii = all(rep.condition(p).verdict for p in ("(i)", "(ii)", "(iii)"))
            if i_to_iii != (is_m_regular(x, h, 1).passed and h1_o == 0):
                bad.append(("1-regular", name, h.coeffs))
    report(7, not bad, f"both equivalences exact on {checked} (variety, very ample H) pairs"
           if not bad else f"mismatches: {bad[:5]}")
    assert not bad
