import json
import random
import threading
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

import oracles
from toricnl.catalog import catalog, parse_divisor
from toricnl.cohomology import (
    CohomologyCache,
    CohomologyTable,
    brute_force_cohomology,
    cohomology,
    euler_char,
    h0,
    is_ample,
    is_globally_generated,
    is_nef,
    is_very_ample,
    serre_dual,
    sheaf_generated_by_sections,
    triple_intersection,
)
from toricnl.toric import WeilDivisor, canonical_divisor

coeff = st.integers(-6, 6)


def _div(x, text):
    return parse_divisor(x, text)


# positivity ------------------------------------------------------------------------

def test_hyperplane_on_p3_is_ample():
    x = catalog("P3")
    h = x.divisor("H")
    assert is_ample(x, h) and is_nef(x, h) and is_globally_generated(x, h) and is_very_ample(x, h)


def test_p1xp2_minus_k_minus_2h():
    x = catalog("P1xP2")
    d = -canonical_divisor(x) - 2 * x.divisor("H")
    assert x.class_coordinates(d) == (0, 1)
    assert is_nef(x, d)
    assert not is_ample(x, d)


def test_blowup_minus_k_minus_2h_not_nef():
    x = catalog("BlowupP3Line")
    d = -canonical_divisor(x) - 2 * x.divisor("H")
    v = is_nef(x, d)
    assert not v
    assert "ray" in v.witness


def test_blowup_nef_cone_generators():
    x = catalog("BlowupP3Line")
    for name in ("eta1", "eta2"):
        d = x.divisor(name)
        assert is_nef(x, d) and not is_ample(x, d)
    assert not is_nef(x, x.divisor("E"))
    assert is_ample(x, x.divisor("H"))


@pytest.mark.parametrize("name", ["P3", "P1xP1xP1", "P1xP2", "BlowupP3Line"])
def test_cartier_gg_equals_nef(name, rng):
    # on smooth varieties every divisor is Cartier and gg <=> nef
    x = catalog(name)
    for _ in range(60):
        d = WeilDivisor(tuple(rng.randint(-3, 3) for _ in range(x.n_rays)))
        assert bool(is_globally_generated(x, d)) == bool(is_nef(x, d))
        assert bool(sheaf_generated_by_sections(x, d)) == bool(is_nef(x, d))


@pytest.mark.parametrize("q", ["1,1,2,3", "1,1,2,2", "3,3,4,4", "1,2,2,3"])
def test_eta_very_ample_on_wps(q):
    x = catalog("wps:" + q)
    assert is_very_ample(x, x.divisor("eta"))


def test_very_ample_rejects_non_very_ample():
    # eta0 on P(1,1,2,3) is not even Cartier
    x = catalog("wps:1,1,2,3")
    assert not is_very_ample(x, x.divisor("eta0"))


@pytest.mark.parametrize("q", ["1,1,2,3", "1,1,2,2", "3,3,4,4", "3,3,5,5", "1,2,2,3", "1,1,1,2"])
def test_vertex_and_sheaf_generation_on_wps_multiples(q):
    """Vertex criterion implies sheaf-level generation, and both agree on Cartier classes."""
    x = catalog("wps:" + q)
    eta0 = x.divisor("eta0")
    delta = x.class_coordinates(x.divisor("eta"))[0]
    for c in range(-3, 13):
        vert = bool(is_globally_generated(x, c * eta0))
        sheaf = bool(sheaf_generated_by_sections(x, c * eta0))
        if vert:
            assert sheaf
        if c % delta == 0:
            assert vert == sheaf == (c >= 0)


def test_nef_rejects_nothing_on_simplicial():
    # every Weil divisor on a simplicial fan is Q-Cartier, so no error
    x = catalog("wps:1,1,2,3")
    assert is_nef(x, x.divisor("eta0"))


# h0 ----------------------------------------------------------------------------------

@pytest.mark.parametrize("d", range(0, 8))
def test_h0_p3(d):
    x = catalog("P3")
    assert h0(x, d * x.divisor("H")) == oracles.pn(3, d)[0]


def test_h0_wps_omega_eta():
    x = catalog("wps:1,1,2,3")
    assert h0(x, canonical_divisor(x) + x.divisor("eta")) == 0


@pytest.mark.parametrize("d", range(0, 6))
def test_h0_p1_cubed(d):
    x = catalog("P1xP1xP1")
    assert h0(x, d * x.divisor("H")) == (d + 1) ** 3


# cohomology tables -------------------------------------------------------------------

def test_cohomology_examples():
    p3 = catalog("P3")
    assert cohomology(p3, _div(p3, "-4H")).h == (0, 0, 0, 1)
    assert cohomology(p3, _div(p3, "H")).h == (4, 0, 0, 0)
    x = catalog("P1xP1xP1")
    assert cohomology(x, WeilDivisor((-2, 0, 0, 0, 0, 0))).h == (0, 1, 0, 0)


def test_euler_examples():
    p3 = catalog("P3")
    assert [euler_char(p3, _div(p3, f"{a}H")) for a in (-2, -4, 2)] == [0, -1, 10]


def test_table_invariants():
    t = CohomologyTable((3, 1, 4, 1))
    assert t.chi == 5
    with pytest.raises(ValueError):
        CohomologyTable((1, -1, 0, 0))


@given(st.integers(-9, 9))
def test_p3_matches_closed_form(a):
    x = catalog("P3")
    assert cohomology(x, WeilDivisor((a, 0, 0, 0))).h == oracles.pn(3, a)


@given(st.tuples(*[coeff] * 6))
def test_p1_cubed_matches_kunneth(c):
    x = catalog("P1xP1xP1")
    expect = oracles.kunneth(*(oracles.pn(1, c[2 * i] + c[2 * i + 1]) for i in range(3)))
    assert cohomology(x, WeilDivisor(c)).h == expect


@given(st.tuples(*[coeff] * 5))
def test_p1xp2_matches_kunneth(c):
    x = catalog("P1xP2")
    expect = oracles.kunneth(oracles.pn(1, c[0] + c[1]), oracles.pn(2, c[2] + c[3] + c[4]))
    assert cohomology(x, WeilDivisor(c)).h == expect


@pytest.mark.parametrize("q", [(1, 1, 2, 3), (1, 1, 2, 2), (3, 3, 4, 4), (1, 2, 2, 3), (2, 3, 5, 7)])
def test_wps_matches_monomial_count(q):
    x = catalog("wps:" + ",".join(map(str, q)))
    eta0 = x.divisor("eta0")
    for c in range(-25, 15):
        assert cohomology(x, c * eta0).h == oracles.wps(q, c), c


# invariants ----------------------------------------------------------------------------

def _random_divisors(x, n, seed, lo=-6, hi=6):
    rng = random.Random(seed)
    return [WeilDivisor(tuple(rng.randint(lo, hi) for _ in range(x.n_rays))) for _ in range(n)]


def test_h0_agreement(variety):
    for d in _random_divisors(variety, 30, 1):
        assert cohomology(variety, d)[0] == h0(variety, d)


def test_serre_duality(variety):
    for d in _random_divisors(variety, 40, 2):
        assert cohomology(variety, d).h == cohomology(variety, serre_dual(variety, d)).h[::-1]


def test_brute_force_oracle(variety):
    for d in _random_divisors(variety, 25, 3):
        assert cohomology(variety, d) == brute_force_cohomology(variety, d)


def test_demazure_vanishing(variety):
    rng = random.Random(4)
    found = 0
    while found < 15:
        d = WeilDivisor(tuple(rng.randint(-2, 4) for _ in range(variety.n_rays)))
        if is_nef(variety, d):
            found += 1
            assert cohomology(variety, d).h[1:] == (0, 0, 0)


def test_chi_is_cubic_along_ample_line(variety):
    h = variety.divisor("H")
    for d in _random_divisors(variety, 4, 5, -3, 3):
        ts = list(range(-3, 3))
        ys = [euler_char(variety, d + t * h) for t in ts]
        # Lagrange interpolation through the first five points predicts the sixth
        pred = Fraction(0)
        for i in range(5):
            term = Fraction(ys[i])
            for j in range(5):
                if j != i:
                    term *= Fraction(ts[5] - ts[j], ts[i] - ts[j])
            pred += term
        assert pred == ys[5]


# intersections -------------------------------------------------------------------------

def test_triple_intersection_examples():
    p3 = catalog("P3")
    h = p3.divisor("H")
    assert triple_intersection(p3, h, h, h) == 1
    x = catalog("P1xP2")
    h = x.divisor("H")
    assert triple_intersection(x, h, h, h) == 3
    w = catalog("wps:1,1,2,3")
    eta = w.divisor("eta")
    assert triple_intersection(w, eta, eta, eta) == 36 == Fraction(6 ** 3, 1 * 1 * 2 * 3)


def test_triple_intersection_mixed():
    x = catalog("P1xP1xP1")
    h1, h2, h3 = (x.divisor(n) for n in ("H1", "H2", "H3"))
    assert triple_intersection(x, h1, h2, h3) == 1
    assert triple_intersection(x, h1, h1, h2) == 0


def test_triple_intersection_rejects_non_nef():
    x = catalog("BlowupP3Line")
    e = x.divisor("E")
    with pytest.raises(ValueError, match="not nef Cartier"):
        triple_intersection(x, e, e, e)


def test_triple_intersection_matches_volume_on_wps():
    from toricnl.geometry import normalized_volume

    for q in ("1,1,2,2", "3,3,4,4"):
        x = catalog("wps:" + q)
        eta = x.divisor("eta")
        assert triple_intersection(x, eta, eta, eta) == normalized_volume(x.section_polytope(eta))


# persistent cache ---------------------------------------------------------------------------

def test_cache_round_trip(tmp_path):
    x = catalog("P3")
    d = WeilDivisor((-5, 0, 0, 0))
    cache = CohomologyCache(tmp_path)
    first = cohomology(x, d, cache=cache)
    stored = json.loads((tmp_path / "cohomology.json").read_text())
    assert list(stored.values()) == [list(first.h)]
    assert CohomologyCache(tmp_path).get(x, d) == first


def test_cache_corruption_recomputes(tmp_path):
    x = catalog("P3")
    d = WeilDivisor((2, 0, 0, 0))
    (tmp_path / "cohomology.json").write_text("{not json")
    assert cohomology(x, d, cache=CohomologyCache(tmp_path)).h == (10, 0, 0, 0)
    # a poisoned entry with the right key but a bad shape is ignored too
    key = CohomologyCache.key(x, d)
    (tmp_path / "cohomology.json").write_text(json.dumps({key: [1, 2]}))
    assert cohomology(x, d, cache=CohomologyCache(tmp_path)).h == (10, 0, 0, 0)


def test_cache_concurrent_writers(tmp_path):
    x = catalog("P1xP2")
    divisors = [WeilDivisor((a, 0, b, 0, 0)) for a in range(-3, 3) for b in range(-4, 2)]

    def work(chunk):
        cache = CohomologyCache(tmp_path)
        for d in chunk:
            cohomology(x, d, cache=cache)

    threads = [threading.Thread(target=work, args=(divisors[i::4],)) for i in range(4)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    stored = json.loads((tmp_path / "cohomology.json").read_text())
    assert len(stored) == len(divisors)
