import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from toricnl.geometry import (
    RationalPolyhedron,
    SimplicialComplex,
    hull_normalized_volume,
    lattice_points,
    minkowski_sum,
    normalized_volume,
    primitive,
    reduced_betti,
)


# primitive -------------------------------------------------------------------

@pytest.mark.parametrize("v, expected", [((2, 4, 6), (1, 2, 3)), ((0, 0, 5), (0, 0, 1)), ((-2, 0, 2), (-1, 0, 1))])
def test_primitive_examples(v, expected):
    assert primitive(v) == expected


def test_primitive_rejects_zero():
    with pytest.raises(ValueError, match="zero vector has no primitive representative"):
        primitive((0, 0, 0))


@given(st.tuples(*[st.integers(-50, 50)] * 3).filter(any), st.integers(1, 9))
def test_primitive_of_multiple(v, k):
    p = primitive(tuple(k * c for c in v))
    assert p == primitive(v)
    # parallel and same orientation
    ratios = {Fraction(a, b) for a, b in zip(v, p) if b}
    assert len(ratios) == 1 and ratios.pop() > 0


# lattice points and volumes -------------------------------------------------------

def _brute_count(p: RationalPolyhedron, r: int = 12) -> list:
    return [m for m in itertools.product(range(-r, r + 1), repeat=3) if p.contains(m)]


def test_simplex_points():
    assert len(lattice_points(RationalPolyhedron.simplex())) == 4
    assert len(lattice_points(RationalPolyhedron.simplex(2))) == 10


def test_halfspace_is_unbounded():
    with pytest.raises(ValueError, match="polyhedron unbounded"):
        lattice_points(RationalPolyhedron(((1, 0, 0),), (0,)))
    with pytest.raises(ValueError, match="polyhedron unbounded"):
        normalized_volume(RationalPolyhedron(((1, 0, 0),), (0,)))


def test_points_are_lexicographic_and_unique():
    pts = lattice_points(RationalPolyhedron.simplex(3))
    assert pts == sorted(set(pts))


@pytest.mark.parametrize("d", [1, 2, 3, 5])
def test_simplex_volume(d):
    assert normalized_volume(RationalPolyhedron.simplex(d)) == d ** 3


def test_lower_dimensional_volume_is_zero():
    flat = RationalPolyhedron.box((0, 0, 0), (3, 2, 0))
    assert normalized_volume(flat) == 0
    assert len(lattice_points(flat)) == 12


def test_empty_polyhedron():
    p = RationalPolyhedron(((1, 0, 0), (-1, 0, 0)), (-1, 0))  # x >= 1 and x <= 0
    assert p.is_empty
    assert lattice_points(p) == []


@st.composite
def bounded_polytopes(draw):
    """Random bounded polyhedra: a box cut by a few extra half-spaces."""
    lo = [draw(st.integers(-4, 0)) for _ in range(3)]
    hi = [draw(st.integers(0, 4)) for _ in range(3)]
    box = RationalPolyhedron.box(lo, hi)
    extra = draw(st.lists(st.tuples(st.tuples(*[st.integers(-3, 3)] * 3).filter(any), st.integers(0, 6)), max_size=3))
    return box.intersect(RationalPolyhedron(tuple(n for n, _ in extra), tuple(o for _, o in extra)))


@given(bounded_polytopes())
def test_lattice_points_match_brute_force(p):
    assert lattice_points(p) == _brute_count(p)


@given(bounded_polytopes(), st.tuples(*[st.integers(-7, 7)] * 3))
def test_translation_invariance(p, t):
    assert len(lattice_points(p.translate(t))) == len(lattice_points(p))


def _random_unimodular(rng):
    m = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    for _ in range(6):
        i, j = rng.sample(range(3), 2)
        k = rng.choice([-2, -1, 1, 2])
        m[i] = [a + k * b for a, b in zip(m[i], m[j])]
    return m


@given(bounded_polytopes(), st.integers(0, 10 ** 6))
def test_volume_unimodular_invariance(p, seed):
    t = _random_unimodular(random.Random(seed))
    assert normalized_volume(p.transform(t)) == normalized_volume(p)
    assert len(lattice_points(p.transform(t))) == len(lattice_points(p))


def test_volume_additive_under_subdivision():
    # cut the cube [0,2]^3 by x <= y into two pieces
    cube = RationalPolyhedron.box((0, 0, 0), (2, 2, 2))
    a = cube.intersect(RationalPolyhedron(((-1, 1, 0),), (0,)))
    b = cube.intersect(RationalPolyhedron(((1, -1, 0),), (0,)))
    assert normalized_volume(a) + normalized_volume(b) == normalized_volume(cube) == 48


def test_hull_volume_matches_polyhedron_volume():
    verts = [(0, 0, 0), (2, 0, 0), (0, 3, 0), (0, 0, 1), (2, 3, 1)]
    pts = [tuple(Fraction(c) for c in v) for v in verts]
    assert hull_normalized_volume(pts) > 0
    assert normalized_volume(RationalPolyhedron.box((0, 0, 0), (2, 3, 1))) == 36


def test_minkowski_sum_of_simplices():
    s = RationalPolyhedron.simplex(1)
    assert normalized_volume(minkowski_sum(s, RationalPolyhedron.simplex(2))) == 27


# simplicial homology ----------------------------------------------------------------

def test_betti_examples():
    assert reduced_betti(SimplicialComplex((), ())) == (1, 0, 0, 0)
    assert reduced_betti(SimplicialComplex((0,), ((0,),))) == (0, 0, 0, 0)
    assert reduced_betti(SimplicialComplex((0, 1, 2), ((0, 1), (1, 2), (0, 2)))) == (0, 0, 1, 0)


def test_betti_sphere_and_two_points():
    tet = list(itertools.combinations(range(4), 3))
    assert reduced_betti(SimplicialComplex(range(4), tet)) == (0, 0, 0, 1)
    assert reduced_betti(SimplicialComplex((0, 1), ((0,), (1,))))[:2] == (0, 1)


def test_unknown_vertex_rejected():
    with pytest.raises(ValueError, match="unknown vertex"):
        SimplicialComplex((0, 1), ((0, 2),))


@st.composite
def complexes(draw):
    n = draw(st.integers(1, 6))
    facets = draw(st.lists(st.sets(st.integers(0, n - 1), min_size=1, max_size=4), max_size=8))
    return SimplicialComplex(tuple(range(n)), tuple(tuple(sorted(f)) for f in facets))


@given(complexes())
def test_cone_is_contractible(k):
    assert all(b == 0 for b in reduced_betti(k.cone(100)))


@given(complexes())
def test_euler_characteristic_consistency(k):
    betti = reduced_betti(k)
    from_betti = sum((-1) ** (i - 1) * b for i, b in enumerate(betti))
    counts = k.face_counts()
    from_faces = sum((-1) ** i * c for i, c in enumerate(counts)) - 1
    assert from_betti == from_faces
