# %% Lattice polytopes and simplicial homology
# Everything here is exact: integers and fractions only.
from toricnl.geometry import (
    RationalPolyhedron,
    SimplicialComplex,
    lattice_points,
    normalized_volume,
    primitive,
    reduced_betti,
)

print(primitive((2, 4, 6)), primitive((-2, 0, 2)))

# %% A polyhedron is a list of half-spaces <m, n> >= -offset.
# Dilates of the standard simplex count monomials of each degree.
for d in range(1, 5):
    s = RationalPolyhedron.simplex(d)
    print(d, len(lattice_points(s)), normalized_volume(s))

# %% Cut a box by a slanted plane and look at what is left.
box = RationalPolyhedron.box((0, 0, 0), (3, 3, 3))
cut = box.intersect(RationalPolyhedron(((-1, -1, -1),), (4,)))  # x + y + z <= 4
print(cut.vertices)
print(len(lattice_points(cut)), normalized_volume(cut))

# %% Reduced Betti numbers: empty complex, a circle, a 2-sphere.
print(reduced_betti(SimplicialComplex((), ())))
print(reduced_betti(SimplicialComplex((0, 1, 2), ((0, 1), (1, 2), (0, 2)))))
sphere = SimplicialComplex(range(4), ((0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)))
print(reduced_betti(sphere), reduced_betti(sphere.cone(9)))
