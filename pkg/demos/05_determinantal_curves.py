# %% Determinantal curves and the singular locus
from toricnl import catalog, check_avoidance, curve_invariants
from toricnl.detcurve import SectionMatrix, adversarial_matrix, corollary44_check, minor_eval, preset, section_basis

# %% On P^3 the maximal minors of a k x (k-1) matrix of linear forms cut out
# a line, a twisted cubic, a genus 3 sextic, ...
p3 = catalog("P3")
for k in range(2, 7):
    inv = curve_invariants(p3, p3.divisor("H"), k)
    print(k, inv.degree_H, inv.genus)

# %% A random 3 x 2 matrix of sections of eta on P(1,1,2,3) over F_10007
w = catalog("wps:1,1,2,3")
eta = w.divisor("eta")
basis = section_basis(w, eta)
m = SectionMatrix.random(basis, 3, 10007, seed=1)
point = [0, 0, 5, 7]  # on the orbit of the cone {0, 1}
print([minor_eval(m, i, point, debug=True) for i in (1, 2, 3)])

# %% No two minors vanish together on the singular orbits ...
print(check_avoidance(w, eta, 3, 10007, trials=20, seed=1).to_dict()["strata"])

# %% ... unless we build the matrix to fail.
adv = adversarial_matrix(basis, 3, 10007, seed=1, vanish_on=w.singular_cones[0])
print(check_avoidance(w, eta, 3, 10007, trials=2, seed=1, matrices=[adv]).passed)

# %% The cohomological conditions behind the resolution 0 -> E -> F -> J_C -> 0
k, l = preset(p3, p3.divisor("H"), "theorem3", 1)
for c in corollary44_check(p3, l, p3.divisor("H"), k):
    print(c.label, c.verdict)
