# %% Line bundle cohomology on toric threefolds
from toricnl import catalog, cohomology, euler_char, h0, parse_divisor, triple_intersection
from toricnl.cohomology import brute_force_cohomology, is_ample, is_nef
from toricnl.toric import canonical_divisor, is_gorenstein, is_smooth

# %% The builtin varieties and their class groups
for name in ("P3", "P1xP1xP1", "P1xP2", "BlowupP3Line", "wps:1,1,2,3"):
    x = catalog(name)
    print(name, "rays:", x.n_rays, "Cl rank:", x.class_group_rank,
          "smooth:", bool(is_smooth(x)), "Gorenstein:", bool(is_gorenstein(x)))

# %% Cohomology of O(a) on P^3: sections for a >= 0, top cohomology for a <= -4.
p3 = catalog("P3")
for a in range(-6, 3):
    t = cohomology(p3, parse_divisor(p3, f"{a}H"))
    print(a, t.h, t.chi)

# %% A divisor with middle cohomology: O(-2, 0, 0) on P1 x P1 x P1
x = catalog("P1xP1xP1")
d = parse_divisor(x, "-2,0,0")
print(cohomology(x, d).h, brute_force_cohomology(x, d).h)

# %% Positivity on the blow-up of P^3 along a line
b = catalog("BlowupP3Line")
for expr in ("eta1", "eta2", "E", "H", "-K-2H"):
    dv = parse_divisor(b, expr)
    nef = is_nef(b, dv)
    print(f"{expr:6s} nef={bool(nef)} ample={bool(is_ample(b, dv))} witness={nef.witness}")

# %% Intersection numbers from mixed volumes
w = catalog("wps:1,1,2,3")
eta = w.divisor("eta")
print("eta^3 =", triple_intersection(w, eta, eta, eta), " h0(eta) =", h0(w, eta))
print("chi along K + t*eta:", [euler_char(w, canonical_divisor(w) + t * eta) for t in range(5)])
