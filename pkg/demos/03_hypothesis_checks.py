# %% Checking Noether-Lefschetz hypotheses
from toricnl import catalog, corollary4_bounds, is_m_regular, parse_divisor, theorem1_check, theorem3_check
from toricnl.checks import codim_upper_bound

# %% Quartic surfaces in P^3: all four conditions hold and the codimension is 1.
p3 = catalog("P3")
print(theorem1_check(p3, p3.divisor("H"), 4).to_markdown())

# %% Weighted projective spaces: (i)-(iii) decide via lcm < sum of the weights.
for q in ("1,1,2,3", "3,3,4,4", "1,1,2,5"):
    x = catalog("wps:" + q)
    rep = theorem1_check(x, x.divisor("eta"), 2)
    print(q, [(c.label, c.verdict) for c in rep.conditions])

# %% The anticanonical family: P1 x P2 passes, the blow-up fails on nefness.
for name, h in (("P1xP2", "1,1"), ("BlowupP3Line", "H")):
    x = catalog(name)
    print(theorem3_check(x, parse_divisor(x, h), 3).to_markdown())

# %% Bounds and their provisos
x = catalog("P1xP1xP1")
rep = corollary4_bounds(x, parse_divisor(x, "1,1,1"), 3)
print(rep.bounds, rep.flags)

# %% Castelnuovo-Mumford regularity
for m in (-2, -1, 0, 1):
    print(m, is_m_regular(x, parse_divisor(x, "1,1,1"), m).passed)

# %% The upper bound h0(K+L) + h2(O) - h3(O)
print([codim_upper_bound(p3, parse_divisor(p3, f"{s}H")) for s in range(4, 9)])

# %% A recorded literature claim that the computation contradicts
w = catalog("wps:1,1,1,2")
print(theorem3_check(w, w.divisor("eta"), 1).notes)
