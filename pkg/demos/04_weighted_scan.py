# %% Which weighted projective 3-spaces have lcm(q) < sum(q)?
from collections import Counter

from toricnl.wps import UNEXPECTED, delta_sigma, scan

print(delta_sigma((1, 1, 2, 3)), delta_sigma((1, 1, 2, 5)))

# %% Scan all well-formed weights up to 25 and tally the family tags.
entries = scan(25)
print(len(entries), Counter(e.family for e in entries))

# %% Tuples outside the three infinite families and four sporadic cases
odd = [e.weights for e in entries if e.family == UNEXPECTED]
print(len(odd))
print(odd[:20])
