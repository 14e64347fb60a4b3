"""
Extremal hosts and the exact solver
===================================

The H3 family sits just below the degree threshold and has no loose
Hamilton cycle. The exact solver confirms that for small n, and finds
cycles in random hosts once they are dense enough.
"""

# %%
from math import comb

import numpy as np

from loosehc import exact_loose_hc, make_complete, make_H3, validate_loose_cycle
from loosehc.constructions import random_binomial

# %%
# minimum degree of H3(n) against C(n, 2); the ratio creeps toward 7/16
for n in (8, 12, 16, 20, 40, 80):
    H = make_H3(n)
    print(n, H.min_degree(1), round(H.min_degree(1) / comb(n, 2), 4))
print("7/16 =", 7 / 16)

# %%
for n in (8, 10, 12):
    print("H3", n, exact_loose_hc(make_H3(n)))

K = make_complete(12)
C = exact_loose_hc(K)
print(C.order, validate_loose_cycle(K, C, hamilton=True))

# %%
# frequency of a loose Hamilton cycle in G(n=10, p)
ps = np.linspace(0.1, 0.6, 6)
for p in ps:
    hits = sum(exact_loose_hc(random_binomial(10, float(p), s)) is not None for s in range(20))
    print(f"p={p:.1f} {hits}/20")
