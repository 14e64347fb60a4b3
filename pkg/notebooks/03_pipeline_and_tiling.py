"""
The absorbing pipeline end to end
=================================

Absorbing path, reservoir, path tiling, connections, absorption. On dense
hosts the pipeline closes a loose Hamilton cycle. On H3 it stops at a
named stage.
"""

# %%
import time
from math import comb

from loosehc import assemble_hamilton_cycle, make_complete, make_H3, path_tile
from loosehc.constructions import random_min_degree
from loosehc.pipeline import count_absorbing_tuples

# %%
print(count_absorbing_tuples(make_complete(12), 0, 1).value)
print(count_absorbing_tuples(make_H3(12), 5, 6).value)

# %%
for name, H in [("K40", make_complete(40)), ("dense36", random_min_degree(36, int(0.8 * comb(35, 2)), seed=5))]:
    t0 = time.perf_counter()
    r = assemble_hamilton_cycle(H, 0.3, rng=0)
    print(name, r.ok, r.stage, f"{time.perf_counter() - t0:.2f}s")
    for entry in r.log[-3:]:
        print("   ", entry)

# %%
r = assemble_hamilton_cycle(make_H3(24), 0.3, rng=0)
print("H3(24):", r.ok, r.stage)

# %%
PT = path_tile(make_complete(48), seed=1)
print(PT.route, len(PT.paths), len(PT.uncovered), PT.report)
