"""
Fractional tilings on the L29 gadget
====================================

Two copies of M plus two vertices u, v with a common crossing link of size
at least 29 always carry a fractional tiling of weight 49/3, beating the
16 of two canonical copies. Every number below is an exact Fraction.
"""

# %%
from collections import Counter

from loosehc import canonical_M_weights, figure_template, forb_injection, make_L29
from loosehc import search_L29_fractional, validate_fractional_tiling
from loosehc.constructions import l29_host
from loosehc.fractional import FIGURE_CASES, stage1_certificate, template_catalogue

# %%
rep = validate_fractional_tiling(canonical_M_weights())
print("canonical M:", rep.weight, rep.h_min)

# %%
for case in FIGURE_CASES:
    t = figure_template(case)
    r = validate_fractional_tiling(t.tiling(l29_host(t.required)))
    print(f"{case:7s} {t.family:13s} weight={r.weight} h_min={r.h_min}")

# %%
print({k: len(v) for k, v in template_catalogue().items()})
cert = stage1_certificate()
# largest crossing set avoiding every template: 28 cells, exactly F
print(cert["alpha"], cert["witness_is_F"])

# %%
f = forb_injection()
for k, c in f.certificates.items():
    print(k, "->", c["image"], c["template"], c["weight"])

# %%
stages, weights = Counter(), Counter()
for seed in range(200):
    T = search_L29_fractional(make_L29(seed=seed))
    stages[T.meta["stage"]] += 1
    weights[str(T.weight)] += 1
print(stages, weights)
