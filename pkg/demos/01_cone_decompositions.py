# %% [markdown]
# # Weighted cone decompositions of a triangle
#
# T2 = conv{(0,0), (1,0), (0,2)}. Pick a generic point eps, polarize every
# tangent cone toward (or away from) eps and the signed sum of weighted cone
# indicators reproduces the weighted indicator of T2 at every point.

# %%
from fractions import Fraction as F

from polytope_em import builtin
from polytope_em.decomposition import (
    AWAY,
    TOWARD,
    arrangement_cells,
    brianchon_gram_terms,
    decomposition_terms,
    evaluate_terms,
    find_epsilon,
    furthest_vertex,
    lawrence_varchenko_terms,
    region_signature,
    verify_decomposition,
    weighted_indicator_polytope,
)

P = builtin("T2")
w = [F(1, 3), F(2, 5), F(-1, 2)]
print("vertices:", [tuple(map(str, v)) for v in P.vertices])

# %% [markdown]
# ## One eps, both polarizations

# %%
eps = find_epsilon(P, "exterior", seed=1)
print("eps =", tuple(map(str, eps)))
for variant in (TOWARD, AWAY):
    print(f"\n{variant}:")
    for t in decomposition_terms(P, eps, variant):
        print(f"  face {sorted(t.face.facets)!s:8} sign {t.sign:+d}  phi {t.phi}  flipped {sorted(t.cone.flipped())}")
    print("  identity holds:", verify_decomposition(P, w, eps, variant).ok)

# %% [markdown]
# ## Pointwise ledger at a boundary point
#
# The point (0, 1) lies on the edge x = 0, so its weight is q_0.

# %%
x = (F(0), F(1))
total, parts = evaluate_terms(P, decomposition_terms(P, eps), w, x, breakdown=True)
print("contributions:", [str(c) for c in parts])
print("sum:", total, " expected:", weighted_indicator_polytope(P, w, x))

# %% [markdown]
# ## Every region gives the same function
#
# The cells below are one point per region of the wall arrangement in a box.

# %%
cells = arrangement_cells(P, (-3, -3), (4, 5), steps=30)
print(len(cells), "cells,", len({region_signature(P, e) for e in cells}), "distinct region signatures")
probe = [(F(i, 4), F(j, 4)) for i in range(-2, 6) for j in range(-2, 10)]
reference = [weighted_indicator_polytope(P, w, p) for p in probe]
same = all(
    [evaluate_terms(P, decomposition_terms(P, e), w, p) for p in probe] == reference for e in cells
)
print("all regions agree:", same)

# %% [markdown]
# ## Brianchon-Gram and Lawrence-Varchenko

# %%
print("Brianchon-Gram:", verify_decomposition(P, w, None, "bg").ok)
far = find_epsilon(P, "vertex-only", seed=0)
xi = tuple(a - b for a, b in zip(far, furthest_vertex(P, far)))
lv = lawrence_varchenko_terms(P, xi)
print("xi =", tuple(map(str, xi)))
for t in lv:
    print(f"  vertex {tuple(map(str, P.vertices[t.face.vertices[0]]))}  sign {t.sign:+d}  flipped {sorted(t.cone.flipped())}")
print("Lawrence-Varchenko:", verify_decomposition(P, w, xi, "lv").ok)
print("classical sums:", [evaluate_terms(P, brianchon_gram_terms(P), [1, 1, 1], p) for p in [(F(1, 5), F(1, 5)), (3, 3)]])
