# %% [markdown]
# # Exact weighted lattice sums of polynomials
#
# Integrate p over the dilated polytope P(h) as a polynomial in h, apply one
# operator per face and boundary group element, set h = 0. The result is the
# weighted sum of p over the lattice points of P.

# %%
from fractions import Fraction as F

from polytope_em import builtin
from polytope_em.empoly import dilated_integral, em_exact_polynomial_sum, em_main_term
from polytope_em.exact import MultiPoly
from polytope_em.lattice import enumerate_lattice_points, gamma_boundary, gamma_group, weighted_lattice_sum
from polytope_em.polytope import build_polytope

# %% [markdown]
# ## T2 and its index-2 vertex

# %%
P = builtin("T2")
for face in P.face_list:
    g = gamma_group(P, face)
    if g.order > 1:
        print("face", sorted(face.facets), "group order", g.order,
              "boundary", [[str(b) for b in e] for e in gamma_boundary(g)])
one = MultiPoly.constant(2, 1)
print("volume polynomial:", dilated_integral(P, one))
value, parts = em_main_term(P, [1, 1, 1], one, breakdown=True)
for op, v in parts:
    print(f"  face {sorted(op.face.facets)!s:8} gamma {[str(b) for b in op.gamma]}  ->  {v}")
print("count:", value, " lattice points:", enumerate_lattice_points(P))

# %% [markdown]
# ## Weights and a monomial

# %%
w = [F(1, 2), F(1, 3), F(3, 4)]
p = MultiPoly.monomial((1, 0)) + MultiPoly.monomial((0, 2))
print("sum of w(x) (x + y^2) over T2:", em_exact_polynomial_sum(P, w, p))

# %% [markdown]
# ## A cone of index 3
#
# At (1,0) in conv{(0,0), (1,0), (0,3)} the twisted operators carry cube
# roots of unity. Individual terms are not rational; their sum is.

# %%
Q = build_polytope([(1, 0), (0, 1), (-3, -1)], [0, 0, 3])
value, parts = em_main_term(Q, w, p, breakdown=True)
for op, v in parts:
    if op.gamma and any(op.gamma):
        print("  gamma", [str(b) for b in op.gamma], "->", v)
print("total:", value, " by enumeration:", weighted_lattice_sum(Q, w, p))

# %% [markdown]
# ## Counting points of dilates
#
# Scaling the offsets by t gives the lattice-point counts of tP.

# %%
for t in range(1, 6):
    tP = build_polytope(P.normals, [t * o for o in P.offsets])
    print(t, em_exact_polynomial_sum(tP, [1, 1, 1], one))
