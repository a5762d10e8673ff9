# %% [markdown]
# # Euler-Maclaurin on the line, with exact remainders
#
# Test functions are B-splines, so the remainder integrals against periodic
# Bernoulli kernels are exact rationals and every identity is checked with `==`.

# %%
from fractions import Fraction as F

from polytope_em.em1d import (
    bspline,
    em_halfray,
    em_halfray_left,
    em_interval,
    em_line,
    em_twisted_halfray,
    q_lambda,
    q_lambda_at_zero,
    root_of_unity,
    twisted_todd_coefficient,
)
from polytope_em.exact import q_series, twist_series

f = bspline(5, F(-3, 2)) + bspline(5, F(1, 3), 2) * F(-2, 7)
print("support:", [str(b) for b in f.support], " class C^%d" % f.smoothness)

# %% [markdown]
# ## Weighted sum over an interval
#
# q_a f(a) + f(a+1) + ... + q_b f(b) = main + remainder at every order m.

# %%
for m in (1, 2, 3):
    r = em_interval(f, -1, 3, F(1, 3), F(3, 4), m)
    print(f"m={m}: lhs={r.lhs}  main={r.main}  remainder={r.remainder}  ok={r.ok}")

# %% [markdown]
# ## Rays and the whole line
#
# A left ray with weight q and a right ray with weight 1 - q add up to the
# whole-line identity.

# %%
q = F(2, 9)
left, right, line = em_halfray_left(f, 0, q, 2), em_halfray(f, 0, 1 - q, 2), em_line(f, 2)
print("left + right lhs:", left.lhs + right.lhs, " line lhs:", line.lhs)
print("left + right rhs:", left.main + left.remainder + right.main + right.remainder,
      " line rhs:", line.main + line.remainder)

# %% [markdown]
# ## Operators as truncated series

# %%
print("Q_q^4 with q = 1/3:", [str(c) for c in q_series(F(1, 3), 4).coeffs])
print("N_q^{3,-1} with q = 1/3:", [str(c) for c in twist_series(F(1, 3), -1, 3).coeffs])

# %% [markdown]
# ## Twisted sums
#
# q f(0) + sum_{n >= 1} lambda^n f(n) for lambda a cube root of unity; values
# live in Q(zeta_3).

# %%
lam = root_of_unity(1, 3)
for k in (2, 3):
    r = em_twisted_halfray(f, lam, F(1, 2), k)
    print(f"k={k}: lhs={r.lhs}  ok={r.ok}")

# %% [markdown]
# ## The twisted kernels
#
# Q_{m,lambda}(0) is the (m-1)-th Taylor coefficient of 1 / (1 - lambda e^{-s})
# for m >= 2; Q_1 jumps at 0 and its right value is one less.

# %%
for m in range(1, 6):
    print(m, q_lambda_at_zero(m, lam), "|", twisted_todd_coefficient(m, lam))
print("period of Q_{3,lambda}:", q_lambda(3, lam).period, " mean:", q_lambda(3, lam).mean_integral())
