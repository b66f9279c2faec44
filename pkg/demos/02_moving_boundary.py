# %% [markdown]
# # The moving-boundary problem and its reciprocal image
#
# The front S(t) = gamma (t+a)^(1/3) with constants read off the profile.
# The reciprocal map sends it to a front whose log-coefficient vanishes.

# %%
import numpy as np

from ep2stefan import reciprocal, stefan
from ep2stefan.mkdv import MkdvSolution
from ep2stefan.numerics import GridSpec
from ep2stefan.painleve import default_profile

sol = MkdvSolution.from_profile(default_profile())
prob = stefan.StefanProblem(1.0, sol)
print(f"L_m = P_m = {prob.L_m:.10f}, H0 = {prob.H0:.2e}, S0 = {prob.S0}")

rep = stefan.verify_boundary_conditions(prob)
for k, v in rep.max_abs().items():
    print(f"  {k:14s} {v:.2e}")

# %%
# only the exponent -1 makes the boundary data time-independent
slopes = stefan.exponent_slopes(prob)
for c in "ijk":
    print(c, {e: round(s, 4) for e, s in slopes[c].items()})

# %%
front = reciprocal.reciprocal_front(prob, np.linspace(0, 2, 5))
print("reciprocal front coefficient at derived L_m:", front.coefficient)
moved = reciprocal.reciprocal_front(prob, np.linspace(0, 2, 5), L_m_override=0.0)
print("with L_m = 0 (breaks the front flux condition):", np.round(moved.s_star, 4))

# %%
for n in (33, 65):
    field = reciprocal.build_map(sol, GridSpec(0.0, 4.0, 0.0, 1.0, n, n))
    print(f"Casimir residual {n}x{n}: {reciprocal.casimir_residual(field).max_abs:.3e}")
