# %% [markdown]
# # Time modulation by an Ermakov solution, and the Gardner frame
#
# rho = sqrt(1 + t^2) solves the Ermakov equation with w = 0, k = 1.
# Three readings of the modulated equation are tested; one survives.

# %%
import numpy as np

from ep2stefan import ermakov, gardner
from ep2stefan.mkdv import MkdvSolution, mkdv_residual
from ep2stefan.painleve import default_profile

sol = MkdvSolution.from_profile(default_profile())
basis = ermakov.ErmakovBasis.free()
mod = ermakov.Modulation.from_basis(basis)
t = np.linspace(0, 2, 5)
print("t* vs arctan t:", np.max(np.abs(mod.t_star(t) - np.arctan(t))))

# %%
rep = ermakov.discrimination_experiment(sol, mod)
for name, v in rep["variants"].items():
    print(f"  {name:14s} max {v['max_abs']['129']:.2e}  order {v['order']:.2f}")
print("consistent:", rep["consistent"])

# %%
print("involution defect (t, u):", ermakov.involution_defect(sol, mod, [0.5, 2.0], t))

# %%
# v = u + 1/2 in the frame y = x + 3 tau / 2 solves the extended Gardner equation
f = gardner.GardnerField(sol)
Y, TA = gardner.shifted_grid(f)
g = gardner.gardner_residual(f, Y, TA)
print("Gardner residual:", np.max(np.abs(g)))
print("minus mKdV residual:", np.max(np.abs(g - mkdv_residual(sol, *f.to_source(Y, TA)))))
