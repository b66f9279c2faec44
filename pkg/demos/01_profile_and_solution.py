# %% [markdown]
# # From the Airy seed to the mKdV field
#
# Build the reduced profile for the default seed, check the reduced ODE on it,
# then assemble u(x, t) and look at the PDE residual both ways.

# %%
import numpy as np

from ep2stefan import airy, painleve
from ep2stefan.mkdv import MkdvSolution, mkdv_residual, mkdv_residual_fd
from ep2stefan.numerics import GridSpec

profile = painleve.default_profile()
sc = profile.scales
print(f"epsilon={sc.epsilon:.10f} delta={sc.delta:.10f} lambda={sc.lam:.10f}")
print("profile valid on [0, %.3g), limited by %s" % (profile.xi_max, profile.limited_by))

# %%
# the seed has no zero on the reflected side, so the horizon sets the domain
print("first zero of the seed on z > 0:", airy.first_zero(profile.seed, 10.0))

xi = np.linspace(0, 0.9 * profile.xi_max, 7)
psi = painleve.psi_chain(profile, xi)
for x, p in zip(xi, psi.psi):
    print(f"  Psi({x:4.2f}) = {p:.12f}")
print("reduced ODE residual:", np.max(np.abs(painleve.ep2_residual(profile, xi))))

# %%
sol = MkdvSolution.from_profile(profile)
grid = sol.standard_grid()
X, T = grid.mesh()
print("analytic residual on 50x20:", np.max(np.abs(mkdv_residual(sol, X, T))))

# %%
# finite differences only: residual should fall ~16x per halving
for nx, nt in ((51, 81), (101, 161), (201, 321)):
    g = GridSpec(grid.x_min, grid.x_max, 0.0, 2.0, nx, nt)
    print(f"  {nx}x{nt}: {mkdv_residual_fd(sol, g)[1]:.3e}")
