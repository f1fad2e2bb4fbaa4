# %% [markdown]
# # Solving the full gap equation
#
# A random tabulated potential with values inside the coupling band is solved
# on a temperature by energy grid. Each temperature row is a damped Picard
# iteration warm-started from the previous row.

# %%
import numpy as np

from bcsgap import Params, SolverConfig, compute_gamma, solve_surface
from bcsgap.model import random_tabulated_potential
from bcsgap.solver import band

params = Params(u2=0.3005)
potential = random_tabulated_potential(params, np.random.default_rng(1), shape=(6, 6))
constants = compute_gamma(params)
surface, traces = solve_surface(potential, constants.tau, SolverConfig(x_nodes=33, t_nodes=17),
                                params)
print(f"iterations per row: {[t.iterations for t in traces]}")

# %%
for t, row in zip(surface.t_grid[::4], surface.values[::4]):
    lo, hi = band(params, t)
    print(f"T = {t:.5f}  {lo:.6f} <= [{row.min():.6f}, {row.max():.6f}] <= {hi:.6f}")

# %% [markdown]
# Rows decrease with temperature and the steepest step is far below gamma.

# %%
q = np.abs(np.diff(surface.values, axis=0)) / np.diff(surface.t_grid)[:, None]
print(f"max difference quotient {q.max():.4f}, gamma {constants.gamma:.2f}")
