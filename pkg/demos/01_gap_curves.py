# %% [markdown]
# # Constant-coupling gap curves
#
# With a constant coupling the gap equation collapses to a scalar equation in
# the temperature. We compute the two bounding curves for the default band
# u1 = 0.3, u2 = 0.35 and compare the zero-temperature values with the closed
# form h / sinh(1/U).

# %%
import math

import numpy as np

from bcsgap import Params, SimpleGapProblem, critical_temperature, delta_at, delta_curve

params = Params()
lower = SimpleGapProblem(params.u1, params)
upper = SimpleGapProblem(params.u2, params)
tau1, tau2 = critical_temperature(lower), critical_temperature(upper)
print(f"critical temperatures: tau1 = {tau1:.10f}, tau2 = {tau2:.10f}")

# %%
for p in (lower, upper):
    exact = params.hbar_omega_d / math.sinh(1.0 / p.coupling)
    print(f"U = {p.coupling}: delta(0) = {delta_at(p, 0.0):.12f}, closed form {exact:.12f}")

# %% [markdown]
# Sampled on a shared grid the lower curve stays strictly below the upper one
# and both vanish from tau2 onward.

# %%
grid = np.linspace(0.0, tau2, 9)
c1, c2 = delta_curve(lower, grid), delta_curve(upper, grid)
for t, a, b in zip(grid, c1.values, c2.values):
    print(f"T = {t:.5f}   delta1 = {a:.6f}   delta2 = {b:.6f}")
