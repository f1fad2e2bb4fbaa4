# %% [markdown]
# # Auxiliary constants and feasibility
#
# The Lipschitz constant gamma = u2 b / (1 - u2 a) only exists when u2 a < 1.
# For the default band this fails, so we look at how far u2 may go.

# %%
from bcsgap import InfeasibleCoupling, Params, compute_constants, compute_gamma

params = Params()
c = compute_constants(params)
print(c.to_dict())
print(f"u2 * a = {params.u2 * c.a:.4f}; feasible band needs u2 < {1 / c.a:.6f}")

# %%
try:
    compute_gamma(params)
except InfeasibleCoupling as exc:
    print("default band:", exc)

# %% [markdown]
# Narrowing the band to u2 = 0.3005 gives a (large) finite gamma.

# %%
narrow = params.replace(u2=0.3005)
print(compute_gamma(narrow).to_dict())
