# %% [markdown]
# # Verification report
#
# Every analytic property of the solution is turned into a numerical check
# with a margin; negative margins are failures. Checks that need gamma are
# skipped when the coupling band is infeasible.

# %%
import numpy as np

from bcsgap import Params, SolverConfig, verify_all
from bcsgap.model import random_tabulated_potential

config = SolverConfig(x_nodes=17, t_nodes=9)
for u2 in (0.3005, 0.35):
    params = Params(u2=u2)
    potential = random_tabulated_potential(params, np.random.default_rng(4))
    report = verify_all(potential, params, config, samples=500, draws=20)
    print(f"\nu2 = {u2}: passed = {report.passed}")
    for c in sorted(report.checks, key=lambda c: c.name):
        status = {True: "PASS", False: "FAIL", None: "SKIP"}[c.passed]
        margin = "" if c.margin is None else f"{c.margin:+.2e}"
        print(f"  {status} {c.name:26s} {margin}")
