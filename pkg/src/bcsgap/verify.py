"""Executable checks of the analytic bounds on a solved configuration.

Each check returns a :class:`CheckResult` with a signed margin (positive
means slack, negative means violation beyond tolerance) and the location of
the worst case.  Failures are report entries, never exceptions.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .bounds import compute_constants, solve_tau0
from .errors import DegenerateBand
from .model import Params, Potential
from .simple_gap import SimpleGapProblem, critical_temperature, delta_at
from .solver import GapOperator, GapSurface, SolverConfig, band, solve_fixed_T, solve_surface

DEFAULT_SEED = 20130805

# tolerances per check
BAND_TOL = 1e-7
MONOTONE_TOL = 1e-7
LIPSCHITZ_TOL = 1e-6
G_TOL = 1e-10
CONTINUITY_TOL = 1e-7
IMAGE_LOWER_TOL = 1e-9
IMAGE_BAND_TOL = 1e-9

REFERENCES = {
    "critical_temperature_order": "critical temperatures ordered: tau_1 < tau_2",
    "gap_curve_order": "delta_1(T) < delta_2(T) below tau_2, both zero above",
    "feasibility": "coupling band admits a Lipschitz constant: 1 > u2 * a",
    "fixed_point_residual": "u0 = A u0 at every temperature row",
    "solution_band": "delta_1(T) <= u0(T, x) <= delta_2(T)",
    "solution_monotone": "u0 monotonically decreasing in T",
    "solution_lipschitz": "u0 Lipschitz in T with constant gamma",
    "image_band": "A maps the band into itself: delta_1(T) <= Au(T, x) <= delta_2(T)",
    "uniform_bound": "Au(T, x) <= delta_2(0) = h / sinh(1 / u2)",
    "g_monotone": "G(T, X, xi) increasing in T on [0, tau0] for X >= delta_1(tau0)**2",
    "image_temperature_bound": "0 <= Au(T, x) - Au(T', x) <= gamma (T' - T) for u in W",
    "operator_continuity": "||Au - Av|| <= (u2 / u1) ||u - v|| on the band",
    "uniqueness": "fixed point independent of the initial guess",
}


@dataclass
class CheckResult:
    name: str
    reference: str
    passed: bool | None  # None: skipped
    margin: float | None
    location: dict | None = None
    detail: str = ""


@dataclass
class VerificationReport:
    checks: list = field(default_factory=list)
    config_echo: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed is not False for c in self.checks)

    def __getitem__(self, name) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def failures(self) -> list:
        return [c for c in self.checks if c.passed is False]

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "checks": [asdict(c) for c in sorted(self.checks, key=lambda c: c.name)],
            "config": self.config_echo,
        }


def _result(name, margin, location=None, detail="") -> CheckResult:
    margin = float(margin)
    return CheckResult(name, REFERENCES[name], bool(margin >= 0), margin, location, detail)


def _skipped(name, why) -> CheckResult:
    return CheckResult(name, REFERENCES[name], None, None, None, why)


def _loc(surface_like, i, j=None, **extra):
    out = {"T": float(surface_like[0][i])}
    if j is not None:
        out["x"] = float(surface_like[1][j])
    out.update(extra)
    return out


# ---------------------------------------------------------------- helpers

def g_auxiliary(t, x_sq, xi):
    """``xi**2 tanh(sqrt(xi**2 + X) / 2T) + 4 X T / sqrt(xi**2 + X)``; ``xi**2`` at T = 0."""
    t, x_sq, xi = np.broadcast_arrays(*(np.asarray(v, float) for v in (t, x_sq, xi)))
    e = np.sqrt(xi**2 + x_sq)
    with np.errstate(divide="ignore"):
        arg = np.where(t > 0, e / (2.0 * np.where(t > 0, t, 1.0)), np.inf)
    return xi**2 * np.tanh(arg) + 4.0 * x_sq * t / e


def check_G_monotone(params: Params, sample_count: int = 1000, seed: int = DEFAULT_SEED,
                     tol: float = G_TOL) -> CheckResult:
    """Sample ``(X, xi, T < T')`` and compare ``G(T)`` with ``G(T')`` and ``G(tau0)``.

    A fifth of the samples pin ``T = 0`` so the limit branch is exercised.
    """
    rng = np.random.default_rng(seed)
    h = params.hbar_omega_d
    tau0 = solve_tau0(params)
    x_min = delta_at(SimpleGapProblem(params.u1, params), tau0) ** 2
    x_sq = rng.uniform(x_min, (2.0 * h) ** 2, sample_count)
    xi = rng.uniform(0.0, h, sample_count)
    ts = np.sort(rng.uniform(0.0, tau0, (sample_count, 2)), axis=1)
    ts[: sample_count // 5, 0] = 0.0
    g_t = g_auxiliary(ts[:, 0], x_sq, xi)
    g_tp = g_auxiliary(ts[:, 1], x_sq, xi)
    g_top = g_auxiliary(tau0, x_sq, xi)
    slack = np.minimum(g_tp - g_t, g_top - g_t) + tol
    k = int(np.argmin(slack))
    violations = int(np.sum(slack < 0))
    return _result("g_monotone", slack[k],
                   {"X": float(x_sq[k]), "xi": float(xi[k]), "T": float(ts[k, 0]),
                    "T_prime": float(ts[k, 1])},
                   f"{violations} violations in {sample_count} samples")


def _smooth_theta(rng, x_grid, modes=4):
    s = x_grid / x_grid[-1]
    g = sum(rng.normal() / (k + 1) * np.cos(np.pi * k * s + rng.uniform(0, 2 * np.pi))
            for k in range(modes))
    span = np.ptp(g)
    g = (g - g.min()) / span if span > 0 else np.zeros_like(s)
    lo, hi = np.sort(rng.uniform(0.0, 1.0, 2))
    return lo + (hi - lo) * g


def random_W_element(seed, t_grid, x_grid, gamma, lower, upper, theta=None):
    """Random grid function in the band with monotone, gamma-Lipschitz rows.

    ``u(T, x) = lower(T) + theta(x) (upper(T) - lower(T))`` with a smooth
    random ``theta`` in ``[0, 1]`` (or the given ``theta``), followed by a
    forward pass in ``T`` that caps the per-step drop at ``gamma * dT``.
    """
    lower = np.asarray(lower, float)
    upper = np.asarray(upper, float)
    t_grid = np.asarray(t_grid, float)
    x_grid = np.asarray(x_grid, float)
    if np.all(upper - lower <= 0):
        raise DegenerateBand("lower and upper curves coincide")
    if theta is None:
        theta = _smooth_theta(np.random.default_rng(seed), x_grid)
    theta = np.broadcast_to(np.asarray(theta, float), x_grid.shape)
    u = lower[:, None] + theta[None, :] * (upper - lower)[:, None]
    for i in range(1, t_grid.size):
        floor = u[i - 1] - gamma * (t_grid[i] - t_grid[i - 1])
        u[i] = np.minimum(np.maximum(u[i], floor), upper[i])
    return u


def w_membership(u, t_grid, lower, upper, gamma, tol=1e-12, n_random_pairs=200, seed=0):
    """Worst violation of the band, monotonicity and gamma-Lipschitz constraints.

    Adjacent rows are checked exhaustively, non-adjacent pairs by sampling.
    Returns ``(margin, location)`` with ``margin >= 0`` for members.
    """
    u = np.asarray(u, float)
    t_grid = np.asarray(t_grid, float)
    n = t_grid.size
    rng = np.random.default_rng(seed)
    pairs = [(i, i + 1) for i in range(n - 1)]
    for _ in range(n_random_pairs if n > 2 else 0):
        i, j = sorted(rng.choice(n, 2, replace=False))
        pairs.append((i, j))
    worst, where = math.inf, None

    def consider(slack, kind, i, j=None):
        nonlocal worst, where
        k = int(np.argmin(slack))
        if slack[k] < worst:
            worst = float(slack[k])
            where = {"kind": kind, "row": int(i), "row2": None if j is None else int(j), "col": k}

    for i in range(n):
        consider(u[i] - lower[i] + tol, "below_lower", i)
        consider(upper[i] - u[i] + tol, "above_upper", i)
    for i, j in pairs:
        drop = u[i] - u[j]
        consider(drop + tol, "increase", i, j)
        consider(gamma * (t_grid[j] - t_grid[i]) - drop + tol, "lipschitz", i, j)
    return worst, where


# ---------------------------------------------------------------- checks

def check_solution_surface(surface: GapSurface, op: GapOperator, params: Params,
                           gamma: float | None, fp_tol: float) -> list:
    """Checks that only need the solved (or loaded) surface."""
    t, x, v = surface.t_grid, surface.x_grid, surface.values
    grids = (t, x)
    lower = np.array([band(params, ti)[0] for ti in t])
    upper = np.array([band(params, ti)[1] for ti in t])
    out = []

    residual = np.array([np.abs(op(row, ti) - row) for ti, row in zip(t, v)])
    i, j = np.unravel_index(np.argmax(residual), residual.shape)
    out.append(_result("fixed_point_residual", 10 * fp_tol - residual[i, j], _loc(grids, i, j),
                       f"max residual {residual[i, j]:.3g}"))

    slack = np.minimum(v - lower[:, None], upper[:, None] - v) + BAND_TOL
    i, j = np.unravel_index(np.argmin(slack), slack.shape)
    side = "lower" if v[i, j] - lower[i] < upper[i] - v[i, j] else "upper"
    out.append(_result("solution_band", slack[i, j], _loc(grids, i, j, side=side)))

    if t.size > 1:
        drop = v[:-1] - v[1:]
        i, j = np.unravel_index(np.argmin(drop), drop.shape)
        out.append(_result("solution_monotone", drop[i, j] + MONOTONE_TOL, _loc(grids, i + 1, j)))
        quotient = np.abs(drop) / np.diff(t)[:, None]
        i, j = np.unravel_index(np.argmax(quotient), quotient.shape)
        if gamma is None:
            out.append(_skipped("solution_lipschitz", "infeasible coupling: no gamma"))
        else:
            out.append(_result("solution_lipschitz", gamma + LIPSCHITZ_TOL - quotient[i, j],
                               _loc(grids, i + 1, j), f"max quotient {quotient[i, j]:.6g}, gamma {gamma:.6g}"))
    return out


def _image_checks(op, params, t, lower, upper, gamma, draws, seed, pair_draws):
    """Band, uniform bound, temperature bound and continuity on random W elements."""
    out = []
    x = op.x_grid
    grids = (t, x)
    top = upper[0]
    rng_seeds = np.random.SeedSequence(seed).generate_state(draws + 2 * pair_draws)

    band_slack, band_loc = math.inf, None
    unif_slack, unif_loc = math.inf, None
    low_slack, up_slack, temp_loc = math.inf, math.inf, None
    cont_slack, cont_loc = math.inf, None
    dt = np.diff(t)

    def images(u):
        return np.array([op(row, ti) for ti, row in zip(t, u)])

    for d in range(draws):
        u = random_W_element(int(rng_seeds[d]), t, x, gamma, lower, upper)
        au = images(u)
        s = np.minimum(au - lower[:, None], upper[:, None] - au) + IMAGE_BAND_TOL
        i, j = np.unravel_index(np.argmin(s), s.shape)
        if s[i, j] < band_slack:
            band_slack, band_loc = s[i, j], _loc(grids, i, j, draw=d)
        s = top + IMAGE_BAND_TOL - au
        i, j = np.unravel_index(np.argmin(s), s.shape)
        if s[i, j] < unif_slack:
            unif_slack, unif_loc = s[i, j], _loc(grids, i, j, draw=d)
        diff = au[:-1] - au[1:]
        lo = diff + IMAGE_LOWER_TOL
        hi = gamma * dt[:, None] + LIPSCHITZ_TOL - diff
        i, j = np.unravel_index(np.argmin(np.minimum(lo, hi)), lo.shape)
        if min(lo[i, j], hi[i, j]) < min(low_slack, up_slack):
            temp_loc = _loc(grids, i, j, draw=d)
        low_slack = min(low_slack, lo.min())
        up_slack = min(up_slack, hi.min())

    ratio = params.u2 / params.u1
    for d in range(pair_draws):
        u = random_W_element(int(rng_seeds[draws + 2 * d]), t, x, gamma, lower, upper)
        v = random_W_element(int(rng_seeds[draws + 2 * d + 1]), t, x, gamma, lower, upper)
        lhs = np.max(np.abs(images(u) - images(v)))
        s = ratio * np.max(np.abs(u - v)) + CONTINUITY_TOL - lhs
        if s < cont_slack:
            cont_slack, cont_loc = s, {"pair": d}

    out.append(_result("image_band", band_slack, band_loc))
    out.append(_result("uniform_bound", unif_slack, unif_loc))
    out.append(_result("image_temperature_bound", min(low_slack, up_slack), temp_loc,
                       f"lower slack {low_slack:.3g}, upper slack {up_slack:.3g}"))
    out.append(_result("operator_continuity", cont_slack, cont_loc))
    return out


def check_gap_order(params: Params, n: int = 50) -> list:
    p1 = SimpleGapProblem(params.u1, params)
    p2 = SimpleGapProblem(params.u2, params)
    tau1, tau2 = critical_temperature(p1), critical_temperature(p2)
    out = [_result("critical_temperature_order", tau2 - tau1, {"tau1": tau1, "tau2": tau2})]
    t = np.linspace(0.0, tau2, n, endpoint=False)
    gaps = np.array([delta_at(p2, ti) - delta_at(p1, ti) for ti in t]) - params.root_tol
    k = int(np.argmin(gaps))
    above = [tau2, 1.01 * tau2, 2.0 * tau2]
    zero_ok = all(delta_at(p1, s) == 0.0 and delta_at(p2, s) == 0.0 for s in above)
    margin = gaps[k] if zero_ok else -1.0
    out.append(_result("gap_curve_order", margin, {"T": float(t[k])},
                       "" if zero_ok else "nonzero gap above tau_2"))
    return out


def verify_surface(surface: GapSurface, potential: Potential, params: Params,
                   config: SolverConfig | None = None, tau: float | None = None,
                   config_echo: dict | None = None) -> VerificationReport:
    """Checks that need only a surface, e.g. one read back from disk."""
    config = config or SolverConfig(x_nodes=surface.x_grid.size, t_nodes=surface.t_grid.size)
    op = GapOperator(potential, params, config)
    if op.x_grid.size != surface.x_grid.size or not np.allclose(op.x_grid, surface.x_grid):
        raise ValueError("surface energy grid does not match the solver configuration")
    constants = compute_constants(params, tau if tau is not None else float(surface.t_grid[-1]))
    report = VerificationReport(config_echo=config_echo or {})
    report.checks.append(_result("feasibility", 1.0 - params.u2 * constants.a,
                                 detail=f"u2 * a = {params.u2 * constants.a:.9g}"))
    fp_tol = config.fp_tol or params.fp_tol
    report.checks += check_solution_surface(surface, op, params, constants.gamma, fp_tol)
    return report


def verify_all(potential: Potential, params: Params, config: SolverConfig | None = None,
               tau: float | None = None, seed: int = DEFAULT_SEED, samples: int = 1000,
               draws: int = 100, surface: GapSurface | None = None) -> VerificationReport:
    """Solve (unless ``surface`` is given) and run every check.

    With an infeasible coupling band the feasibility check fails and the
    checks that need gamma are reported as skipped.
    """
    config = config or SolverConfig()
    tau0 = solve_tau0(params)
    if tau is None:
        tau = 0.9 * tau0
    constants = compute_constants(params, tau)
    echo = {
        "params": asdict(params),
        "potential": potential.to_dict(),
        "solver": asdict(config),
        "tau": tau,
        "seed": seed,
        "constants": constants.to_dict(),
    }
    report = VerificationReport(config_echo=echo)
    report.checks += check_gap_order(params)
    report.checks.append(_result("feasibility", 1.0 - params.u2 * constants.a,
                                 detail=f"u2 * a = {params.u2 * constants.a:.9g}"))
    report.checks.append(check_G_monotone(params, samples, seed))

    gamma = constants.gamma
    op = GapOperator(potential, params, config)
    if surface is None:
        surface, _ = solve_surface(potential, tau, config, params, require_feasible=False,
                                   invariant_tol=math.inf)
    fp_tol = config.fp_tol or params.fp_tol
    report.checks += check_solution_surface(surface, op, params, gamma, fp_tol)

    t = surface.t_grid
    lower = np.array([band(params, ti)[0] for ti in t])
    upper = np.array([band(params, ti)[1] for ti in t])
    if gamma is None:
        for name in ("image_band", "uniform_bound", "image_temperature_bound", "operator_continuity"):
            report.checks.append(_skipped(name, "infeasible coupling: no gamma, W undefined"))
    elif np.all(upper - lower <= 0):
        for name in ("image_band", "uniform_bound", "image_temperature_bound", "operator_continuity"):
            report.checks.append(_skipped(name, "degenerate band u1 == u2"))
    else:
        report.checks += _image_checks(op, params, t, lower, upper, gamma, draws, seed, draws)

    t_mid = 0.5 * tau
    a, _ = solve_fixed_T(potential, t_mid, config, params, initial="lower", operator=op)
    b, _ = solve_fixed_T(potential, t_mid, config, params, initial="upper", operator=op)
    k = int(np.argmax(np.abs(a - b)))
    report.checks.append(_result("uniqueness", 10 * fp_tol - abs(a[k] - b[k]),
                                 {"T": t_mid, "x": float(op.x_grid[k])}))
    return report
