"""Discretised gap operator and its fixed point.

The gap function is represented by its values on a uniform energy grid.
The operator integrates over xi with a composite Gauss-Legendre rule whose
panels break at every grid node (and at every kink of a tabulated
potential); the iterate is interpolated onto the quadrature nodes.  The
whole map ``u -> Au`` is therefore ``C @ phi(P @ u)`` with fixed matrices.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import InfeasibleCoupling, NoConvergence, SurfaceInvariantError
from .model import Params, Potential
from .quadrature import gap_integrand
from .simple_gap import SimpleGapProblem, critical_temperature, delta_at


@dataclass(frozen=True)
class SolverConfig:
    x_nodes: int = 33
    t_nodes: int = 33
    damping: float = 1.0
    fp_tol: float | None = None  # None: take Params.fp_tol
    max_iters: int | None = None  # None: take Params.max_iters
    interpolation: str = "linear"
    quad_order: int = 16
    panel_splits: int = 2

    def __post_init__(self):
        if self.x_nodes < 2 or self.t_nodes < 2:
            raise ValueError("grids need at least two nodes")
        if not 0.0 < self.damping <= 1.0:
            raise ValueError(f"damping must lie in (0, 1], got {self.damping}")
        if self.interpolation not in ("linear", "cubic"):
            raise ValueError(f"unknown interpolation {self.interpolation!r}")
        if self.quad_order < 1 or self.panel_splits < 1:
            raise ValueError("quad_order and panel_splits must be positive")
        if self.fp_tol is not None and self.fp_tol <= 0:
            raise ValueError("fp_tol must be positive")
        if self.max_iters is not None and self.max_iters <= 0:
            raise ValueError("max_iters must be positive")


@dataclass
class IterationTrace:
    residuals: list = field(default_factory=list)
    converged: bool = False
    iterations: int = 0
    t: float | None = None
    damping: float = 1.0

    def to_dict(self) -> dict:
        return {
            "t": self.t,
            "converged": self.converged,
            "iterations": self.iterations,
            "final_damping": self.damping,
            "residuals": [float(r) for r in self.residuals],
        }


@dataclass(frozen=True, eq=False)
class GapSurface:
    """Solution values, rows indexed by temperature and columns by energy."""

    t_grid: np.ndarray
    x_grid: np.ndarray
    values: np.ndarray
    lower: np.ndarray | None = None
    upper: np.ndarray | None = None


def _interpolation_matrix(x_grid, nodes, kind):
    n = x_grid.size
    if kind == "linear":
        eye = np.eye(n)
        return np.column_stack([np.interp(nodes, x_grid, eye[:, j]) for j in range(n)])
    return CubicSpline(x_grid, np.eye(n), axis=0)(nodes)


class GapOperator:
    """``u -> Au`` on a fixed energy grid for one potential."""

    def __init__(self, potential: Potential, params: Params, config: SolverConfig | None = None):
        config = config or SolverConfig()
        h = params.hbar_omega_d
        self.params = params
        self.potential = potential
        self.config = config
        self.x_grid = np.linspace(0.0, h, config.x_nodes)

        breaks = np.union1d(self.x_grid, potential.breakpoints * (h / potential.hbar_omega_d))
        edges = [np.linspace(a, b, config.panel_splits + 1)[:-1] for a, b in zip(breaks[:-1], breaks[1:])]
        edges = np.append(np.concatenate(edges), h)
        gx, gw = np.polynomial.legendre.leggauss(config.quad_order)
        mid = 0.5 * (edges[1:] + edges[:-1])
        half = 0.5 * (edges[1:] - edges[:-1])
        self.nodes = (mid[:, None] + half[:, None] * gx[None, :]).ravel()
        self.weights = (half[:, None] * gw[None, :]).ravel()
        self.interp = _interpolation_matrix(self.x_grid, self.nodes, config.interpolation)
        self.coupling = potential(self.x_grid[:, None], self.nodes[None, :]) * self.weights[None, :]

    def at_nodes(self, u):
        uq = self.interp @ np.asarray(u, dtype=float)
        if self.config.interpolation == "cubic":
            # spline overshoot must not produce negative gaps
            uq = np.maximum(uq, 0.0)
        return uq

    def __call__(self, u, t):
        return self.coupling @ gap_integrand(self.nodes, self.at_nodes(u), float(t))


def apply_gap_operator(u_profile, t, potential, params, config=None):
    """One application of the gap operator to a profile on the energy grid."""
    return GapOperator(potential, params, config)(u_profile, t)


def band(params: Params, t: float) -> tuple[float, float]:
    """Lower and upper constant-coupling gaps at temperature ``t``."""
    return (delta_at(SimpleGapProblem(params.u1, params), t),
            delta_at(SimpleGapProblem(params.u2, params), t))


def solve_fixed_T(potential, t, config=None, params=None, initial=None, operator=None):
    """Fixed point of the gap operator at one temperature.

    Damped Picard iteration ``u <- (1 - d) u + d Au`` clamped to the band
    ``[delta_1(t), delta_2(t)]``.  The damping drops to 0.5 the first time
    the residual grows.  ``initial`` is ``None`` (band midpoint), ``"lower"``,
    ``"upper"`` or an array on the energy grid.

    Returns ``(profile, trace)``; raises :class:`NoConvergence` carrying the
    trace when ``max_iters`` is exhausted.
    """
    params = params or Params()
    config = config or SolverConfig()
    op = operator or GapOperator(potential, params, config)
    fp_tol = config.fp_tol or params.fp_tol
    max_iters = config.max_iters or params.max_iters
    t = float(t)
    lo, hi = band(params, t)
    trace = IterationTrace(t=t, damping=config.damping)
    n = op.x_grid.size

    if hi == 0.0:
        trace.residuals.append(float(np.max(np.abs(op(np.zeros(n), t)))))
        trace.converged = True
        return np.zeros(n), trace

    if initial is None:
        u = np.full(n, 0.5 * (lo + hi))
    elif isinstance(initial, str):
        u = np.full(n, {"lower": lo, "upper": hi}[initial])
    else:
        u = np.array(initial, dtype=float)
    u = np.clip(u, lo, hi)

    damping = config.damping
    for k in range(max_iters):
        au = op(u, t)
        r = float(np.max(np.abs(au - u)))
        trace.residuals.append(r)
        trace.iterations = k + 1
        if r < fp_tol:
            trace.converged = True
            break
        if k and r > trace.residuals[-2]:
            damping = min(damping, 0.5)
        u = np.clip((1.0 - damping) * u + damping * au, lo, hi)
    trace.damping = damping
    if not trace.converged:
        raise NoConvergence(
            f"no convergence at T = {t} after {max_iters} iterations "
            f"(residual {trace.residuals[-1]:.3g})", trace=trace, t=t)
    return u, trace


def check_surface(surface: GapSurface, tol: float = 1e-7) -> list[str]:
    """Describe band and monotonicity violations larger than ``tol``."""
    problems = []
    v = surface.values
    if surface.lower is not None:
        below = surface.lower[:, None] - tol - v
        if np.any(below > 0):
            i, j = np.unravel_index(np.argmax(below), v.shape)
            problems.append(f"below lower curve at T={surface.t_grid[i]:.6g}, x={surface.x_grid[j]:.6g}")
    if surface.upper is not None:
        above = v - surface.upper[:, None] - tol
        if np.any(above > 0):
            i, j = np.unravel_index(np.argmax(above), v.shape)
            problems.append(f"above upper curve at T={surface.t_grid[i]:.6g}, x={surface.x_grid[j]:.6g}")
    rise = np.diff(v, axis=0) - tol
    if np.any(rise > 0):
        i, j = np.unravel_index(np.argmax(rise), rise.shape)
        problems.append(f"increase in T between T={surface.t_grid[i]:.6g} and "
                        f"{surface.t_grid[i + 1]:.6g} at x={surface.x_grid[j]:.6g}")
    return problems


def solve_surface(potential, tau, config=None, params=None, require_feasible=True,
                  invariant_tol=1e-7):
    """Solve on the rectangle ``[0, tau] x [0, hbar_omega_d]``.

    Rows are solved from ``T = 0`` upwards, each warm-started from the
    previous one.  ``tau`` must lie below ``tau0``; with
    ``require_feasible`` the coupling band must also satisfy ``u2 * a < 1``
    (otherwise :class:`InfeasibleCoupling`).  Disabling the check solves the
    same rows but outside the regime where the Lipschitz constant exists.

    Returns ``(surface, traces)``.
    """
    from .bounds import compute_constants, solve_tau0

    params = params or Params()
    config = config or SolverConfig()
    tau0 = solve_tau0(params)
    if not 0.0 < tau < tau0:
        raise ValueError(f"tau = {tau} must lie in (0, tau0 = {tau0})")
    if require_feasible:
        constants = compute_constants(params, tau)
        if not constants.feasible:
            raise InfeasibleCoupling(
                f"u2 * a = {params.u2 * constants.a:.6g} >= 1: no Lipschitz constant "
                f"for u2 = {params.u2}", constants=constants)

    op = GapOperator(potential, params, config)
    t_grid = np.linspace(0.0, tau, config.t_nodes)
    rows, traces, lower, upper = [], [], [], []
    previous = None
    for t in t_grid:
        u, trace = solve_fixed_T(potential, t, config, params, initial=previous, operator=op)
        lo, hi = band(params, t)
        rows.append(u)
        traces.append(trace)
        lower.append(lo)
        upper.append(hi)
        previous = u
    surface = GapSurface(t_grid, op.x_grid, np.array(rows), np.array(lower), np.array(upper))
    problems = check_surface(surface, invariant_tol)
    if problems:
        raise SurfaceInvariantError("; ".join(problems))
    return surface, traces


def zero_above_tau2(params: Params) -> float:
    """Temperature above which every admissible solution vanishes."""
    return critical_temperature(SimpleGapProblem(params.u2, params))
