"""Structural constants behind the temperature-Lipschitz estimate.

``z0`` solves ``2/z = tanh z``.  ``tau0`` is where the lower gap curve meets
the line ``2 z0 T``.  For a chosen ``tau < tau0``

    a = max_{0 <= T <= tau} integral_0^h kernel(xi, delta_1(T), tau0) dxi
    b = 32 tau**2 / delta_1(tau)**2 * arctan(h / delta_1(tau))
    gamma = u2 b / (1 - u2 a)

and gamma only exists when ``u2 * a < 1``.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from functools import lru_cache

import numpy as np
from scipy.optimize import brentq

from .errors import BracketFailure, InfeasibleCoupling, OutOfRange
from .model import Params
from .quadrature import integrate, kernel
from .simple_gap import (SimpleGapProblem, critical_temperature, delta_at,
                         gap_at_zero, invert_delta)

DEFAULT_TAU_FRACTION = 0.9
DEFAULT_U0_FRACTION = 0.9


@dataclass(frozen=True)
class BoundConstants:
    z0: float
    tau0: float
    tau: float
    a: float
    b: float
    gamma: float | None
    feasible: bool

    def to_dict(self) -> dict:
        return asdict(self)


def solve_z0(root_tol: float = 1e-12) -> float:
    """Positive root of ``2/z = tanh z`` (about 2.065)."""
    z = brentq(lambda z: 2.0 / z - math.tanh(z), 1.0, 3.0, xtol=1e-300, maxiter=200)
    if abs(2.0 / z - math.tanh(z)) >= root_tol:
        raise BracketFailure(f"z0 residual above {root_tol}")
    return z


def _lower(params: Params) -> SimpleGapProblem:
    return SimpleGapProblem(params.u1, params)


@lru_cache(maxsize=None)
def solve_tau0(params: Params) -> float:
    """Temperature where ``delta_1(T) = 2 z0 T``.

    ``delta_1(T) - 2 z0 T`` is positive at 0, negative at the critical
    temperature and strictly decreasing in between, so the root is unique.
    """
    z0 = solve_z0(params.root_tol)
    p = _lower(params)
    tau1 = critical_temperature(p)
    try:
        return brentq(lambda t: delta_at(p, t) - 2.0 * z0 * t, 0.0, tau1,
                      xtol=1e-300, maxiter=500)
    except ValueError as exc:
        raise BracketFailure(f"tau0: {exc}") from exc


def _check_tau(params, tau):
    tau0 = solve_tau0(params)
    if not 0.0 < tau < tau0:
        raise OutOfRange(f"tau = {tau} must lie in (0, tau0 = {tau0})")
    return tau0


def scan_F(params: Params, tau: float, n: int = 64):
    """Sample ``F(T) = integral kernel(xi, delta_1(T), tau0) dxi`` on ``[0, tau]``."""
    tau0 = _check_tau(params, tau)
    p = _lower(params)
    t_grid = np.linspace(0.0, tau, n)
    values = np.array([
        integrate(lambda xi: kernel(xi, delta_at(p, t), tau0), 0.0, params.hbar_omega_d,
                  params.quad_tol).value
        for t in t_grid
    ])
    return t_grid, values


def compute_a(params: Params, tau: float, n: int = 64) -> float:
    """Maximum of ``F`` over ``[0, tau]`` by grid scan.

    ``F`` increases in ``T`` (the gap shrinks and the kernel decreases in the
    gap), so the maximum must sit at ``tau``; a scan disagreeing with that
    by more than ``10 * quad_tol`` means something is misconfigured.
    """
    _, values = scan_F(params, tau, n)
    a = float(values.max())
    if a - values[-1] > 10 * params.quad_tol:
        raise RuntimeError(f"F scan peaks before tau (max {a}, F(tau) {values[-1]})")
    return a


def compute_b(params: Params, tau: float) -> float:
    _check_tau(params, tau)
    d = delta_at(_lower(params), tau)
    return 32.0 * tau**2 / d**2 * math.atan(params.hbar_omega_d / d)


@lru_cache(maxsize=None)
def compute_constants(params: Params, tau: float | None = None) -> BoundConstants:
    """All constants; ``gamma`` is ``None`` when ``u2 * a >= 1``."""
    z0 = solve_z0(params.root_tol)
    tau0 = solve_tau0(params)
    if tau is None:
        tau = DEFAULT_TAU_FRACTION * tau0
    a = compute_a(params, tau)
    b = compute_b(params, tau)
    feasible = params.u2 * a < 1.0
    gamma = params.u2 * b / (1.0 - params.u2 * a) if feasible else None
    return BoundConstants(z0, tau0, float(tau), a, b, gamma, bool(feasible))


def compute_gamma(params: Params, tau: float | None = None) -> BoundConstants:
    """Like :func:`compute_constants` but raises :class:`InfeasibleCoupling`."""
    c = compute_constants(params, tau)
    if not c.feasible:
        raise InfeasibleCoupling(
            f"u2 * a = {params.u2 * c.a:.9g} >= 1 (need u2 < {1.0 / c.a:.9g})", constants=c)
    return c


@dataclass(frozen=True)
class T1Report:
    t1: float
    u0: float
    first_limit: float  # inverse of delta_0 at delta_0(0) / 2
    first_ok: bool
    lhs: float
    rhs: float
    second_ok: bool

    @property
    def passed(self) -> bool:
        return self.first_ok and self.second_ok

    def to_dict(self) -> dict:
        out = asdict(self)
        out["passed"] = self.passed
        return out


def check_t1_inequality(params: Params, t1: float, u0: float | None = None) -> T1Report:
    """Evaluate the two smallness conditions on a temperature ``t1``.

    With ``d0 = delta_0(0)`` and ``y = d0 / (4 * inv_delta_2(delta_0(t1)))``
    the conditions are ``t1 < inv_delta_0(d0 / 2)`` and
    ``y tanh y > (1 + 4 h**2 / d0**2) / 2``.  ``u0`` defaults to ``0.9 u1``.
    """
    if u0 is None:
        u0 = DEFAULT_U0_FRACTION * params.u1
    if not 0.0 < u0 < params.u1:
        raise OutOfRange(f"u0 = {u0} must lie in (0, u1 = {params.u1})")
    if not t1 > 0:
        raise OutOfRange(f"t1 must be positive, got {t1}")
    p0 = SimpleGapProblem(u0, params)
    p2 = SimpleGapProblem(params.u2, params)
    d0 = gap_at_zero(p0)
    first_limit = invert_delta(p0, 0.5 * d0)
    target = delta_at(p0, t1)
    if target > gap_at_zero(p2):
        raise OutOfRange(f"delta_0(t1) = {target} beyond the range of delta_2")
    t_inv = invert_delta(p2, target)
    y = d0 / (4.0 * t_inv) if t_inv > 0 else math.inf
    lhs = y * math.tanh(y)
    rhs = 0.5 * (1.0 + 4.0 * params.hbar_omega_d**2 / d0**2)
    return T1Report(float(t1), float(u0), float(first_limit), bool(t1 < first_limit),
                    float(lhs), float(rhs), bool(lhs > rhs))
