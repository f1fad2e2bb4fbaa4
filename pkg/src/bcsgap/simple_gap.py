"""Constant-coupling (simple) gap equation.

For a constant potential ``U`` the gap does not depend on energy and solves

    1 = U * integral_0^h tanh(E / 2T) / E  dxi,   E = sqrt(xi**2 + delta**2).

This module finds the critical temperature where the gap closes, the gap
curve ``T -> delta(T)`` (extended by zero above the critical temperature)
and its inverse.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.optimize import brentq

from .errors import BracketFailure, NonPositiveInput, OutOfRange
from .model import Params
from .quadrature import integrate, kernel

# weak-coupling ratio T_c / delta(0) = e^Euler / pi, only used to seed brackets
_BCS_RATIO = np.exp(np.euler_gamma) / np.pi
_XTOL = 1e-300


@dataclass(frozen=True)
class SimpleGapProblem:
    coupling: float
    params: Params

    def __post_init__(self):
        if not self.coupling > 0:
            raise NonPositiveInput(f"coupling must be positive, got {self.coupling}")


@dataclass(frozen=True, eq=False)
class GapCurve:
    """Gap values sampled on an increasing temperature grid."""

    problem: SimpleGapProblem
    t_grid: np.ndarray
    values: np.ndarray
    tau: float

    @property
    def coupling(self) -> float:
        return self.problem.coupling


def _brentq(f, a, b, what):
    try:
        return brentq(f, a, b, xtol=_XTOL, maxiter=500)
    except ValueError as exc:
        raise BracketFailure(f"{what}: {exc}") from exc


def gap_integral(p: SimpleGapProblem, delta: float, t: float) -> float:
    """integral_0^h kernel(xi, delta, t) dxi."""
    h = p.params.hbar_omega_d
    return integrate(lambda xi: kernel(xi, delta, t), 0.0, h, p.params.quad_tol).value


def gap_residual(p: SimpleGapProblem, delta: float, t: float) -> float:
    """``1 - U * gap_integral``; zero on the gap curve."""
    return 1.0 - p.coupling * gap_integral(p, delta, t)


def gap_at_zero(p: SimpleGapProblem) -> float:
    """Closed-form zero-temperature gap ``h / sinh(1 / U)``."""
    return p.params.hbar_omega_d / np.sinh(1.0 / p.coupling)


@lru_cache(maxsize=None)
def critical_temperature(p: SimpleGapProblem) -> float:
    """Temperature at which the gap closes.

    Solves ``1 = U * integral_0^h tanh(xi / 2 tau) / xi dxi``.  The right side
    decreases strictly in ``tau``, so the bracket is grown geometrically from
    the weak-coupling estimate until it straddles the root.
    """
    def f(tau):
        return 1.0 - p.coupling * gap_integral(p, 0.0, tau)

    guess = _BCS_RATIO * gap_at_zero(p)
    lo, hi = 0.5 * guess, 2.0 * guess
    for _ in range(200):
        if f(lo) < 0:
            break
        lo *= 0.5
    else:
        raise BracketFailure("could not find a lower bracket for the critical temperature")
    for _ in range(200):
        if f(hi) > 0:
            break
        hi *= 2.0
    else:
        raise BracketFailure("could not find an upper bracket for the critical temperature")
    return _brentq(f, lo, hi, "critical temperature")


@lru_cache(maxsize=4096)
def _delta_at(p: SimpleGapProblem, t: float) -> float:
    tau = critical_temperature(p)
    if t >= tau:
        return 0.0
    top = gap_at_zero(p)

    def f(delta):
        # increasing in delta, negative below the root
        return gap_residual(p, delta, t)

    if t == 0.0:
        lo = top * 1e-12
    else:
        lo = 0.0
        if f(lo) >= 0.0:
            # t lies within rounding of tau; the gap has closed
            return 0.0
    if f(top) <= 0.0:
        return top
    return _brentq(f, lo, top, f"gap at T = {t}")


def delta_at(p: SimpleGapProblem, t: float) -> float:
    """Gap at temperature ``t``; exactly 0 for ``t >= critical_temperature(p)``."""
    t = float(t)
    if t < 0:
        raise OutOfRange(f"temperature must be nonnegative, got {t}")
    return _delta_at(p, t)


def delta_curve(p: SimpleGapProblem, t_grid) -> GapCurve:
    t_grid = np.atleast_1d(np.asarray(t_grid, dtype=float))
    if t_grid.ndim != 1 or t_grid.size == 0:
        raise ValueError("t_grid must be a non-empty 1-D array")
    if t_grid[0] < 0 or np.any(np.diff(t_grid) <= 0):
        raise ValueError("t_grid must be nonnegative and strictly increasing")
    values = np.array([delta_at(p, t) for t in t_grid])
    return GapCurve(p, t_grid, values, critical_temperature(p))


def _invert(p: SimpleGapProblem, value: float, t_lo: float, t_hi: float) -> float:
    return _brentq(lambda t: delta_at(p, t) - value, t_lo, t_hi, f"inverse gap at {value}")


def invert_delta(p: SimpleGapProblem, value: float) -> float:
    """Temperature ``T`` in ``[0, tau]`` with ``delta_at(p, T) = value``."""
    top = gap_at_zero(p)
    tau = critical_temperature(p)
    if not 0.0 <= value <= top:
        raise OutOfRange(f"value {value} outside [0, {top}]")
    if value == 0.0:
        return tau
    if value >= delta_at(p, 0.0):
        return 0.0
    return _invert(p, value, 0.0, tau)


def delta_inverse(c: GapCurve, value: float) -> float:
    """Inverse of a gap curve, bracketed by the curve's own samples."""
    values = c.values
    if not 0.0 <= value <= values[0]:
        raise OutOfRange(f"value {value} outside [0, {values[0]}]")
    if value == values[0]:
        return float(c.t_grid[0])
    if value == 0.0:
        return c.tau
    ts = c.t_grid
    vs = values
    if vs[-1] > 0:
        ts = np.append(ts, c.tau)
        vs = np.append(vs, 0.0)
    # first node whose value drops to or below the target
    k = int(np.argmax(vs <= value))
    if vs[k] == value:
        return float(ts[k])
    return _invert(c.problem, value, float(ts[k - 1]), float(ts[k]))


def derivative_probe(p: SimpleGapProblem, t: float, h: float) -> float:
    """Finite-difference slope of the gap curve at ``t`` with step ``h``.

    Centred where ``[t - h, t + h]`` fits inside ``[0, tau]``, one-sided
    otherwise.
    """
    if h <= 0:
        raise NonPositiveInput("step must be positive")
    tau = critical_temperature(p)
    if t - h >= 0 and t + h <= tau:
        return (delta_at(p, t + h) - delta_at(p, t - h)) / (2 * h)
    if t - h < 0:
        return (delta_at(p, t + h) - delta_at(p, t)) / h
    return (delta_at(p, t) - delta_at(p, t - h)) / h
