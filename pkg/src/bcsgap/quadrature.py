"""Adaptive quadrature over the energy shell and the gap-equation kernel."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import MaxSubdivisions, UndefinedLimit

# 15-point Kronrod extension of the 7-point Gauss rule, nodes on [0, 1]
# (mirrored about 0).  Odd-indexed nodes are the Gauss nodes.
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

KRONROD_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
KRONROD_WEIGHTS = np.concatenate([_WGK[:-1], _WGK[::-1]])
_gauss_w = np.zeros(15)
_gauss_w[1:7:2] = _WG[:3]
_gauss_w[7] = _WG[3]
_gauss_w[9:15:2] = _WG[2::-1]
GAUSS_WEIGHTS = _gauss_w

# below this argument tanh(z)/z is replaced by its limit 1
SMALL_ARG = 1e-8


@dataclass(frozen=True)
class QuadResult:
    value: float
    err_estimate: float
    subdivisions: int


def integrate(f, lo, hi, tol=1e-12, max_subdivisions=5000) -> QuadResult:
    """Integrate a vectorised ``f`` over ``[lo, hi]``.

    Globally adaptive Gauss-Kronrod (7/15) with batch bisection: every
    interval whose local error estimate ``|K15 - G7|`` exceeds its share of
    ``tol`` (proportional to its length) is halved.  ``f`` is called with a
    2-D array of abscissae and must return an array of the same shape.

    Intervals whose error is already at the rounding floor are accepted, so
    ``tol`` below machine precision relative to the integral does not loop.
    """
    lo, hi = float(lo), float(hi)
    if hi < lo:
        r = integrate(f, hi, lo, tol, max_subdivisions)
        return QuadResult(-r.value, r.err_estimate, r.subdivisions)
    if hi == lo:
        return QuadResult(0.0, 0.0, 1)

    length = hi - lo
    left = np.array([lo])
    right = np.array([hi])
    total = 0.0
    err_total = 0.0
    n_intervals = 1
    eps = np.finfo(float).eps

    while left.size:
        centre = 0.5 * (left + right)
        half = 0.5 * (right - left)
        x = centre[:, None] + half[:, None] * KRONROD_NODES[None, :]
        fx = np.asarray(f(x), dtype=float)
        if not np.all(np.isfinite(fx)):
            raise ValueError("integrand returned non-finite values")
        kron = half * (fx @ KRONROD_WEIGHTS)
        gauss = half * (fx @ GAUSS_WEIGHTS)
        abs_int = half * (np.abs(fx) @ KRONROD_WEIGHTS)
        err = np.abs(kron - gauss)
        share = tol * (2.0 * half) / length
        done = (err <= share) | (err <= 50.0 * eps * abs_int)
        total += kron[done].sum()
        err_total += err[done].sum()
        if done.all():
            break
        n_intervals += int((~done).sum())
        if n_intervals > max_subdivisions:
            raise MaxSubdivisions(
                f"tolerance {tol:g} not reached with {max_subdivisions} subintervals "
                f"(remaining error {err[~done].sum():.3g})"
            )
        l, c, r = left[~done], centre[~done], right[~done]
        left = np.concatenate([l, c])
        right = np.concatenate([c, r])
    return QuadResult(float(total), float(err_total), n_intervals)


def kernel(xi, delta, t):
    """tanh(E / 2t) / E with E = sqrt(xi**2 + delta**2).

    At ``t = 0`` the hyperbolic tangent is replaced by 1; at ``E = 0`` with
    ``t > 0`` the limit ``1 / (2 t)`` is returned.  Accepts broadcasting
    arrays and returns a float for scalar input.
    """
    xi, delta = np.broadcast_arrays(np.asarray(xi, float), np.asarray(delta, float))
    t = float(t)
    if t < 0:
        raise ValueError(f"temperature must be nonnegative, got {t}")
    energy = np.hypot(xi, delta)
    if t == 0.0 and np.any(energy == 0.0):
        raise UndefinedLimit("kernel undefined at xi = delta = t = 0")
    # subnormal energies overflow to inf, which is the correct limit
    with np.errstate(over="ignore"):
        if t == 0.0:
            out = 1.0 / energy
        else:
            z = energy / (2.0 * t)
            out = np.full(energy.shape, 1.0 / (2.0 * t))
            big = z >= SMALL_ARG
            out[big] = np.tanh(z[big]) / energy[big]
    return out if out.ndim else float(out)


def gap_integrand(xi, u, t):
    """u * kernel(xi, u, t): the integrand of the gap operator without U."""
    u = np.asarray(u, dtype=float)
    xi = np.asarray(xi, dtype=float)
    if t == 0.0:
        energy = np.hypot(xi, u)
        safe = np.where(energy > 0, energy, 1.0)
        return np.where(energy > 0, u / safe, 0.0)
    return u * kernel(xi, u, t)
