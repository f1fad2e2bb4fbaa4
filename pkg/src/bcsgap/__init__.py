"""Numerical solution and verification of the BCS gap equation.

The gap function ``u(T, x)`` solves ``u = Au`` with

    Au(T, x) = integral_0^h U(x, xi) u(T, xi) / E * tanh(E / 2T) dxi,
    E = sqrt(xi**2 + u(T, xi)**2).

Submodules: :mod:`~bcsgap.model` (parameters, potential),
:mod:`~bcsgap.quadrature`, :mod:`~bcsgap.simple_gap` (constant coupling),
:mod:`~bcsgap.bounds` (z0, tau0, a, b, gamma), :mod:`~bcsgap.solver`,
:mod:`~bcsgap.verify` and :mod:`~bcsgap.cli`.
"""

__version__ = "0.1.0"

from .bounds import (BoundConstants, check_t1_inequality, compute_a, compute_b,
                     compute_constants, compute_gamma, solve_tau0, solve_z0)
from .errors import (BCSGapError, BoundViolation, BracketFailure, CouplingOrder,
                     DegenerateBand, InfeasibleCoupling, MaxSubdivisions, NoConvergence,
                     NonPositiveInput, OutOfDomain, OutOfRange, UndefinedLimit)
from .model import Params, Potential, eval_potential, make_params, validate_potential
from .quadrature import QuadResult, integrate, kernel
from .simple_gap import (GapCurve, SimpleGapProblem, critical_temperature, delta_at,
                         delta_curve, delta_inverse, derivative_probe, gap_at_zero,
                         invert_delta)
from .solver import (GapOperator, GapSurface, IterationTrace, SolverConfig,
                     apply_gap_operator, solve_fixed_T, solve_surface)
from .verify import VerificationReport, check_G_monotone, random_W_element, verify_all
