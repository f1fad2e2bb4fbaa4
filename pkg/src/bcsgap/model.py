"""Physical parameters and the pairing potential U(x, xi).

Units follow the usual convention k_B = 1: temperature and energy share the
same unit and the Debye cutoff ``hbar_omega_d`` is the only scale.  The
couplings are dimensionless.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import BoundViolation, CouplingOrder, NonPositiveInput, OutOfDomain

DEFAULT_TOLERANCES = {
    "quad_tol": 1e-12,
    "root_tol": 1e-12,
    "fp_tol": 1e-9,
    "max_iters": 5000,
}

# slack when testing membership of [0, hbar_omega_d]
_DOMAIN_SLACK = 1e-12


@dataclass(frozen=True)
class Params:
    """Cutoff, coupling band and numerical tolerances."""

    hbar_omega_d: float = 1.0
    u1: float = 0.3
    u2: float = 0.35
    quad_tol: float = DEFAULT_TOLERANCES["quad_tol"]
    root_tol: float = DEFAULT_TOLERANCES["root_tol"]
    fp_tol: float = DEFAULT_TOLERANCES["fp_tol"]
    max_iters: int = DEFAULT_TOLERANCES["max_iters"]

    def __post_init__(self):
        for name in ("hbar_omega_d", "u1", "u2", "quad_tol", "root_tol", "fp_tol"):
            value = getattr(self, name)
            if not np.isfinite(value) or value <= 0:
                raise NonPositiveInput(f"{name} must be positive, got {value!r}")
        if int(self.max_iters) != self.max_iters or self.max_iters <= 0:
            raise NonPositiveInput(f"max_iters must be a positive integer, got {self.max_iters!r}")
        if self.u1 > self.u2:
            raise CouplingOrder(f"u1 = {self.u1} exceeds u2 = {self.u2}")

    def replace(self, **changes) -> "Params":
        values = {k: getattr(self, k) for k in self.__dataclass_fields__}
        values.update(changes)
        return Params(**values)


def make_params(hbar_omega_d, u1, u2, tolerances=None) -> Params:
    """Build validated :class:`Params`.

    ``tolerances`` may override any of ``quad_tol``, ``root_tol``, ``fp_tol``
    and ``max_iters``.
    """
    tol = dict(DEFAULT_TOLERANCES)
    if tolerances:
        unknown = set(tolerances) - set(tol)
        if unknown:
            raise KeyError(f"unknown tolerance keys: {sorted(unknown)}")
        tol.update(tolerances)
    return Params(hbar_omega_d=float(hbar_omega_d), u1=float(u1), u2=float(u2), **tol)


def _as_profile(f, hbar_omega_d):
    """Turn a callable or a uniformly sampled array into a vectorised function."""
    if callable(f):
        return f, None
    samples = np.asarray(f, dtype=float)
    if samples.ndim != 1 or samples.size < 2:
        raise ValueError("sampled factors need at least two values")
    grid = np.linspace(0.0, hbar_omega_d, samples.size)
    return (lambda s: np.interp(s, grid, samples)), grid


def _lerp(a, b, w):
    # clipped so rounding never leaves [min(a, b), max(a, b)]
    return np.clip(a + w * (b - a), np.minimum(a, b), np.maximum(a, b))


def _bilinear(values, h, x, xi):
    m, n = values.shape

    def locate(s, size):
        pos = np.clip(s, 0.0, h) / h * (size - 1)
        i = np.minimum(np.floor(pos).astype(int), size - 2)
        return i, pos - i

    i, wx = locate(x, m)
    j, wy = locate(xi, n)
    lo = _lerp(values[i, j], values[i + 1, j], wx)
    hi = _lerp(values[i, j + 1], values[i + 1, j + 1], wx)
    return _lerp(lo, hi, wy)


@dataclass(frozen=True, eq=False)
class Potential:
    """Evaluator of the pairing potential on ``[0, hbar_omega_d]**2``.

    Use the constructors :meth:`constant`, :meth:`separable` and
    :meth:`tabulated`.  Instances are callable with broadcasting array
    arguments ``p(x, xi)``; :func:`eval_potential` is the checked scalar
    entry point.
    """

    kind: str
    hbar_omega_d: float
    data: dict = field(repr=False)
    declared_bounds: tuple | None = None

    @classmethod
    def constant(cls, value, hbar_omega_d=1.0, declared_bounds=None):
        return cls("constant", float(hbar_omega_d), {"value": float(value)}, declared_bounds)

    @classmethod
    def separable(cls, f, g, hbar_omega_d=1.0, declared_bounds=None):
        """U(x, xi) = f(x) * g(xi).

        ``f`` and ``g`` are either vectorised callables or 1-D arrays sampled
        uniformly on ``[0, hbar_omega_d]`` (linearly interpolated).
        """
        fx, fgrid = _as_profile(f, hbar_omega_d)
        gx, ggrid = _as_profile(g, hbar_omega_d)
        data = {"f": fx, "g": gx, "f_grid": fgrid, "g_grid": ggrid,
                "f_raw": f, "g_raw": g}
        return cls("separable", float(hbar_omega_d), data, declared_bounds)

    @classmethod
    def tabulated(cls, values, hbar_omega_d=1.0, declared_bounds=None):
        """Bilinear interpolation of an m x n lattice spanning the square.

        ``values[i][j]`` is U at ``x = i * h / (m - 1)``, ``xi = j * h / (n - 1)``.
        """
        grid = np.array(values, dtype=float)
        if grid.ndim != 2 or min(grid.shape) < 2:
            raise ValueError("tabulated potential needs an m x n lattice with m, n >= 2")
        xs = np.linspace(0.0, hbar_omega_d, grid.shape[0])
        xis = np.linspace(0.0, hbar_omega_d, grid.shape[1])
        data = {"values": grid, "x": xs, "xi": xis}
        return cls("tabulated", float(hbar_omega_d), data, declared_bounds)

    def __call__(self, x, xi):
        x, xi = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(xi, dtype=float))
        if self.kind == "constant":
            return np.full(x.shape, self.data["value"])
        if self.kind == "separable":
            return np.asarray(self.data["f"](x), float) * np.asarray(self.data["g"](xi), float)
        return _bilinear(self.data["values"], self.hbar_omega_d, x, xi)

    @property
    def breakpoints(self) -> np.ndarray:
        """Interior xi-coordinates where the potential may have a kink."""
        grid = None
        if self.kind == "tabulated":
            grid = self.data["xi"]
        elif self.kind == "separable":
            grid = self.data["g_grid"]
        if grid is None:
            return np.empty(0)
        return np.asarray(grid[1:-1])

    def to_dict(self) -> dict:
        """JSON-friendly description; callables cannot be serialised."""
        out = {"kind": self.kind, "hbar_omega_d": self.hbar_omega_d}
        if self.kind == "constant":
            out["value"] = self.data["value"]
        elif self.kind == "tabulated":
            out["values"] = self.data["values"].tolist()
        else:
            for key in ("f", "g"):
                raw = self.data[key + "_raw"]
                out[key] = "<callable>" if callable(raw) else np.asarray(raw, float).tolist()
        return out


def eval_potential(p: Potential, x: float, xi: float) -> float:
    """Evaluate ``U(x, xi)`` at a single point of the square."""
    h = p.hbar_omega_d
    for name, v in (("x", x), ("xi", xi)):
        if not (-_DOMAIN_SLACK <= v <= h + _DOMAIN_SLACK):
            raise OutOfDomain(f"{name} = {v} outside [0, {h}]")
    return float(p(x, xi))


@dataclass(frozen=True)
class PotentialReport:
    minimum: float
    maximum: float
    argmin: tuple
    argmax: tuple
    lower: float
    upper: float
    passed: bool


def validate_potential(p: Potential, params: Params, lattice_density: int = 256,
                       raise_on_failure: bool = True) -> PotentialReport:
    """Check ``u1 <= U <= u2`` on a ``lattice_density``-squared sample lattice.

    The comparison is non-strict, so a potential sitting exactly on the
    band edge passes.
    """
    if lattice_density < 2:
        raise NonPositiveInput("lattice_density must be at least 2")
    s = np.linspace(0.0, params.hbar_omega_d, int(lattice_density))
    vals = p(s[:, None], s[None, :])
    imin = np.unravel_index(np.argmin(vals), vals.shape)
    imax = np.unravel_index(np.argmax(vals), vals.shape)
    report = PotentialReport(
        minimum=float(vals[imin]), maximum=float(vals[imax]),
        argmin=(float(s[imin[0]]), float(s[imin[1]])),
        argmax=(float(s[imax[0]]), float(s[imax[1]])),
        lower=params.u1, upper=params.u2,
        passed=bool(vals[imin] >= params.u1 and vals[imax] <= params.u2),
    )
    if not report.passed and raise_on_failure:
        if report.maximum > params.u2:
            x, xi = report.argmax
            value = report.maximum
        else:
            x, xi = report.argmin
            value = report.minimum
        raise BoundViolation(
            f"U({x:.6g}, {xi:.6g}) = {value:.12g} outside [{params.u1}, {params.u2}]",
            x=x, xi=xi, value=value,
        )
    return report


def random_tabulated_potential(params: Params, rng, shape=(5, 5)) -> Potential:
    """Tabulated potential with lattice values drawn uniformly from the band."""
    values = rng.uniform(params.u1, params.u2, size=shape)
    return Potential.tabulated(values, params.hbar_omega_d, (params.u1, params.u2))
