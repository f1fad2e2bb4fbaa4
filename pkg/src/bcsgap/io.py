"""CSV/JSON readers and writers and the run configuration schema.

Configuration document (all keys optional)::

    {
      "params": {"hbar_omega_d": 1.0, "u1": 0.3, "u2": 0.35,
                 "tol": {"quad_tol": 1e-12, "root_tol": 1e-12,
                         "fp_tol": 1e-9, "max_iters": 5000}},
      "potential": {"kind": "constant", "value": 0.3}
                 | {"kind": "separable", "f": [...], "g": [...]}
                 | {"kind": "tabulated", "values": [[...], ...]},
      "solver": {"x_nodes": 33, "t_nodes": 33, "damping": 1.0,
                 "interpolation": "linear", "quad_order": 16, "panel_splits": 2},
      "tau": null, "tau_fraction": 0.9,
      "curves": {"t_nodes": 65, "include_delta0": false},
      "t1": null, "u0": null,
      "verify": {"samples": 1000, "draws": 100},
      "seed": 20130805
    }

Separable factors are arrays sampled uniformly on ``[0, hbar_omega_d]``;
tabulated lattices are row-major with rows indexed by ``x``.
"""

from __future__ import annotations

import csv
import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .errors import ConfigurationError
from .model import DEFAULT_TOLERANCES, Params, Potential, make_params
from .simple_gap import GapCurve
from .solver import GapSurface, SolverConfig

PRECISION = 12


def fmt(value: float) -> str:
    return f"{value:.{PRECISION}g}"


# ---------------------------------------------------------------- CSV

def write_curve_csv(curve: GapCurve, path) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["T", "delta"])
        for t, d in zip(curve.t_grid, curve.values):
            w.writerow([fmt(t), fmt(d)])
    return path


def read_curve_csv(path):
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    return data[:, 0], data[:, 1]


def write_surface_csv(surface: GapSurface, path) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["T", "x", "u"])
        for t, row in zip(surface.t_grid, surface.values):
            for x, u in zip(surface.x_grid, row):
                w.writerow([fmt(t), fmt(x), fmt(u)])
    return path


def read_surface_csv(path) -> GapSurface:
    """Inverse of :func:`write_surface_csv` (row-major, T outer)."""
    with Path(path).open() as fh:
        header = fh.readline().strip()
    if header != "T,x,u":
        raise ValueError(f"{path}: expected header 'T,x,u', got {header!r}")
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    t_grid = np.unique(data[:, 0])
    x_grid = np.unique(data[:, 1])
    if data.shape[0] != t_grid.size * x_grid.size:
        raise ValueError(f"{path}: not a complete T x x lattice")
    values = data[:, 2].reshape(t_grid.size, x_grid.size)
    return GapSurface(t_grid, x_grid, values)


def write_json(obj, path) -> Path:
    path = Path(path)
    path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")
    return path


# ---------------------------------------------------------------- config

@dataclass
class RunConfig:
    params: Params
    potential: Potential
    solver: SolverConfig
    tau: float | None = None
    tau_fraction: float = 0.9
    curve_nodes: int = 65
    include_delta0: bool = False
    t1: float | None = None
    u0: float | None = None
    samples: int = 1000
    draws: int = 100
    seed: int = 20130805
    raw: dict = field(default_factory=dict)


def _get(section: dict, key, kind, where, default=None):
    if key not in section:
        return default
    value = section[key]
    if value is None:
        return default
    try:
        if kind is int and (isinstance(value, bool) or float(value) != int(value)):
            raise ValueError
        return kind(value)
    except (TypeError, ValueError):
        raise ConfigurationError(f"{where}.{key}: expected {kind.__name__}, got {value!r}") from None


def potential_from_dict(d: dict | None, params: Params) -> Potential:
    h = params.hbar_omega_d
    bounds = (params.u1, params.u2)
    if d is None:
        return Potential.constant(params.u1, h, bounds)
    kind = d.get("kind")
    try:
        if kind == "constant":
            return Potential.constant(float(d.get("value", params.u1)), h, bounds)
        if kind == "separable":
            return Potential.separable(np.asarray(d["f"], float), np.asarray(d["g"], float), h, bounds)
        if kind == "tabulated":
            return Potential.tabulated(np.asarray(d["values"], float), h, bounds)
    except KeyError as exc:
        raise ConfigurationError(f"potential: missing field {exc}") from None
    except (TypeError, ValueError) as exc:
        raise ConfigurationError(f"potential: {exc}") from None
    raise ConfigurationError(f"potential.kind: expected constant|separable|tabulated, got {kind!r}")


def params_from_dict(d: dict | None) -> Params:
    d = d or {}
    tol = d.get("tol", {}) or {}
    unknown = set(tol) - set(DEFAULT_TOLERANCES)
    if unknown:
        raise ConfigurationError(f"params.tol: unknown keys {sorted(unknown)}")
    tolerances = {k: _get(tol, k, int if k == "max_iters" else float, "params.tol")
                  for k in tol}
    return make_params(
        _get(d, "hbar_omega_d", float, "params", 1.0),
        _get(d, "u1", float, "params", 0.3),
        _get(d, "u2", float, "params", 0.35),
        tolerances,
    )


def config_from_dict(d: dict) -> RunConfig:
    if not isinstance(d, dict):
        raise ConfigurationError("configuration must be a JSON object")
    params = params_from_dict(d.get("params"))
    potential = potential_from_dict(d.get("potential"), params)
    s = d.get("solver", {}) or {}
    known = set(SolverConfig.__dataclass_fields__)
    unknown = set(s) - known
    if unknown:
        raise ConfigurationError(f"solver: unknown keys {sorted(unknown)}")
    kinds = {"x_nodes": int, "t_nodes": int, "damping": float, "fp_tol": float,
             "max_iters": int, "interpolation": str, "quad_order": int, "panel_splits": int}
    try:
        solver = SolverConfig(**{k: _get(s, k, kinds[k], "solver") for k in s if s[k] is not None})
    except ValueError as exc:
        raise ConfigurationError(f"solver: {exc}") from None
    curves = d.get("curves", {}) or {}
    verify = d.get("verify", {}) or {}
    return RunConfig(
        params=params,
        potential=potential,
        solver=solver,
        tau=_get(d, "tau", float, "config"),
        tau_fraction=_get(d, "tau_fraction", float, "config", 0.9),
        curve_nodes=_get(curves, "t_nodes", int, "curves", 65),
        include_delta0=bool(curves.get("include_delta0", False)),
        t1=_get(d, "t1", float, "config"),
        u0=_get(d, "u0", float, "config"),
        samples=_get(verify, "samples", int, "verify", 1000),
        draws=_get(verify, "draws", int, "verify", 100),
        seed=_get(d, "seed", int, "config", 20130805),
        raw=d,
    )


def load_config(path) -> RunConfig:
    """Read a JSON configuration; parse errors report line and column."""
    text = Path(path).read_text()
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    try:
        return config_from_dict(d)
    except ConfigurationError as exc:
        raise ConfigurationError(f"{path}: {exc}") from None


def config_echo(cfg: RunConfig) -> dict:
    return {
        "params": asdict(cfg.params),
        "potential": cfg.potential.to_dict(),
        "solver": asdict(cfg.solver),
        "seed": cfg.seed,
    }
