"""Command-line front end.

    bcsgap curves    [--config cfg.json] [--out DIR]
    bcsgap constants [--config cfg.json] [--out DIR]
    bcsgap solve     [--config cfg.json] [--out DIR]
    bcsgap verify    [--config cfg.json] [--out DIR] [--surface surface.csv] [--seed N]
    bcsgap t1-check  [--config cfg.json] [--out DIR] [--t1 T]

Exit status: 0 success, 1 verification failure, 2 configuration or
feasibility error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .bounds import check_t1_inequality, compute_constants, solve_tau0
from .errors import (BoundViolation, ConfigurationError, InfeasibleCoupling,
                     NoConvergence, NumericalFailure, OutOfRange)
from .io import (config_from_dict, load_config, read_surface_csv, write_curve_csv, write_json,
                 write_surface_csv)
from .model import validate_potential
from .simple_gap import SimpleGapProblem, critical_temperature, delta_curve
from .solver import SolverConfig, solve_surface
from .verify import verify_all

EXIT_OK, EXIT_VERIFY, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2, 3


@dataclass
class RunManifest:
    command: str
    config_path: str | None
    output_paths: list = field(default_factory=list)
    timestamp: str = ""
    tool_version: str = __version__

    def write(self, out: Path) -> Path:
        self.timestamp = datetime.now(timezone.utc).isoformat()
        missing = [p for p in self.output_paths if not Path(p).exists()]
        if missing:
            raise RuntimeError(f"declared outputs missing: {missing}")
        return write_json(self.__dict__, out / f"manifest-{self.command}.json")


def _tau(cfg):
    return cfg.tau if cfg.tau is not None else cfg.tau_fraction * solve_tau0(cfg.params)


def cmd_curves(cfg, out):
    params = cfg.params
    tau2 = critical_temperature(SimpleGapProblem(params.u2, params))
    grid = np.linspace(0.0, tau2, cfg.curve_nodes)
    couplings = {"delta1": params.u1, "delta2": params.u2}
    if cfg.include_delta0:
        couplings["delta0"] = cfg.u0 if cfg.u0 is not None else 0.9 * params.u1
    paths = []
    for name, u in couplings.items():
        curve = delta_curve(SimpleGapProblem(u, params), grid)
        paths.append(write_curve_csv(curve, out / f"{name}.csv"))
    return EXIT_OK, paths, None


def cmd_constants(cfg, out):
    c = compute_constants(cfg.params, _tau(cfg))
    path = write_json(c.to_dict(), out / "constants.json")
    if not c.feasible:
        err = InfeasibleCoupling(
            f"u2 * a = {cfg.params.u2 * c.a:.9g} >= 1 (need u2 < {1.0 / c.a:.9g})", constants=c)
        return EXIT_CONFIG, [path], err
    return EXIT_OK, [path], None


def cmd_solve(cfg, out):
    validate_potential(cfg.potential, cfg.params)
    try:
        surface, traces = solve_surface(cfg.potential, _tau(cfg), cfg.solver, cfg.params)
    except NoConvergence as exc:
        path = write_json({"failed_at": exc.t, "trace": exc.trace.to_dict() if exc.trace else None},
                          out / "trace.json")
        return EXIT_NUMERIC, [path], exc
    paths = [write_surface_csv(surface, out / "surface.csv"),
             write_json([t.to_dict() for t in traces], out / "trace.json")]
    return EXIT_OK, paths, None


def cmd_verify(cfg, out, surface_path=None):
    validate_potential(cfg.potential, cfg.params)
    surface = None
    solver = cfg.solver
    tau = _tau(cfg)
    if surface_path is not None:
        surface = read_surface_csv(surface_path)
        solver = SolverConfig(**{**solver.__dict__, "x_nodes": surface.x_grid.size,
                                 "t_nodes": surface.t_grid.size})
        tau = float(surface.t_grid[-1])
    report = verify_all(cfg.potential, cfg.params, solver, tau, seed=cfg.seed,
                        samples=cfg.samples, draws=cfg.draws, surface=surface)
    path = write_json(report.to_dict(), out / "verification.json")
    for c in sorted(report.checks, key=lambda c: c.name):
        status = {True: "PASS", False: "FAIL", None: "SKIP"}[c.passed]
        print(f"{status}  {c.name:28s} {c.reference}")
    return (EXIT_OK if report.passed else EXIT_VERIFY), [path], None


def cmd_t1_check(cfg, out, t1=None):
    t1 = t1 if t1 is not None else cfg.t1
    if t1 is None:
        raise ConfigurationError("t1-check needs --t1 or a 't1' entry in the configuration")
    report = check_t1_inequality(cfg.params, t1, cfg.u0)
    path = write_json(report.to_dict(), out / "t1_check.json")
    print(json.dumps(report.to_dict(), indent=2, sort_keys=True))
    return (EXIT_OK if report.passed else EXIT_VERIFY), [path], None


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="JSON configuration file")
    common.add_argument("--out", type=Path, default=Path("."), help="output directory")
    common.add_argument("--seed", type=int, help="override the configured seed")
    parser = argparse.ArgumentParser(prog="bcsgap", description=__doc__.split("\n\n")[0],
                                     parents=[common])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("curves", parents=[common], help="constant-coupling gap curves as CSV")
    sub.add_parser("constants", parents=[common], help="z0, tau0, a, b, gamma as JSON")
    sub.add_parser("solve", parents=[common], help="solve on [0, tau] x [0, h]")
    p = sub.add_parser("verify", parents=[common], help="run the verification checks")
    p.add_argument("--surface", type=Path, help="verify this surface CSV instead of solving")
    p = sub.add_parser("t1-check", parents=[common], help="evaluate the T1 smallness conditions")
    p.add_argument("--t1", type=float)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config) if args.config else config_from_dict({})
        if args.seed is not None:
            cfg.seed = args.seed
        args.out.mkdir(parents=True, exist_ok=True)
        if args.command == "curves":
            code, paths, err = cmd_curves(cfg, args.out)
        elif args.command == "constants":
            code, paths, err = cmd_constants(cfg, args.out)
            print(json.dumps(json.loads(Path(paths[0]).read_text()), indent=2, sort_keys=True))
        elif args.command == "solve":
            code, paths, err = cmd_solve(cfg, args.out)
        elif args.command == "verify":
            code, paths, err = cmd_verify(cfg, args.out, args.surface)
        else:
            code, paths, err = cmd_t1_check(cfg, args.out, args.t1)
    except (ConfigurationError, BoundViolation, InfeasibleCoupling, OutOfRange) as exc:
        _report_error(exc)
        return EXIT_CONFIG
    except NumericalFailure as exc:
        _report_error(exc)
        return EXIT_NUMERIC
    except (OSError, ValueError) as exc:
        _report_error(exc)
        return EXIT_CONFIG
    if err is not None:
        _report_error(err)
    RunManifest(args.command, str(args.config) if args.config else None,
                [str(p) for p in paths]).write(args.out)
    return code


def _report_error(exc):
    payload = {"error": type(exc).__name__, "message": str(exc)}
    constants = getattr(exc, "constants", None)
    if constants is not None:
        payload["constants"] = constants.to_dict()
    print(json.dumps(payload, sort_keys=True), file=sys.stderr)


if __name__ == "__main__":
    sys.exit(main())
