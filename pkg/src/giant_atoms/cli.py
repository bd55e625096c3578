"""Command-line interface: ``giant-atoms {rates,evolve,sweep,figure,validate}``.

All quantities are in units with gamma = 1 unless a config says otherwise.
Exit codes: 0 ok, 1 I/O error, 2 invalid input or degenerate collective
basis, 3 validation failure.
"""
from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import __version__
from .collective import DegenerateBasisError, collective_basis, project_states, transition_rates
from .config import ConfigError, RunConfig
from .entanglement import NumericalError
from .figures import FIGURE_IDS, FigureOptions, build_figure
from .lindblad import BASIS_LABELS, StepSizeError, evolve, initial_state
from .output import csv_string, fmt, write_csv, write_sweep, sweep_rows, SWEEP_HEADER
from .rates import RATE_FIELDS, CouplingKind, rates_for
from .scenarios import RAW_ELEMENTS, run_sweep
from .validation import MUTATIONS, REPORT_HEADER, passed, run_validation

EXIT_OK, EXIT_IO, EXIT_INVALID, EXIT_FAILED = 0, 1, 2, 3

TRAJECTORY_HEADER = (
    ["t", "C", "rho22", "rho_pp", "rho_mm", "rho00"]
    + [
        f"{part}_{BASIS_LABELS[i]}_{BASIS_LABELS[j]}"
        for i, j in RAW_ELEMENTS
        for part in ("re", "im")
    ]
)


class CliError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


def _jobs(value):
    if value is not None:
        return max(1, int(value))
    env = os.environ.get("GIANT_ATOM_JOBS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise CliError(f"GIANT_ATOM_JOBS must be an integer, got {env!r}", EXIT_INVALID)
    return 1


def _num(x: float) -> str:
    # 12 significant digits; values at rounding-noise level print as 0
    if abs(x) < 1e-12:
        return "0"
    return format(float(x), ".12g")


def cmd_rates(args, out) -> int:
    theta0 = args.theta0 * np.pi if args.pi_units else args.theta0
    kind = CouplingKind.parse(args.kind)
    rates = rates_for(kind, theta0, args.gamma)
    out.write(f"# {kind.value} theta0={fmt(theta0)} gamma={fmt(args.gamma)}\n")
    for name, value in zip(RATE_FIELDS, rates.as_array()):
        out.write(f"{name:<14}{_num(value)}\n")
    if args.collective:
        try:
            tr = transition_rates(rates, args.delta)
            basis = collective_basis(rates, args.delta)
        except DegenerateBasisError as exc:
            raise CliError(f"degenerate collective basis (Omega too small): {exc}", EXIT_INVALID)
        out.write(f"{'Omega':<14}{_num(basis.omega)}\n")
        for name, value in tr.as_dict().items():
            out.write(f"{name:<14}{_num(value)}\n")
    return EXIT_OK


def trajectory_rows(traj, basis):
    coll = project_states(traj.states, basis)
    c = traj.concurrence
    for k, t in enumerate(traj.times):
        rho = traj.states[k]
        row = [t, c[k], coll[k, 0, 0].real, coll[k, 1, 1].real, coll[k, 2, 2].real, coll[k, 3, 3].real]
        for i, j in RAW_ELEMENTS:
            row += [rho[i, j].real, rho[i, j].imag]
        yield row


def _load(path) -> RunConfig:
    try:
        return RunConfig.from_file(path)
    except OSError as exc:
        raise CliError(f"cannot read config: {exc}", EXIT_IO)


def cmd_evolve(args, out) -> int:
    cfg = _load(args.config)
    if args.dt is not None:
        cfg.dt = args.dt
    thetas = cfg.theta_values()
    if thetas.size != 1:
        raise ConfigError("evolve needs a single 'theta0'")
    theta0 = float(thetas[0])
    rates = rates_for(cfg.coupling, theta0, cfg.gamma)
    params = cfg.params(theta0)
    rho0 = initial_state(cfg.initial_state_spec)
    traj = evolve(rho0, rates, params, cfg.t_values(), dt=cfg.dt)
    basis = collective_basis(rates, cfg.delta, allow_degenerate=True)
    if basis.degenerate:
        print(
            f"note: Omega = {basis.omega:.3g} is degenerate; populations use (|eg> +- |ge>)/sqrt(2)",
            file=sys.stderr,
        )
    config = cfg.to_dict()
    target = args.output or cfg.output
    rows = trajectory_rows(traj, basis)
    if target:
        write_csv(target, TRAJECTORY_HEADER, rows, config)
    else:
        out.write(csv_string(TRAJECTORY_HEADER, rows, config))
    return EXIT_OK


def cmd_sweep(args, out) -> int:
    cfg = _load(args.config)
    if args.dt is not None:
        cfg.dt = args.dt
    spec = cfg.to_sweep_spec()
    result = run_sweep(spec, dt=cfg.dt, jobs=_jobs(args.jobs))
    config = cfg.to_dict()
    target = args.output or cfg.output
    if target:
        write_sweep(result, target, config)
    else:
        out.write(csv_string(SWEEP_HEADER, sweep_rows(result), config))
    for (i, j), msg in sorted(result.errors.items()):
        print(
            f"cell theta0={fmt(spec.theta_grid[i])} delta={fmt(spec.delta_grid[j])}: {msg}",
            file=sys.stderr,
        )
    return EXIT_OK


def cmd_figure(args, out) -> int:
    if args.id not in FIGURE_IDS:
        raise CliError(f"unknown figure id {args.id!r}; expected one of {', '.join(FIGURE_IDS)}",
                       EXIT_INVALID)
    opts = FigureOptions(jobs=_jobs(args.jobs))
    if args.dt is not None:
        opts.dt = args.dt
    if args.quick:
        opts.n_theta, opts.n_t, opts.n_delta = 41, 201, 21
        opts.horizon_scale, opts.samples_per_unit, opts.n_theta_rates = 0.2, 10, 101
        opts.horizon = 100.0
    paths = build_figure(args.id, args.outdir, opts)
    for p in paths:
        out.write(f"{p}\n")
    return EXIT_OK


def cmd_validate(args, out) -> int:
    rows = run_validation(mutation=args.inject_mutation)
    table = [r.as_tuple() for r in rows]
    config = {"validate": True, "mutation": args.inject_mutation}
    if args.output:
        write_csv(args.output, REPORT_HEADER, table, config)
    failures = [r for r in rows if r.status == "fail"]
    for r in failures:
        out.write(",".join(fmt(v) for v in r.as_tuple()) + "\n")
    n_pass = sum(r.status == "pass" for r in rows)
    n_excl = sum(r.status == "excluded" for r in rows)
    out.write(f"validate: {n_pass} passed, {len(failures)} failed, {n_excl} excluded\n")
    return EXIT_OK if passed(rows) else EXIT_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="giant-atoms",
        description="Entanglement dynamics of two giant atoms in a waveguide (gamma = 1 units).",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("rates", help="print master-equation coefficients")
    p.add_argument("kind", help="separate | braided | nested")
    p.add_argument("theta0", type=float, help="phase shift (radians, or multiples of pi with --pi-units)")
    p.add_argument("--collective", action="store_true", help="also print transition rates")
    p.add_argument("--pi-units", action="store_true")
    p.add_argument("--gamma", type=float, default=1.0)
    p.add_argument("--delta", type=float, default=0.0, help="detuning for the collective basis")
    p.set_defaults(func=cmd_rates)

    p = sub.add_parser("evolve", help="integrate one trajectory from a JSON config")
    p.add_argument("config")
    p.add_argument("-o", "--output")
    p.add_argument("--dt", type=float)
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("sweep", help="run a (theta0, t[, delta]) sweep from a JSON config")
    p.add_argument("config")
    p.add_argument("-o", "--output")
    p.add_argument("--dt", type=float)
    p.add_argument("--jobs", type=int)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("figure", help="write the panel CSVs of one figure")
    p.add_argument("id", help=f"one of {', '.join(FIGURE_IDS)}")
    p.add_argument("-o", "--outdir", default="figures")
    p.add_argument("--jobs", type=int)
    p.add_argument("--dt", type=float)
    p.add_argument("--quick", action="store_true", help="coarse grids for a fast preview")
    p.set_defaults(func=cmd_figure)

    p = sub.add_parser("validate", help="run the oracle and invariant checks")
    p.add_argument("-o", "--output", help="report CSV path")
    p.add_argument("--inject-mutation", choices=MUTATIONS, help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ConfigError, DegenerateBasisError, StepSizeError, NumericalError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
