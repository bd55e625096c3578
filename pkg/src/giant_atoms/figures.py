"""CSV bundles reproducing each figure family, one file per panel.

File naming: ``fig<id><panel>_<content>.csv`` (e.g. ``fig4a_landscape_eg.csv``),
``detuning<panel>_<kind>_<initial>.csv`` for the detuning scans.

Column conventions
------------------
* landscapes: long format ``kind, initial, theta0, t, delta, channel, value``
* profiles: ``t`` then one ``C_theta<x>pi`` column per phase shift
* populations: ``t`` then ``rho_pp_theta<x>pi`` / ``rho_mm_theta<x>pi`` pairs
* phase cuts: ``theta0_over_pi, theta0`` then one ``C_gt<x>`` column per time
* rates: ``theta0_over_pi, theta0`` then the four ladder rates (NaN where the
  collective states are degenerate)
* detuning: ``delta`` then ``Cmax_theta<x>pi`` and ``tmax_theta<x>pi`` per phase

Phase shifts and times not pinned down by the published figures were picked
to show the feature each panel is about (dark-state plateau, sudden birth,
oscillation), and are listed in ``FIGURE_SETTINGS``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .collective import DegenerateBasisError, transition_rates
from .lindblad import DEFAULT_DT
from .output import write_csv, write_sweep
from .rates import CouplingKind, rates_for
from .scenarios import SweepSpec, max_concurrence_vs_detuning, phase_cut, run_sweep

PI = np.pi
FIGURE_IDS = ("3", "4", "5", "6", "7", "detuning")


@dataclass
class FigureOptions:
    n_theta: int = 201
    n_t: int = 1001
    t_landscape: float = 10.0
    n_delta: int = 101
    delta_max: float = 5.0
    horizon: float = 100.0
    samples_per_unit: int = 20
    n_theta_rates: int = 401
    horizon_scale: float = 1.0
    dt: float = DEFAULT_DT
    jobs: int = 1

    def as_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass
class FamilySettings:
    kind: CouplingKind
    profile_eg: list
    profile_ee: list
    horizon_eg: float
    horizon_ee: float
    pop_eg: list
    pop_ee: list
    pop_horizon_eg: float
    pop_horizon_ee: float
    cut_eg: list
    cut_ee: list
    extra: dict = field(default_factory=dict)


# phase shifts in units of pi
FIGURE_SETTINGS = {
    "4": FamilySettings(
        CouplingKind.SEPARATE,
        profile_eg=[0, 0.25, 0.5, 0.75, 0.83], profile_ee=[0.1, 0.4, 0.6, 0.85, 0.9],
        horizon_eg=50, horizon_ee=100,
        pop_eg=[0.001, 0.83], pop_ee=[0.1, 0.83],
        pop_horizon_eg=20, pop_horizon_ee=100,
        cut_eg=[0.5, 2.0, 10.0], cut_ee=[10.0, 40.0, 100.0],
    ),
    "5": FamilySettings(
        CouplingKind.BRAIDED,
        profile_eg=[0, 0.1, 0.4, 0.45, 0.5], profile_ee=[0.1, 0.2, 0.3],
        horizon_eg=10, horizon_ee=20,
        pop_eg=[0.001, 1 / 3], pop_ee=[0.2, 0.3],
        pop_horizon_eg=10, pop_horizon_ee=20,
        cut_eg=[PI / 4, 3 * PI / 4, 7 * PI / 4], cut_ee=[2.0, 5.0, 10.0],
    ),
    "6": FamilySettings(
        CouplingKind.NESTED,
        profile_eg=[0, 1 / 3, 0.85], profile_ee=[1 / 3, 2 / 3, 0.8, 0.85],
        horizon_eg=20, horizon_ee=100,
        pop_eg=[1 / 3, 0.85], pop_ee=[1 / 3, 0.85],
        pop_horizon_eg=20, pop_horizon_ee=100,
        cut_eg=[1.0, 5.0, 10.0], cut_ee=[0.7, 20.0, 40.0],
    ),
}

DETUNING_PANELS = {
    "a": (CouplingKind.SEPARATE, "eg", [0.1, 0.4, 0.6, 0.85]),
    "b": (CouplingKind.SEPARATE, "ee", [0.1, 0.4, 0.6, 0.85]),
    "c": (CouplingKind.BRAIDED, "eg", [0, 1 / 8, 1 / 3, 0.5]),
    "d": (CouplingKind.BRAIDED, "ee", [0.1, 0.2, 0.3, 0.5]),
    "e": (CouplingKind.NESTED, "eg", [1 / 3, 0.5, 0.85]),
    "f": (CouplingKind.NESTED, "ee", [1 / 3, 0.85]),
}


def _tag(x_over_pi: float) -> str:
    return f"theta{x_over_pi:.4g}pi"


def _time_grid(horizon, opts: FigureOptions):
    horizon = horizon * opts.horizon_scale
    n = int(round(horizon * opts.samples_per_unit)) + 1
    return np.linspace(0.0, horizon, max(n, 2))


def _landscape(kind, initial, path, opts, config):
    spec = SweepSpec(
        kind,
        initial,
        np.linspace(0, 2 * PI, opts.n_theta, endpoint=False),
        np.linspace(0, opts.t_landscape, opts.n_t),
    )
    res = run_sweep(spec, dt=opts.dt, jobs=opts.jobs)
    write_sweep(res, path, config)
    return path


def _profiles(kind, initial, thetas, horizon, path, opts, config):
    t = _time_grid(horizon, opts)
    spec = SweepSpec(kind, initial, np.array(thetas) * PI, t)
    res = run_sweep(spec, dt=opts.dt, jobs=opts.jobs)
    c = res.channel("concurrence")
    header = ["t"] + [f"C_{_tag(x)}" for x in thetas]
    write_csv(path, header, (
        (t[k], *c[:, k]) for k in range(t.size)
    ), config)
    return path


def _populations(kind, initial, thetas, horizon, path, opts, config):
    t = _time_grid(horizon, opts)
    spec = SweepSpec(kind, initial, np.array(thetas) * PI, t, channels=("populations",))
    res = run_sweep(spec, dt=opts.dt, jobs=opts.jobs)
    pp, mm = res.channel("rho_pp"), res.channel("rho_mm")
    header = ["t"]
    for x in thetas:
        header += [f"rho_pp_{_tag(x)}", f"rho_mm_{_tag(x)}"]
    rows = []
    for k in range(t.size):
        row = [t[k]]
        for i in range(len(thetas)):
            row += [pp[i, k], mm[i, k]]
        rows.append(row)
    write_csv(path, header, rows, config)
    return path


def _cut(kind, initial, times, path, opts, config):
    theta = np.linspace(0, 2 * PI, opts.n_theta, endpoint=False)
    cut = phase_cut(kind, initial, times, theta, dt=opts.dt, jobs=opts.jobs)
    header = ["theta0_over_pi", "theta0"] + [f"C_gt{t:.6g}" for t in cut.t_values]
    write_csv(path, header, (
        (th / PI, th, *cut.curves[:, i]) for i, th in enumerate(theta)
    ), config)
    return path


def figure_rates(outdir: Path, opts: FigureOptions, config) -> list[Path]:
    theta = np.linspace(0, 2 * PI, opts.n_theta_rates)
    paths = []
    for panel, kind in zip("abc", CouplingKind):
        rows = []
        for th in theta:
            try:
                tr = transition_rates(rates_for(kind, th))
                vals = (tr.g2p, tr.g2m, tr.gp0, tr.gm0)
            except DegenerateBasisError:
                vals = (np.nan,) * 4
            rows.append((th / PI, th, *vals))
        path = outdir / f"fig3{panel}_rates_{kind.value}.csv"
        write_csv(path, ["theta0_over_pi", "theta0", "Gamma_2+", "Gamma_2-", "Gamma_+0", "Gamma_-0"],
                  rows, config)
        paths.append(path)
    return paths


def figure_family(fig_id: str, outdir: Path, opts: FigureOptions, config) -> list[Path]:
    s = FIGURE_SETTINGS[fig_id]
    k = s.kind
    p = f"fig{fig_id}"
    return [
        _landscape(k, "eg", outdir / f"{p}a_landscape_eg.csv", opts, config),
        _landscape(k, "ee", outdir / f"{p}b_landscape_ee.csv", opts, config),
        _profiles(k, "eg", s.profile_eg, s.horizon_eg, outdir / f"{p}c_profiles_eg.csv", opts, config),
        _profiles(k, "ee", s.profile_ee, s.horizon_ee, outdir / f"{p}d_profiles_ee.csv", opts, config),
        _populations(k, "eg", s.pop_eg, s.pop_horizon_eg, outdir / f"{p}e_populations_eg.csv", opts, config),
        _populations(k, "ee", s.pop_ee, s.pop_horizon_ee, outdir / f"{p}f_populations_ee.csv", opts, config),
        _cut(k, "eg", s.cut_eg, outdir / f"{p}g_phasecut_eg.csv", opts, config),
        _cut(k, "ee", s.cut_ee, outdir / f"{p}h_phasecut_ee.csv", opts, config),
    ]


def figure_nested_ge(outdir: Path, opts: FigureOptions, config) -> list[Path]:
    kind = CouplingKind.NESTED
    paths = [_landscape(kind, "ge", outdir / "fig7a_landscape_ge.csv", opts, config)]
    t = _time_grid(50, opts)
    thetas = [0.0, 0.85]
    curves = {}
    for initial in ("eg", "ge"):
        spec = SweepSpec(kind, initial, np.array(thetas) * PI, t)
        curves[initial] = run_sweep(spec, dt=opts.dt, jobs=opts.jobs).channel("concurrence")
    header = ["t"]
    for x in thetas:
        header += [f"C_eg_{_tag(x)}", f"C_ge_{_tag(x)}"]
    rows = []
    for k in range(t.size):
        row = [t[k]]
        for i in range(len(thetas)):
            row += [curves["eg"][i, k], curves["ge"][i, k]]
        rows.append(row)
    path = outdir / "fig7b_profiles_eg_ge.csv"
    write_csv(path, header, rows, config)
    paths.append(path)
    return paths


def figure_detuning(outdir: Path, opts: FigureOptions, config) -> list[Path]:
    deltas = np.linspace(0, opts.delta_max, opts.n_delta)
    horizon = opts.horizon * opts.horizon_scale
    paths = []
    for panel, (kind, initial, thetas) in DETUNING_PANELS.items():
        cols = []
        for x in thetas:
            scan = max_concurrence_vs_detuning(kind, initial, x * PI, deltas, horizon, dt=opts.dt)
            cols.append((scan.c_max, scan.t_at_max))
        header = ["delta"]
        for x in thetas:
            header += [f"Cmax_{_tag(x)}", f"tmax_{_tag(x)}"]
        rows = []
        for j, d in enumerate(deltas):
            row = [d]
            for cmax, tmax in cols:
                row += [cmax[j], tmax[j]]
            rows.append(row)
        path = outdir / f"detuning{panel}_{kind.value}_{initial}.csv"
        write_csv(path, header, rows, config)
        paths.append(path)
    return paths


def build_figure(fig_id: str, outdir: str | Path, opts: FigureOptions | None = None) -> list[Path]:
    """Write all panel CSVs of one figure into ``outdir``; returns the paths."""
    fig_id = str(fig_id)
    if fig_id not in FIGURE_IDS:
        raise KeyError(f"unknown figure id {fig_id!r}; expected one of {FIGURE_IDS}")
    opts = opts or FigureOptions()
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    config = {"figure": fig_id, "options": {k: v for k, v in opts.as_dict().items() if k != "jobs"}}
    if fig_id == "3":
        return figure_rates(outdir, opts, config)
    if fig_id == "7":
        return figure_nested_ge(outdir, opts, config)
    if fig_id == "detuning":
        return figure_detuning(outdir, opts, config)
    return figure_family(fig_id, outdir, opts, config)
