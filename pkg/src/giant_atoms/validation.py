"""Self-check suite behind ``giant-atoms validate``.

Each check yields report rows ``(check, kind, theta0, max_deviation,
argmax_t, tolerance, status)``; the suite passes when no row has status
``fail``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .collective import DEGENERACY_EPS, transition_rates
from .lindblad import evolve_batch, initial_state, liouvillian_matrix
from .entanglement import concurrence
from .rates import (
    CouplingKind,
    coupling_geometry,
    derive_rates_closed_form,
    derive_rates_from_geometry,
    rates_for,
)
from .single_excitation import closed_form_excluded, concurrence_closed_form, oracle_scan

ORACLE_TOL = 1e-6
MASTER_TOL = 1e-5
RATE_TOL = 1e-12

REPORT_HEADER = ("check", "kind", "theta0", "max_deviation", "argmax_t", "tolerance", "status")

MUTATIONS = ("gamma_coll_sign",)


@dataclass(frozen=True)
class ReportRow:
    check: str
    kind: str
    theta0: float
    max_deviation: float
    argmax_t: float
    tolerance: float
    status: str

    def as_tuple(self):
        return (
            self.check,
            self.kind,
            self.theta0,
            self.max_deviation,
            self.argmax_t,
            self.tolerance,
            self.status,
        )


def _status(dev, tol):
    return "pass" if dev <= tol else "fail"


def is_degenerate(kind, theta0: float, eps: float = DEGENERACY_EPS) -> bool:
    r = rates_for(kind, theta0)
    return bool(np.hypot(2 * r.g_ab, r.delta_omega_a - r.delta_omega_b) <= eps)


def _mutated_rates(mutation):
    if mutation is None:
        return rates_for
    if mutation == "gamma_coll_sign":
        def fn(kind, theta0, gamma=1.0):
            r = rates_for(kind, theta0, gamma)
            return r.replace(Gamma_coll=-r.Gamma_coll)
        return fn
    raise ValueError(f"unknown mutation {mutation!r}; expected one of {MUTATIONS}")


def check_oracle(theta_grid, t_grid, mutation=None):
    rates_fn = _mutated_rates(mutation)
    for kind in CouplingKind:
        for row in oracle_scan(kind, theta_grid, t_grid, rates_fn=rates_fn):
            status = "excluded" if row.excluded else _status(row.max_deviation, ORACLE_TOL)
            yield ReportRow(
                "closed_form_vs_2x2_exponential",
                row.kind,
                row.theta0,
                row.max_deviation,
                row.argmax_t,
                ORACLE_TOL,
                status,
            )


def check_rate_routes(theta_grid):
    for kind in CouplingKind:
        geo = coupling_geometry(kind)
        worst, at = 0.0, 0.0
        for th in theta_grid:
            diff = np.abs(
                derive_rates_from_geometry(geo, th).as_array()
                - derive_rates_closed_form(kind, th).as_array()
            ).max()
            if diff > worst:
                worst, at = float(diff), float(th)
        yield ReportRow("rates_geometry_vs_closed_form", kind.value, at, worst, float("nan"),
                        RATE_TOL, _status(worst, RATE_TOL))


def check_rate_sums(theta_grid):
    for kind in CouplingKind:
        worst, at = 0.0, 0.0
        for th in theta_grid:
            if is_degenerate(kind, th):
                continue
            r = rates_for(kind, th)
            tr = transition_rates(r)
            total = r.Gamma_a + r.Gamma_b
            diff = max(abs(tr.g2p + tr.g2m - total), abs(tr.gp0 + tr.gm0 - total))
            if diff > worst:
                worst, at = float(diff), float(th)
        yield ReportRow("transition_rate_sums", kind.value, at, worst, float("nan"),
                        RATE_TOL, _status(worst, RATE_TOL))


def check_master_equation(theta_grid, t_grid, dt=1e-3):
    rho0 = initial_state("eg")
    for kind in CouplingKind:
        thetas = [th for th in theta_grid if not closed_form_excluded(kind, th)]
        sups = np.array([liouvillian_matrix(rates_for(kind, th)) for th in thetas])
        states = evolve_batch(np.broadcast_to(rho0, (len(thetas), 4, 4)), sups, t_grid, dt)
        c_me = concurrence(states)
        for th, c in zip(thetas, c_me):
            dev = np.abs(c - concurrence_closed_form(kind, th, 1.0, t_grid))
            k = int(np.argmax(dev))
            yield ReportRow("master_equation_vs_closed_form", kind.value, float(th),
                            float(dev[k]), float(t_grid[k]), MASTER_TOL,
                            _status(dev[k], MASTER_TOL))


def run_validation(
    mutation: str | None = None,
    n_theta: int = 64,
    n_theta_rates: int = 256,
    n_theta_master: int = 16,
    t_max: float = 10.0,
    n_t: int = 201,
) -> list[ReportRow]:
    theta = np.linspace(0, 2 * np.pi, n_theta, endpoint=False)
    theta_rates = np.linspace(0, 2 * np.pi, n_theta_rates, endpoint=False)
    theta_me = np.linspace(0, 2 * np.pi, n_theta_master, endpoint=False) + np.pi / n_theta_master
    t = np.linspace(0, t_max, n_t)
    rows = []
    rows.extend(check_oracle(theta, t, mutation))
    rows.extend(check_rate_routes(theta_rates))
    rows.extend(check_rate_sums(theta_rates))
    rows.extend(check_master_equation(theta_me, t))
    return rows


def passed(rows) -> bool:
    return all(r.status != "fail" for r in rows)
