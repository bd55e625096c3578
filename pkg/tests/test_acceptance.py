"""Exit criteria, one test per numbered criterion.

Each test prints (and records for the terminal summary) a single line

    CRITERION <n>: PASS|FAIL <measured values> [<runtime>s / <limit>s]

Run on its own with ``pytest tests/test_acceptance.py -v`` or
``python3 tests/test_acceptance.py``. Runtimes count toward the result.
"""
import time
from functools import lru_cache

import numpy as np
import pytest

from conftest import random_density, random_pure, random_unitary2
from giant_atoms.collective import transition_rates
from giant_atoms.entanglement import concurrence
from giant_atoms.lindblad import density_matrix_violations, evolve_batch, initial_state, liouvillian_matrix
from giant_atoms.rates import CouplingKind, PhysicalParams, coupling_geometry, derive_rates_closed_form, derive_rates_from_geometry, rates_for
from giant_atoms.scenarios import SweepSpec, max_concurrence, max_concurrence_vs_detuning, run_sweep, sudden_birth_time
from giant_atoms.single_excitation import closed_form_excluded, concurrence_closed_form
from giant_atoms.validation import is_degenerate

pytestmark = pytest.mark.acceptance

PI = np.pi
SEP, BRA, NES = CouplingKind


@pytest.fixture
def report(request):
    lines = request.config.__dict__.setdefault("_acceptance_lines", [])

    def emit(n, ok, detail, runtime, limit):
        ok = ok and runtime < limit
        line = f"CRITERION {n}: {'PASS' if ok else 'FAIL'} {detail} [{runtime:.2f}s / {limit:g}s]"
        print(line)
        lines.append(line)
        return ok

    return emit


def _batch(kind, initial, thetas, t, params=None):
    sups = np.array([liouvillian_matrix(rates_for(kind, th), params(th) if params else None) for th in thetas])
    rho0 = np.broadcast_to(initial_state(initial), (len(thetas), 4, 4))
    return evolve_batch(rho0, sups, t)


# trajectories are cached so criterion 10 can re-check them without rerunning

T10 = np.linspace(0, 10, 1001)
GRID64 = np.linspace(0, 2 * PI, 64, endpoint=False)
T100 = np.linspace(0, 100, 10001)
BIRTH_THETAS = (0.6 * PI, 0.75 * PI, 0.85 * PI)


@lru_cache(None)
def crit1_states(kind):
    thetas = [th for th in GRID64 if not closed_form_excluded(kind, th) and not is_degenerate(kind, th)]
    return np.array(thetas), _batch(kind, "eg", thetas, T10)


@lru_cache(None)
def crit2_states():
    return _batch(SEP, "eg", [0.0, PI / 2], T10)


T3 = np.linspace(0, 3 * PI, 3001)


@lru_cache(None)
def crit3_states():
    return _batch(BRA, "eg", [PI / 2], T3)[0]


@lru_cache(None)
def crit4_states():
    return np.concatenate([_batch(SEP, ini, [PI], T10) for ini in ("eg", "ee")])


@lru_cache(None)
def crit8_states():
    return _batch(SEP, "ee", BIRTH_THETAS, T100)


C6_CASES = (
    ("Separate 0.1pi", SEP, 0.1 * PI, 0.029, 0.005),
    ("Separate 0.4pi", SEP, 0.4 * PI, 0.029, 0.005),
    ("Separate 0.6pi", SEP, 0.6 * PI, 0.029, 0.005),
    ("Braided 0.2pi", BRA, 0.2 * PI, 0.029, 0.005),
    ("Nested 0.85pi", NES, 0.85 * PI, 0.37, 0.02),
)
DELTA_EG = np.linspace(0, 2, 100, endpoint=False)
DELTA_EE = np.linspace(0, 5, 101)


def test_criterion_1_closed_form_agreement(report):
    t0 = time.perf_counter()
    worst = {}
    for kind in CouplingKind:
        thetas, states = crit1_states(kind)
        dev = 0.0
        for th, traj in zip(thetas, states):
            dev = max(dev, np.abs(concurrence(traj) - concurrence_closed_form(kind, th, 1.0, T10)).max())
        worst[kind.value] = dev
    ok = max(worst.values()) <= 1e-5
    detail = " ".join(f"{k}={v:.2e}" for k, v in worst.items()) + " (tol 1e-5)"
    assert report(1, ok, detail, time.perf_counter() - t0, 60)


def test_criterion_2_separate_analytic(report):
    t0 = time.perf_counter()
    s = crit2_states()
    d0 = np.abs(concurrence(s[0]) - (1 - np.exp(-8 * T10)) / 2).max()
    d1 = np.abs(concurrence(s[1]) - (1 - np.exp(-4 * T10)) / 2).max()
    ok = d0 <= 1e-6 and d1 <= 1e-6
    assert report(2, ok, f"theta0=0 dev={d0:.2e}, theta0=pi/2 dev={d1:.2e} (tol 1e-6)",
                  time.perf_counter() - t0, 1)


def _zero_crossings(t, y):
    k = np.nonzero(np.sign(y[:-1]) * np.sign(y[1:]) < 0)[0]
    return t[k] - y[k] * (t[k + 1] - t[k]) / (y[k + 1] - y[k])


def test_criterion_3_braided_oscillation(report):
    t0 = time.perf_counter()
    s = crit3_states()
    c = concurrence(s)
    dev = np.abs(c - np.abs(np.sin(2 * T3))).max()
    # C = 2|rho_eg,ge| here; its signed imaginary part changes sign where C vanishes
    zeros = _zero_crossings(T3, s[:, 1, 2].imag)
    period = float(np.mean(np.diff(zeros)))
    ok = dev <= 1e-6 and abs(period - PI / 2) <= 1e-4
    assert report(3, ok, f"dev={dev:.2e} (tol 1e-6), period={period:.8f} vs pi/2 from {zeros.size} zeros",
                  time.perf_counter() - t0, 1)


def test_criterion_4_separate_decoupled(report):
    t0 = time.perf_counter()
    s = crit4_states()
    cmax = max(np.abs(concurrence(x)).max() for x in s)
    drift = max(np.abs(x - x[0]).max() for x in s)
    ok = cmax <= 1e-12 and drift <= 1e-12
    assert report(4, ok, f"max C={cmax:.1e}, max state drift={drift:.1e} (tol 1e-12)",
                  time.perf_counter() - t0, 1)


def test_criterion_5_transition_rates(report):
    t0 = time.perf_counter()
    gm0 = transition_rates(rates_for(SEP, 0.5001 * PI)).gm0
    ok_s = float(f"{gm0:.2e}") == 3.95e-7
    tr = transition_rates(rates_for(NES, 0.85 * PI))
    got = (tr.g2p, tr.g2m, tr.gp0, tr.gm0)
    want = (0.99, 0.91, 1.88, 0.03)
    ok_n = all(abs(a - b) <= 0.01 for a, b in zip(got, want))
    detail = f"Gamma_-0(S)={gm0:.3e}; nested=({', '.join(f'{x:.4f}' for x in got)})"
    assert report(5, ok_s and ok_n, detail, time.perf_counter() - t0, 1)


def test_criterion_6_double_excitation_maxima(report):
    t0 = time.perf_counter()
    parts, ok = [], True
    for label, kind, th, target, tol in C6_CASES:
        cmax, tmax = max_concurrence(kind, "ee", th, horizon=100)
        ok &= abs(cmax - target) <= tol
        parts.append(f"{label}: {cmax:.4f}@{tmax:.1f}")
    assert report(6, ok, "; ".join(parts), time.perf_counter() - t0, 30)


def test_criterion_7_nested_peak(report):
    t0 = time.perf_counter()
    cmax, tmax = max_concurrence(NES, "eg", PI / 3, horizon=20)
    ok = abs(cmax - 0.78) <= 0.01
    assert report(7, ok, f"C_eg max={cmax:.4f} at t={tmax:.3f}", time.perf_counter() - t0, 2)


def test_criterion_8_sudden_birth_ordering(report):
    t0 = time.perf_counter()
    births = [sudden_birth_time(T100, concurrence(s), 1e-4) for s in crit8_states()]
    ok = None not in births and births[0] < births[1] < births[2]
    shown = ", ".join(f"{th / PI:.2f}pi->{'none' if b is None else f'{b:.2f}'}"
                      for th, b in zip(BIRTH_THETAS, births))
    assert report(8, ok, f"birth times {shown}", time.perf_counter() - t0, 5)


def test_criterion_9_detuning(report):
    t0 = time.perf_counter()
    eg = max_concurrence_vs_detuning(BRA, "eg", PI / 2, DELTA_EG, horizon=100)
    ee = max_concurrence_vs_detuning(BRA, "ee", PI / 2, DELTA_EE, horizon=100)
    ok = eg.c_max.min() >= 0.999 and ee.c_max.max() <= 1e-6
    detail = f"eg min C_max={eg.c_max.min():.8f} over delta<2; ee max C_max={ee.c_max.max():.1e}"
    assert report(9, ok, detail, time.perf_counter() - t0, 30)


def _symmetry_deviation():
    theta = np.linspace(0, 2 * PI, 32, endpoint=False)
    t = np.linspace(0, 10, 51)
    i = np.arange(32)

    def c(kind, initial):
        return run_sweep(SweepSpec(kind, initial, theta, t)).channel("concurrence")

    dev = {}
    for kind in (SEP, NES):
        for ini in ("eg", "ee"):
            x = c(kind, ini)
            dev[f"mirror {kind.short} {ini}"] = np.abs(x - x[(-i) % 32]).max()
    for ini in ("eg", "ee"):
        x = c(BRA, ini)
        dev[f"pi-period B {ini}"] = np.abs(x - x[(i + 16) % 32]).max()
        dev[f"pi-mirror B {ini}"] = np.abs(x - x[(16 - i) % 32]).max()
    for kind in (SEP, BRA):
        perm = np.abs(c(kind, "eg") - c(kind, "ge")).max()
        dev[f"permutation {kind.short}"] = perm
    return dev


def test_criterion_10_property_suites(report):
    t0 = time.perf_counter()
    failures = []

    # density-matrix validity along every stored acceptance trajectory, plus the
    # trajectories behind the maxima of criteria 6, 7 and 9 on a sample grid
    stacks = [crit1_states(k)[1] for k in CouplingKind]
    stacks += [crit2_states(), crit3_states()[None], crit4_states(), crit8_states()]
    t_coarse = np.linspace(0, 100, 1001)
    for _, kind, th, _, _ in C6_CASES:
        stacks.append(_batch(kind, "ee", [th], t_coarse))
    stacks.append(_batch(NES, "eg", [PI / 3], np.linspace(0, 20, 201)))
    for ini, grid in (("eg", DELTA_EG), ("ee", DELTA_EE)):
        sups = np.array([liouvillian_matrix(rates_for(BRA, PI / 2), PhysicalParams(PI / 2, delta=d)) for d in grid])
        stacks.append(evolve_batch(np.broadcast_to(initial_state(ini), (grid.size, 4, 4)), sups, t_coarse))
    v = {"hermiticity": 0.0, "trace": 0.0, "min_eigenvalue": 0.0}
    for s in stacks:
        w = density_matrix_violations(s)
        v["hermiticity"] = max(v["hermiticity"], w["hermiticity"])
        v["trace"] = max(v["trace"], w["trace"])
        v["min_eigenvalue"] = min(v["min_eigenvalue"], w["min_eigenvalue"])
    if v["hermiticity"] > 1e-10 or v["trace"] > 1e-9 or v["min_eigenvalue"] < -1e-8:
        failures.append(f"density matrix {v}")

    grid = np.linspace(0, 2 * PI, 256, endpoint=False)
    sums = routes = 0.0
    for kind in CouplingKind:
        geo = coupling_geometry(kind)
        for th in grid:
            routes = max(routes, np.abs(derive_rates_from_geometry(geo, th).as_array()
                                        - derive_rates_closed_form(kind, th).as_array()).max())
            if is_degenerate(kind, th):
                continue
            r = rates_for(kind, th)
            tr = transition_rates(r)
            s = r.Gamma_a + r.Gamma_b
            sums = max(sums, abs(tr.g2p + tr.g2m - s), abs(tr.gp0 + tr.gm0 - s))
    if sums > 1e-12:
        failures.append(f"rate sums {sums:.1e}")
    if routes > 1e-12:
        failures.append(f"rate routes {routes:.1e}")

    sym = _symmetry_deviation()
    for name, d in sym.items():
        tol = 1e-10 if name.startswith("permutation") else 1e-8
        if d > tol:
            failures.append(f"{name} {d:.1e}")

    rng = np.random.default_rng(7)
    lu = pure = 0.0
    for _ in range(100):
        rho = random_density(rng, rank=int(rng.integers(1, 5)))
        u = np.kron(random_unitary2(rng), random_unitary2(rng))
        lu = max(lu, abs(concurrence(rho) - concurrence(u @ rho @ u.conj().T)))
        psi = random_pure(rng)
        a, b, c, d = psi
        pure = max(pure, abs(concurrence(np.outer(psi, psi.conj())) - 2 * abs(a * d - b * c)))
    if lu > 1e-9:
        failures.append(f"local unitary {lu:.1e}")
    if pure > 1e-10:
        failures.append(f"pure state {pure:.1e}")

    detail = (f"{len(stacks)} trajectory stacks (herm {v['hermiticity']:.1e}, trace {v['trace']:.1e}, "
              f"min eig {v['min_eigenvalue']:.1e}); rate sums {sums:.1e}; routes {routes:.1e}; "
              f"symmetry max {max(sym.values()):.1e}; LU {lu:.1e}; pure {pure:.1e}")
    if failures:
        detail += "; failing: " + ", ".join(failures)
    assert report(10, not failures, detail, time.perf_counter() - t0, 60)


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
