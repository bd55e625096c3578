import io
import json

import numpy as np
import pytest

from giant_atoms import __version__
from giant_atoms.cli import TRAJECTORY_HEADER, main
from giant_atoms.config import ConfigError, RunConfig
from giant_atoms.output import config_hash, fmt, read_csv

PI = np.pi


def run(argv):
    out = io.StringIO()
    code = main([str(a) for a in argv], out=out)
    return code, out.getvalue()


def table(text):
    rows = {}
    for line in text.splitlines():
        if line and not line.startswith("#"):
            name, value = line.split()
            rows[name] = float(value)
    return rows


def write_config(tmp_path, name="cfg.json", **cfg):
    path = tmp_path / name
    path.write_text(json.dumps(cfg))
    return path


def load(path):
    header, rows = read_csv(path)
    return header, np.array(rows, dtype=float)


# rates

def test_rates_nested_third_pi():
    code, out = run(["rates", "nested", "1.0471975512"])
    assert code == 0
    r = table(out)
    assert r["Gamma_a"] == pytest.approx(0, abs=1e-9)
    assert r["Gamma_b"] == pytest.approx(3, abs=1e-9)
    assert r["g_ab"] == pytest.approx(1.7320508076, abs=1e-9)


def test_rates_separate_pi():
    code, out = run(["rates", "separate", "3.1415926536"])
    assert code == 0
    for name in ("g_ab", "Gamma_a", "Gamma_b", "Gamma_coll"):
        assert table(out)[name] == pytest.approx(0, abs=1e-9)


def test_rates_braided_zero():
    code, out = run(["rates", "braided", "0"])
    r = table(out)
    assert (r["Gamma_a"], r["Gamma_b"], r["Gamma_coll"], r["g_ab"]) == (4, 4, 4, 0)


def test_rates_twelve_digits():
    _, out = run(["rates", "nested", "0.85", "--pi-units", "--collective"])
    r = table(out)
    assert "0.995977323606" in out
    assert r["Gamma_-0"] == pytest.approx(0.0264288230923, abs=1e-12)
    assert r["Delta"] == 0


def test_rates_degenerate_exit_2(capsys):
    code, _ = run(["rates", "separate", "0", "--collective"])
    assert code == 2
    assert "Omega" in capsys.readouterr().err


def test_rates_bad_kind(capsys):
    code, _ = run(["rates", "twisted", "0"])
    assert code == 2


# evolve

def test_evolve_separate_steady_state(tmp_path):
    cfg = write_config(tmp_path, kind="separate", initial="eg", theta0=0, t_max=5, n_t=51)
    out = tmp_path / "traj.csv"
    assert run(["evolve", cfg, "-o", out])[0] == 0
    header, data = load(out)
    assert header == TRAJECTORY_HEADER
    assert len(header) == 6 + 20
    assert data[-1, 1] == pytest.approx(0.5, abs=1e-4)
    assert data[-1, 0] == 5.0


def test_evolve_ground_state(tmp_path):
    cfg = write_config(tmp_path, kind="nested", initial="gg", theta0=0.7, t_max=2, n_t=11)
    code, text = run(["evolve", cfg])
    assert code == 0
    rows = [ln.split(",") for ln in text.splitlines()[1:] if not ln.startswith("#")]
    data = np.array(rows, dtype=float)
    assert np.all(data[:, 1] == 0)
    assert np.all(data[:, 5] == 1)


def test_evolve_braided_sin(tmp_path):
    cfg = write_config(tmp_path, kind="braided", initial="eg", theta0=0.5, pi_units=True,
                       t_max=3 * PI, n_t=301)
    out = tmp_path / "b.csv"
    assert run(["evolve", cfg, "-o", out])[0] == 0
    _, data = load(out)
    assert np.abs(data[:, 1] - np.abs(np.sin(2 * data[:, 0]))).max() <= 1e-6


def test_evolve_degenerate_note(tmp_path, capsys):
    cfg = write_config(tmp_path, kind="separate", initial="eg", theta0=0, t_max=1, n_t=3)
    assert run(["evolve", cfg])[0] == 0
    assert "degenerate" in capsys.readouterr().err


def test_evolve_amplitude_initial(tmp_path):
    cfg = write_config(tmp_path, kind="braided", initial=[0, 1, [0, 1], 0], theta0=0.3, t_max=1, n_t=3)
    code, text = run(["evolve", cfg])
    assert code == 0
    first = text.splitlines()[1].split(",")
    assert float(first[1]) == pytest.approx(1.0)


def test_evolve_io_error(tmp_path):
    assert run(["evolve", tmp_path / "missing.json"])[0] == 1


def test_evolve_invalid_config(tmp_path):
    assert run(["evolve", write_config(tmp_path, kind="separate", theta0=0, bogus=1)])[0] == 2
    assert run(["evolve", write_config(tmp_path, kind="separate", theta0=0, gamma=-1)])[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(["evolve", bad])[0] == 2


def test_evolve_unstable_step(tmp_path):
    cfg = write_config(tmp_path, kind="separate", initial="ee", theta0=0, t_max=1, n_t=3, dt=0.5)
    assert run(["evolve", cfg])[0] == 2


# sweep

def test_sweep_csv_and_sidecar(tmp_path):
    cfg = write_config(tmp_path, "sweep.json", kind="nested", initial="ee",
                       theta_grid={"start": 0, "stop": 2, "num": 4, "endpoint": False},
                       pi_units=True, t_max=1, n_t=3, channels=["concurrence", "populations"])
    out = tmp_path / "sweep.csv"
    assert run(["sweep", cfg, "-o", out, "--jobs", "2"])[0] == 0
    header, rows = read_csv(out)
    assert header == ["kind", "initial", "theta0", "t", "delta", "channel", "value"]
    assert len(rows) == 4 * 3 * 7
    meta = json.loads((tmp_path / "sweep.meta.json").read_text())
    assert len(meta["errors"]) == 2  # theta0 = 0 and pi are degenerate
    assert json.loads(cfg.read_text())["kind"] == "nested"  # config left alone


def test_sweep_byte_identical(tmp_path, monkeypatch):
    cfg = write_config(tmp_path, kind="braided", initial="eg", theta_grid=[0.1, 0.2, 0.3],
                       delta_grid=[0, 1], t_max=1, n_t=5)
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    run(["sweep", cfg, "-o", a])
    monkeypatch.setenv("GIANT_ATOM_JOBS", "3")
    run(["sweep", cfg, "-o", b])
    assert a.read_bytes() == b.read_bytes()
    assert (tmp_path / "a.meta.json").read_text() == (tmp_path / "b.meta.json").read_text()


def test_jobs_env_invalid(tmp_path, monkeypatch):
    cfg = write_config(tmp_path, kind="braided", theta0=0.1, t_max=1, n_t=2)
    monkeypatch.setenv("GIANT_ATOM_JOBS", "many")
    assert run(["sweep", cfg])[0] == 2


def test_csv_footer(tmp_path):
    cfg = write_config(tmp_path, kind="braided", theta0=0.1, t_max=1, n_t=2)
    _, text = run(["evolve", cfg])
    last = text.splitlines()[-1]
    conf = RunConfig.from_file(cfg).to_dict()
    assert last == f"# giant_atoms {__version__} config_sha256={config_hash(conf)}"


# figure

def test_figure_unknown_id():
    assert run(["figure", "9"])[0] == 2


def test_figure_3(tmp_path):
    code, out = run(["figure", "3", "-o", tmp_path, "--quick"])
    assert code == 0
    names = sorted(p.name for p in tmp_path.iterdir())
    assert names == ["fig3a_rates_separate.csv", "fig3b_rates_braided.csv", "fig3c_rates_nested.csv"]
    header, data = load(tmp_path / "fig3c_rates_nested.csv")
    assert header[2:] == ["Gamma_2+", "Gamma_2-", "Gamma_+0", "Gamma_-0"]


def test_figure_7(tmp_path):
    assert run(["figure", "7", "-o", tmp_path, "--quick"])[0] == 0
    csvs = sorted(p.name for p in tmp_path.glob("*.csv"))
    assert csvs == ["fig7a_landscape_ge.csv", "fig7b_profiles_eg_ge.csv"]
    header, data = load(tmp_path / "fig7b_profiles_eg_ge.csv")
    assert header == ["t", "C_eg_theta0pi", "C_ge_theta0pi", "C_eg_theta0.85pi", "C_ge_theta0.85pi"]
    np.testing.assert_allclose(data[:, 1], data[:, 2], atol=1e-10)


@pytest.mark.slow
def test_figure_4_panels(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert run(["figure", "4", "-o", a, "--quick"])[0] == 0
    csvs = sorted(p.name for p in a.glob("*.csv"))
    assert len(csvs) == 8
    assert [n[4] for n in csvs] == list("abcdefgh")
    run(["figure", "4", "-o", b, "--quick", "--jobs", "2"])
    for name in csvs:
        assert (a / name).read_bytes() == (b / name).read_bytes()


# validate

def test_validate_passes(tmp_path):
    report = tmp_path / "report.csv"
    code, out = run(["validate", "-o", report])
    assert code == 0
    assert "0 failed" in out
    header, rows = read_csv(report)
    assert header == ["check", "kind", "theta0", "max_deviation", "argmax_t", "tolerance", "status"]
    oracle = [r for r in rows if r[0] == "closed_form_vs_2x2_exponential"]
    assert len(oracle) == 3 * 64
    assert all(float(r[3]) <= 1e-6 for r in oracle if r[6] == "pass")
    assert {r[6] for r in rows} <= {"pass", "excluded"}


def test_validate_catches_mutation():
    code, out = run(["validate", "--inject-mutation", "gamma_coll_sign"])
    assert code == 3
    assert ",fail" in out


# config

def test_config_grids():
    cfg = RunConfig.from_dict({"kind": "separate", "theta_grid": {"start": 0, "stop": 1, "num": 3},
                               "pi_units": True, "t_grid": [0, 1, 2]})
    np.testing.assert_allclose(cfg.theta_values(), [0, PI / 2, PI])
    np.testing.assert_array_equal(cfg.t_values(), [0, 1, 2])
    spec = cfg.to_sweep_spec()
    assert spec.shape == (3, 1, 3)


@pytest.mark.parametrize("bad", [
    {"kind": "separate", "theta0": 0, "extra": 1},
    {"theta0": 0},
    {"kind": "separate", "theta0": 0, "channels": ["entropy"]},
    {"kind": "separate", "theta0": 0, "initial": "xx"},
    {"kind": "separate", "theta0": 0, "gamma_phi": -0.1},
    {"kind": "separate", "theta0": 0, "dt": 0},
    {"kind": "separate", "theta0": 0, "theta_grid": {"start": 0, "num": 3}},
    {"kind": "separate", "theta0": 0, "initial": [[1, 2, 3]]},
])
def test_config_rejects(bad):
    with pytest.raises(ConfigError):
        RunConfig.from_dict(bad)


def test_fmt_locale_free():
    assert fmt(-0.0) == "0.0"
    assert fmt(0.1) == "0.1"
    assert fmt(np.float64(1e-20)) == "1e-20"
    assert fmt(float("nan")) == "nan"
    assert fmt(3) == "3"
