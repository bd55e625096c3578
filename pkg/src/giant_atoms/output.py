"""CSV and JSON writers shared by the CLI and the figure bundles.

Numbers are written with ``repr(float)``: shortest round-trip form, always
``.`` as decimal separator, independent of locale. Every CSV has a header
row and ends in a comment line carrying the package version and a hash of
the configuration that produced it.
"""
from __future__ import annotations

import hashlib
import io
import json
import math
from pathlib import Path
from typing import Iterable, Sequence, TextIO

import numpy as np

from . import __version__
from .scenarios import initial_label


def fmt(x) -> str:
    if isinstance(x, str):
        return x
    if isinstance(x, (bool, int)) and not isinstance(x, float):
        return str(x)
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if x == 0:
        return "0.0"  # drop the sign of -0.0
    return repr(x)


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), default=_json_default)


def _json_default(o):
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, np.generic):
        return o.item()
    if isinstance(o, complex):
        return [o.real, o.imag]
    raise TypeError(f"not JSON serializable: {type(o).__name__}")


def config_hash(config) -> str:
    return hashlib.sha256(canonical_json(config).encode()).hexdigest()[:16]


def footer(config) -> str:
    return f"# giant_atoms {__version__} config_sha256={config_hash(config)}"


def write_csv(
    target: str | Path | TextIO,
    header: Sequence[str],
    rows: Iterable[Sequence],
    config,
) -> None:
    """Write ``rows`` under ``header`` and close with the version/hash footer."""
    if isinstance(target, (str, Path)):
        path = Path(target)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", newline="", encoding="utf-8") as fh:
            _write(fh, header, rows, config)
    else:
        _write(target, header, rows, config)


def _write(fh: TextIO, header, rows, config):
    fh.write(",".join(header) + "\n")
    for row in rows:
        fh.write(",".join(fmt(v) for v in row) + "\n")
    fh.write(footer(config) + "\n")


def csv_string(header, rows, config) -> str:
    buf = io.StringIO()
    _write(buf, header, rows, config)
    return buf.getvalue()


def read_csv(path: str | Path) -> tuple[list[str], list[list[str]]]:
    """Header and data rows of a CSV written here; comment lines skipped."""
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    data = [ln for ln in lines if ln and not ln.startswith("#")]
    return data[0].split(","), [ln.split(",") for ln in data[1:]]


def write_json(path: str | Path, obj) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(
        json.dumps(obj, sort_keys=True, indent=2, default=_json_default) + "\n", encoding="utf-8"
    )


SWEEP_HEADER = ("kind", "initial", "theta0", "t", "delta", "channel", "value")


def sweep_rows(result):
    spec = result.spec
    label = initial_label(spec.initial)
    for i, th in enumerate(spec.theta_grid):
        for j, de in enumerate(spec.delta_grid):
            for name in spec.channel_names():
                vals = result.values[name][i, j]
                for t, v in zip(spec.t_grid, vals):
                    yield (spec.kind.value, label, th, t, de, name, v)


_VOLATILE = ("wall_time_s", "jobs")


def write_sweep(result, path: str | Path, config=None) -> Path:
    """Long-format sweep CSV plus a ``<stem>.meta.json`` metadata sidecar; returns the sidecar path."""
    path = Path(path)
    config = config if config is not None else result.spec.to_dict()
    write_csv(path, SWEEP_HEADER, sweep_rows(result), config)
    sidecar = path.with_name(path.stem + ".meta.json")
    write_json(
        sidecar,
        {
            "version": __version__,
            "config_sha256": config_hash(config),
            "spec": result.spec.to_dict(),
            # wall time and worker count vary between identical runs
            "metadata": {k: v for k, v in result.metadata.items() if k not in _VOLATILE},
            "errors": [
                {"theta0": float(result.spec.theta_grid[i]),
                 "delta": float(result.spec.delta_grid[j]),
                 "error": msg}
                for (i, j), msg in sorted(result.errors.items())
            ],
        },
    )
    return sidecar
