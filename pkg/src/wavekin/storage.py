"""Output files: CSV tables with JSON headers, trajectory files and the run manifest.

CSV bodies are written with a fixed float format ('%.17g', '.' decimal)
so identical inputs give byte-identical files. Every CSV gets a sibling
``.json`` describing its columns and carrying the same rows.
"""

import csv
import hashlib
import io
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ConfigError
from .spectral import RadialFunction, Trajectory, UniformLogGrid

__all__ = ["write_table", "save_trajectory", "load_trajectory", "RunManifest", "config_hash"]

_MAGIC = "wavekin-trajectory-1"


def _fmt(x):
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return "%.17g" % float(x)
    return str(x)


def write_table(path, columns, rows, meta=None):
    """Write ``rows`` (sequences matching ``columns``) as CSV plus a JSON mirror.

    ``columns`` maps each column name to a one-line description.
    Returns the two paths written.
    """
    path = Path(path)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(list(columns))
    for r in rows:
        w.writerow([_fmt(x) for x in r])
    path.write_text(buf.getvalue(), encoding="utf-8")
    header = {"columns": dict(columns), "meta": meta or {},
              "rows": [[_json_safe(x) for x in r] for r in rows]}
    side = path.with_suffix(".json")
    side.write_text(json.dumps(header, indent=1, sort_keys=True, default=_json_safe) + "\n",
                    encoding="utf-8")
    return [path, side]


def _json_safe(x):
    if isinstance(x, (np.floating, float)):
        x = float(x)
        return x if np.isfinite(x) else str(x)
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.bool_):
        return bool(x)
    if isinstance(x, (tuple, list)):
        return [_json_safe(y) for y in x]
    if isinstance(x, dict):
        return {str(k): _json_safe(v) for k, v in x.items()}
    return x if isinstance(x, (int, str, bool)) or x is None else str(x)


def config_hash(text_or_dict):
    if isinstance(text_or_dict, dict):
        text_or_dict = json.dumps(_json_safe(text_or_dict), sort_keys=True)
    return hashlib.sha256(text_or_dict.encode()).hexdigest()


def save_trajectory(path, traj):
    """One JSON header line (grid, times, hash), then float64 little-endian states."""
    g = traj.grid
    head = {"format": _MAGIC, "grid": {"xi_min": g.xi_min, "xi_max": g.xi_max, "n": g.n},
            "times": [float(t) for t in traj.times], "config_hash": traj.provenance,
            "dtype": "<f8", "shape": [len(traj.times), g.n]}
    data = np.ascontiguousarray(traj.array(), dtype="<f8")
    with open(path, "wb") as fh:
        fh.write((json.dumps(head, sort_keys=True) + "\n").encode())
        fh.write(data.tobytes())
    return Path(path)


def load_trajectory(path):
    try:
        with open(path, "rb") as fh:
            head = json.loads(fh.readline().decode())
            raw = fh.read()
    except (OSError, ValueError) as err:
        raise ConfigError(f"cannot read trajectory {path}: {err}") from None
    if head.get("format") != _MAGIC:
        raise ConfigError(f"{path} is not a trajectory file")
    g = UniformLogGrid(head["grid"]["xi_min"], head["grid"]["xi_max"], head["grid"]["n"])
    arr = np.frombuffer(raw, dtype=head["dtype"]).reshape(head["shape"])
    states = [RadialFunction(g, row.copy()) for row in arr]
    return Trajectory(head["times"], states, provenance=head["config_hash"], info={})


@dataclass
class RunManifest:
    """Record of one CLI run: config hash, version, inputs echo, checks, outputs."""

    subcommand: str
    config_hash: str
    version: str
    echo: dict
    checks: list = field(default_factory=list)
    outputs: list = field(default_factory=list)

    def check(self, name, passed, value=None, limit=None):
        self.checks.append({"name": name, "passed": bool(passed),
                            "value": _json_safe(value), "limit": _json_safe(limit)})
        return bool(passed)

    @property
    def passed(self):
        return all(c["passed"] for c in self.checks)

    def add(self, paths):
        self.outputs.extend(str(Path(p).name) for p in paths)

    def write(self, out_dir):
        path = Path(out_dir) / "manifest.json"
        body = {"subcommand": self.subcommand, "config_hash": self.config_hash,
                "version": self.version, "echo": _json_safe(self.echo),
                "checks": self.checks, "n_passed": sum(c["passed"] for c in self.checks),
                "n_checks": len(self.checks), "outputs": sorted(self.outputs)}
        path.write_text(json.dumps(body, indent=1, sort_keys=True) + "\n", encoding="utf-8")
        return path
