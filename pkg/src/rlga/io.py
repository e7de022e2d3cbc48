"""CSV and key-value file formats."""

from __future__ import annotations

import csv
import dataclasses
from pathlib import Path

import numpy as np

from .optimizer import ConvergenceRecord, RunConfig
from .wake import VelocityGrid

CONVERGENCE_FIELDS = ["generation", "best_fitness", "best_fobj", "best_power_kw", "n_turbines"]
RL_FIELDS = ["action_index", "reward", "state"]


def fmt6(v: float) -> str:
    return f"{v:.6g}"


def write_layout(path, positions, indices=None) -> None:
    """``index,x,y`` rows; ``indices`` default to 0..n-1."""
    pos = np.asarray(positions, dtype=float).reshape(-1, 2)
    if indices is None:
        indices = range(len(pos))
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["index", "x", "y"])
        for k, (x, y) in zip(indices, pos):
            w.writerow([int(k), fmt6(x), fmt6(y)])


def read_layout(path) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(indices, positions)`` from a layout CSV, in file order."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != ["index", "x", "y"]:
            raise ValueError(f"{path}: expected header 'index,x,y', got {header}")
        idx, pos = [], []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 3:
                raise ValueError(f"{path}:{lineno}: expected 3 fields, got {len(row)}")
            try:
                idx.append(int(row[0]))
                pos.append((float(row[1]), float(row[2])))
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: {exc}") from None
    return np.array(idx, dtype=int), np.array(pos, dtype=float).reshape(-1, 2)


class ConvergenceWriter:
    """Streams convergence rows, flushing after each generation."""

    def __init__(self, path, with_agent: bool):
        self.with_agent = with_agent
        self._fh = open(path, "w", newline="")
        self._w = csv.writer(self._fh)
        self._w.writerow(CONVERGENCE_FIELDS + (RL_FIELDS if with_agent else []))
        self._fh.flush()

    def __call__(self, rec: ConvergenceRecord) -> None:
        row = [rec.generation, repr(rec.best_fitness), repr(rec.best_fobj), repr(rec.best_power), rec.n_turbines]
        if self.with_agent:
            row += ["" if rec.action is None else rec.action, "" if rec.reward is None else repr(rec.reward), "" if rec.state is None else rec.state]
        self._w.writerow(row)
        self._fh.flush()

    def close(self):
        self._fh.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


def read_convergence(path) -> list[dict]:
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def write_field(path, grid: VelocityGrid) -> None:
    xs, ys = grid.grid.centers()
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["x", "y", "u"])
        for j, y in enumerate(ys):
            for i, x in enumerate(xs):
                w.writerow([fmt6(x), fmt6(y), fmt6(grid.values[j, i])])


# -- flat key = value config ------------------------------------------------

_TUPLE_FIELDS = {"parent_options": int, "crossover_options": str, "mutation_options": float}


def _coerce(name: str, raw: str):
    fields = {f.name: f for f in dataclasses.fields(RunConfig)}
    if name not in fields:
        raise ValueError(f"unknown config key {name!r}")
    if name in _TUPLE_FIELDS:
        conv = _TUPLE_FIELDS[name]
        return tuple(conv(v.strip()) for v in raw.split(",") if v.strip())
    default = fields[name].default
    if isinstance(default, bool):
        return raw.lower() in ("1", "true", "yes")
    if isinstance(default, int):
        return int(raw)
    if isinstance(default, float):
        return float(raw)
    return raw


def parse_config(text: str) -> dict:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    out = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"config line {lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key] = _coerce(key, value)
    return out


def load_config(path) -> dict:
    return parse_config(Path(path).read_text())


def _format_value(v) -> str:
    if isinstance(v, tuple):
        return ",".join(_format_value(x) for x in v)
    if isinstance(v, float):
        return repr(v)
    return str(v)


def format_manifest(config: RunConfig, info: dict | None = None) -> str:
    """Every resolved run setting, plus informational ``#`` comment lines."""
    lines = ["# rlga run manifest"]
    for k, v in (info or {}).items():
        lines.append(f"# {k} = {v}")
    for f in dataclasses.fields(RunConfig):
        lines.append(f"{f.name} = {_format_value(getattr(config, f.name))}")
    return "\n".join(lines) + "\n"


def write_manifest(path, config: RunConfig, info: dict | None = None) -> None:
    Path(path).write_text(format_manifest(config, info))

