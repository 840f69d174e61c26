"""Run configuration, figure presets and CSV/report writers.

CSV files are UTF-8 with ``,`` separators and a preamble of ``# key=value``
lines recording every parameter needed to regenerate them. Floats are
written with ``repr`` so a file round-trips exactly and identical
configurations give byte-identical files.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path

import numpy as np

from . import __version__
from .kg_spectral import KgProblem, solve_on_grid

PRESETS = {
    "figure1": dict(n=10, m=3.0, a_list=(1.5, 2.0, 4.0), case="problem1", source="zero",
                    x="-10:10:2001", t="0:0:1"),
    "figure2": dict(n=10, a=1.5, m=3.0, case="problem1", source="zero",
                    x="-10:10:401", t="0:5:101"),
}


class ConfigError(ValueError):
    """Invalid or inconsistent run configuration (CLI exit code 2)."""


def parse_range(text: str) -> np.ndarray:
    """``"min:max:count"`` to ``linspace(min, max, count)``; a bare number is one point."""
    parts = str(text).split(":")
    try:
        if len(parts) == 1:
            return np.array([float(parts[0])])
        if len(parts) != 3:
            raise ValueError
        lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise ConfigError(f"range must look like min:max:count, got {text!r}") from None
    if count < 1:
        raise ConfigError(f"range count must be at least 1, got {count}")
    if not (math.isfinite(lo) and math.isfinite(hi)) or hi < lo:
        raise ConfigError(f"range bounds must be finite with min <= max, got {text!r}")
    if count == 1:
        if lo != hi:
            raise ConfigError(f"a single-point range needs min == max, got {text!r}")
        return np.array([lo])
    if lo == hi:
        raise ConfigError(f"range {text!r} is degenerate")
    return np.linspace(lo, hi, count)


def normalize_precision(value):
    """``auto``/``double``/``extended`` pass through; a digit string becomes an int."""
    if value in ("auto", "double", "extended"):
        return value
    try:
        digits = int(value)
    except (TypeError, ValueError):
        raise ConfigError(f"precision must be auto, double, extended or a digit count, "
                          f"got {value!r}") from None
    if not 15 <= digits <= 1000:
        raise ConfigError(f"precision digits must lie in [15, 1000], got {digits}")
    return digits


@dataclass
class RunConfig:
    command: str = "evolve"
    n: int = 10
    a: float = 1.5
    b: float | None = None
    m: float = 3.0
    case: str = "problem1"
    source: str = "zero"
    x: str = "-10:10:401"
    t: str = "0:0:1"
    a_list: tuple | None = None
    preset: str | None = None
    precision: str = "auto"
    format: str = "csv"
    out: str | None = None
    # informational: the a values of a multi-series run, kept so series files rerun verbatim
    series: str | None = None

    def problem(self, a=None) -> KgProblem:
        try:
            return KgProblem(m=self.m, a=self.a if a is None else a, initial=self.case,
                             source=self.source, b=self.b)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None

    def validate(self):
        if self.n < 1:
            raise ConfigError(f"n must be positive, got {self.n}")
        self.precision = normalize_precision(self.precision)
        if self.format not in ("csv", "report"):
            raise ConfigError(f"format must be csv or report, got {self.format!r}")
        if self.case == "problem2" and self.b is None:
            raise ConfigError("problem2 needs --b")
        if self.case == "problem1" and self.b is not None:
            raise ConfigError("--b only applies to problem2")
        t = parse_range(self.t)
        parse_range(self.x)
        if np.any(t < 0):
            raise ConfigError("t range must be nonnegative")
        self.problem()
        return self

    def preamble(self, **extra) -> dict:
        keys = ["command", "n", "a", "b", "m", "case", "source", "x", "t", "precision"]
        out = {"version": __version__}
        out.update({k: getattr(self, k) for k in keys})
        if self.preset:
            out["preset"] = self.preset
        out.update(extra)
        return out


def apply_preset(config: RunConfig, name: str) -> RunConfig:
    if name not in PRESETS:
        raise ConfigError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}")
    values = dict(PRESETS[name])
    return replace(config, preset=name, **values)


_COERCE = {"n": int, "a": float, "b": float, "m": float}


def config_from_mapping(mapping: dict, base: RunConfig | None = None) -> RunConfig:
    """Overlay a mapping (structured config file or CSV preamble) on ``base``."""
    base = base or RunConfig()
    names = {f.name for f in fields(RunConfig)}
    updates = {}
    for key, value in mapping.items():
        key = key.replace("-", "_")
        if key not in names:
            continue
        if value in (None, "None", ""):
            updates[key] = None
        elif key in _COERCE:
            updates[key] = _COERCE[key](value)
        elif key == "a_list":
            updates[key] = tuple(float(v) for v in (value.split(",") if isinstance(value, str)
                                                    else value))
        else:
            updates[key] = value
    return replace(base, **updates)


def load_config_file(path) -> dict:
    """Read a JSON/YAML config, or the ``# key=value`` preamble of a CSV written here."""
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    if path.suffix == ".csv":
        return read_preamble(text.splitlines())
    if path.suffix in (".yaml", ".yml"):
        import yaml
        return yaml.safe_load(text) or {}
    return json.loads(text)


# ---------------------------------------------------------------------------
# CSV


def fmt(value) -> str:
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def write_csv(path, preamble: dict, header, rows):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        for key, value in preamble.items():
            fh.write(f"# {key}={fmt(value) if value is not None else 'None'}\n")
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(fmt(v) for v in row) + "\n")
    return path


def read_preamble(lines) -> dict:
    out = {}
    for line in lines:
        if not line.startswith("# "):
            break
        key, _, value = line[2:].partition("=")
        out[key] = value
    return out


def read_csv(path):
    """Return ``(preamble, header, data)`` with ``data`` a float array."""
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    preamble = read_preamble(lines)
    body = [ln for ln in lines if not ln.startswith("# ")]
    header = body[0].split(",")
    data = np.array([[float(v) for v in ln.split(",")] for ln in body[1:]], dtype=float)
    return preamble, header, data.reshape(-1, len(header))


def field_rows(field):
    """Rows ``(x, t, re, im)``, t outer and x inner."""
    for i, t in enumerate(field.t_grid):
        for j, x in enumerate(field.x_grid):
            v = field.values[i, j]
            yield (float(x), float(t), float(v.real), float(v.imag))


# ---------------------------------------------------------------------------
# evolve


def _series_path(out: Path, a: float) -> Path:
    return out.with_name(f"{out.stem}_a{fmt(float(a))}{out.suffix or '.csv'}")


def evolve_fields(config: RunConfig):
    """Solution fields for the configuration: one per value in ``a_list`` (or ``a``)."""
    config.validate()
    x, t = parse_range(config.x), parse_range(config.t)
    a_values = config.a_list or (config.a,)
    return [(a, solve_on_grid(config.problem(a), config.n, x, t, config.precision))
            for a in a_values]


def write_evolve(config: RunConfig, out) -> list[Path]:
    """Write the configured evolution; returns the written paths."""
    out = Path(out)
    results = evolve_fields(config)
    paths = []
    for a, fld in results:
        path = out if len(results) == 1 else _series_path(out, a)
        # each series file reruns on its own, so a_list is cleared in its preamble
        meta = config.preamble(a=a, a_list=None)
        series = (",".join(fmt(float(v)) for v in config.a_list) if len(results) > 1
                  else config.series)
        if series:
            meta["series"] = series
        if config.format == "csv":
            write_csv(path, meta, ["x", "t", "re", "im"], field_rows(fld))
        else:
            report = {"metadata": meta,
                      "summary": {"max_abs": float(np.max(np.abs(fld.values))),
                                  "points": int(fld.values.size)},
                      "columns": ["x", "t", "re", "im"],
                      "rows": [list(r) for r in field_rows(fld)]}
            path = path.with_suffix(".json")
            write_report(path, report)
        paths.append(path)
    return paths


def write_report(path, report: dict):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(report, indent=2, sort_keys=False, default=_json_default) + "\n",
                    encoding="utf-8")
    return path


def _json_default(obj):
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if hasattr(obj, "__dataclass_fields__"):
        return asdict(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")
