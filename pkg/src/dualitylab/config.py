"""Run configuration: defaults, config-file loading and up-front validation."""

from __future__ import annotations

import configparser
import math
import os
from dataclasses import asdict, dataclass, field
from pathlib import Path

from .errors import DomainError

COMMANDS = (
    "metric",
    "embed",
    "lattice",
    "closure",
    "theta",
    "poisson",
    "jacobi",
    "profile",
    "hy",
    "mellin",
    "repro",
)
FORMATS = ("json", "csv", "svg")
SUITES = ("all", "metric", "closure", "duality", "mellin")
OUT_ENV = "DUALITYLAB_OUT"

# value parsers for every recognised parameter key
PARAM_TYPES = {
    "n": float,
    "theta": float,
    "theta0": float,
    "tau": float,
    "s": float,
    "a": int,
    "b": int,
    "c": int,
    "k": int,
    "xi_max": float,
    "samples": int,
    "p": float,
    "branch": str,
    "tol": float,
    "suite": str,
}

DEFAULTS = {"n": 2.0, "seed": 0}
_GEOMETRY = {"theta0": -1.0, "branch": "below"}

# per-command fallbacks applied after the generic defaults
COMMAND_DEFAULTS = {
    "embed": {**_GEOMETRY, "a": 1, "tol": 1e-9},
    "lattice": {**_GEOMETRY, "k": 4, "tol": 1e-9},
    "closure": {**_GEOMETRY, "tol": 1e-6},
    "theta": {"tau": 1.0, "tol": 1e-12},
    "poisson": {"tau": 1.0, "tol": 1e-12},
    "jacobi": {"tol": 1e-12},
    "profile": {"samples": 512},
    "hy": {},
    "mellin": {"tol": 1e-12},
    "repro": {"suite": "all"},
    "metric": {"theta": -1.0, "theta0": -1.0},
}


@dataclass(frozen=True)
class RunConfig:
    command: str
    n: float
    params: dict = field(default_factory=dict)
    output_dir: str = "."
    formats: tuple = ("json",)
    seed: int = 0

    def to_dict(self) -> dict:
        d = asdict(self)
        d["formats"] = list(self.formats)
        d["params"] = dict(sorted(self.params.items()))
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        return cls(
            command=d["command"],
            n=float(d["n"]),
            params=dict(d.get("params", {})),
            output_dir=d.get("output_dir", "."),
            formats=tuple(d.get("formats", ("json",))),
            seed=int(d.get("seed", 0)),
        )

    def get(self, key, default=None):
        return self.params.get(key, default)


def read_config_file(path: str | os.PathLike) -> dict:
    """Parse a ``key = value`` file (``#`` comments, no sections needed)."""
    text = Path(path).read_text()
    parser = configparser.ConfigParser(inline_comment_prefixes=("#",))
    parser.optionxform = str
    parser.read_string("[run]\n" + text)
    out = {}
    for key, value in parser["run"].items():
        out[key.strip().replace("-", "_")] = value.strip()
    return out


def parse_formats(value) -> tuple:
    if isinstance(value, (list, tuple)):
        items = list(value)
    else:
        items = [v.strip() for v in str(value).split(",") if v.strip()]
    bad = [v for v in items if v not in FORMATS]
    if bad or not items:
        raise DomainError(f"--format: unknown format(s) {bad or items}; choose from {','.join(FORMATS)}")
    # fixed order keeps the echo deterministic
    return tuple(f for f in FORMATS if f in items)


def _coerce(key: str, value):
    kind = PARAM_TYPES.get(key)
    if kind is None:
        raise DomainError(f"unknown parameter '{key}'")
    try:
        if kind is int:
            as_float = float(value)
            if as_float != int(as_float):
                raise ValueError
            return int(as_float)
        return kind(value)
    except (TypeError, ValueError):
        raise DomainError(f"--{key.replace('_', '-')}: cannot read {value!r} as {kind.__name__}") from None


def build_config(command: str, cli_values: dict, file_values: dict | None = None) -> RunConfig:
    """Merge CLI flags over config-file values over built-in defaults, then validate."""
    if command not in COMMANDS:
        raise DomainError(f"unknown command {command!r}")
    merged: dict = {}
    merged.update(DEFAULTS)
    merged.update(COMMAND_DEFAULTS.get(command, {}))
    for source in (file_values or {}, cli_values):
        for key, value in source.items():
            if value is not None:
                merged[key] = value

    output_dir = merged.pop("out", None) or os.environ.get(OUT_ENV) or "."
    formats = parse_formats(merged.pop("format", "json"))
    try:
        seed = int(merged.pop("seed", 0))
    except (TypeError, ValueError):
        raise DomainError("--seed: must be an integer") from None
    merged.pop("config", None)
    params = {key: _coerce(key, value) for key, value in merged.items()}
    n = params.pop("n")
    cfg = RunConfig(command, n, params, str(output_dir), formats, seed)
    validate(cfg)
    return cfg


def _need(cfg: RunConfig, *keys):
    for key in keys:
        if cfg.get(key) is None:
            raise DomainError(f"--{key.replace('_', '-')} is required for '{cfg.command}'")


def _flag_error(key: str, message: str):
    raise DomainError(f"--{key.replace('_', '-')}: {message}")


def validate(cfg: RunConfig) -> None:
    """Check every parameter against the preconditions of the target operation."""
    n = cfg.n
    if not (math.isfinite(n) and n >= 1.0):
        _flag_error("n", f"must be a finite real >= 1, got {n!r}")
    cmd = cfg.command
    p = cfg.params
    for key in ("theta", "theta0"):
        v = p.get(key)
        if v is not None and not (math.isfinite(v) and v < 0.0):
            _flag_error(key, f"must be negative, got {v!r}")
    for key in ("tau", "xi_max", "tol"):
        v = p.get(key)
        if v is not None and not (math.isfinite(v) and v > 0.0):
            _flag_error(key, f"must be positive, got {v!r}")
    for key in ("a", "b", "c", "k"):
        v = p.get(key)
        if v is not None and v < 1:
            _flag_error(key, f"must be a positive integer, got {v!r}")
    if p.get("samples") is not None and p["samples"] < 16:
        _flag_error("samples", f"must be >= 16, got {p['samples']!r}")
    if p.get("p") is not None and not 1.0 < p["p"] <= 2.0:
        _flag_error("p", f"must lie in (1, 2], got {p['p']!r}")
    if p.get("s") is not None and not (math.isfinite(p["s"]) and p["s"] * n > 1.0):
        _flag_error("s", f"must exceed 1/n = {1.0 / n:.6g}, got {p['s']!r}")
    if p.get("branch") not in (None, "below", "above", "below_reference", "above_reference"):
        _flag_error("branch", f"must be 'below' or 'above', got {p['branch']!r}")
    if p.get("suite") is not None and p["suite"] not in SUITES:
        _flag_error("suite", f"must be one of {','.join(SUITES)}, got {p['suite']!r}")

    if cmd == "closure":
        _need(cfg, "a", "b", "c")
    if cmd == "lattice" and p.get("k", 0) < 2:
        _flag_error("k", "a gap table needs at least 2 lattice points")
    if cmd in ("poisson", "theta"):
        _need(cfg, "tau")
