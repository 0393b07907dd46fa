"""Report envelope and artifact writers (JSON, CSV, SVG)."""

from __future__ import annotations

import csv
import dataclasses
import enum
import io
import json
import math
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__, svg


def jsonable(obj):
    """Convert dataclasses, tuples, enums and numpy scalars into JSON-native values."""
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    return obj


@dataclass
class ReportEnvelope:
    tool_version: str
    timestamp: str
    config_echo: dict
    results: dict
    diagnostics: list = field(default_factory=list)

    @classmethod
    def create(cls, config_echo: dict, results: dict, diagnostics=()) -> "ReportEnvelope":
        return cls(
            tool_version=__version__,
            timestamp=datetime.now(timezone.utc).isoformat(timespec="seconds"),
            config_echo=jsonable(config_echo),
            results=jsonable(results),
            diagnostics=[str(d) for d in diagnostics],
        )

    def to_json(self) -> str:
        return json.dumps(dataclasses.asdict(self), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "ReportEnvelope":
        d = json.loads(text)
        return cls(
            tool_version=d["tool_version"],
            timestamp=d["timestamp"],
            config_echo=d["config_echo"],
            results=d["results"],
            diagnostics=list(d.get("diagnostics", [])),
        )


def table(columns, rows) -> dict:
    return {"columns": list(columns), "rows": [list(r) for r in rows]}


def _cell(v):
    if isinstance(v, float):
        return repr(v) if math.isfinite(v) else str(v)
    if v is None:
        return ""
    return str(v)


def csv_text(tab: dict) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(tab["columns"])
    for row in tab["rows"]:
        writer.writerow([_cell(v) for v in row])
    return buf.getvalue()


def figures_for(report: ReportEnvelope, stem: str) -> dict:
    """SVG documents available for the command in ``report``, keyed by file stem."""
    command = report.config_echo.get("command")
    res = report.results
    if not res:
        return {}
    if command == "profile":
        return {stem: svg.profile_svg(res)}
    if command == "lattice":
        return {"gaps": svg.lattice_svg(res)}
    if command in ("jacobi", "poisson", "hy", "mellin") and "sweep" in res:
        sweep = res["sweep"]
        return {stem: svg.sweep_svg(sweep["x"], sweep["y"], sweep["xlabel"], sweep["ylabel"], sweep["title"])}
    return {}


def emit(report: ReportEnvelope, formats, output_dir, stem: str) -> list[str]:
    """Write the requested artifacts and return their paths.

    JSON is always the full envelope (``<stem>.json``); CSV writes one file
    per entry of ``results["tables"]``; SVG writes the figures registered
    for the command.
    """
    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    if "json" in formats:
        path = out / f"{stem}.json"
        path.write_text(report.to_json())
        written.append(str(path))
    if "csv" in formats:
        for name, tab in sorted(report.results.get("tables", {}).items()):
            path = out / f"{name}.csv"
            path.write_text(csv_text(tab))
            written.append(str(path))
    if "svg" in formats:
        for name, doc in figures_for(report, stem).items():
            path = out / f"{name}.svg"
            path.write_text(doc)
            written.append(str(path))
    return written
