"""File formats.

Scenario document (YAML), exactly four top-level sections::

    crops:        list of {name, gross_revenue_per_ha, variable_cost_per_ha}
    months:       list of {evapotranspiration, rainfall, inflow, target_env_flow}
    coefficients: list of rows, one per crop, one value per month
    limits:       {pump_cap_total, area_total, area_min_per_crop,
                   surface_cost_per_gl, pump_cost_per_gl,
                   area_upper_per_crop, env_flow_upper_per_month}

Unknown keys are rejected. The last two limits are optional (defaults 5000
ha and 300 GL).

Front table (CSV, comma-separated, ``\\n`` line ends)::

    net_benefit,efd,w1,source

one row per point, sorted by net benefit ascending; ``w1`` is empty for
endpoint and GA points. Numbers use 9 significant digits (``%.9g``).

Plan table (CSV): a ``crop,area_ha`` block, one blank line, then a
``month,env_flow_gl`` block.

Each exported front or plan gets a JSON sidecar ``<path>.manifest.json``
with the scenario digest, method, parameters, tool version and timestamps.
"""
from __future__ import annotations

import csv
import datetime as _dt
import hashlib
import io
import json
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any

import numpy as np
import yaml

from .evaluation import AllocationPlan
from .pareto import FrontResult, front_violations
from .scenario import SECTIONS, Scenario, scenario_to_dict, validate_scenario

FRONT_HEADER = ("net_benefit", "efd", "w1", "source")
NUMBER_FORMAT = "%.9g"
TOOL_VERSION = "0.1.0"


class ScenarioParseError(ValueError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(message + where)


class FrontFormatError(ValueError):
    pass


def _fmt(x: float) -> str:
    return NUMBER_FORMAT % x


def file_digest(path: str | Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def scenario_digest(s: Scenario) -> str:
    """Digest of the canonical YAML form; used when no source file exists."""
    return hashlib.sha256(dump_scenario_text(s).encode()).hexdigest()


def parse_scenario_text(text: str) -> Scenario:
    try:
        raw = yaml.safe_load(text)
    except yaml.MarkedYAMLError as exc:
        mark = exc.problem_mark or exc.context_mark
        line = mark.line + 1 if mark else None
        col = mark.column + 1 if mark else None
        raise ScenarioParseError(f"malformed scenario document: {exc.problem}", line, col) from exc
    except yaml.YAMLError as exc:
        raise ScenarioParseError(f"malformed scenario document: {exc}") from exc
    if not isinstance(raw, dict):
        raise ScenarioParseError("scenario document must be a mapping with sections "
                                 + ", ".join(SECTIONS))
    for key in raw:
        if key not in SECTIONS:
            raise ScenarioParseError(f"unknown section {key!r}")
    for key in SECTIONS:
        if key not in raw:
            raise ScenarioParseError(f"missing section {key!r}")
    return validate_scenario(raw)


def load_scenario(path: str | Path) -> Scenario:
    """Parse and validate a scenario file.

    Raises :class:`ScenarioParseError` for malformed documents or missing
    sections and :class:`~irrigopt.scenario.ScenarioValidationError` for
    invariant violations (with field paths such as ``months[3].inflow``).
    """
    text = Path(path).read_text()
    return parse_scenario_text(text)


def dump_scenario_text(s: Scenario) -> str:
    doc = scenario_to_dict(s)
    out = io.StringIO()
    for section in SECTIONS:
        block = {section: doc[section]}
        style = False if section == "limits" else None
        yaml.safe_dump(block, out, sort_keys=False, default_flow_style=style, width=100)
    return out.getvalue()


def dump_scenario(s: Scenario, path: str | Path) -> None:
    Path(path).write_text(dump_scenario_text(s))


@dataclass
class RunManifest:
    scenario_digest: str
    method: str
    parameters: dict[str, Any]
    tool_version: str = TOOL_VERSION
    timestamps: dict[str, str] = field(default_factory=dict)
    output_digest: str = ""

    def write(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(asdict(self), indent=2, sort_keys=True) + "\n")

    @classmethod
    def read(cls, path: str | Path) -> "RunManifest":
        return cls(**json.loads(Path(path).read_text()))


def manifest_path(path: str | Path) -> Path:
    p = Path(path)
    return p.with_name(p.name + ".manifest.json")


def now_iso() -> str:
    return _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")


def _write_manifest(out_path: Path, manifest: RunManifest | None) -> None:
    if manifest is None:
        return
    manifest.output_digest = file_digest(out_path)
    manifest.timestamps.setdefault("written", now_iso())
    manifest.write(manifest_path(out_path))


def front_to_csv(front: FrontResult) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(FRONT_HEADER)
    for p in sorted(front.points, key=lambda q: (q.net_benefit, q.efd)):
        w1 = "" if p.weight is None else _fmt(p.weight.w1)
        writer.writerow((_fmt(p.net_benefit), _fmt(p.efd), w1, p.source))
    return buf.getvalue()


def export_front(front: FrontResult, path: str | Path, manifest: RunManifest | None = None) -> None:
    """Write the front table and, if given, its manifest sidecar."""
    if not front.points:
        raise ValueError("refusing to export an empty front")
    path = Path(path)
    path.write_text(front_to_csv(front))
    _write_manifest(path, manifest)


@dataclass(frozen=True)
class FrontRow:
    line: int
    net_benefit: float
    efd: float
    w1: float | None
    source: str


def read_front(path: str | Path) -> list[FrontRow]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise FrontFormatError("empty front file") from None
        if tuple(header) != FRONT_HEADER:
            raise FrontFormatError(f"bad header {header!r}, expected {','.join(FRONT_HEADER)}")
        rows = []
        for lineno, rec in enumerate(reader, start=2):
            if not rec:
                continue
            if len(rec) != 4:
                raise FrontFormatError(f"line {lineno}: expected 4 fields, got {len(rec)}")
            try:
                nb, e = float(rec[0]), float(rec[1])
                w1 = float(rec[2]) if rec[2] else None
            except ValueError as exc:
                raise FrontFormatError(f"line {lineno}: {exc}") from None
            rows.append(FrontRow(lineno, nb, e, w1, rec[3]))
    return rows


def verify_front_rows(rows: list[FrontRow]) -> list[str]:
    """Exhaustive nondominance and staircase check; problems name file lines."""
    problems = front_violations([(r.net_benefit, r.efd) for r in rows],
                                labels=[r.line for r in rows], noun="line")
    for a, b in zip(rows, rows[1:]):
        if b.net_benefit < a.net_benefit:
            problems.append(f"line {b.line} breaks the ascending net-benefit order")
    return problems


def plan_to_csv(p: AllocationPlan, s: Scenario) -> str:
    if p.area_per_crop.size != s.n_crops or p.env_flow_per_month.size != s.n_months:
        raise ValueError("plan dimensions do not match the scenario")
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(("crop", "area_ha"))
    for name, x in zip(s.crop_names, p.area_per_crop):
        writer.writerow((name, _fmt(x)))
    buf.write("\n")
    writer.writerow(("month", "env_flow_gl"))
    for label, e in zip(s.month_labels, p.env_flow_per_month):
        writer.writerow((label, _fmt(e)))
    return buf.getvalue()


def export_plan(p: AllocationPlan, s: Scenario, path: str | Path,
                manifest: RunManifest | None = None) -> None:
    path = Path(path)
    path.write_text(plan_to_csv(p, s))
    _write_manifest(path, manifest)


def read_plan(path: str | Path) -> tuple[dict[str, float], dict[str, float]]:
    """Areas by crop name and flows by month label from a plan table."""
    text = Path(path).read_text()
    blocks = text.strip("\n").split("\n\n")
    if len(blocks) != 2:
        raise ValueError("plan file must hold exactly two tables")
    out = []
    for block, header in zip(blocks, (("crop", "area_ha"), ("month", "env_flow_gl"))):
        rows = list(csv.reader(io.StringIO(block)))
        if tuple(rows[0]) != header:
            raise ValueError(f"expected header {','.join(header)}, got {rows[0]}")
        out.append({r[0]: float(r[1]) for r in rows[1:]})
    return out[0], out[1]


def verify_manifest(output: str | Path, scenario_file: str | Path | None = None) -> list[str]:
    """Re-hash the output (and optionally the scenario file) against the sidecar."""
    m = RunManifest.read(manifest_path(output))
    problems = []
    if file_digest(output) != m.output_digest:
        problems.append(f"{output}: content does not match the manifest digest")
    if scenario_file is not None and file_digest(scenario_file) != m.scenario_digest:
        problems.append(f"{scenario_file}: scenario digest differs from the manifest")
    return problems


def pairs_array(rows: list[FrontRow]) -> np.ndarray:
    return np.array([[r.net_benefit, r.efd] for r in rows], dtype=float).reshape(-1, 2)
