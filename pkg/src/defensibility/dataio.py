"""Dataset files, scenario configs and tabular output.

Dataset CSV: header ``id,defender_value[,attacker_value]``, UTF-8, plain
decimal numbers.  Curve CSV: ``a,b,residual_value,residual_fraction,
defensibility`` with 6 significant digits.  Scenarios are JSON.
"""

from __future__ import annotations

import csv
import io
import json
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Any, Optional, Sequence, Union

from .assets import AssetSystem, ValidationError, build_system
from .datasets import BUILTINS, load_builtin
from .evaluation import ComparisonReport, EvaluationGrid
from .threats import ThreatModel

DATASET_COLUMNS = ("id", "defender_value", "attacker_value")
CURVE_COLUMNS = ("a", "b", "residual_value", "residual_fraction", "defensibility")


class DatasetParseError(ValueError):
    def __init__(self, message: str, line: Optional[int] = None, source: str = ""):
        self.line = line
        where = f"{source}:{line}: " if line is not None else (f"{source}: " if source else "")
        super().__init__(where + message)


def parse_range(text: str) -> list[int]:
    """``"0..10"`` (inclusive), ``"1,2,4"`` or a single integer."""
    text = text.strip()
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            lo, hi = int(lo), int(hi)
            if hi < lo:
                raise ValueError
            return list(range(lo, hi + 1))
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise ValueError(f"not an integer range: {text!r}") from None


def _read_csv(stream: IO[str], source: str, name: str) -> AssetSystem:
    reader = csv.reader(stream)
    try:
        header = next(reader)
    except StopIteration:
        raise DatasetParseError("empty file", 1, source) from None
    header = [h.strip().lstrip("﻿") for h in header]
    if header[:2] != ["id", "defender_value"] or header[2:] not in ([], ["attacker_value"]):
        raise DatasetParseError(
            f"header must be id,defender_value[,attacker_value], got {','.join(header)}", 1, source
        )
    rows = []
    for record in reader:
        line = reader.line_num
        if not record or all(not c.strip() for c in record):
            continue
        if len(record) != len(header):
            raise DatasetParseError(f"expected {len(header)} fields, got {len(record)}", line, source)
        try:
            values = [float(c) for c in record[1:]]
        except ValueError:
            raise DatasetParseError(f"non-numeric value in {record!r}", line, source) from None
        rows.append((record[0].strip(), *values))
    return build_system(rows, name=name)


def _read_json(stream: IO[str], source: str, name: str) -> AssetSystem:
    try:
        data = json.load(stream)
    except json.JSONDecodeError as exc:
        raise DatasetParseError(exc.msg, exc.lineno, source) from None
    if isinstance(data, dict):
        name = data.get("name", name)
        data = data.get("assets")
    if not isinstance(data, list):
        raise DatasetParseError("expected a list of assets or an object with an 'assets' list", None, source)
    rows = []
    for k, item in enumerate(data):
        if not isinstance(item, dict) or "id" not in item or "defender_value" not in item:
            raise DatasetParseError(f"asset #{k} needs 'id' and 'defender_value'", None, source)
        row = (item["id"], item["defender_value"])
        if item.get("attacker_value") is not None:
            row += (item["attacker_value"],)
        rows.append(row)
    return build_system(rows, name=name)


def load_dataset(
    source: Union[str, os.PathLike],
    format: Optional[str] = None,
    attacker_values: Optional[str] = None,
) -> AssetSystem:
    """Load a built-in dataset by name, or a CSV / JSON file.

    ``format`` defaults to the file suffix.  ``attacker_values`` selects an
    attacker-value column of a built-in dataset; files carry their own.
    """
    text = os.fspath(source)
    if text in BUILTINS:
        return load_builtin(text, attacker_values)
    path = Path(text)
    if not path.exists():
        raise FileNotFoundError(f"no built-in dataset or file named {text!r} (built-ins: {', '.join(BUILTINS)})")
    if attacker_values is not None:
        raise ValueError("attacker value columns can only be selected for built-in datasets")
    fmt = (format or path.suffix.lstrip(".")).lower()
    with open(path, encoding="utf-8", newline="") as fh:
        if fmt == "csv":
            return _read_csv(fh, str(path), path.stem)
        if fmt == "json":
            return _read_json(fh, str(path), path.stem)
    raise ValueError(f"unknown dataset format {fmt!r} (csv or json)")


def read_dataset_csv(text: str, name: str = "") -> AssetSystem:
    return _read_csv(io.StringIO(text), "<string>", name)


def write_dataset_csv(system: AssetSystem, stream: IO[str]) -> None:
    # repr() gives the shortest text that round-trips to the same float
    writer = csv.writer(stream, lineterminator="\n")
    if system.has_attacker_values:
        writer.writerow(DATASET_COLUMNS)
        for x in system.assets:
            writer.writerow([x.id, repr(x.defender_value), repr(x.attacker_value)])
    else:
        writer.writerow(DATASET_COLUMNS[:2])
        for x in system.assets:
            writer.writerow([x.id, repr(x.defender_value)])


def _fmt(x: float) -> str:
    return f"{x:.6g}"


def write_curve_csv(grid: EvaluationGrid, stream: IO[str]) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(CURVE_COLUMNS)
    for a, b, v, f, d in grid.rows():
        writer.writerow([a, b, _fmt(v), _fmt(f), _fmt(d)])


def curve_to_json(grid: EvaluationGrid) -> str:
    rows = [
        dict(zip(CURVE_COLUMNS, (a, b, float(_fmt(v)), float(_fmt(f)), float(_fmt(d)))))
        for a, b, v, f, d in grid.rows()
    ]
    payload = {"system": grid.system_id, "threat": grid.threat, "rows": rows}
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def report_to_dict(report: ComparisonReport) -> dict:
    return {
        "budget": report.budget,
        "average_range": list(report.average_range) if report.average_range else None,
        "ranked_by": report.ranked_by,
        "recommended_system_id": report.recommended_system_id,
        "maximizers": list(report.maximizers),
        "entries": [
            {
                "name": e.name,
                "system_id": e.system_id,
                "threat": e.threat,
                "a": e.a,
                "budget": e.budget,
                "defensibility": e.defensibility,
                "average_defensibility": e.average,
                "error": e.error,
            }
            for e in report.entries
        ],
    }


@dataclass
class Scenario:
    """One system, threat and effort grid as read from a JSON config."""

    name: str
    system: AssetSystem
    threat: ThreatModel
    a_values: list[int]
    b_values: list[int] = field(default_factory=lambda: list(range(0, 11)))
    b0_ids: frozenset[str] = frozenset()
    strategy: str = "reflexive"
    output: str = "csv"

    def __post_init__(self):
        unknown = [x for x in self.b0_ids if x not in self.system]
        if unknown:
            raise ValidationError(f"scenario {self.name!r}: unknown b0 ids {sorted(unknown)}")
        if any(a < 0 for a in self.a_values) or any(b < 0 for b in self.b_values):
            raise ValidationError(f"scenario {self.name!r}: effort levels must be nonnegative")
        if max(self.b_values, default=0) + len(self.b0_ids) > self.system.n:
            raise ValidationError(f"scenario {self.name!r}: defense effort exceeds the number of assets")
        if self.output not in ("csv", "json"):
            raise ValidationError(f"scenario {self.name!r}: output must be csv or json")


def _efforts(value: Any, key: str) -> list[int]:
    if isinstance(value, str):
        return parse_range(value)
    if isinstance(value, int):
        return [value]
    if isinstance(value, list) and all(isinstance(x, int) for x in value):
        return list(value)
    raise ValidationError(f"{key} must be an integer, a list of integers, or a range string")


def scenario_from_dict(data: dict, base_dir: Optional[Path] = None) -> Scenario:
    """Build a :class:`Scenario` from its JSON form.

    Keys: ``name``; exactly one of ``dataset`` (built-in name or file path,
    relative to the config file) or ``assets`` (inline list); optional
    ``attacker_values`` (built-in column); ``threat`` (name or
    ``{"kind": ..., "probabilities": {...}}``); ``a_values``; ``b_values``;
    ``b0_ids``; ``strategy``; ``output``.
    """
    name = data.get("name", "scenario")
    if ("dataset" in data) == ("assets" in data):
        raise ValidationError(f"scenario {name!r}: give exactly one of 'dataset' or 'assets'")
    if "dataset" in data:
        src = data["dataset"]
        if src not in BUILTINS and base_dir is not None and not Path(src).is_absolute():
            src = str(base_dir / src)
        system = load_dataset(src, data.get("format"), data.get("attacker_values"))
    else:
        system = _read_json(io.StringIO(json.dumps({"name": name, "assets": data["assets"]})), name, name)
    threat_spec = data.get("threat", "optimal")
    if isinstance(threat_spec, str):
        threat = ThreatModel.parse(threat_spec)
    else:
        threat = ThreatModel.parse(threat_spec.get("kind", "optimal"), threat_spec.get("probabilities"))
    threat.validate_for(system)
    return Scenario(
        name=name,
        system=system,
        threat=threat,
        a_values=_efforts(data.get("a_values", [1]), "a_values"),
        b_values=_efforts(data.get("b_values", "0..%d" % system.n), "b_values"),
        b0_ids=frozenset(data.get("b0_ids", ())),
        strategy=data.get("strategy", "reflexive"),
        output=data.get("output", "csv"),
    )


def load_scenarios(path: Union[str, os.PathLike]) -> tuple[list[Scenario], dict]:
    """Read a config holding one scenario or ``{"scenarios": [...], ...}``.

    Returns the scenarios and the remaining top-level settings (e.g.
    ``budget`` and ``average_range`` for comparisons).
    """
    path = Path(path)
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise DatasetParseError(exc.msg, exc.lineno, str(path)) from None
    if isinstance(data, dict) and "scenarios" in data:
        items: Sequence[dict] = data["scenarios"]
        settings = {k: v for k, v in data.items() if k != "scenarios"}
    else:
        items, settings = [data], {}
    return [scenario_from_dict(d, path.parent) for d in items], settings
