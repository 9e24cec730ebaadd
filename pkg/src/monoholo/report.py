"""Machine-readable reports and CSV emission.

JSON reports are deterministic for a fixed command, config and seed:
keys are sorted and floats pass through a 17-significant-digit round
trip; timings live in diagnostics and are excluded from the determinism
contract.  CSV numbers are written with %.17g so files reparse exactly.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field as dc_field

SCHEMA_VERSION = "1"


def _clean(obj):
    if isinstance(obj, float):
        return float(f"{obj:.17g}")
    if isinstance(obj, complex):
        return {"re": float(f"{obj.real:.17g}"), "im": float(f"{obj.imag:.17g}")}
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if hasattr(obj, "tolist"):
        return _clean(obj.tolist())
    if hasattr(obj, "item") and not isinstance(obj, (str, bytes)):
        try:
            return _clean(obj.item())
        except Exception:
            pass
    return obj


@dataclass
class Report:
    command: str
    params: dict
    results: list = dc_field(default_factory=list)
    diagnostics: dict = dc_field(default_factory=dict)
    schema_version: str = SCHEMA_VERSION

    def add_result(self, **record):
        self.results.append(record)

    def to_dict(self) -> dict:
        return _clean(
            {
                "schema_version": self.schema_version,
                "command": self.command,
                "params": self.params,
                "results": self.results,
                "diagnostics": self.diagnostics,
            }
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)


class Stopwatch:
    def __init__(self):
        self.t0 = time.perf_counter()
        self.laps = {}

    def lap(self, name: str):
        self.laps[name] = time.perf_counter() - self.t0
        return self.laps[name]


def write_csv(path: str, header, rows):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_format_cell(c) for c in row) + "\n")


def _format_cell(c) -> str:
    if isinstance(c, bool):
        return "1" if c else "0"
    if isinstance(c, float):
        return f"{c:.17g}"
    if isinstance(c, int):
        return str(c)
    return str(c)


def read_csv(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        lines = [ln.rstrip("\n") for ln in fh if ln.strip()]
    header = lines[0].split(",")
    rows = []
    for ln in lines[1:]:
        cells = []
        for cell in ln.split(","):
            try:
                cells.append(float(cell))
            except ValueError:
                cells.append(cell)
        rows.append(cells)
    return header, rows
