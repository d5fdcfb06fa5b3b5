"""POVM description files and deterministic report emission.

File format: one JSON document with complex entries as two-element
``[re, im]`` arrays::

    {
      "dim": 3,
      "measurements": [
        {"label": "M",
         "effects": [ [ [[1,0],[0,0],[0,0]], ... d rows of d pairs ... ], ... ]}
      ]
    }

Reports are emitted as aligned text tables, CSV, or versioned JSON; scalar
numeric fields are fixed to six decimals so identical inputs produce
byte-identical output.
"""

from __future__ import annotations

import io as _io
import json
from pathlib import Path

import numpy as np

from .errors import ParseError, ValidationError
from .povm import Assemblage, Povm, pad_assemblage, validate_povm

REPORT_SCHEMA_VERSION = "incompat-report/1"

REPORT_JSON_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "type": "object",
    "required": ["schema", "command", "columns", "rows"],
    "properties": {
        "schema": {"const": REPORT_SCHEMA_VERSION},
        "command": {"type": "string"},
        "columns": {"type": "array", "items": {"type": "string"}},
        "rows": {"type": "array", "items": {"type": "object"}},
        "extra": {"type": "object"},
    },
}


def _entry_to_complex(value, where: str) -> complex:
    if not isinstance(value, (list, tuple)) or len(value) != 2:
        raise ParseError(f"{where}: complex entries must be [re, im] pairs")
    re, im = value
    if not isinstance(re, (int, float)) or not isinstance(im, (int, float)):
        raise ParseError(f"{where}: non-numeric complex component")
    return complex(re, im)


def parse_povm_document(doc: dict, source: str = "<memory>") -> Assemblage:
    if not isinstance(doc, dict):
        raise ParseError(f"{source}: top level must be an object")
    try:
        dim = int(doc["dim"])
        measurements = doc["measurements"]
    except KeyError as exc:
        raise ParseError(f"{source}: missing required field {exc}") from exc
    if dim <= 0:
        raise ParseError(f"{source}: dim must be positive")
    if not isinstance(measurements, list) or not measurements:
        raise ParseError(f"{source}: measurements must be a nonempty list")
    povms = []
    for mi, m in enumerate(measurements):
        where = f"{source}: measurements[{mi}]"
        if not isinstance(m, dict) or "effects" not in m:
            raise ParseError(f"{where}: expected an object with an 'effects' field")
        label = str(m.get("label", f"M{mi}"))
        effects = []
        for ei, eff in enumerate(m["effects"]):
            ew = f"{where}.effects[{ei}]"
            if not isinstance(eff, list) or len(eff) != dim:
                raise ParseError(f"{ew}: expected {dim} rows")
            mat = np.zeros((dim, dim), dtype=complex)
            for r, row in enumerate(eff):
                if not isinstance(row, list) or len(row) != dim:
                    raise ParseError(f"{ew}: row {r} must have {dim} entries")
                for c, cell in enumerate(row):
                    mat[r, c] = _entry_to_complex(cell, f"{ew}[{r}][{c}]")
            effects.append(mat)
        if not effects:
            raise ParseError(f"{where}: needs at least one effect")
        povms.append(Povm(dim, tuple(effects), label=label))
    assemblage = pad_assemblage(povms)
    for mi, p in enumerate(assemblage.povms):
        problems = validate_povm(p)
        if problems:
            raise ValidationError(f"{source}: measurement {mi}: " + "; ".join(problems))
    return assemblage


def parse_povm_file(path: str | Path) -> Assemblage:
    """Parse and validate a POVM description file into an assemblage."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ParseError(f"{path}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return parse_povm_document(doc, source=str(path))


def assemblage_to_document(a: Assemblage) -> dict:
    return {
        "dim": a.dim,
        "measurements": [
            {
                "label": p.label,
                "effects": [
                    [[[float(v.real), float(v.imag)] for v in row] for row in e]
                    for e in p.effects
                ],
            }
            for p in a.povms
        ],
    }


# ---------- report emission ----------

def _fmt_cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.6f}"
    return str(value)


def _round_floats(value):
    if isinstance(value, bool):
        return value
    if isinstance(value, float):
        return round(value, 6)
    if isinstance(value, (list, tuple)):
        return [_round_floats(v) for v in value]
    if isinstance(value, dict):
        return {k: _round_floats(v) for k, v in value.items()}
    return value


def emit_report(command: str, columns: list[str], rows: list[dict],
                fmt: str = "table", extra: dict | None = None) -> bytes:
    """Render a report deterministically in the requested format."""
    if fmt == "json":
        payload = {
            "schema": REPORT_SCHEMA_VERSION,
            "command": command,
            "columns": columns,
            "rows": [_round_floats({c: r.get(c) for c in columns}) for r in rows],
        }
        if extra:
            payload["extra"] = extra
        return (json.dumps(payload, sort_keys=True, indent=2) + "\n").encode()
    if fmt == "csv":
        buf = _io.StringIO()
        buf.write(",".join(columns) + "\n")
        for r in rows:
            buf.write(",".join(_fmt_cell(r.get(c)) for c in columns) + "\n")
        return buf.getvalue().encode()
    if fmt == "table":
        cells = [[_fmt_cell(r.get(c)) for c in columns] for r in rows]
        widths = [max(len(col), *(len(row[i]) for row in cells)) if cells else len(col)
                  for i, col in enumerate(columns)]
        lines = ["  ".join(col.ljust(w) for col, w in zip(columns, widths)).rstrip()]
        lines.extend("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip() for row in cells)
        return ("\n".join(lines) + "\n").encode()
    raise ValueError(f"unknown format {fmt!r}")
