"""Result rows and their CSV / JSONL serialisation.

Column order is the field order of ``ResultRow``. Floats are written with 17
significant digits (always with a decimal point or exponent so they read
back as floats), ``None`` as an empty CSV cell / JSON null, non-finite floats
as ``inf``, ``-inf`` or ``nan``. CSV cannot tell an empty string from
``None``; both read back as ``None``.
"""

from __future__ import annotations

import csv
import io
import json
import math
import typing
from dataclasses import asdict, dataclass, fields
from pathlib import Path

SCHEMA_VERSION = 1


@dataclass
class ResultRow:
    schema_version: int = SCHEMA_VERSION
    kind: str = "moment"  # moment | bound | arc | skeleton | error
    x: int | None = None
    y: int | None = None
    K: str | None = None
    psi: int | None = None
    rho: str | None = None
    moment: int | float | None = None
    method: str | None = None
    N: int | None = None
    error_estimate: float | None = None
    x_exponent: float | None = None
    psi_exponent: float | None = None
    bound_id: str | None = None
    bound_total: float | None = None
    bound_x_exponent: float | None = None
    ratio: float | None = None
    valid: bool | None = None
    nontrivial: bool | None = None
    out_of_theory: bool | None = None
    arc_split: str | None = None
    Q: float | None = None
    split_q: float | None = None
    part1: float | None = None
    part2: float | None = None
    sharp_part: float | None = None
    flat_part: float | None = None
    theta: float | None = None
    a: int | None = None
    q: int | None = None
    L: float | None = None
    parseval_ok: bool | None = None
    trivial_ok: bool | None = None
    diagonal_ok: bool | None = None
    error: str | None = None
    time_ms: float | None = None


COLUMNS = [f.name for f in fields(ResultRow)]
_TYPES = typing.get_type_hints(ResultRow)


def format_value(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        s = format(v, ".17g")
        return s if any(c in s for c in ".en") else s + ".0"
    return str(v)


def _parse(name: str, s):
    if s is None or s == "":
        return None
    t = _TYPES[name]
    args = (set(typing.get_args(t)) or {t}) - {type(None)}
    if bool in args:
        if isinstance(s, bool):
            return s
        return {"true": True, "false": False}[s]
    if str in args:
        return str(s)
    if isinstance(s, (int, float)) and not isinstance(s, bool):
        return s
    if int in args and float in args:
        return float(s) if any(c in s.lower() for c in ".ein") else int(s)
    if int in args:
        return int(s)
    return float(s)


def row_to_strings(row: ResultRow) -> list[str]:
    return [format_value(getattr(row, c)) for c in COLUMNS]


def rows_to_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COLUMNS)
    for r in rows:
        w.writerow(row_to_strings(r))
    return buf.getvalue()


def write_csv(rows, path) -> None:
    Path(path).write_text(rows_to_csv(rows), encoding="utf-8")


def read_csv(path) -> list[ResultRow]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != COLUMNS:
            raise ValueError(f"{path}: unexpected columns {reader.fieldnames}")
        return [ResultRow(**{k: _parse(k, v) for k, v in rec.items()}) for rec in reader]


def _json_value(v):
    if isinstance(v, float) and not math.isfinite(v):
        return format_value(v)
    return v


def rows_to_jsonl(rows) -> str:
    lines = []
    for r in rows:
        d = {k: _json_value(v) for k, v in asdict(r).items()}
        lines.append(json.dumps(d, allow_nan=False))
    return "".join(line + "\n" for line in lines)


def write_jsonl(rows, path) -> None:
    Path(path).write_text(rows_to_jsonl(rows), encoding="utf-8")


def read_jsonl(path) -> list[ResultRow]:
    out = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if not line.strip():
            continue
        d = json.loads(line)
        vals = {}
        for k, v in d.items():
            is_text = str in (typing.get_args(_TYPES[k]) or (_TYPES[k],))
            if isinstance(v, str) and not is_text:
                v = float(v)  # inf, -inf or nan
            vals[k] = v if v is None or is_text else _parse(k, v)
        out.append(ResultRow(**vals))
    return out
