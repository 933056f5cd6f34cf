"""Deterministic serialization: canonical JSON and CSV projections.

JSON is the canonical format: keys sorted, floats rendered with 17 significant
digits, complex values as [re, im] pairs, non-finite floats as the strings
"inf", "-inf", "nan" (JSON has no literals for them). Identical documents
serialize to identical bytes.
"""

from __future__ import annotations

import csv
import dataclasses
import enum
import io
import math

import numpy as np


def _fmt_float(x: float) -> str:
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    return format(float(x), ".17g")


def plain(obj):
    """Convert records, enums, numpy values, and containers to plain data."""
    if obj is None or isinstance(obj, (bool, int, str)):
        return obj
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return {"__complex__": (float(obj.real), float(obj.imag))}
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: plain(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, np.ndarray):
        return [plain(v) for v in obj.tolist()]
    if isinstance(obj, dict):
        return {str(k): plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set)):
        return [plain(v) for v in obj]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _encode(obj, out, indent, level):
    pad = " " * (indent * level)
    pad_in = " " * (indent * (level + 1))
    if obj is None:
        out.write("null")
    elif isinstance(obj, bool):
        out.write("true" if obj else "false")
    elif isinstance(obj, int):
        out.write(str(obj))
    elif isinstance(obj, float):
        out.write(_fmt_float(obj))
    elif isinstance(obj, str):
        out.write('"' + obj.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n") + '"')
    elif isinstance(obj, dict):
        if "__complex__" in obj and len(obj) == 1:
            re_, im_ = obj["__complex__"]
            out.write(f"[{_fmt_float(re_)}, {_fmt_float(im_)}]")
            return
        if not obj:
            out.write("{}")
            return
        out.write("{\n")
        keys = sorted(obj)
        for i, k in enumerate(keys):
            out.write(pad_in + '"' + str(k) + '": ')
            _encode(obj[k], out, indent, level + 1)
            out.write(",\n" if i + 1 < len(keys) else "\n")
        out.write(pad + "}")
    elif isinstance(obj, list):
        if not obj:
            out.write("[]")
            return
        simple = all(isinstance(v, (int, float, str, bool)) or v is None for v in obj)
        if simple:
            out.write("[")
            for i, v in enumerate(obj):
                _encode(v, out, indent, level + 1)
                if i + 1 < len(obj):
                    out.write(", ")
            out.write("]")
            return
        out.write("[\n")
        for i, v in enumerate(obj):
            out.write(pad_in)
            _encode(v, out, indent, level + 1)
            out.write(",\n" if i + 1 < len(obj) else "\n")
        out.write(pad + "]")
    else:
        raise TypeError(f"cannot encode {type(obj).__name__}")


def to_canonical_json(document) -> str:
    out = io.StringIO()
    _encode(plain(document), out, 2, 0)
    out.write("\n")
    return out.getvalue()


def _flatten_cell(value):
    if isinstance(value, dict) and set(value) == {"__complex__"}:
        re_, im_ = value["__complex__"]
        return [re_, im_]
    return [value]


def _cell_text(v) -> str:
    if isinstance(v, float):
        return _fmt_float(v).strip('"')
    return "" if v is None else str(v)


def rows_to_csv(fieldnames, rows, header_comment: str | None = None) -> str:
    """CSV projection of a row table; complex cells split into _re/_im columns."""
    plain_rows = [plain(r) for r in rows]
    cols = []
    for name in fieldnames:
        sample = next((r[name] for r in plain_rows if r.get(name) is not None), None)
        if isinstance(sample, dict) and set(sample) == {"__complex__"}:
            cols.append((name, True))
        else:
            cols.append((name, False))
    out = io.StringIO()
    if header_comment:
        out.write("# " + header_comment + "\n")
    writer = csv.writer(out, lineterminator="\n")
    header = []
    for name, is_c in cols:
        header.extend([f"{name}_re", f"{name}_im"] if is_c else [name])
    writer.writerow(header)
    for r in plain_rows:
        cells = []
        for name, is_c in cols:
            v = r.get(name)
            if is_c:
                vals = _flatten_cell(v) if v is not None else [None, None]
                cells.extend(_cell_text(x) for x in vals)
            else:
                cells.append(_cell_text(v))
        writer.writerow(cells)
    return out.getvalue()
