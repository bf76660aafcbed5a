"""Latency/quality curve points ingested from result tables.

Quality numbers (BLEU and the like) are copied from the input verbatim;
nothing here computes them.
"""
from __future__ import annotations

import csv
import io
import json
import re
from dataclasses import asdict, dataclass
from typing import Optional

from .errors import InvalidParameter, ParseError

_BOLD = re.compile(r"\\textbf\{([^{}]*)\}")
_NUM = re.compile(r"^-?\d+(?:\.\d+)?$")


@dataclass(frozen=True)
class CurvePoint:
    latency: float
    quality: float
    label: str
    param: Optional[str] = None


def _cells(line: str) -> list[str]:
    line = line.replace("\\hline", "").strip().rstrip("\\").strip()
    if "&" in line:
        return [c.strip() for c in line.split("&")]
    return line.split()


def parse_result_table(text: str, latency: str = "word") -> list[CurvePoint]:
    """Read blocks of ``param & token AL & word AL & BLEU`` rows.

    A bold heading (``\\textbf{...}``) names the system for the rows below
    it; a header row naming the columns may appear in each block. Without a
    header the column order above is assumed.
    """
    if latency not in ("word", "token"):
        raise InvalidParameter(f"latency column must be 'word' or 'token', not {latency!r}")
    label = "system"
    cols = {"param": 0, "token": 1, "word": 2, "quality": 3}
    points = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        heading = _BOLD.search(line)
        if heading:
            label = heading.group(1).strip()
            continue
        cells = _cells(line)
        if not cells or not any(cells):
            continue
        if not all(_NUM.match(c) for c in cells):
            lowered = [c.lower() for c in cells]
            if any("al" in c.split() for c in lowered):
                cols = {"param": 0}
                for idx, c in enumerate(lowered):
                    if "word" in c:
                        cols["word"] = idx
                    elif "token" in c:
                        cols["token"] = idx
                    elif idx > 0 and "al" not in c.split():
                        cols["quality"] = idx
            continue
        try:
            points.append(CurvePoint(float(cells[cols[latency]]), float(cells[cols["quality"]]),
                                     label, cells[cols["param"]]))
        except (KeyError, IndexError) as e:
            raise ParseError(f"line {lineno}: row does not match the column header") from e
    return points


def read_curve_csv(text: str) -> list[CurvePoint]:
    """CSV with columns label, latency, quality and optionally param."""
    rows = csv.DictReader(io.StringIO(text))
    try:
        return [CurvePoint(float(r["latency"]), float(r["quality"]), r["label"],
                           r.get("param") or None) for r in rows]
    except (KeyError, TypeError, ValueError) as e:
        raise ParseError(f"bad curve CSV: {e}") from e


def emit_curve(points, fmt: str = "csv") -> str:
    pts = sorted(points, key=lambda p: (p.latency, p.label, p.quality))
    if fmt == "json":
        return json.dumps([asdict(p) for p in pts], ensure_ascii=False, indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["label", "param", "latency", "quality"])
        for p in pts:
            w.writerow([p.label, p.param or "", repr(p.latency), repr(p.quality)])
        return buf.getvalue()
    raise InvalidParameter(f"unknown curve format {fmt!r}")
