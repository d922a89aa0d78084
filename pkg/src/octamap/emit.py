"""CSV, JSON and static SVG output.

The SVG writer is a few lines of text formatting rather than matplotlib, so
that identical inputs give byte-identical files.
"""

from __future__ import annotations

import csv
import io
import json
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence
from xml.sax.saxutils import escape

SVG_SIZE = 480
SVG_MARGIN = 24


def _cell(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, float):
        return repr(float(x))  # plain repr also for numpy scalars
    return x


def csv_text(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_cell(x) for x in r])
    return buf.getvalue()


def read_csv(text: str) -> tuple:
    """(header, rows) with every cell left as a string."""
    rows = list(csv.reader(io.StringIO(text)))
    return rows[0], rows[1:]


def _json_default(x):
    if isinstance(x, Fraction):
        return str(x)
    if hasattr(x, "tolist"):
        return x.tolist()
    raise TypeError(f"not JSON serializable: {type(x).__name__}")


def json_text(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, default=_json_default) + "\n"


def _viewport(points: Sequence[tuple]) -> tuple:
    xs = [p[0] for p in points] or [0.0]
    ys = [p[1] for p in points] or [0.0]
    x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
    span = max(x1 - x0, y1 - y0) or 1.0
    scale = (SVG_SIZE - 2 * SVG_MARGIN) / span

    def to_px(p):
        return (SVG_MARGIN + (p[0] - x0) * scale, SVG_SIZE - SVG_MARGIN - (p[1] - y0) * scale)

    return to_px


def _svg(body: list, title: str) -> str:
    head = (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_SIZE}" height="{SVG_SIZE}" '
        f'viewBox="0 0 {SVG_SIZE} {SVG_SIZE}">\n'
        f"<title>{escape(title)}</title>\n"
        f'<rect width="{SVG_SIZE}" height="{SVG_SIZE}" fill="white"/>\n'
    )
    return head + "".join(body) + "</svg>\n"


def svg_scatter(points: Sequence[tuple], dark: Sequence[bool] | None = None, title: str = "", r: float = 1.2) -> str:
    """Scatter plot; points flagged in ``dark`` are drawn black, the rest grey."""
    to_px = _viewport(points)
    dark = dark if dark is not None else [True] * len(points)
    body = []
    for p, flag in zip(points, dark):
        x, y = to_px(p)
        color = "#000" if flag else "#aaa"
        body.append(f'<circle cx="{x:.3f}" cy="{y:.3f}" r="{r}" fill="{color}"/>\n')
    return _svg(body, title)


def svg_polyline(points: Sequence[tuple], marks: Sequence[tuple] = (), title: str = "") -> str:
    """A polyline with optional marked points (e.g. cusps) drawn as red dots."""
    to_px = _viewport(list(points) + list(marks))
    coords = " ".join("{:.3f},{:.3f}".format(*to_px(p)) for p in points)
    body = [f'<polyline points="{coords}" fill="none" stroke="black" stroke-width="1"/>\n']
    for m in marks:
        x, y = to_px(m)
        body.append(f'<circle cx="{x:.3f}" cy="{y:.3f}" r="3" fill="red"/>\n')
    return _svg(body, title)


def write(path: str | Path | None, text: str) -> None:
    """Write to ``path``, or to stdout when it is None or "-"."""
    if path is None or str(path) == "-":
        print(text, end="")
    else:
        Path(path).write_text(text, encoding="utf-8")
