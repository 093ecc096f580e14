"""CSV and SVG writers for diagrams and trajectories.

CSV floats use 17 significant digits, which round-trips every double.  SVG
output is built by hand so that it is byte-identical for identical input.
"""

from __future__ import annotations

import csv
from collections import defaultdict
from xml.sax.saxutils import escape

import numpy as np

from twocenters.bifurcation import Diagram
from twocenters.dynamics import Trajectory

GRID_HEADER = ("E", "K", "label", "pattern", "bounded")
CURVE_HEADER = ("curve", "E", "K")
TRAJECTORY_HEADER = ("s", "t", "q1", "q2", "p1", "p2", "x", "y", "E_drift", "K_drift")
EVENT_HEADER = ("s", "kind")

_CURVE_COLORS = {
    "L0": "#555555",
    "Lm1": "#1f77b4",
    "Lm2": "#2ca02c",
    "Lm3": "#17becf",
    "Lp2": "#d62728",
    "Lp3": "#ff7f0e",
}


def fmt(value: float) -> str:
    """CSV representation of a float (17 significant digits)."""
    return "%.17g" % value


def _svg_num(value: float) -> str:
    return "%.6g" % value


def _write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def write_grid_csv(diagram: Diagram, path) -> None:
    rows = []
    for j, k in enumerate(diagram.k_values):
        for i, e in enumerate(diagram.e_values):
            cell = diagram.cells[j][i]
            rows.append((fmt(e), fmt(k), cell.label, cell.pattern, str(cell.bounded_component).lower()))
    _write_csv(path, GRID_HEADER, rows)


def write_curves_csv(diagram: Diagram, path) -> None:
    rows = []
    for curve, polylines in diagram.curves.items():
        for line in polylines:
            rows.extend((curve.value, fmt(e), fmt(k)) for e, k in line)
    _write_csv(path, CURVE_HEADER, rows)


def trajectory_rows(traj: Trajectory):
    q1, q2 = traj.q
    p1, p2 = traj.p
    de, dk = traj.drift()
    cols = (traj.s, traj.t, q1, q2, p1, p2, traj.x, traj.y, de, dk)
    for row in zip(*cols):
        yield tuple(fmt(v) for v in row)


def write_trajectory_csv(traj: Trajectory, path) -> None:
    _write_csv(path, TRAJECTORY_HEADER, trajectory_rows(traj))


def write_events_csv(traj: Trajectory, path) -> None:
    _write_csv(path, EVENT_HEADER, [(fmt(ev.s), ev.kind.value) for ev in traj.events])


def read_csv(path) -> tuple[list[str], list[list[str]]]:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    return rows[0], rows[1:]


class _Canvas:
    """Affine map from a data window onto an SVG viewport with margins."""

    def __init__(self, x_range, y_range, width=640, height=480, margin=48):
        self.x0, self.x1 = x_range
        self.y0, self.y1 = y_range
        self.width, self.height, self.margin = width, height, margin
        self.parts = []

    def px(self, x):
        return self.margin + (x - self.x0) / (self.x1 - self.x0) * (self.width - 2 * self.margin)

    def py(self, y):
        return self.height - self.margin - (y - self.y0) / (self.y1 - self.y0) * (self.height - 2 * self.margin)

    def add(self, element: str):
        self.parts.append(element)

    def polyline(self, points, stroke, width=1.5, extra=""):
        pts = " ".join(f"{_svg_num(self.px(x))},{_svg_num(self.py(y))}" for x, y in points)
        self.add(f'<polyline points="{pts}" fill="none" stroke="{stroke}" stroke-width="{width}"{extra}/>')

    def text(self, x, y, label, size=12, anchor="middle"):
        self.add(
            f'<text x="{_svg_num(x)}" y="{_svg_num(y)}" font-size="{size}" '
            f'text-anchor="{anchor}" font-family="sans-serif">{escape(label)}</text>'
        )

    def axes(self, x_name, y_name, title):
        m, w, h = self.margin, self.width, self.height
        self.add(f'<rect x="{m}" y="{m}" width="{w - 2 * m}" height="{h - 2 * m}" fill="none" stroke="black"/>')
        self.text(w / 2, h - 12, x_name)
        self.text(14, h / 2, y_name)
        self.text(w / 2, 20, title, size=14)
        for frac in (0.0, 0.5, 1.0):
            xv = self.x0 + frac * (self.x1 - self.x0)
            yv = self.y0 + frac * (self.y1 - self.y0)
            self.text(self.px(xv), h - m + 16, _svg_num(xv), size=10)
            self.text(m - 4, self.py(yv) + 3, _svg_num(yv), size=10, anchor="end")

    def render(self) -> str:
        head = (
            '<?xml version="1.0" encoding="UTF-8"?>\n'
            f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
            f'width="{self.width}" height="{self.height}" viewBox="0 0 {self.width} {self.height}">\n'
        )
        return head + "\n".join(self.parts) + "\n</svg>\n"


def _cell_edges(values):
    mids = 0.5 * (values[1:] + values[:-1])
    return np.concatenate([[values[0]], mids, [values[-1]]])


def diagram_svg(diagram: Diagram, title: str = "") -> str:
    """Forbidden cells shaded, curves stroked, regions labelled at their centroid."""
    ev, kv = diagram.e_values, diagram.k_values
    canvas = _Canvas((ev[0], ev[-1]), (kv[0], kv[-1]))
    ee, ke = _cell_edges(ev), _cell_edges(kv)
    centroids = defaultdict(list)
    for j in range(len(kv)):
        i = 0
        while i < len(ev):
            if diagram.cells[j][i].label != "forbidden":
                label = diagram.cells[j][i].label
                if label != "threshold":
                    centroids[label].append((ev[i], kv[j]))
                i += 1
                continue
            start = i
            while i < len(ev) and diagram.cells[j][i].label == "forbidden":
                i += 1
            x0, x1 = canvas.px(ee[start]), canvas.px(ee[i])
            y0, y1 = canvas.py(ke[j + 1]), canvas.py(ke[j])
            canvas.add(
                f'<rect x="{_svg_num(x0)}" y="{_svg_num(y0)}" width="{_svg_num(x1 - x0)}" '
                f'height="{_svg_num(y1 - y0)}" fill="#cccccc" stroke="none"/>'
            )
    for curve, polylines in diagram.curves.items():
        color = _CURVE_COLORS.get(curve.value, "black")
        dash = ' stroke-dasharray="4 3"' if curve.value == "L0" else ""
        for line in polylines:
            canvas.polyline(line, color, extra=dash)
        if polylines and polylines[0]:
            e_end, k_end = polylines[0][-1]
            canvas.text(canvas.px(e_end) - 4, canvas.py(k_end) - 4, curve.value, size=10, anchor="end")
    for label in sorted(centroids):
        pts = np.array(centroids[label])
        e_c, k_c = pts.mean(axis=0)
        canvas.text(canvas.px(e_c), canvas.py(k_c), label)
    canvas.axes("E", "K", title)
    return canvas.render()


def trajectory_svg(traj: Trajectory, title: str = "") -> str:
    """Configuration-space path with both centers marked."""
    q1, q2 = traj.q
    finite = np.isfinite(q1) & np.isfinite(q2)
    xs, ys = q1[finite], q2[finite]
    span = max(1.5, float(np.max(np.abs(np.concatenate([xs, ys])))) if len(xs) else 1.5)
    span = min(span, 10.0)
    canvas = _Canvas((-span, span), (-span, span), width=520, height=520)
    inside = (np.abs(xs) <= span) & (np.abs(ys) <= span)
    # split the path where it leaves the window
    start = None
    for i, ok in enumerate(np.append(inside, False)):
        if ok and start is None:
            start = i
        elif not ok and start is not None:
            if i - start > 1:
                canvas.polyline(list(zip(xs[start:i], ys[start:i])), "#1f77b4", width=1.0)
            start = None
    for cx, z in ((1.0, traj.charges.z1), (-1.0, traj.charges.z2)):
        color = "#d62728" if z > 0 else "#2ca02c"
        canvas.add(f'<circle cx="{_svg_num(canvas.px(cx))}" cy="{_svg_num(canvas.py(0.0))}" r="4" fill="{color}"/>')
    label = title or f"E = {_svg_num(traj.em.e)}, K = {_svg_num(traj.em.k)}"
    canvas.axes("q1", "q2", label)
    return canvas.render()


def write_text(path, text: str) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(text)

