"""File formats: JSON inputs and reports, CSV tables, small SVG plots.

Reports are written with sorted keys, fixed indentation and ``repr``-exact
floats so that identical runs produce byte-identical files. Non-finite
floats become the strings ``"inf"``, ``"-inf"`` and ``"nan"``.
"""
import json
import math
from pathlib import Path

import numpy as np

from .errors import InputError
from .geometry import PointCloud
from .multimap import SetValuedMap, VertexFunction
from .selection import SelectionTrace


def jsonable(obj):
    """Recursively convert numpy types and non-finite floats for JSON."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return v
    if obj is None or isinstance(obj, str):
        return obj
    if hasattr(obj, "to_dict"):
        return jsonable(obj.to_dict())
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps(obj):
    """Deterministic JSON text of ``obj`` (trailing newline included)."""
    return json.dumps(jsonable(obj), sort_keys=True, indent=2, allow_nan=False) + "\n"


def read_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc


def load_cloud(path):
    """A :class:`PointCloud` from ``{"dim": d, "points": [...]}``."""
    return PointCloud.from_dict(read_json(path))


def load_map(path):
    return SetValuedMap.from_dict(read_json(path))


def load_function(path, domain=None):
    """Vertex values from a bare list of rows or ``{"values": [...]}``."""
    data = read_json(path)
    if isinstance(data, dict):
        if "values" not in data:
            raise InputError(f"{path}: expected a 'values' entry")
        data = data["values"]
    try:
        return VertexFunction(np.asarray(data, dtype=float), domain)
    except (TypeError, ValueError) as exc:
        raise InputError(f"{path}: malformed function values: {exc}") from exc


def load_trace(path):
    data = read_json(path)
    # select reports embed the trace; accept both forms
    if isinstance(data, dict) and "trace" in data and "iterates" not in data:
        data = data["trace"]
    return SelectionTrace.from_dict(data)


def write_text(path, text):
    Path(path).write_text(text, encoding="utf-8")


def svg_polyline(series, width=480, height=320, title=""):
    """Line plot of ``[(label, xs, ys), ...]`` as a standalone SVG document."""
    xs = np.concatenate([np.asarray(s[1], dtype=float) for s in series])
    ys = np.concatenate([np.asarray(s[2], dtype=float) for s in series])
    return _svg(series, xs, ys, width, height, title, lines=True)


def svg_scatter(points, width=320, height=320, title="", circles=()):
    """Planar scatter plot of ``points`` with optional ``(center, radius)`` circles."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] not in (1, 2):
        raise InputError("scatter plots need 1- or 2-dimensional points")
    if pts.shape[1] == 1:
        pts = np.column_stack([pts[:, 0], np.zeros(len(pts))])
    extra = [np.asarray(c, dtype=float).ravel() for c, _ in circles]
    rad = [float(r) for _, r in circles]
    xs = np.concatenate([pts[:, 0]] + [[c[0] - r, c[0] + r] for c, r in zip(extra, rad)])
    ys = np.concatenate([pts[:, 1]] + [[(c[1] if len(c) > 1 else 0.0) - r,
                                        (c[1] if len(c) > 1 else 0.0) + r]
                                       for c, r in zip(extra, rad)])
    series = [("points", pts[:, 0], pts[:, 1])]
    return _svg(series, xs, ys, width, height, title, lines=False,
                circles=[(c, r) for c, r in zip(extra, rad)])


def _svg(series, xs, ys, width, height, title, lines, circles=()):
    pad = 24
    x0, x1 = float(xs.min()), float(xs.max())
    y0, y1 = float(ys.min()), float(ys.max())
    sx = (width - 2 * pad) / (x1 - x0 or 1.0)
    sy = (height - 2 * pad) / (y1 - y0 or 1.0)
    if not lines:
        sx = sy = min(sx, sy)

    def px(x, y):
        return pad + (x - x0) * sx, height - pad - (y - y0) * sy

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">']
    if title:
        out.append(f'<title>{title}</title>')
    colors = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"]
    for k, (label, sxs, sys_) in enumerate(series):
        col = colors[k % len(colors)]
        coords = [px(float(a), float(b)) for a, b in zip(sxs, sys_)]
        if lines:
            pts = " ".join(f"{a:.2f},{b:.2f}" for a, b in coords)
            out.append(f'<polyline fill="none" stroke="{col}" points="{pts}"><title>{label}</title></polyline>')
        else:
            out += [f'<circle cx="{a:.2f}" cy="{b:.2f}" r="2" fill="{col}"/>' for a, b in coords]
    for c, r in circles:
        a, b = px(float(c[0]), float(c[1]) if len(c) > 1 else 0.0)
        out.append(f'<circle cx="{a:.2f}" cy="{b:.2f}" r="{r * sx:.2f}" fill="none" stroke="#d62728"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
