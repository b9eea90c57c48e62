"""Result tables, deterministic CSV output and standalone SVG line plots."""

from __future__ import annotations

import math
import os
import tempfile
from dataclasses import dataclass, field
from html import escape
from pathlib import Path

import numpy as np

__all__ = ["ResultTable", "PlotStyle", "format_number", "emit_plot", "write_atomic"]


def format_number(x: float) -> str:
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.17g}"


@dataclass(frozen=True, eq=False)
class ResultTable:
    columns: tuple[str, ...]
    rows: np.ndarray
    scenario: str
    digest: str
    version: str
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        rows = np.atleast_2d(np.asarray(self.rows, dtype=float))
        if rows.shape[1] != len(self.columns):
            raise ValueError("row width does not match the column count")
        object.__setattr__(self, "rows", rows)

    def column(self, name: str) -> np.ndarray:
        return self.rows[:, self.columns.index(name)]

    def to_csv(self) -> str:
        lines = [f"# qfs {self.version}", f"# scenario: {self.scenario}",
                 f"# config_sha256: {self.digest}"]
        for key, value in self.meta.items():
            value = format_number(value) if isinstance(value, (float, int, np.floating)) else value
            lines.append(f"# {key}: {value}")
        lines.append(",".join(self.columns))
        lines.extend(",".join(format_number(v) for v in row) for row in self.rows)
        return "\n".join(lines) + "\n"


def write_atomic(path, text: str):
    """Write ``text`` to ``path`` through a temporary file and rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


@dataclass(frozen=True)
class PlotStyle:
    x: str
    y: tuple[str, ...]
    log_x: bool = False
    log_y: bool = False
    title: str = ""
    x_label: str = ""
    y_label: str = ""
    x_scale: float = 1.0  # plotted x = column / x_scale


_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")
_W, _H = 640, 420
_L, _R, _T, _B = 80, 20, 40, 60


def _ticks(lo: float, hi: float, log: bool) -> list[float]:
    if log:
        return [10.0 ** k for k in range(math.ceil(lo - 1e-9), math.floor(hi + 1e-9) + 1)]
    span = hi - lo
    raw = span / 5 if span > 0 else 1.0
    mag = 10 ** math.floor(math.log10(raw))
    step = min((m * mag for m in (1, 2, 5, 10) if m * mag >= raw), default=10 * mag)
    start = math.ceil(lo / step - 1e-9) * step
    out, t = [], start
    while t <= hi + 1e-9 * step:
        out.append(0.0 if abs(t) < 1e-12 * step else t)
        t += step
    return out


def _tick_label(v: float, log: bool) -> str:
    if log:
        return f"1e{int(round(math.log10(v)))}"
    return f"{v:.6g}"


def emit_plot(table: ResultTable, style: PlotStyle) -> str:
    """Render selected columns of ``table`` as an SVG 1.1 line plot."""
    if table.rows.shape[0] < 2:
        raise ValueError("a plot needs at least two rows")
    x = table.column(style.x) / style.x_scale
    ys = [table.column(name) for name in style.y]

    def tx(v):
        return np.log10(v) if style.log_x else v

    def ty(v):
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.log10(v) if style.log_y else v

    X = tx(x)
    Ys = [ty(y) for y in ys]
    finite = np.concatenate([y[np.isfinite(y)] for y in Ys]) if Ys else np.array([])
    if finite.size == 0 or not np.all(np.isfinite(X)):
        raise ValueError("nothing finite to plot")
    x0, x1 = float(X.min()), float(X.max())
    if not x1 > x0:
        raise ValueError("x column has zero extent")
    y0, y1 = float(finite.min()), float(finite.max())
    if y1 - y0 < 1e-12 * max(1.0, abs(y0)):
        y0, y1 = y0 - 0.5 * max(1.0, abs(y0)) * 0.1, y1 + 0.5 * max(1.0, abs(y1)) * 0.1
    pad = 0.05 * (y1 - y0)
    y0, y1 = y0 - pad, y1 + pad

    pw, ph = _W - _L - _R, _H - _T - _B

    def px(v):
        return _L + (v - x0) / (x1 - x0) * pw

    def py(v):
        return _T + ph - (v - y0) / (y1 - y0) * ph

    out = [
        '<?xml version="1.0" encoding="UTF-8" standalone="no"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}">',
        f'<rect x="0" y="0" width="{_W}" height="{_H}" fill="white"/>',
        f'<rect x="{_L}" y="{_T}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    if style.title:
        out.append(f'<text x="{_W / 2:.2f}" y="24" text-anchor="middle" font-family="sans-serif" '
                   f'font-size="15">{escape(style.title)}</text>')
    for t in _ticks(x0, x1, style.log_x):
        v = math.log10(t) if style.log_x else t
        X_ = px(v)
        out.append(f'<line x1="{X_:.2f}" y1="{_T + ph}" x2="{X_:.2f}" y2="{_T + ph + 5}" stroke="black"/>')
        out.append(f'<text x="{X_:.2f}" y="{_T + ph + 20}" text-anchor="middle" font-family="sans-serif" '
                   f'font-size="11">{escape(_tick_label(t, style.log_x))}</text>')
    for t in _ticks(y0, y1, style.log_y):
        v = math.log10(t) if style.log_y else t
        if not (y0 <= v <= y1):
            continue
        Y_ = py(v)
        out.append(f'<line x1="{_L - 5}" y1="{Y_:.2f}" x2="{_L}" y2="{Y_:.2f}" stroke="black"/>')
        out.append(f'<text x="{_L - 8}" y="{Y_ + 4:.2f}" text-anchor="end" font-family="sans-serif" '
                   f'font-size="11">{escape(_tick_label(t, style.log_y))}</text>')
    if style.x_label:
        out.append(f'<text x="{_L + pw / 2:.2f}" y="{_H - 15}" text-anchor="middle" '
                   f'font-family="sans-serif" font-size="13">{escape(style.x_label)}</text>')
    if style.y_label:
        cy = _T + ph / 2
        out.append(f'<text x="18" y="{cy:.2f}" text-anchor="middle" font-family="sans-serif" '
                   f'font-size="13" transform="rotate(-90 18 {cy:.2f})">{escape(style.y_label)}</text>')
    for i, (name, Y) in enumerate(zip(style.y, Ys)):
        color = _COLORS[i % len(_COLORS)]
        pts = " ".join(f"{px(a):.2f},{py(b):.2f}" for a, b in zip(X, Y) if np.isfinite(b))
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{pts}"/>')
        ly = _T + 16 + 16 * i
        out.append(f'<line x1="{_L + pw - 150}" y1="{ly}" x2="{_L + pw - 125}" y2="{ly}" '
                   f'stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{_L + pw - 120}" y="{ly + 4}" font-family="sans-serif" '
                   f'font-size="11">{escape(name)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"

