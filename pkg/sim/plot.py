# sim/plot.py
from __future__ import annotations

import io
import math
from pathlib import Path
from xml.sax.saxutils import escape

import numpy as np
import pandas as pd

from mim_gp.errors import ReportFormatError

from .metrics import SUMMARY_COLUMNS

WIDTH, HEIGHT = 720, 440
MARGIN = {"left": 70, "right": 190, "top": 30, "bottom": 50}
PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf")
LOG_FLOOR = 1e-12


def read_summary(path: str | Path) -> pd.DataFrame:
    path = Path(path)
    if not path.is_file():
        raise ReportFormatError(f"summary file not found: {path}")
    try:
        text = path.read_text(encoding="utf-8")
        frame = pd.read_csv(io.StringIO(text), comment="#")
    except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as exc:
        raise ReportFormatError(f"{path}: cannot parse summary CSV ({exc})") from exc
    missing = [c for c in SUMMARY_COLUMNS if c not in frame.columns]
    if missing:
        raise ReportFormatError(f"{path}: missing columns {missing}")
    if frame.empty:
        raise ReportFormatError(f"{path}: summary has no data rows")
    if not np.all(np.isfinite(frame["mean"].to_numpy(dtype=float))):
        raise ReportFormatError(f"{path}: non-finite values in column 'mean'")
    return frame


class _Axes:
    """Maps data to pixel coordinates; y is log10 when ``log_y``."""

    def __init__(self, xs: np.ndarray, ys: np.ndarray, log_y: bool) -> None:
        self.log_y = log_y
        self.x0, self.x1 = float(xs.min()), float(xs.max())
        if self.x0 == self.x1:
            self.x0, self.x1 = self.x0 - 1.0, self.x1 + 1.0
        ty = self._ty(ys)
        self.y0, self.y1 = float(ty.min()), float(ty.max())
        if self.y0 == self.y1:
            self.y0, self.y1 = self.y0 - 1.0, self.y1 + 1.0

    def _ty(self, ys: np.ndarray) -> np.ndarray:
        ys = np.asarray(ys, dtype=float)
        return np.log10(np.maximum(ys, LOG_FLOOR)) if self.log_y else ys

    def px(self, x: float) -> float:
        span = WIDTH - MARGIN["left"] - MARGIN["right"]
        return MARGIN["left"] + (x - self.x0) / (self.x1 - self.x0) * span

    def py(self, y: float) -> float:
        span = HEIGHT - MARGIN["top"] - MARGIN["bottom"]
        ty = float(self._ty(np.array([y]))[0])
        return HEIGHT - MARGIN["bottom"] - (ty - self.y0) / (self.y1 - self.y0) * span

    def y_ticks(self) -> list[tuple[float, str]]:
        if self.log_y:
            lo, hi = math.floor(self.y0), math.ceil(self.y1)
            return [(10.0**e, f"1e{e}") for e in range(lo, hi + 1) if self.y0 <= e <= self.y1]
        return [(v, f"{v:.3g}") for v in np.linspace(self.y0, self.y1, 5)]


def render_svg(frame: pd.DataFrame, metric: str, title: str) -> str:
    """One polyline per sequential condition and a dashed line per baseline row."""

    rows = frame[frame["metric"] == metric]
    seq = rows[rows["kind"] != "baseline"]
    base = rows[rows["kind"] == "baseline"]
    log_y = metric in ("gap", "mse")
    axes = _Axes(rows["n"].to_numpy(dtype=float), rows["mean"].to_numpy(dtype=float), log_y)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{WIDTH / 2:.1f}" y="18" text-anchor="middle">{escape(title)}</text>',
    ]
    left, bottom = MARGIN["left"], HEIGHT - MARGIN["bottom"]
    right = WIDTH - MARGIN["right"]
    parts.append(
        f'<path d="M{left},{MARGIN["top"]} L{left},{bottom} L{right},{bottom}" '
        'stroke="black" fill="none"/>'
    )
    for value, label in axes.y_ticks():
        y = axes.py(value)
        parts.append(
            f'<line x1="{left - 4}" y1="{y:.1f}" x2="{left}" y2="{y:.1f}" stroke="black"/>'
        )
        parts.append(
            f'<text x="{left - 6}" y="{y + 4:.1f}" text-anchor="end">{escape(label)}</text>'
        )
    for value in np.unique(np.linspace(axes.x0, axes.x1, 6).round()):
        x = axes.px(float(value))
        parts.append(
            f'<text x="{x:.1f}" y="{bottom + 16}" text-anchor="middle">{int(value)}</text>'
        )
    x_mid = (left + right) / 2
    parts.append(f'<text x="{x_mid:.1f}" y="{HEIGHT - 12}" text-anchor="middle">n</text>')
    axis_label = f"log10 {metric}" if log_y else metric
    parts.append(
        f'<text x="16" y="{(MARGIN["top"] + bottom) / 2:.1f}" text-anchor="middle" '
        f'transform="rotate(-90 16 {(MARGIN["top"] + bottom) / 2:.1f})">{axis_label}</text>'
    )

    legend: list[tuple[str, str, bool]] = []
    for i, (label, group) in enumerate(seq.groupby("condition", sort=False)):
        color = PALETTE[i % len(PALETTE)]
        group = group.sort_values("n")
        points = " ".join(
            f"{axes.px(n):.2f},{axes.py(m):.2f}"
            for n, m in zip(group["n"].astype(float), group["mean"].astype(float), strict=True)
        )
        parts.append(
            f'<polyline points="{points}" fill="none" stroke="{color}" stroke-width="1.5"/>'
        )
        legend.append((str(label), color, False))
    offset = len(legend)
    for j, row in enumerate(base.itertuples(index=False)):
        color = PALETTE[(offset + j) % len(PALETTE)]
        y = axes.py(float(row.mean))
        parts.append(
            f'<line x1="{left}" y1="{y:.2f}" x2="{right}" y2="{y:.2f}" stroke="{color}" '
            'stroke-dasharray="6,4" stroke-width="1.2"/>'
        )
        legend.append((f"{row.condition} (batch)", color, True))

    for k, (label, color, dashed) in enumerate(legend):
        y = MARGIN["top"] + 14 + 18 * k
        dash = ' stroke-dasharray="6,4"' if dashed else ""
        parts.append(
            f'<line x1="{right + 12}" y1="{y}" x2="{right + 36}" y2="{y}" '
            f'stroke="{color}" stroke-width="2"{dash}/>'
        )
        parts.append(f'<text x="{right + 42}" y="{y + 4}">{escape(label)}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def plot_summary(summary_path: str | Path, out: str | Path) -> list[Path]:
    """Write ``<out>/<summary stem>_<metric>.svg`` for every metric in the summary."""

    frame = read_summary(summary_path)
    out = Path(out)
    stem = Path(summary_path).stem
    rendered = {
        metric: render_svg(frame, str(metric), f"{stem}: {metric}")
        for metric in frame["metric"].unique()
    }
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    for metric, svg in rendered.items():
        path = out / f"{stem}_{metric}.svg"
        path.write_text(svg, encoding="utf-8")
        paths.append(path)
    return paths
