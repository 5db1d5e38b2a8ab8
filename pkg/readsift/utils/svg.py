"""
Deterministic SVG figures: coverage signals, precision-recall curves and
latent-space scatter plots.

Output depends only on the data: no timestamps, no random ids, and every
coordinate is printed with a fixed number of decimals, so identical input
gives identical bytes.
"""

from collections.abc import Sequence
from dataclasses import dataclass
from xml.sax.saxutils import escape

import numpy as np

from readsift.core.labels import CLASSES, ReadClass
from readsift.evaluation.metrics import PRCurve
from readsift.evaluation.tsne import Embedding
from readsift.genomics.signals import Signal

WIDTH = 640
HEIGHT = 480
MARGIN_LEFT = 64
MARGIN_RIGHT = 150
MARGIN_TOP = 40
MARGIN_BOTTOM = 56

CLASS_COLORS: dict[ReadClass, str] = {
    ReadClass.CHIMERIC: "#d62728",
    ReadClass.LEFT_REPEAT: "#2ca02c",
    ReadClass.RIGHT_REPEAT: "#1f77b4",
    ReadClass.REGULAR: "#e6c619",
}
UNLABELED_COLOR = "#7f7f7f"
SERIES_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#e6c619", "#9467bd", "#8c564b")


def _num(value: float) -> str:
    return f"{value:.2f}"


@dataclass(frozen=True)
class _Frame:
    """Maps data coordinates into the plotting area."""

    x_min: float
    x_max: float
    y_min: float
    y_max: float

    @classmethod
    def around(cls, xs: np.ndarray, ys: np.ndarray, pad: float = 0.0) -> "_Frame":
        x_min, x_max = float(xs.min()), float(xs.max())
        y_min, y_max = float(ys.min()), float(ys.max())
        if x_max == x_min:
            x_min, x_max = x_min - 0.5, x_max + 0.5
        if y_max == y_min:
            y_min, y_max = y_min - 0.5, y_max + 0.5
        dx, dy = (x_max - x_min) * pad, (y_max - y_min) * pad
        return cls(x_min - dx, x_max + dx, y_min - dy, y_max + dy)

    def px(self, x: float) -> float:
        span = WIDTH - MARGIN_LEFT - MARGIN_RIGHT
        return MARGIN_LEFT + (x - self.x_min) / (self.x_max - self.x_min) * span

    def py(self, y: float) -> float:
        span = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM
        return HEIGHT - MARGIN_BOTTOM - (y - self.y_min) / (self.y_max - self.y_min) * span


def _document(title: str, body: list[str]) -> str:
    head = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
        f"<title>{escape(title)}</title>",
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="#ffffff"/>',
        f'<text x="{WIDTH // 2}" y="24" text-anchor="middle" font-size="15">{escape(title)}</text>',
    ]
    return "\n".join([*head, *body, "</svg>"]) + "\n"


def _axes(frame: _Frame, x_label: str, y_label: str, ticks: int = 5) -> list[str]:
    left, right = MARGIN_LEFT, WIDTH - MARGIN_RIGHT
    top, bottom = MARGIN_TOP, HEIGHT - MARGIN_BOTTOM
    parts = [
        f'<g stroke="#000000" stroke-width="1">'
        f'<line x1="{left}" y1="{bottom}" x2="{right}" y2="{bottom}"/>'
        f'<line x1="{left}" y1="{top}" x2="{left}" y2="{bottom}"/></g>'
    ]
    for value in np.linspace(frame.x_min, frame.x_max, ticks):
        x = _num(frame.px(float(value)))
        parts.append(
            f'<line x1="{x}" y1="{bottom}" x2="{x}" y2="{bottom + 4}" stroke="#000000"/>'
            f'<text x="{x}" y="{bottom + 18}" text-anchor="middle">{value:.3g}</text>'
        )
    for value in np.linspace(frame.y_min, frame.y_max, ticks):
        y = _num(frame.py(float(value)))
        parts.append(
            f'<line x1="{left - 4}" y1="{y}" x2="{left}" y2="{y}" stroke="#000000"/>'
            f'<text x="{left - 8}" y="{y}" text-anchor="end" dominant-baseline="middle">{value:.3g}</text>'
        )
    parts.append(f'<text x="{(left + right) // 2}" y="{HEIGHT - 16}" text-anchor="middle">{escape(x_label)}</text>')
    parts.append(
        f'<text x="16" y="{(top + bottom) // 2}" text-anchor="middle" '
        f'transform="rotate(-90 16 {(top + bottom) // 2})">{escape(y_label)}</text>'
    )
    return parts


def _legend(entries: Sequence[tuple[str, str]]) -> list[str]:
    x = WIDTH - MARGIN_RIGHT + 16
    parts = ['<g class="legend">']
    for i, (label, color) in enumerate(entries):
        y = MARGIN_TOP + 12 + 20 * i
        parts.append(
            f'<g class="legend-entry"><rect x="{x}" y="{y - 6}" width="12" height="12" fill="{color}"/>'
            f'<text x="{x + 18}" y="{y}" dominant-baseline="middle">{escape(label)}</text></g>'
        )
    parts.append("</g>")
    return parts


def _polyline(frame: _Frame, xs: np.ndarray, ys: np.ndarray, color: str) -> str:
    points = " ".join(f"{_num(frame.px(float(x)))},{_num(frame.py(float(y)))}" for x, y in zip(xs, ys, strict=True))
    return f'<polyline points="{points}" fill="none" stroke="{color}" stroke-width="1.5"/>'


def line_plot(
    series: Sequence[tuple[str, np.ndarray, np.ndarray]],
    title: str,
    x_label: str,
    y_label: str,
    frame: _Frame | None = None,
) -> str:
    """
    Line chart of one or more ``(label, xs, ys)`` series.

    Raises:
        ValueError: If there is nothing to draw
    """
    if not series or any(len(xs) == 0 for _, xs, _ in series):
        raise ValueError(f"cannot plot '{title}': no data points")
    if frame is None:
        frame = _Frame.around(
            np.concatenate([np.asarray(xs, dtype=np.float64) for _, xs, _ in series]),
            np.concatenate([np.asarray(ys, dtype=np.float64) for _, _, ys in series]),
        )
    body = _axes(frame, x_label, y_label)
    entries = []
    for i, (label, xs, ys) in enumerate(series):
        color = SERIES_COLORS[i % len(SERIES_COLORS)]
        body.append(_polyline(frame, np.asarray(xs), np.asarray(ys), color))
        entries.append((label, color))
    body.extend(_legend(entries))
    return _document(title, body)


def coverage_plot(signals: Sequence[Signal], title: str = "Coverage signal") -> str:
    """Normalized coverage of each signal against relative read position."""
    series = [(s.read_id, np.linspace(0.0, 1.0, s.length), s.values) for s in signals]
    return line_plot(series, title, "position (fraction of read)", "normalized coverage", _Frame(0.0, 1.0, 0.0, 1.0))


def pr_plot(curves: Sequence[tuple[str, PRCurve]], title: str = "Precision-recall") -> str:
    """
    Precision against recall, one line per curve, labeled with its AUC.

    Raises:
        ValueError: If no curve is given or a curve has no points
    """
    if not curves or any(len(curve) == 0 for _, curve in curves):
        raise ValueError("cannot plot an empty precision-recall curve")
    series = []
    for label, curve in curves:
        order = np.argsort(curve.recall, kind="stable")
        series.append((f"{label} (AUC {curve.auc:.3f})", curve.recall[order], curve.precision[order]))
    return line_plot(series, title, "recall", "precision", _Frame(0.0, 1.0, 0.0, 1.0))


def scatter_plot(embedding: Embedding, title: str = "Latent space (t-SNE)") -> str:
    """
    Embedded points colored by class: red chimeric, green left_repeat,
    blue right_repeat, yellow regular; unlabeled points are grey.

    The legend always lists all four classes.
    """
    if len(embedding.ids) == 0:
        raise ValueError("cannot plot an empty embedding")
    coords = embedding.coords
    frame = _Frame.around(coords[:, 0], coords[:, 1], pad=0.05)
    body = _axes(frame, "t-SNE 1", "t-SNE 2")
    body.append('<g class="points" stroke="#000000" stroke-width="0.4">')
    for read_id, (x, y) in zip(embedding.ids, coords.tolist(), strict=True):
        cls = embedding.labels.get(read_id)
        color = CLASS_COLORS[cls] if cls else UNLABELED_COLOR
        body.append(f'<circle cx="{_num(frame.px(x))}" cy="{_num(frame.py(y))}" r="3" fill="{color}"/>')
    body.append("</g>")
    body.extend(_legend([(cls.value, CLASS_COLORS[cls]) for cls in CLASSES]))
    return _document(title, body)
