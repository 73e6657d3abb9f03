"""Self-contained SVG line charts, no plotting dependency.

One <polyline> per series with at least two points; a series with a single
point degenerates to a marker circle. Axes, ticks, and the threshold rule
are plain <line> elements so the series polylines are the only polylines in
the document. Nothing external is referenced.
"""

from __future__ import annotations

from typing import Sequence

WIDTH = 880
HEIGHT = 560
MARGIN_LEFT = 70
MARGIN_RIGHT = 40
MARGIN_TOP = 40
MARGIN_BOTTOM = 60

SERIES_COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e"]


def _escape(text: str) -> str:
    return (
        text.replace("&", "&amp;")
        .replace("<", "&lt;")
        .replace(">", "&gt;")
        .replace('"', "&quot;")
    )


def render_loss_chart(
    series: Sequence[tuple[str, Sequence[float]]],
    threshold: float | None = None,
    title: str = "",
) -> str:
    """Return SVG text plotting loss-vs-epoch curves.

    `series` is (label, values) pairs; values[i] is the loss after epoch i+1.
    An optional threshold is drawn as a dashed horizontal rule.
    """
    series = [(label, list(values)) for label, values in series]
    if not series or any(len(values) == 0 for _, values in series):
        raise ValueError("every series needs at least one point")

    plot_left = MARGIN_LEFT
    plot_right = WIDTH - MARGIN_RIGHT
    plot_top = MARGIN_TOP
    plot_bottom = HEIGHT - MARGIN_BOTTOM

    max_epoch = max(len(values) for _, values in series)
    y_values = [v for _, values in series for v in values]
    if threshold is not None:
        y_values.append(threshold)
    y_min, y_max = min(y_values), max(y_values)
    if y_max == y_min:
        y_max = y_min + 1.0
    pad = 0.05 * (y_max - y_min)
    y_min, y_max = y_min - pad, y_max + pad

    def x_px(epoch: int) -> float:
        if max_epoch == 1:
            return (plot_left + plot_right) / 2
        return plot_left + (epoch - 1) * (plot_right - plot_left) / (max_epoch - 1)

    def y_px(v: float) -> float:
        return plot_bottom - (v - y_min) * (plot_bottom - plot_top) / (y_max - y_min)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        '<rect x="0" y="0" width="100%" height="100%" fill="#ffffff"/>',
    ]
    if title:
        parts.append(
            f'<text x="{WIDTH / 2:.1f}" y="24" text-anchor="middle" font-size="16" '
            f'font-family="sans-serif">{_escape(title)}</text>'
        )

    # Axes.
    parts.append(
        f'<line x1="{plot_left}" y1="{plot_bottom}" x2="{plot_right}" y2="{plot_bottom}" '
        'stroke="#000000" stroke-width="1.5"/>'
    )
    parts.append(
        f'<line x1="{plot_left}" y1="{plot_top}" x2="{plot_left}" y2="{plot_bottom}" '
        'stroke="#000000" stroke-width="1.5"/>'
    )

    # A few y ticks with labels.
    for i in range(5):
        v = y_min + (y_max - y_min) * i / 4
        y = y_px(v)
        parts.append(
            f'<line x1="{plot_left - 4}" y1="{y:.2f}" x2="{plot_left}" y2="{y:.2f}" '
            'stroke="#000000" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{plot_left - 8}" y="{y + 4:.2f}" text-anchor="end" font-size="11" '
            f'font-family="sans-serif">{v:.4g}</text>'
        )
    for epoch in sorted({1, max(1, max_epoch // 2), max_epoch}):
        x = x_px(epoch)
        parts.append(
            f'<line x1="{x:.2f}" y1="{plot_bottom}" x2="{x:.2f}" y2="{plot_bottom + 4}" '
            'stroke="#000000" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{x:.2f}" y="{plot_bottom + 18}" text-anchor="middle" font-size="11" '
            f'font-family="sans-serif">{epoch}</text>'
        )

    # Axis titles.
    parts.append(
        f'<text x="{(plot_left + plot_right) / 2:.1f}" y="{HEIGHT - 16}" text-anchor="middle" '
        'font-size="13" font-family="sans-serif">epoch</text>'
    )
    mid_y = (plot_top + plot_bottom) / 2
    parts.append(
        f'<text x="20" y="{mid_y:.1f}" text-anchor="middle" font-size="13" '
        f'font-family="sans-serif" transform="rotate(-90 20 {mid_y:.1f})">loss</text>'
    )

    if threshold is not None:
        ty = y_px(threshold)
        parts.append(
            f'<line x1="{plot_left}" y1="{ty:.2f}" x2="{plot_right}" y2="{ty:.2f}" '
            'stroke="#777777" stroke-width="1" stroke-dasharray="6 4"/>'
        )
        parts.append(
            f'<text x="{plot_right - 4}" y="{ty - 5:.2f}" text-anchor="end" font-size="11" '
            f'font-family="sans-serif" fill="#555555">threshold {threshold:.4g}</text>'
        )

    legend_y = plot_top + 8
    for idx, (label, values) in enumerate(series):
        color = SERIES_COLORS[idx % len(SERIES_COLORS)]
        if len(values) >= 2:
            points = " ".join(
                f"{x_px(e + 1):.2f},{y_px(v):.2f}" for e, v in enumerate(values)
            )
            parts.append(
                f'<polyline fill="none" stroke="{color}" stroke-width="2" points="{points}"/>'
            )
        else:
            parts.append(
                f'<circle cx="{x_px(1):.2f}" cy="{y_px(values[0]):.2f}" r="4" fill="{color}"/>'
            )
        parts.append(
            f'<rect x="{plot_right - 150}" y="{legend_y}" width="18" height="4" fill="{color}"/>'
        )
        parts.append(
            f'<text x="{plot_right - 126}" y="{legend_y + 6}" font-size="12" '
            f'font-family="sans-serif">{_escape(label)}</text>'
        )
        legend_y += 18

    parts.append("</svg>")
    return "\n".join(parts)
