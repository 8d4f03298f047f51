"""Self-contained SVG heatmap for a scalar field on a rectangular grid.

Colors come from a piecewise-linear ramp through five anchors of the
viridis map (dark purple at the low end, yellow at the high end). Relative luminance rises
monotonically from anchor to anchor (about 21, 81, 120, 170, 222 on a
0-255 scale), so the ordering of values survives grayscale printing.
"""

from __future__ import annotations

from html import escape

import numpy as np

__all__ = ["RAMP", "heatmap_svg", "ramp_color"]

RAMP = (
    (0.00, (68, 1, 84)),
    (0.25, (59, 82, 139)),
    (0.50, (33, 145, 140)),
    (0.75, (94, 201, 98)),
    (1.00, (253, 231, 37)),
)


def ramp_color(t: float) -> str:
    """Hex color for ``t`` in ``[0, 1]`` (clipped)."""
    t = min(1.0, max(0.0, float(t)))
    for (t0, c0), (t1, c1) in zip(RAMP, RAMP[1:]):
        if t <= t1:
            w = (t - t0) / (t1 - t0)
            rgb = [round(a + w * (b - a)) for a, b in zip(c0, c1)]
            return "#{:02x}{:02x}{:02x}".format(*rgb)
    return "#{:02x}{:02x}{:02x}".format(*RAMP[-1][1])


def _fmt(v: float) -> str:
    return f"{v:.4g}"


def heatmap_svg(
    values,
    x,
    y,
    *,
    xlabel: str,
    ylabel: str,
    title: str,
    vmin: float | None = None,
    vmax: float | None = None,
    cell: float | None = None,
) -> str:
    """Render ``values[i, j]`` at ``(x[j], y[i])``; ``y`` grows upward."""
    z = np.asarray(values, dtype=float)
    ny, nx = z.shape
    if len(x) != nx or len(y) != ny:
        raise ValueError(f"grid {z.shape} does not match axes ({len(y)}, {len(x)})")
    lo = float(np.nanmin(z)) if vmin is None else vmin
    hi = float(np.nanmax(z)) if vmax is None else vmax
    span = hi - lo if hi > lo else 1.0

    size = 480.0
    cw = cell or size / nx
    ch = cell or size / ny
    w, h = cw * nx, ch * ny
    left, top, bar = 70.0, 40.0, 20.0
    width, height = left + w + 100.0, top + h + 60.0

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0f}" height="{height:.0f}" '
        f'viewBox="0 0 {width:.0f} {height:.0f}" font-family="sans-serif" font-size="12">',
        f'<text x="{left + w / 2:.1f}" y="22" text-anchor="middle" font-size="14">{escape(title)}</text>',
        '<g shape-rendering="crispEdges">',
    ]
    for i in range(ny):
        py = top + h - (i + 1) * ch
        for j in range(nx):
            color = ramp_color((z[i, j] - lo) / span)
            out.append(
                f'<rect x="{left + j * cw:.3f}" y="{py:.3f}" width="{cw + 0.05:.3f}" '
                f'height="{ch + 0.05:.3f}" fill="{color}"/>'
            )
    out.append("</g>")

    # axes
    out.append(f'<rect x="{left}" y="{top}" width="{w:.3f}" height="{h:.3f}" fill="none" stroke="black"/>')
    for frac in (0.0, 0.5, 1.0):
        xv = x[0] + frac * (x[-1] - x[0])
        yv = y[0] + frac * (y[-1] - y[0])
        out.append(
            f'<text x="{left + frac * w:.1f}" y="{top + h + 16:.1f}" text-anchor="middle">{_fmt(xv)}</text>'
        )
        out.append(
            f'<text x="{left - 6:.1f}" y="{top + h - frac * h + 4:.1f}" text-anchor="end">{_fmt(yv)}</text>'
        )
    out.append(
        f'<text x="{left + w / 2:.1f}" y="{top + h + 40:.1f}" text-anchor="middle">{escape(xlabel)}</text>'
    )
    out.append(
        f'<text x="20" y="{top + h / 2:.1f}" text-anchor="middle" '
        f'transform="rotate(-90 20 {top + h / 2:.1f})">{escape(ylabel)}</text>'
    )

    # colorbar
    bx = left + w + 25.0
    steps = 64
    for k in range(steps):
        out.append(
            f'<rect x="{bx:.1f}" y="{top + h - (k + 1) * h / steps:.3f}" width="{bar}" '
            f'height="{h / steps + 0.05:.3f}" fill="{ramp_color(k / (steps - 1))}"/>'
        )
    out.append(f'<rect x="{bx:.1f}" y="{top}" width="{bar}" height="{h:.3f}" fill="none" stroke="black"/>')
    for frac in (0.0, 0.5, 1.0):
        out.append(
            f'<text x="{bx + bar + 5:.1f}" y="{top + h - frac * h + 4:.1f}">{_fmt(lo + frac * span)}</text>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"
