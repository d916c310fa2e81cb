"""Minimal deterministic SVG line charts (no plotting dependency).

Presentation only: nothing in the package reads these files back.
"""

import math

_PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"]

_MARGIN_L, _MARGIN_R, _MARGIN_T, _MARGIN_B = 64, 16, 36, 44


def _linear_ticks(lo, hi, target=6):
    if hi <= lo:
        hi = lo + 1.0
    raw = (hi - lo) / target
    mag = 10.0 ** math.floor(math.log10(raw))
    for mult in (1.0, 2.0, 5.0, 10.0):
        step = mult * mag
        if raw <= step:
            break
    first = math.ceil(lo / step) * step
    ticks = []
    v = first
    while v <= hi + 1e-9 * step:
        ticks.append(0.0 if abs(v) < 1e-12 * step else v)
        v += step
    return ticks


def _decade_ticks(lo, hi):
    ticks = []
    e = math.floor(math.log10(lo))
    while 10.0**e <= hi * (1 + 1e-12):
        if 10.0**e >= lo * (1 - 1e-12):
            ticks.append(10.0**e)
        e += 1
    return ticks or [lo, hi]


def _fmt(v):
    if v == 0.0:
        return "0"
    if abs(v) >= 1e4 or abs(v) < 1e-3:
        return f"{v:.0e}"
    return f"{v:g}"


def line_chart(series, *, title="", xlabel="", ylabel="", ylog=False,
               width=720, height=480):
    """SVG text for labelled (label, xs, ys) polylines.

    With ylog=True, nonpositive y values are dropped from the drawing and
    the y axis carries decade ticks.
    """
    plot_w = width - _MARGIN_L - _MARGIN_R
    plot_h = height - _MARGIN_T - _MARGIN_B
    pts = []
    for _, xs, ys in series:
        for x, y in zip(xs, ys):
            if not ylog or y > 0.0:
                pts.append((float(x), float(y)))
    if not pts:
        raise ValueError("nothing to draw")
    x_lo = min(p[0] for p in pts)
    x_hi = max(p[0] for p in pts)
    y_lo = min(p[1] for p in pts)
    y_hi = max(p[1] for p in pts)
    if x_hi == x_lo:
        x_hi = x_lo + 1.0
    if ylog:
        ly_lo, ly_hi = math.log10(y_lo), math.log10(y_hi)
        if ly_hi == ly_lo:
            ly_hi = ly_lo + 1.0

        def ypix(y):
            f = (math.log10(y) - ly_lo) / (ly_hi - ly_lo)
            return _MARGIN_T + plot_h * (1.0 - f)

        y_ticks = _decade_ticks(y_lo, y_hi)
    else:
        if y_hi == y_lo:
            y_hi = y_lo + 1.0

        def ypix(y):
            f = (y - y_lo) / (y_hi - y_lo)
            return _MARGIN_T + plot_h * (1.0 - f)

        y_ticks = _linear_ticks(y_lo, y_hi)

    def xpix(x):
        return _MARGIN_L + plot_w * (x - x_lo) / (x_hi - x_lo)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="{height}" viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width / 2:.1f}" y="20" text-anchor="middle" '
        f'font-family="sans-serif" font-size="14">{title}</text>',
    ]
    axis_y = _MARGIN_T + plot_h
    out.append(f'<line x1="{_MARGIN_L}" y1="{axis_y}" x2="{_MARGIN_L + plot_w}" '
               f'y2="{axis_y}" stroke="black"/>')
    out.append(f'<line x1="{_MARGIN_L}" y1="{_MARGIN_T}" x2="{_MARGIN_L}" '
               f'y2="{axis_y}" stroke="black"/>')
    for v in _linear_ticks(x_lo, x_hi):
        px = xpix(v)
        out.append(f'<line x1="{px:.2f}" y1="{axis_y}" x2="{px:.2f}" '
                   f'y2="{axis_y + 5}" stroke="black"/>')
        out.append(f'<text x="{px:.2f}" y="{axis_y + 18}" text-anchor="middle" '
                   f'font-family="sans-serif" font-size="11">{_fmt(v)}</text>')
    for v in y_ticks:
        py = ypix(v)
        out.append(f'<line x1="{_MARGIN_L - 5}" y1="{py:.2f}" x2="{_MARGIN_L}" '
                   f'y2="{py:.2f}" stroke="black"/>')
        out.append(f'<text x="{_MARGIN_L - 8}" y="{py + 4:.2f}" text-anchor="end" '
                   f'font-family="sans-serif" font-size="11">{_fmt(v)}</text>')
    out.append(f'<text x="{_MARGIN_L + plot_w / 2:.1f}" y="{height - 8}" '
               f'text-anchor="middle" font-family="sans-serif" '
               f'font-size="12">{xlabel}</text>')
    out.append(f'<text x="16" y="{_MARGIN_T + plot_h / 2:.1f}" '
               f'text-anchor="middle" font-family="sans-serif" font-size="12" '
               f'transform="rotate(-90 16 {_MARGIN_T + plot_h / 2:.1f})">'
               f'{ylabel}</text>')
    for i, (label, xs, ys) in enumerate(series):
        color = _PALETTE[i % len(_PALETTE)]
        coords = [(xpix(x), ypix(y)) for x, y in zip(xs, ys)
                  if not ylog or y > 0.0]
        path = " ".join(f"{x:.2f},{y:.2f}" for x, y in coords)
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" '
                   f'points="{path}"/>')
        ly = _MARGIN_T + 14 + 16 * i
        lx = _MARGIN_L + plot_w - 150
        out.append(f'<line x1="{lx}" y1="{ly - 4}" x2="{lx + 22}" y2="{ly - 4}" '
                   f'stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{lx + 28}" y="{ly}" font-family="sans-serif" '
                   f'font-size="11">{label}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
