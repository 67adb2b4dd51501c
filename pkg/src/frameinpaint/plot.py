"""Minimal SVG line plots of sweep results (no external renderer)."""
import math
from xml.sax.saxutils import escape

from .sweep import read_sweep_csv

W, H = 640, 420
LEFT, RIGHT, TOP, BOTTOM = 70, 170, 30, 50
COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"]


def _series(rows):
    out = {}
    for r in rows:
        out.setdefault((r["frame"], r["algorithm"]), []).append((r["j"], r["relative_error"]))
    return {k: sorted(v) for k, v in out.items()}


def _y_range(vals):
    pos = [v for v in vals if v > 0 and math.isfinite(v)]
    if not pos:
        return -1, 0
    lo, hi = math.floor(math.log2(min(pos))), math.ceil(math.log2(max(pos)))
    return lo, max(hi, lo + 1)


def render_svg(rows, title="relative error vs scale"):
    series = _series(rows)
    js = sorted({r["j"] for r in rows})
    jlo, jhi = (js[0], js[-1]) if js else (0, 1)
    if jhi == jlo:
        jlo, jhi = jlo - 1, jhi + 1
    ylo, yhi = _y_range([r["relative_error"] for r in rows])
    pw, ph = W - LEFT - RIGHT, H - TOP - BOTTOM
    floor = 2.0 ** ylo

    def sx(j):
        return LEFT + (j - jlo) / (jhi - jlo) * pw

    def sy(v):
        v = max(v, floor) if math.isfinite(v) else floor
        return TOP + (yhi - math.log2(v)) / (yhi - ylo) * ph

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{W}" height="{H}" '
           f'viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">',
           f'<rect x="0" y="0" width="{W}" height="{H}" fill="white"/>',
           f'<text x="{LEFT}" y="18">{escape(title)}</text>',
           f'<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>']
    for j in range(math.ceil(jlo), math.floor(jhi) + 1):
        x = sx(j)
        out.append(f'<line class="xtick" x1="{x:.2f}" y1="{TOP + ph}" x2="{x:.2f}" y2="{TOP + ph + 5}" stroke="black"/>')
        out.append(f'<text class="xlabel" x="{x:.2f}" y="{TOP + ph + 18}" text-anchor="middle">{j}</text>')
    for e in range(ylo, yhi + 1):
        y = sy(2.0 ** e)
        out.append(f'<line class="ytick" x1="{LEFT - 5}" y1="{y:.2f}" x2="{LEFT}" y2="{y:.2f}" stroke="black"/>')
        out.append(f'<text class="ylabel" x="{LEFT - 8}" y="{y + 4:.2f}" text-anchor="end" '
                   f'data-value="{2.0 ** e:g}">2^{e}</text>')
    out.append(f'<text x="{LEFT + pw / 2:.0f}" y="{H - 10}" text-anchor="middle">j (scale 2^j, log2 axis)</text>')
    out.append(f'<text x="16" y="{TOP + ph / 2:.0f}" transform="rotate(-90 16 {TOP + ph / 2:.0f})" '
               f'text-anchor="middle">relative error (log2 axis)</text>')
    for i, ((frame, alg), pts) in enumerate(sorted(series.items())):
        col = COLORS[i % len(COLORS)]
        coords = " ".join(f"{sx(j):.2f},{sy(v):.2f}" for j, v in pts)
        label = escape(f"{frame} / {alg}")
        out.append(f'<polyline class="series" data-label="{label}" points="{coords}" fill="none" '
                   f'stroke="{col}" stroke-width="2"/>')
        for j, v in pts:
            out.append(f'<circle cx="{sx(j):.2f}" cy="{sy(v):.2f}" r="3" fill="{col}"/>')
        ly = TOP + 10 + 18 * i
        out.append(f'<line x1="{W - RIGHT + 12}" y1="{ly}" x2="{W - RIGHT + 32}" y2="{ly}" '
                   f'stroke="{col}" stroke-width="2"/>')
        out.append(f'<text x="{W - RIGHT + 36}" y="{ly + 4}">{label}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def plot_sweep(csv_path, out_svg):
    rows = read_sweep_csv(csv_path)
    with open(out_svg, "w", encoding="utf-8") as fh:
        fh.write(render_svg(rows))
    return out_svg
