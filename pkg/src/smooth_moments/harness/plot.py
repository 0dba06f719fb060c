"""Self-contained SVG (and gnuplot-script) figures drawn from persisted rows.

The figure is a log-log plot of the computed moment against ``x``, one
series per (rho, K or y); the trivial bound is drawn dashed when present.
"""

from __future__ import annotations

import math
from collections import OrderedDict
from pathlib import Path
from xml.sax.saxutils import escape

from .rows import ResultRow

_COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2"]
W, H = 760, 500
ML, MR, MT, MB = 80, 220, 30, 60


def collect_series(rows: list[ResultRow]) -> "OrderedDict[str, dict]":
    """Group moment and trivial-bound points by series label, in first-seen order."""
    series: OrderedDict[str, dict] = OrderedDict()
    seen = set()
    for r in rows:
        if r.kind not in ("bound", "moment") or r.moment is None or r.x is None:
            continue
        smooth = f"K={r.K}" if r.K is not None and "." not in r.K else f"y={r.y}"
        label = f"rho={r.rho}, {smooth}"
        d = series.setdefault(label, {"moment": [], "trivial": []})
        key = (label, r.x)
        if key not in seen:
            seen.add(key)
            d["moment"].append((r.x, float(r.moment)))
        if r.bound_id == "TRIVIAL" and r.bound_total is not None:
            d["trivial"].append((r.x, float(r.bound_total)))
    return series


def _ticks(lo: float, hi: float) -> list[int]:
    a, b = math.floor(lo), math.ceil(hi)
    step = max(1, (b - a) // 8)
    return list(range(a, b + 1, step))


def render_svg(rows: list[ResultRow], title: str = "moments vs x") -> str:
    series = collect_series(rows)
    pts = [
        (math.log10(x), math.log10(v))
        for d in series.values()
        for k in ("moment", "trivial")
        for x, v in d[k]
        if x > 0 and v > 0 and math.isfinite(v)
    ]
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" '
        f'viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">',
        f'<rect width="{W}" height="{H}" fill="white"/>',
        f'<text x="{ML}" y="20" font-size="14">{escape(title)}</text>',
    ]
    if not pts:
        out.append(f'<text x="{ML}" y="{H // 2}">no data</text></svg>')
        return "\n".join(out) + "\n"
    x0, x1 = min(p[0] for p in pts), max(p[0] for p in pts)
    y0, y1 = min(p[1] for p in pts), max(p[1] for p in pts)
    if x1 - x0 < 1e-9:
        x0, x1 = x0 - 0.5, x1 + 0.5
    if y1 - y0 < 1e-9:
        y0, y1 = y0 - 0.5, y1 + 0.5
    pw, ph = W - ML - MR, H - MT - MB

    def sx(v):
        return ML + (v - x0) / (x1 - x0) * pw

    def sy(v):
        return MT + ph - (v - y0) / (y1 - y0) * ph

    out.append(f'<rect x="{ML}" y="{MT}" width="{pw}" height="{ph}" fill="none" stroke="black"/>')
    for t in _ticks(x0, x1):
        if x0 <= t <= x1:
            out.append(f'<line x1="{sx(t):.2f}" y1="{MT + ph}" x2="{sx(t):.2f}" y2="{MT + ph + 5}" stroke="black"/>')
            out.append(f'<text x="{sx(t):.2f}" y="{MT + ph + 18}" text-anchor="middle">1e{t}</text>')
    for t in _ticks(y0, y1):
        if y0 <= t <= y1:
            out.append(f'<line x1="{ML - 5}" y1="{sy(t):.2f}" x2="{ML}" y2="{sy(t):.2f}" stroke="black"/>')
            out.append(f'<text x="{ML - 8}" y="{sy(t) + 4:.2f}" text-anchor="end">1e{t}</text>')
    out.append(f'<text x="{ML + pw / 2:.2f}" y="{H - 15}" text-anchor="middle">x</text>')
    out.append(
        f'<text x="18" y="{MT + ph / 2:.2f}" text-anchor="middle" '
        f'transform="rotate(-90 18 {MT + ph / 2:.2f})">I_rho</text>'
    )
    for i, (label, d) in enumerate(series.items()):
        color = _COLORS[i % len(_COLORS)]
        for kind, dash in (("moment", ""), ("trivial", ' stroke-dasharray="6 4"')):
            xy = [
                (sx(math.log10(x)), sy(math.log10(v)))
                for x, v in sorted(d[kind])
                if x > 0 and v > 0 and math.isfinite(v)
            ]
            if not xy:
                continue
            path = " ".join(f"{a:.2f},{b:.2f}" for a, b in xy)
            out.append(f'<polyline points="{path}" fill="none" stroke="{color}"{dash}/>')
            if kind == "moment":
                for a, b in xy:
                    out.append(f'<circle cx="{a:.2f}" cy="{b:.2f}" r="3" fill="{color}"/>')
        ly = MT + 14 + 18 * i
        out.append(f'<line x1="{W - MR + 15}" y1="{ly - 4}" x2="{W - MR + 40}" y2="{ly - 4}" stroke="{color}"/>')
        out.append(f'<text x="{W - MR + 45}" y="{ly}">{escape(label)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_svg(rows: list[ResultRow], path, title: str = "moments vs x") -> None:
    Path(path).write_text(render_svg(rows, title), encoding="utf-8")


def write_gnuplot(rows: list[ResultRow], script_path) -> Path:
    """Write ``<script>.dat`` plus a gnuplot script that renders the same figure."""
    script_path = Path(script_path)
    data_path = script_path.with_suffix(".dat")
    series = collect_series(rows)
    blocks, plots = [], []
    idx = 0
    for label, d in series.items():
        for kind in ("moment", "trivial"):
            if not d[kind]:
                continue
            lines = [f"# {label} {kind}"] + [f"{x} {v!r}" for x, v in sorted(d[kind])]
            blocks.append("\n".join(lines))
            style = "linespoints" if kind == "moment" else "lines dashtype 2"
            title = label if kind == "moment" else f"{label} trivial"
            plots.append(f"'{data_path.name}' index {idx} with {style} title '{title}'")
            idx += 1
    data_path.write_text("\n\n\n".join(blocks) + "\n", encoding="utf-8")
    script = [
        "set terminal svg size 760,500",
        f"set output '{script_path.with_suffix('.svg').name}'",
        "set logscale xy",
        "set xlabel 'x'",
        "set ylabel 'I_rho'",
        "plot " + ", \\\n     ".join(plots) if plots else "# no data",
    ]
    script_path.write_text("\n".join(script) + "\n", encoding="utf-8")
    return data_path
