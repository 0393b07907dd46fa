"""Self-contained SVG figures (inline styling, no external assets)."""

from __future__ import annotations

import math
from xml.sax.saxutils import escape

WIDTH, HEIGHT = 640, 420
LEFT, RIGHT, TOP, BOTTOM = 70, 20, 40, 50


class _Axes:
    def __init__(self, xs, ys):
        xs = [x for x in xs if math.isfinite(x)]
        ys = [y for y in ys if math.isfinite(y)]
        self.x0, self.x1 = _pad(min(xs), max(xs))
        self.y0, self.y1 = _pad(min(ys), max(ys))

    def px(self, x):
        return LEFT + (x - self.x0) / (self.x1 - self.x0) * (WIDTH - LEFT - RIGHT)

    def py(self, y):
        return HEIGHT - BOTTOM - (y - self.y0) / (self.y1 - self.y0) * (HEIGHT - TOP - BOTTOM)


def _pad(lo, hi):
    if hi == lo:
        return lo - 0.5, hi + 0.5
    span = hi - lo
    return lo - 0.05 * span, hi + 0.05 * span


def _doc(body: list[str], title: str) -> str:
    head = (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">'
    )
    parts = [
        head,
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" style="fill:#ffffff"/>',
        f'<text x="{WIDTH / 2}" y="22" style="font:14px sans-serif;text-anchor:middle">{escape(title)}</text>',
    ]
    parts.extend(body)
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _frame(ax: _Axes, xlabel: str, ylabel: str) -> list[str]:
    x_lo, x_hi = LEFT, WIDTH - RIGHT
    y_lo, y_hi = HEIGHT - BOTTOM, TOP
    out = [
        f'<line x1="{x_lo}" y1="{y_lo}" x2="{x_hi}" y2="{y_lo}" style="stroke:#000"/>',
        f'<line x1="{x_lo}" y1="{y_lo}" x2="{x_lo}" y2="{y_hi}" style="stroke:#000"/>',
    ]
    for i in range(5):
        fx = ax.x0 + (ax.x1 - ax.x0) * i / 4
        fy = ax.y0 + (ax.y1 - ax.y0) * i / 4
        out.append(
            f'<text x="{ax.px(fx):.1f}" y="{y_lo + 16}" style="font:10px sans-serif;text-anchor:middle">{fx:.3g}</text>'
        )
        out.append(
            f'<text x="{x_lo - 6}" y="{ax.py(fy) + 3:.1f}" style="font:10px sans-serif;text-anchor:end">{fy:.3g}</text>'
        )
    out.append(
        f'<text x="{(x_lo + x_hi) / 2}" y="{HEIGHT - 12}" style="font:12px sans-serif;text-anchor:middle">{escape(xlabel)}</text>'
    )
    out.append(
        f'<text x="16" y="{(y_lo + y_hi) / 2}" transform="rotate(-90 16 {(y_lo + y_hi) / 2})" '
        f'style="font:12px sans-serif;text-anchor:middle">{escape(ylabel)}</text>'
    )
    return out


def _points(ax, xs, ys, colour="#1f77b4"):
    return [
        f'<circle cx="{ax.px(x):.2f}" cy="{ax.py(y):.2f}" r="3" style="fill:{colour}"/>'
        for x, y in zip(xs, ys)
        if math.isfinite(x) and math.isfinite(y)
    ]


def _polyline(ax, xs, ys, colour="#d62728"):
    pts = " ".join(
        f"{ax.px(x):.2f},{ax.py(y):.2f}" for x, y in zip(xs, ys) if math.isfinite(x) and math.isfinite(y)
    )
    return f'<polyline points="{pts}" style="fill:none;stroke:{colour};stroke-width:1.5"/>'


def profile_svg(res: dict) -> str:
    """Envelope points and the fitted line in ``(ln xi, ln(-ln env))`` coordinates."""
    env = res["envelope_points"]
    xs = [math.log(x) for x, _ in env]
    ys = [math.log(-math.log(v)) for _, v in env]
    q, gam = res["q_hat"], res["gamma_hat"]
    ax = _Axes(xs, ys)
    fit_x = [min(xs), max(xs)]
    fit_y = [q * x + math.log(gam) for x in fit_x]
    body = _frame(ax, "ln xi", "ln(-ln |fhat| envelope)")
    body += _points(ax, xs, ys)
    body.append(_polyline(ax, fit_x, fit_y))
    body.append(
        f'<text id="q_hat" x="{LEFT + 10}" y="{TOP + 14}" style="font:12px monospace">q_hat = {q!r}</text>'
    )
    body.append(
        f'<text id="gamma_hat" x="{LEFT + 10}" y="{TOP + 30}" style="font:12px monospace">gamma_hat = {gam!r}</text>'
    )
    return _doc(body, f"Decay profile, n = {res['n']:g}")


def lattice_svg(res: dict) -> str:
    """Lattice positions ``ln|theta_k|`` on top, adjacent Fisher gaps as bars below."""
    pts = res["points"]
    gaps = res["gaps"]
    ks = [p["k"] for p in pts]
    logs = [math.log(-p["theta"]) for p in pts]
    half = (HEIGHT - TOP - BOTTOM) / 2
    ax = _Axes(ks, logs)
    body = _frame(ax, "k", "ln|theta_k| (dots), gap (bars)")
    body += _points(ax, ks, logs)
    gmax = max(g[2] for g in gaps) or 1.0
    for k, _, gap in gaps:
        h = gap / gmax * (half - 10)
        x = ax.px(k + 0.5)
        body.append(
            f'<rect class="gap" x="{x - 8:.2f}" y="{HEIGHT - BOTTOM - h:.2f}" width="16" height="{h:.2f}" '
            f'style="fill:#2ca02c;fill-opacity:0.6"><title>gap {k}-{k + 1}: {gap!r}</title></rect>'
        )
    return _doc(body, f"Embedded lattice, n = {res['n']:g}")


def sweep_svg(x, y, xlabel: str, ylabel: str, title: str) -> str:
    """Scatter-plus-line of a sweep; ``y`` is shown as log10 with a 1e-18 floor."""
    ly = [math.log10(max(abs(v), 1e-18)) for v in y]
    ax = _Axes(list(x), ly)
    body = _frame(ax, xlabel, f"log10 {ylabel}")
    body.append(_polyline(ax, x, ly, "#7f7f7f"))
    body += _points(ax, x, ly)
    return _doc(body, title)
