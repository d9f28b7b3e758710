"""Deterministic SVG rendering of a staircase on log-log axes."""
from __future__ import annotations

import mpmath

from .errors import ParamError

WIDTH, HEIGHT, PAD = 640, 420, 50


def _fmt(v: float) -> str:
    return f"{v:.3f}"


def staircase_svg(stair, estimate=None) -> str:
    """SVG text: one horizontal segment per breakpoint, risers between steps,
    and dashed lines t^-alpha_hat, t^-beta_hat when an estimate is given."""
    if not stair.breakpoints:
        raise ParamError("nothing to plot")
    if any(t <= 0 or v <= 0 for t, v in stair.breakpoints):
        raise ParamError("log axes need positive heights and minima")
    # work with log10 values so tiny minima never underflow a float
    bps = [(float(mpmath.log10(t)), float(mpmath.log10(v))) for t, v in stair.breakpoints]
    ts = [t for t, _ in bps]
    step = 0.3 if len(ts) == 1 else max(0.18, (ts[-1] - ts[-2]) / 2)
    t_end = ts[-1] + step
    lx0, lx1 = ts[0], t_end
    vals = [v for _, v in bps]
    ly0, ly1 = min(vals), max(vals)
    if lx1 - lx0 < 1e-9:
        lx1 = lx0 + 1
    if ly1 - ly0 < 1e-9:
        ly0, ly1 = ly0 - 0.5, ly1 + 0.5

    def X(lt):
        return PAD + (lt - lx0) / (lx1 - lx0) * (WIDTH - 2 * PAD)

    def Y(lv):
        lv = min(max(lv, ly0 - 1e3), ly1 + 1e3)
        return HEIGHT - PAD - (lv - ly0) / (ly1 - ly0) * (HEIGHT - 2 * PAD)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<clipPath id="area"><rect x="{PAD}" y="{PAD}" width="{WIDTH - 2 * PAD}" '
        f'height="{HEIGHT - 2 * PAD}"/></clipPath>',
        f'<line class="axis" x1="{PAD}" y1="{HEIGHT - PAD}" x2="{WIDTH - PAD}" '
        f'y2="{HEIGHT - PAD}" stroke="black"/>',
        f'<line class="axis" x1="{PAD}" y1="{PAD}" x2="{PAD}" y2="{HEIGHT - PAD}" stroke="black"/>',
        f'<text x="{WIDTH / 2:.0f}" y="{HEIGHT - 12}" text-anchor="middle" font-size="12">'
        f'log10 t  [{_fmt(lx0)}, {_fmt(lx1)}]</text>',
        f'<text x="14" y="{HEIGHT / 2:.0f}" font-size="12" transform="rotate(-90 14 {HEIGHT / 2:.0f})" '
        f'text-anchor="middle">log10 psi  [{_fmt(ly0)}, {_fmt(ly1)}]</text>',
        '<g clip-path="url(#area)">',
    ]
    for i, (t, v) in enumerate(bps):
        right = bps[i + 1][0] if i + 1 < len(bps) else t_end
        out.append(f'<line class="step" x1="{_fmt(X(t))}" y1="{_fmt(Y(v))}" '
                   f'x2="{_fmt(X(right))}" y2="{_fmt(Y(v))}" stroke="black" stroke-width="2"/>')
        if i + 1 < len(bps):
            out.append(f'<line class="riser" x1="{_fmt(X(right))}" y1="{_fmt(Y(v))}" '
                       f'x2="{_fmt(X(right))}" y2="{_fmt(Y(bps[i + 1][1]))}" stroke="gray"/>')
    if estimate is not None:
        for name, expo, colour in (("alpha", estimate.alpha_hat, "blue"),
                                   ("beta", estimate.beta_hat, "red")):
            e = float(expo)
            a, b = ts[0], t_end
            out.append(f'<line class="envelope-{name}" x1="{_fmt(X(a))}" y1="{_fmt(Y(-e * a))}" '
                       f'x2="{_fmt(X(b))}" y2="{_fmt(Y(-e * b))}" stroke="{colour}" '
                       f'stroke-dasharray="6 4"/>')
    out.append("</g>")
    if estimate is not None:
        out.append(f'<text x="{WIDTH - PAD}" y="{PAD - 20}" text-anchor="end" font-size="12">'
                   f'alpha_hat={float(estimate.alpha_hat):.4f} beta_hat={float(estimate.beta_hat):.4f}'
                   f'</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def plot_staircase(stair, estimate, out) -> None:
    text = staircase_svg(stair, estimate)
    with open(out, "w", encoding="utf-8") as fh:
        fh.write(text)
