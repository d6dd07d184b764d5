"""Deterministic SVG rendering of a scenario and planned trajectories.

Output bytes depend only on the inputs: fixed float formatting, fixed element
order, no timestamps.
"""
from __future__ import annotations

import numpy as np

from .planner import PlanResult
from .scenario import Scenario

_METHOD_COLORS = {
    "proposed": "#1f77b4",
    "optimal": "#2ca02c",
    "straight": "#d62728",
}
_CANVAS = 800.0
_MARGIN = 40.0


def _fmt(x: float) -> str:
    return f"{x:.3f}"


def render_svg(s: Scenario, results: list[PlanResult], d_bar: float) -> str:
    """SVG document with coverage disks, GBS/endpoint markers, trajectories
    color-coded by method, and handover points."""
    d_bar = float(d_bar)
    pts = [s.gbs - d_bar, s.gbs + d_bar, s.u0[None, :], s.uf[None, :]]
    for r in results:
        pts.append(r.trajectory.waypoints)
    allpts = np.vstack(pts)
    lo = allpts.min(axis=0)
    hi = allpts.max(axis=0)
    span = float(max(hi[0] - lo[0], hi[1] - lo[1], 1.0))
    scale = (_CANVAS - 2.0 * _MARGIN) / span

    def tx(p):
        x = _MARGIN + (float(p[0]) - lo[0]) * scale
        y = _CANVAS - _MARGIN - (float(p[1]) - lo[1]) * scale
        return x, y

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_CANVAS:.0f}" '
        f'height="{_CANVAS:.0f}" viewBox="0 0 {_CANVAS:.0f} {_CANVAS:.0f}">',
        f'<rect width="{_CANVAS:.0f}" height="{_CANVAS:.0f}" fill="#ffffff"/>',
        '<g id="coverage">',
    ]
    for i, g in enumerate(s.gbs):
        x, y = tx(g)
        out.append(
            f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="{_fmt(d_bar * scale)}" '
            'fill="#1f77b4" fill-opacity="0.08" stroke="#9ecae1" stroke-width="1"/>'
        )
    out.append("</g>")
    out.append('<g id="gbs">')
    for i, g in enumerate(s.gbs):
        x, y = tx(g)
        out.append(
            f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="4" fill="#333333"/>'
            f'<text x="{_fmt(x + 6)}" y="{_fmt(y - 6)}" font-size="12" '
            f'fill="#333333">G{i + 1}</text>'
        )
    out.append("</g>")
    out.append('<g id="trajectories">')
    for r in results:
        color = _METHOD_COLORS.get(r.method, "#888888")
        w = r.trajectory.waypoints
        path = " ".join(f"{_fmt(tx(p)[0])},{_fmt(tx(p)[1])}" for p in w)
        dash = ' stroke-dasharray="6,4"' if r.status == "infeasible" else ""
        out.append(
            f'<polyline points="{path}" fill="none" stroke="{color}" '
            f'stroke-width="2"{dash}/>'
        )
        if r.status == "feasible" and len(w) > 2:
            for p in w[1:-1]:
                x, y = tx(p)
                out.append(
                    f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="3" fill="none" '
                    f'stroke="{color}" stroke-width="1.5"/>'
                )
    out.append("</g>")
    for label, p in (("U0", s.u0), ("UF", s.uf)):
        x, y = tx(p)
        out.append(
            f'<rect x="{_fmt(x - 4)}" y="{_fmt(y - 4)}" width="8" height="8" fill="#000000"/>'
            f'<text x="{_fmt(x + 6)}" y="{_fmt(y + 12)}" font-size="12" '
            f'fill="#000000">{label}</text>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"
