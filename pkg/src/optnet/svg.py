"""Deterministic SVG drawing of plane networks."""

from __future__ import annotations

from .plane import PlaneNetwork

SIZE = 1000
MARGIN = 0.05
RADIUS = 6


def _fmt(x: float) -> str:
    s = f"{x:.3f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def render_svg(network: PlaneNetwork, version: str = "") -> str:
    """1000x1000 drawing fitted with a 5% margin; terminals filled, Steiner points open."""
    pos = network.positions
    xs, ys = pos[:, 0], pos[:, 1]
    w = float(xs.max() - xs.min()) if len(pos) else 0.0
    h = float(ys.max() - ys.min()) if len(pos) else 0.0
    inner = SIZE * (1 - 2 * MARGIN)
    span = max(w, h)
    scale = inner / span if span > 0 else 1.0
    ox = SIZE * MARGIN + (inner - w * scale) / 2 - float(xs.min()) * scale
    oy = SIZE * MARGIN + (inner - h * scale) / 2 + float(ys.max()) * scale

    def tx(v):
        return _fmt(ox + pos[v, 0] * scale), _fmt(oy - pos[v, 1] * scale)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">',
        f"<!-- optnet {version} -->",
        '<g stroke="black" stroke-width="2" fill="none">',
    ]
    for u, v in network.topology.edges:
        (x1, y1), (x2, y2) = tx(u), tx(v)
        out.append(f'<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}"/>')
    out.append("</g>")
    bset = set(network.topology.boundary)
    for v in range(network.topology.n_vertices):
        x, y = tx(v)
        if v in bset:
            out.append(f'<circle cx="{x}" cy="{y}" r="{RADIUS}" fill="black"/>')
        else:
            out.append(f'<circle cx="{x}" cy="{y}" r="{RADIUS}" fill="white" stroke="black" stroke-width="2"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
