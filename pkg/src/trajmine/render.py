"""Batch SVG rendering of attacks with their significant windows.

One SVG per attack: the court outline (boundary, three-point line, paint,
hoop), each agent's trajectory drawn segment by segment with color running
light to dark over time, and the frames covered by significant windows
overdrawn with plus-sign glyphs. Output bytes are deterministic for equal
inputs: floats are written with fixed precision and elements in fixed order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from xml.sax.saxutils import escape

from trajmine.labeling import CourtGeometry, corner_break_m
from trajmine.mining import Discovery
from trajmine.model import SubMatrixRef, TrajectoryMatrix

# (light, dark) stroke pairs; order matches the basketball role order and
# cycles for other agent counts
DEFAULT_PALETTE: tuple[tuple[str, str], ...] = (
    ("#ffd9a0", "#8a4b00"),  # ball
    ("#9ecbff", "#003f8a"),  # shooter
    ("#ffb3b3", "#8a0000"),  # shooter defender
    ("#b9f0b9", "#0a5c0a"),  # last passer
    ("#e0c0ff", "#4b0082"),  # last passer defender
)


@dataclass(frozen=True)
class RenderSpec:
    """Rendering parameters; the default scale (8 px per court unit) is a
    power of two so corner coordinates survive the px round-trip exactly."""

    geometry: CourtGeometry = field(default_factory=CourtGeometry)
    scale: float = 8.0  # px per coordinate unit
    margin: float = 20.0  # px
    stroke_width: float = 1.2
    court_stroke: str = "#555555"
    glyph_size: float = 5.0  # px, half-extent of the plus sign
    palette: tuple[tuple[str, str], ...] = DEFAULT_PALETTE


class CourtTransform:
    """Single affine map from court coordinates to the SVG viewport."""

    def __init__(self, spec: RenderSpec):
        self.scale = spec.scale
        self.margin = spec.margin
        self.court_length = spec.geometry.court_length
        self.court_width = spec.geometry.court_width
        self.width = spec.geometry.court_length * spec.scale + 2 * spec.margin
        self.height = spec.geometry.court_width * spec.scale + 2 * spec.margin

    def to_px(self, x: float, y: float) -> tuple[float, float]:
        return (
            self.margin + x * self.scale,
            self.margin + (self.court_width - y) * self.scale,
        )

    def from_px(self, px: float, py: float) -> tuple[float, float]:
        return (
            (px - self.margin) / self.scale,
            self.court_width - (py - self.margin) / self.scale,
        )


def _f(value: float) -> str:
    return f"{value:.2f}"


def _hex_to_rgb(color: str) -> tuple[int, int, int]:
    return int(color[1:3], 16), int(color[3:5], 16), int(color[5:7], 16)


def _blend(light: str, dark: str, t: float) -> str:
    lr, lg, lb = _hex_to_rgb(light)
    dr, dg, db = _hex_to_rgb(dark)
    r = round(lr + (dr - lr) * t)
    g = round(lg + (dg - lg) * t)
    b = round(lb + (db - lb) * t)
    return f"#{r:02x}{g:02x}{b:02x}"


def _court_elements(spec: RenderSpec, tf: CourtTransform) -> list[str]:
    geom = spec.geometry
    units = 1.0 / geom.unit_scale  # court units per meter
    hoop = geom.hoop_center
    parts = []
    x0, y0 = tf.to_px(0.0, geom.court_width)
    parts.append(
        f'<rect x="{_f(x0)}" y="{_f(y0)}" width="{_f(geom.court_length * tf.scale)}" '
        f'height="{_f(geom.court_width * tf.scale)}" fill="none" '
        f'stroke="{spec.court_stroke}" stroke-width="{_f(spec.stroke_width)}"/>'
    )
    # paint box: 16 ft x 19 ft NBA key, anchored to the baseline
    paint_w = 16.0 * 0.3048 * units
    paint_l = 19.0 * 0.3048 * units
    px, py = tf.to_px(0.0, hoop.y + paint_w / 2)
    parts.append(
        f'<rect x="{_f(px)}" y="{_f(py)}" width="{_f(paint_l * tf.scale)}" '
        f'height="{_f(paint_w * tf.scale)}" fill="none" '
        f'stroke="{spec.court_stroke}" stroke-width="{_f(spec.stroke_width)}"/>'
    )
    hx, hy = tf.to_px(hoop.x, hoop.y)
    hoop_r = 0.2286 * units * tf.scale  # 9-inch rim
    parts.append(
        f'<circle cx="{_f(hx)}" cy="{_f(hy)}" r="{_f(hoop_r)}" fill="none" '
        f'stroke="{spec.court_stroke}" stroke-width="{_f(spec.stroke_width)}"/>'
    )
    # three-point line: straight corner segments plus the arc between them
    corner_u = geom.three_point_corner_distance * units
    arc_u = geom.three_point_arc_radius * units
    break_u = corner_break_m(geom) * units
    lo_y, hi_y = hoop.y - corner_u, hoop.y + corner_u
    b1 = tf.to_px(0.0, lo_y)
    b2 = tf.to_px(hoop.x + break_u, lo_y)
    t1 = tf.to_px(0.0, hi_y)
    t2 = tf.to_px(hoop.x + break_u, hi_y)
    r_px = arc_u * tf.scale
    parts.append(
        f'<path d="M {_f(b1[0])} {_f(b1[1])} L {_f(b2[0])} {_f(b2[1])} '
        f'A {_f(r_px)} {_f(r_px)} 0 0 0 {_f(t2[0])} {_f(t2[1])} '
        f'L {_f(t1[0])} {_f(t1[1])}" fill="none" '
        f'stroke="{spec.court_stroke}" stroke-width="{_f(spec.stroke_width)}"/>'
    )
    return parts


def _marked_frames(matrix: TrajectoryMatrix, discoveries) -> set[int]:
    marked: set[int] = set()
    for d in discoveries:
        if isinstance(d, Discovery):
            matrix_id, start, end = d.matrix_id, d.start, d.end
        elif isinstance(d, SubMatrixRef):
            matrix_id, start, end = d.matrix_id, d.start, d.end
        else:
            matrix_id, start, end = matrix.attack_id, int(d[0]), int(d[1])
        if matrix_id != matrix.attack_id:
            raise ValueError(
                f"window for {matrix_id!r} passed while rendering {matrix.attack_id!r}"
            )
        if not 0 <= start <= end < matrix.n_frames:
            raise ValueError(
                f"window [{start}, {end}] out of range for attack "
                f"{matrix.attack_id!r} of length {matrix.n_frames}"
            )
        marked.update(range(start, end + 1))
    return marked


def render_attack_svg(matrix: TrajectoryMatrix, discoveries=(), spec: RenderSpec | None = None) -> str:
    """Render one attack (plus any of its significant windows) to SVG text."""
    spec = spec or RenderSpec()
    tf = CourtTransform(spec)
    marked = _marked_frames(matrix, discoveries)

    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{_f(tf.width)}" height="{_f(tf.height)}" '
        f'viewBox="0 0 {_f(tf.width)} {_f(tf.height)}">',
        f"<title>attack {escape(matrix.attack_id)} "
        f"({'effective' if matrix.label == 1 else 'ineffective'})</title>",
        '<g id="court">',
        *_court_elements(spec, tf),
        "</g>",
    ]

    m = matrix.n_frames
    for agent in range(matrix.n_agents):
        light, dark = spec.palette[agent % len(spec.palette)]
        lines.append(f'<g id="agent{agent}">')
        if m == 1:
            cx, cy = tf.to_px(*matrix.coords[0, agent])
            lines.append(
                f'<circle cx="{_f(cx)}" cy="{_f(cy)}" r="{_f(spec.stroke_width)}" '
                f'fill="{dark}"/>'
            )
        for t in range(m - 1):
            x1, y1 = tf.to_px(*matrix.coords[t, agent])
            x2, y2 = tf.to_px(*matrix.coords[t + 1, agent])
            color = _blend(light, dark, t / max(m - 2, 1))
            lines.append(
                f'<line x1="{_f(x1)}" y1="{_f(y1)}" x2="{_f(x2)}" y2="{_f(y2)}" '
                f'stroke="{color}" stroke-width="{_f(spec.stroke_width)}"/>'
            )
        lines.append("</g>")

    if marked:
        lines.append('<g id="ssd">')
        r = spec.glyph_size
        for t in sorted(marked):
            for agent in range(matrix.n_agents):
                _, dark = spec.palette[agent % len(spec.palette)]
                cx, cy = tf.to_px(*matrix.coords[t, agent])
                lines.append(
                    f'<path d="M {_f(cx - r)} {_f(cy)} L {_f(cx + r)} {_f(cy)} '
                    f'M {_f(cx)} {_f(cy - r)} L {_f(cx)} {_f(cy + r)}" '
                    f'stroke="{dark}" stroke-width="{_f(spec.stroke_width)}" fill="none"/>'
                )
        lines.append("</g>")

    label = "effective" if matrix.label == 1 else "ineffective"
    lines.append(
        f'<text x="{_f(spec.margin)}" y="{_f(spec.margin - 6.0)}" '
        f'font-family="sans-serif" font-size="12">'
        f"{escape(matrix.attack_id)} ({label})</text>"
    )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
