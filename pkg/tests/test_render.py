import xml.etree.ElementTree as ET

import numpy as np
import pytest

from trajmine.mining import Discovery
from trajmine.render import CourtTransform, RenderSpec, render_attack_svg

from conftest import build_matrix

ALLOWED_TAGS = {"svg", "g", "rect", "circle", "line", "path", "text", "title"}
SVG_NS = "{http://www.w3.org/2000/svg}"


def _matrix(rng, frames=12, agents=5, label=1, attack_id="a1"):
    coords = np.stack(
        [
            np.stack(
                [rng.uniform(2, 90, size=agents), rng.uniform(2, 48, size=agents)],
                axis=1,
            )
            for _ in range(frames)
        ]
    )
    return build_matrix(attack_id, label, coords)


def test_transform_corner_roundtrip_exact():
    spec = RenderSpec()
    tf = CourtTransform(spec)
    geom = spec.geometry
    corners = [
        (0.0, 0.0),
        (geom.court_length, 0.0),
        (0.0, geom.court_width),
        (geom.court_length, geom.court_width),
    ]
    for x, y in corners:
        px, py = tf.to_px(x, y)
        assert tf.from_px(px, py) == (x, y)


def test_svg_well_formed_and_known_elements(rng):
    m = _matrix(rng)
    svg = render_attack_svg(m, [Discovery("a1", 3, 7, 0.01, 3, 4, 5)])
    root = ET.fromstring(svg)
    assert root.tag == f"{SVG_NS}svg"
    for el in root.iter():
        assert el.tag.startswith(SVG_NS)
        assert el.tag.removeprefix(SVG_NS) in ALLOWED_TAGS


def test_no_discoveries_no_glyphs(rng):
    m = _matrix(rng)
    svg = render_attack_svg(m)
    assert 'id="ssd"' not in svg
    assert 'id="agent0"' in svg and 'id="agent4"' in svg
    assert 'id="court"' in svg


def test_full_span_discovery_marks_every_frame(rng):
    m = _matrix(rng, frames=10)
    svg = render_attack_svg(m, [(0, 9)])
    root = ET.fromstring(svg)
    ssd = [g for g in root.iter(f"{SVG_NS}g") if g.get("id") == "ssd"]
    assert len(ssd) == 1
    # one plus-glyph path per frame per agent
    assert len(ssd[0].findall(f"{SVG_NS}path")) == 10 * m.n_agents


def test_deterministic_bytes(rng):
    m = _matrix(rng)
    windows = [Discovery("a1", 2, 5, 0.02, 2, 3, 4)]
    assert render_attack_svg(m, windows) == render_attack_svg(m, windows)


def test_window_out_of_range_rejected(rng):
    m = _matrix(rng, frames=8)
    with pytest.raises(ValueError, match="out of range"):
        render_attack_svg(m, [(5, 9)])
    with pytest.raises(ValueError, match="while rendering"):
        render_attack_svg(m, [Discovery("other", 0, 1, 0.1, 1, 1, 1)])


def test_label_shown_in_title(rng):
    eff = render_attack_svg(_matrix(rng, label=1))
    ineff = render_attack_svg(_matrix(rng, label=-1))
    assert "(effective)" in eff and "(ineffective)" in ineff


def test_single_frame_matrix_renders(rng):
    m = _matrix(rng, frames=1)
    svg = render_attack_svg(m, [(0, 0)])
    root = ET.fromstring(svg)
    assert root is not None


def test_generic_agent_count_palette_cycles(rng):
    m = _matrix(rng, agents=7)
    svg = render_attack_svg(m)
    assert 'id="agent6"' in svg
