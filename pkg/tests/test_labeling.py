import math

import pytest

from trajmine.labeling import (
    METERS_PER_FOOT,
    CourtGeometry,
    DefenderDistanceCategory,
    PlayerShotStats,
    Position,
    ShotEvent,
    ShotZone,
    adjusted_three_point_prob,
    classify_zone,
    corner_break_m,
    defender_category,
    explain_label,
    hoop_distance_m,
    label_attack,
    three_point_prob,
)
from trajmine.model import Point2D

GEOM = CourtGeometry()


def _point_at_hoop_distance(meters, lateral_m=0.0):
    """Court point at the given distance in front of the hoop (toward half court)."""
    dx_units = math.sqrt(max(meters**2 - lateral_m**2, 0.0)) / GEOM.unit_scale
    dy_units = lateral_m / GEOM.unit_scale
    return Point2D(GEOM.hoop_center.x + dx_units, GEOM.hoop_center.y + dy_units)


STATS = {
    "veteran": PlayerShotStats("veteran", Position.GUARD, 200, 0.41),
    "rookie": PlayerShotStats("rookie", Position.GUARD, 4, 0.9),
    "sniper": PlayerShotStats("sniper", Position.FORWARD, 120, 0.40),
    "brick": PlayerShotStats("brick", Position.CENTER, 80, 0.25),
}
DEFAULTS = {Position.GUARD: 0.36, Position.FORWARD: 0.35, Position.CENTER: 0.30}


def test_geometry_invariants():
    assert GEOM.restricted_radius < GEOM.paint_radius
    assert GEOM.paint_radius < GEOM.three_point_arc_radius
    assert GEOM.three_point_arc_radius < GEOM.half_court_distance
    with pytest.raises(ValueError):
        CourtGeometry(restricted_radius=6.0)  # breaks the ordering


def test_classify_zone_examples():
    assert classify_zone(_point_at_hoop_distance(1.0), GEOM) is ShotZone.RESTRICTED
    assert classify_zone(_point_at_hoop_distance(5.0), GEOM) is ShotZone.IN_THE_PAINT
    assert classify_zone(_point_at_hoop_distance(8.0), GEOM) is ShotZone.THREE_POINT
    # between paint radius and the arc
    assert classify_zone(_point_at_hoop_distance(6.5), GEOM) is ShotZone.MID_RANGE


def test_classify_zone_corner_three():
    # deep corner: lateral offset beyond the 22 ft line, radially inside the arc
    corner = Point2D(GEOM.hoop_center.x - 2.0, 1.0)
    assert classify_zone(corner, GEOM) is ShotZone.THREE_POINT
    inside_corner = Point2D(GEOM.hoop_center.x - 2.0, 4.0)
    assert classify_zone(inside_corner, GEOM) is ShotZone.MID_RANGE


def test_classify_zone_out_of_bounds():
    with pytest.raises(ValueError):
        classify_zone(Point2D(-1.0, 25.0), GEOM)
    with pytest.raises(ValueError):
        classify_zone(Point2D(5.0, 51.0), GEOM)


def test_zone_partition_fuzz(rng):
    # zones are exhaustive and mutually exclusive over the court
    for _ in range(1000):
        p = Point2D(
            float(rng.uniform(0, GEOM.court_length)),
            float(rng.uniform(0, GEOM.court_width)),
        )
        assert classify_zone(p, GEOM) in set(ShotZone)


def test_defender_category_boundaries():
    assert defender_category(0.0) is DefenderDistanceCategory.VERY_TIGHT
    assert defender_category(1.99) is DefenderDistanceCategory.VERY_TIGHT
    assert defender_category(2.0) is DefenderDistanceCategory.TIGHT
    assert defender_category(3.99) is DefenderDistanceCategory.TIGHT
    assert defender_category(4.0) is DefenderDistanceCategory.OPEN
    assert defender_category(6.0) is DefenderDistanceCategory.WIDE_OPEN
    assert defender_category(50.0) is DefenderDistanceCategory.WIDE_OPEN
    with pytest.raises(ValueError):
        defender_category(-0.1)


def test_three_point_prob_rules():
    assert three_point_prob("veteran", STATS, DEFAULTS) == 0.41
    # fewer than 10 attempts: position average, not the noisy own value
    assert three_point_prob("rookie", STATS, DEFAULTS) == 0.36
    assert three_point_prob("unknown", STATS, DEFAULTS, position=Position.CENTER) == 0.30
    with pytest.raises(KeyError):
        three_point_prob("unknown", STATS, DEFAULTS)
    with pytest.raises(KeyError):
        three_point_prob("rookie", STATS, {})


def test_adjusted_prob_anchors():
    arc = GEOM.three_point_arc_radius
    half = GEOM.half_court_distance
    assert adjusted_three_point_prob(0.40, arc, GEOM) == pytest.approx(0.40, abs=1e-15)
    assert adjusted_three_point_prob(0.40, half, GEOM) == pytest.approx(0.20, abs=1e-15)
    midway = (arc + half) / 2.0
    assert adjusted_three_point_prob(0.40, midway, GEOM) == pytest.approx(0.30, abs=1e-15)
    # clamped on both sides, floored at zero
    assert adjusted_three_point_prob(0.40, arc - 1.0, GEOM) == 0.40
    assert adjusted_three_point_prob(0.40, half + 5.0, GEOM) == pytest.approx(0.20, abs=1e-15)
    assert adjusted_three_point_prob(0.1, half, GEOM) == 0.0


def test_adjusted_prob_corner_uses_corner_distance():
    corner_point = Point2D(GEOM.hoop_center.x - 2.0, 1.0)
    d = hoop_distance_m(corner_point, GEOM)
    with_corner = adjusted_three_point_prob(0.40, d, GEOM, corner_point)
    with_arc = adjusted_three_point_prob(0.40, d, GEOM)
    # the corner line is closer than the arc, so the corner reduction is larger
    assert with_corner <= with_arc


def test_adjusted_prob_monotone_non_increasing(rng):
    d_values = sorted(float(rng.uniform(6.0, 14.0)) for _ in range(50))
    probs = [adjusted_three_point_prob(0.45, d, GEOM) for d in d_values]
    assert all(a >= b - 1e-15 for a, b in zip(probs, probs[1:]))
    assert all(p >= 0.0 for p in probs)


def _event(attack_id, point, dist, shooter="veteran", attempted=True):
    return ShotEvent(
        attack_id=attack_id,
        shooter_id=shooter,
        shot_point=point,
        nearest_defender_distance=dist,
        shot_attempted=attempted,
    )


def test_label_restricted_any_distance():
    p = _point_at_hoop_distance(1.0)
    assert label_attack(_event("a", p, 1.0), STATS, DEFAULTS, GEOM) == 1
    assert label_attack(_event("a", p, 0.0), STATS, DEFAULTS, GEOM) == 1
    assert label_attack(_event("a", p, 100.0), STATS, DEFAULTS, GEOM) == 1


def test_label_mid_range_requires_wide_open():
    p = _point_at_hoop_distance(6.5)
    assert label_attack(_event("a", p, 6.5), STATS, DEFAULTS, GEOM) == 1
    assert label_attack(_event("a", p, 5.9), STATS, DEFAULTS, GEOM) == -1


def test_label_paint_requires_wide_open():
    p = _point_at_hoop_distance(5.0)
    assert label_attack(_event("a", p, 6.0), STATS, DEFAULTS, GEOM) == 1
    assert label_attack(_event("a", p, 2.0), STATS, DEFAULTS, GEOM) == -1


def test_label_three_point_rules():
    p = _point_at_hoop_distance(7.5)
    assert classify_zone(p, GEOM) is ShotZone.THREE_POINT
    # wide open, adjusted prob above threshold
    assert label_attack(_event("a", p, 8.0, shooter="veteran"), STATS, DEFAULTS, GEOM) == 1
    # wide open but weak shooter: adjusted prob below 0.35
    assert label_attack(_event("a", p, 8.0, shooter="brick"), STATS, DEFAULTS, GEOM) == -1
    # strong shooter but contested
    assert label_attack(_event("a", p, 3.0, shooter="veteran"), STATS, DEFAULTS, GEOM) == -1


def test_label_three_point_adjustment_applied_before_threshold():
    # 0.40 shooter far beyond the line: adjusted below 0.35 despite being open
    far = _point_at_hoop_distance(11.5)
    assert classify_zone(far, GEOM) is ShotZone.THREE_POINT
    decision = explain_label(_event("a", far, 8.0, shooter="sniper"), STATS, DEFAULTS, GEOM)
    assert decision.raw_three_point_prob == 0.40
    assert decision.adjusted_three_point_prob < 0.35
    assert decision.label == -1


def test_label_turnover_is_ineffective():
    p = _point_at_hoop_distance(1.0)
    assert label_attack(_event("a", p, 0.0, attempted=False), STATS, DEFAULTS, GEOM) == -1


def test_label_monotone_in_defender_distance(rng):
    for _ in range(200):
        d_m = float(rng.uniform(0.3, 11.0))
        p = _point_at_hoop_distance(d_m)
        d1 = float(rng.uniform(0.0, 15.0))
        d2 = d1 + float(rng.uniform(0.0, 15.0))
        l1 = label_attack(_event("a", p, d1), STATS, DEFAULTS, GEOM)
        l2 = label_attack(_event("a", p, d2), STATS, DEFAULTS, GEOM)
        assert not (l1 == 1 and l2 == -1)


def test_corner_break_geometry():
    # break distance: sqrt(arc^2 - corner^2), about 8.95 ft in meters
    expected = math.sqrt(
        GEOM.three_point_arc_radius**2 - GEOM.three_point_corner_distance**2
    )
    assert corner_break_m(GEOM) == pytest.approx(expected, abs=1e-15)
    assert expected / METERS_PER_FOOT == pytest.approx(8.948, abs=0.01)


def test_event_validation():
    with pytest.raises(ValueError):
        ShotEvent("a", "s", Point2D(1, 1), -1.0, True)
    with pytest.raises(ValueError):
        PlayerShotStats("p", Position.GUARD, 10, 1.2)
