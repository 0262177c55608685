"""Effective/ineffective attack labelling from shot context.

An attack counts as effective when the shot was attempted from a context with
a high expected scoring probability:

* restricted area: effective at any defender distance;
* in-the-paint / mid-range: effective when the nearest defender is at least
  6 feet away (wide open);
* three-point area: effective when wide open AND the shooter's historical
  three-point probability, reduced linearly with distance beyond the line
  (by 0.2 at the half-court distance), is at least 0.35.

Attacks without a shot attempt (turnovers) are ineffective. Zone radii are
stored in meters; coordinates are converted through the geometry's
unit_scale, so the same rules work for feet- or meter-based courts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import Mapping

from trajmine.model import Point2D

METERS_PER_FOOT = 0.3048


class ShotZone(Enum):
    RESTRICTED = "restricted"
    IN_THE_PAINT = "in_the_paint"
    MID_RANGE = "mid_range"
    THREE_POINT = "three_point"


class DefenderDistanceCategory(Enum):
    """Nearest-defender ranges in feet: [0,2), [2,4), [4,6), [6,inf)."""

    VERY_TIGHT = "0-2"
    TIGHT = "2-4"
    OPEN = "4-6"
    WIDE_OPEN = "6+"


class Position(Enum):
    GUARD = "G"
    FORWARD = "F"
    CENTER = "C"
    GUARD_FORWARD = "GF"
    FORWARD_CENTER = "FC"

    @classmethod
    def parse(cls, code: str) -> "Position":
        for p in cls:
            if p.value == code:
                return p
        raise ValueError(f"unknown position code {code!r}")


@dataclass(frozen=True)
class CourtGeometry:
    """Court dimensions and zone radii.

    court_length/court_width and hoop_center are in coordinate units (feet by
    default); the zone radii are in meters; unit_scale converts coordinate
    units to meters. Defaults are the NBA court: 94x50 ft, hoop center 5.25 ft
    from the baseline on the midline, arc 23.75 ft, corners 22 ft.
    """

    court_length: float = 94.0
    court_width: float = 50.0
    hoop_center: Point2D = Point2D(5.25, 25.0)
    restricted_radius: float = 2.44
    paint_radius: float = 5.46
    three_point_arc_radius: float = 23.75 * METERS_PER_FOOT
    three_point_corner_distance: float = 22.0 * METERS_PER_FOOT
    half_court_distance: float = 12.73
    unit_scale: float = METERS_PER_FOOT

    def __post_init__(self) -> None:
        radii = (
            self.restricted_radius,
            self.paint_radius,
            self.three_point_arc_radius,
            self.half_court_distance,
        )
        if any(r <= 0 for r in radii) or self.three_point_corner_distance <= 0:
            raise ValueError("zone radii must be positive")
        if not (
            self.restricted_radius
            < self.paint_radius
            < self.three_point_arc_radius
            < self.half_court_distance
        ):
            raise ValueError(
                "radii must satisfy restricted < paint < arc < half-court"
            )
        if self.unit_scale <= 0 or self.court_length <= 0 or self.court_width <= 0:
            raise ValueError("court dimensions and unit scale must be positive")

    def with_units(self, unit_scale: float) -> "CourtGeometry":
        return replace(self, unit_scale=unit_scale)


@dataclass(frozen=True)
class PlayerShotStats:
    """Historical three-point record for one player."""

    player_id: str
    position: Position
    three_point_attempts: int
    three_point_success_prob: float

    def __post_init__(self) -> None:
        if self.three_point_attempts < 0:
            raise ValueError(f"{self.player_id}: attempts must be non-negative")
        if not 0.0 <= self.three_point_success_prob <= 1.0:
            raise ValueError(f"{self.player_id}: probability outside [0, 1]")


@dataclass(frozen=True)
class ShotEvent:
    """Shot context of one attack, as produced upstream of this library."""

    attack_id: str
    shooter_id: str
    shot_point: Point2D
    nearest_defender_distance: float  # feet
    shot_attempted: bool

    def __post_init__(self) -> None:
        if self.nearest_defender_distance < 0:
            raise ValueError(
                f"{self.attack_id}: defender distance must be non-negative"
            )


# Players below this attempt count fall back to their position's average.
MIN_ATTEMPTS_FOR_OWN_PROB = 10
DEFAULT_THREE_POINT_THRESHOLD = 0.35


def _hoop_offset_m(shot_point: Point2D, geom: CourtGeometry) -> tuple[float, float]:
    dx = (shot_point.x - geom.hoop_center.x) * geom.unit_scale
    dy = (shot_point.y - geom.hoop_center.y) * geom.unit_scale
    return dx, dy


def corner_break_m(geom: CourtGeometry) -> float:
    """Distance from the hoop (along the court axis) where the three-point
    arc meets the straight corner segments."""
    return math.sqrt(
        geom.three_point_arc_radius**2 - geom.three_point_corner_distance**2
    )


def _arc_distance_m(shot_point: Point2D, geom: CourtGeometry) -> float:
    """Three-point line distance from the hoop along this shot's bearing."""
    dx, _ = _hoop_offset_m(shot_point, geom)
    if dx >= corner_break_m(geom):
        return geom.three_point_arc_radius
    return geom.three_point_corner_distance


def _beyond_three_point_line(shot_point: Point2D, geom: CourtGeometry) -> bool:
    dx, dy = _hoop_offset_m(shot_point, geom)
    if dx >= corner_break_m(geom):
        return math.hypot(dx, dy) > geom.three_point_arc_radius
    return abs(dy) > geom.three_point_corner_distance


def hoop_distance_m(shot_point: Point2D, geom: CourtGeometry) -> float:
    dx, dy = _hoop_offset_m(shot_point, geom)
    return math.hypot(dx, dy)


def classify_zone(shot_point: Point2D, geom: CourtGeometry) -> ShotZone:
    """Assign the shot to exactly one of the four court zones."""
    if not (0.0 <= shot_point.x <= geom.court_length) or not (
        0.0 <= shot_point.y <= geom.court_width
    ):
        raise ValueError(
            f"shot point ({shot_point.x}, {shot_point.y}) outside court bounds"
        )
    r = hoop_distance_m(shot_point, geom)
    if r <= geom.restricted_radius:
        return ShotZone.RESTRICTED
    if _beyond_three_point_line(shot_point, geom):
        return ShotZone.THREE_POINT
    if r <= geom.paint_radius:
        return ShotZone.IN_THE_PAINT
    return ShotZone.MID_RANGE


def defender_category(distance_ft: float) -> DefenderDistanceCategory:
    """Bucket a nearest-defender distance; bounds are lower-inclusive."""
    if distance_ft < 0:
        raise ValueError(f"defender distance must be non-negative, got {distance_ft}")
    if distance_ft < 2.0:
        return DefenderDistanceCategory.VERY_TIGHT
    if distance_ft < 4.0:
        return DefenderDistanceCategory.TIGHT
    if distance_ft < 6.0:
        return DefenderDistanceCategory.OPEN
    return DefenderDistanceCategory.WIDE_OPEN


def three_point_prob(
    player_id: str,
    stats: Mapping[str, PlayerShotStats],
    position_defaults: Mapping[Position, float],
    position: Position | None = None,
) -> float:
    """Historical three-point probability with the small-sample fallback.

    Players with fewer than 10 recorded attempts use their position's
    attempt-weighted average; an out-of-table player can still resolve when a
    position is supplied and has a default.
    """
    record = stats.get(player_id)
    if record is not None:
        if record.three_point_attempts >= MIN_ATTEMPTS_FOR_OWN_PROB:
            return record.three_point_success_prob
        position = record.position
    if position is None:
        raise KeyError(f"unknown player {player_id!r} and no position given")
    if position not in position_defaults:
        raise KeyError(
            f"no position default for {position.value!r} (player {player_id!r})"
        )
    return position_defaults[position]


def adjusted_three_point_prob(
    p: float,
    shot_hoop_distance_m: float,
    geom: CourtGeometry,
    shot_point: Point2D | None = None,
) -> float:
    """Reduce a three-point probability linearly with distance past the line.

    The reduction is 0 at the line and 0.2 at the half-court distance,
    clamped outside that range; the result is floored at 0. When the shot
    point is given, corner shots measure from the corner line instead of the
    arc.
    """
    d_arc = (
        geom.three_point_arc_radius
        if shot_point is None
        else _arc_distance_m(shot_point, geom)
    )
    span = geom.half_court_distance - d_arc
    frac = (shot_hoop_distance_m - d_arc) / span
    frac = min(max(frac, 0.0), 1.0)
    return max(p - 0.2 * frac, 0.0)


@dataclass(frozen=True)
class LabelDecision:
    """Label plus the intermediate quantities that produced it."""

    attack_id: str
    label: int
    zone: ShotZone | None
    category: DefenderDistanceCategory | None
    raw_three_point_prob: float | None
    adjusted_three_point_prob: float | None


def explain_label(
    event: ShotEvent,
    stats: Mapping[str, PlayerShotStats],
    position_defaults: Mapping[Position, float],
    geom: CourtGeometry,
    three_point_threshold: float = DEFAULT_THREE_POINT_THRESHOLD,
) -> LabelDecision:
    if not event.shot_attempted:
        return LabelDecision(event.attack_id, -1, None, None, None, None)
    zone = classify_zone(event.shot_point, geom)
    category = defender_category(event.nearest_defender_distance)
    if zone is ShotZone.RESTRICTED:
        return LabelDecision(event.attack_id, 1, zone, category, None, None)
    wide_open = category is DefenderDistanceCategory.WIDE_OPEN
    if zone in (ShotZone.IN_THE_PAINT, ShotZone.MID_RANGE):
        return LabelDecision(
            event.attack_id, 1 if wide_open else -1, zone, category, None, None
        )
    raw = three_point_prob(event.shooter_id, stats, position_defaults)
    adjusted = adjusted_three_point_prob(
        raw, hoop_distance_m(event.shot_point, geom), geom, event.shot_point
    )
    effective = wide_open and adjusted >= three_point_threshold
    return LabelDecision(
        event.attack_id, 1 if effective else -1, zone, category, raw, adjusted
    )


def label_attack(
    event: ShotEvent,
    stats: Mapping[str, PlayerShotStats],
    position_defaults: Mapping[Position, float],
    geom: CourtGeometry,
    three_point_threshold: float = DEFAULT_THREE_POINT_THRESHOLD,
) -> int:
    """+1 when the attack meets the effectiveness rules, else -1."""
    return explain_label(event, stats, position_defaults, geom, three_point_threshold).label
