"""Delimited text formats for trajectories, labels, shot statistics, shot
events, ground truth, and the mining result document.

All tabular files are comma-separated UTF-8 with a mandatory header row.
Trajectory files use the canonical basketball header (ball/shooter/
shooter_def/passer/passer_def coordinate pairs) when the dataset carries the
five basketball roles, and generic ``a{i}_x,a{i}_y`` pairs otherwise. Every
parse error carries (file, line, column). Coordinates are serialized as
shortest round-tripping decimals, so a write/read cycle is bit-exact.

The mining result document is JSON with fixed key order; writing the same
result twice produces byte-identical files.
"""

from __future__ import annotations

import csv
import json
import math
from typing import Iterable, Sequence

import numpy as np

from trajmine.labeling import PlayerShotStats, Position, ShotEvent
from trajmine.mining import Discovery, MinerConfig, MiningCounters, MiningResult
from trajmine.model import (
    Dataset,
    Point2D,
    SubMatrixRef,
    TrajectoryMatrix,
    validate_dataset,
)
from trajmine.stats import ContingencyMargins

RESULT_FORMAT_VERSION = 1

LABELS_HEADER = ["attack_id", "label"]
SHOT_STATS_HEADER = [
    "player_id",
    "position",
    "three_point_attempts",
    "three_point_success_prob",
]
SHOT_EVENTS_HEADER = [
    "attack_id",
    "shooter_id",
    "shot_x",
    "shot_y",
    "defender_distance_ft",
    "shot_attempted",
]
GROUND_TRUTH_HEADER = ["matrix_id", "start", "end"]


class LoadError(ValueError):
    """Structural problem while assembling a dataset from parsed files."""


class ParseError(LoadError):
    """Malformed file content, located by (file, line, column)."""

    def __init__(self, path, line: int, column: int, message: str):
        self.path = str(path)
        self.line = line
        self.column = column
        self.message = message
        super().__init__(f"{self.path}:{line}:{column}: {message}")


def _fmt(value: float) -> str:
    return repr(float(value))


def trajectory_header(roles: Sequence[str]) -> list[str]:
    cols = ["attack_id", "frame"]
    for role in roles:
        cols.append(f"{role}_x")
        cols.append(f"{role}_y")
    return cols


def _roles_from_header(path, header: list[str]) -> tuple[str, ...]:
    if len(header) < 4 or header[:2] != ["attack_id", "frame"]:
        raise ParseError(path, 1, 1, "header must start with attack_id,frame")
    coord_cols = header[2:]
    if len(coord_cols) % 2 != 0:
        raise ParseError(path, 1, 3, "coordinate columns must come in x,y pairs")
    roles = []
    for idx in range(0, len(coord_cols), 2):
        cx, cy = coord_cols[idx], coord_cols[idx + 1]
        if not (cx.endswith("_x") and cy.endswith("_y") and cx[:-2] == cy[:-2]):
            raise ParseError(
                path, 1, 3 + idx, f"expected paired <role>_x,<role>_y columns, got {cx},{cy}"
            )
        roles.append(cx[:-2])
    return tuple(roles)


def _parse_float(path, line_no: int, column: int, text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise ParseError(path, line_no, column, f"malformed number {text!r}") from None
    if not math.isfinite(value):
        raise ParseError(path, line_no, column, f"non-finite coordinate {text!r}")
    return value


def read_trajectories(path) -> tuple[tuple[str, ...], list[tuple[str, np.ndarray]]]:
    """Parse a trajectory file into (roles, ordered [(attack_id, coords)]).

    Rows of one attack must be grouped and their frame numbers contiguous
    from 0.
    """
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError(path, 1, 1, "empty file: header row required") from None
        roles = _roles_from_header(path, header)
        n_cols = len(header)

        entries: list[tuple[str, np.ndarray]] = []
        seen: set[str] = set()
        current_id: str | None = None
        current_rows: list[list[float]] = []

        def _flush():
            if current_id is not None:
                coords = np.array(current_rows, dtype=np.float64).reshape(
                    len(current_rows), len(roles), 2
                )
                entries.append((current_id, coords))

        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != n_cols:
                raise ParseError(
                    path, line_no, len(row) + 1,
                    f"expected {n_cols} fields, got {len(row)}",
                )
            attack_id = row[0]
            if not attack_id:
                raise ParseError(path, line_no, 1, "empty attack_id")
            try:
                frame = int(row[1])
            except ValueError:
                raise ParseError(
                    path, line_no, 2, f"malformed frame number {row[1]!r}"
                ) from None
            if attack_id != current_id:
                if attack_id in seen:
                    raise ParseError(
                        path, line_no, 1,
                        f"rows for attack {attack_id!r} are not grouped",
                    )
                _flush()
                seen.add(attack_id)
                current_id = attack_id
                current_rows = []
                if frame != 0:
                    raise ParseError(
                        path, line_no, 2,
                        f"attack {attack_id!r} must start at frame 0, got {frame}",
                    )
            elif frame != len(current_rows):
                raise ParseError(
                    path, line_no, 2,
                    f"frame gap at line {line_no}: expected {len(current_rows)}, got {frame}",
                )
            current_rows.append(
                [_parse_float(path, line_no, c + 1, row[c]) for c in range(2, n_cols)]
            )
        _flush()
    return roles, entries


def read_labels(path) -> dict[str, int]:
    """Parse a label file into an ordered {attack_id: +1/-1} mapping."""
    labels: dict[str, int] = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError(path, 1, 1, "empty file: header row required") from None
        if header != LABELS_HEADER:
            raise ParseError(
                path, 1, 1, f"expected header {','.join(LABELS_HEADER)}"
            )
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 2:
                raise ParseError(path, line_no, len(row) + 1, "expected 2 fields")
            attack_id, text = row
            if attack_id in labels:
                raise ParseError(
                    path, line_no, 1, f"duplicate label for attack {attack_id!r}"
                )
            if text == "+1":
                labels[attack_id] = 1
            elif text == "-1":
                labels[attack_id] = -1
            else:
                raise ParseError(
                    path, line_no, 2, f"label must be +1 or -1, got {text!r}"
                )
    return labels


def load_dataset(trajectories_path, labels_path, sample_rate_hz: float = 5.0) -> Dataset:
    """Join trajectory and label files into a validated Dataset."""
    roles, entries = read_trajectories(trajectories_path)
    labels = read_labels(labels_path)
    matrices = []
    for attack_id, coords in entries:
        if attack_id not in labels:
            raise LoadError(
                f"{labels_path}: missing label for attack {attack_id!r}"
            )
        matrices.append(
            TrajectoryMatrix(
                attack_id=attack_id,
                label=labels[attack_id],
                coords=coords,
                sample_rate_hz=sample_rate_hz,
            )
        )
    dataset = Dataset(matrices=tuple(matrices), roles=roles)
    violations = validate_dataset(dataset)
    if violations:
        v = violations[0]
        raise LoadError(f"{trajectories_path}: invalid dataset: {v.message}")
    return dataset


def write_dataset(dataset: Dataset, trajectories_path, labels_path) -> None:
    roles = dataset.roles
    with open(trajectories_path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(trajectory_header(roles))
        for m in dataset:
            flat = m.flat()
            for frame in range(m.n_frames):
                writer.writerow([m.attack_id, frame, *(_fmt(v) for v in flat[frame])])
    write_labels(labels_path, [(m.attack_id, m.label) for m in dataset])


def write_labels(path, labels: Iterable[tuple[str, int]]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(LABELS_HEADER)
        for attack_id, label in labels:
            writer.writerow([attack_id, "+1" if label == 1 else "-1"])


def read_shot_stats(path) -> tuple[dict[str, PlayerShotStats], dict[Position, float]]:
    """Parse player shot statistics; position defaults are attempt-weighted
    means over every player of that position."""
    table: dict[str, PlayerShotStats] = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError(path, 1, 1, "empty file: header row required") from None
        if header != SHOT_STATS_HEADER:
            raise ParseError(
                path, 1, 1, f"expected header {','.join(SHOT_STATS_HEADER)}"
            )
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 4:
                raise ParseError(path, line_no, len(row) + 1, "expected 4 fields")
            player_id, pos_code, attempts_text, prob_text = row
            if player_id in table:
                raise ParseError(
                    path, line_no, 1, f"duplicate player {player_id!r}"
                )
            try:
                position = Position.parse(pos_code)
            except ValueError as exc:
                raise ParseError(path, line_no, 2, str(exc)) from None
            try:
                attempts = int(attempts_text)
            except ValueError:
                raise ParseError(
                    path, line_no, 3, f"malformed attempt count {attempts_text!r}"
                ) from None
            try:
                prob = float(prob_text)
            except ValueError:
                raise ParseError(
                    path, line_no, 4, f"malformed probability {prob_text!r}"
                ) from None
            if not 0.0 <= prob <= 1.0:
                raise ParseError(
                    path, line_no, 4, f"probability {prob} outside [0, 1]"
                )
            if attempts < 0:
                raise ParseError(path, line_no, 3, f"negative attempts {attempts}")
            table[player_id] = PlayerShotStats(
                player_id=player_id,
                position=position,
                three_point_attempts=attempts,
                three_point_success_prob=prob,
            )
    defaults: dict[Position, float] = {}
    for position in Position:
        members = [s for s in table.values() if s.position is position]
        weight = sum(s.three_point_attempts for s in members)
        if weight > 0:
            defaults[position] = (
                sum(s.three_point_attempts * s.three_point_success_prob for s in members)
                / weight
            )
    return table, defaults


def read_shot_events(path) -> list[ShotEvent]:
    events: list[ShotEvent] = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError(path, 1, 1, "empty file: header row required") from None
        if header != SHOT_EVENTS_HEADER:
            raise ParseError(
                path, 1, 1, f"expected header {','.join(SHOT_EVENTS_HEADER)}"
            )
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 6:
                raise ParseError(path, line_no, len(row) + 1, "expected 6 fields")
            attack_id, shooter_id, x_text, y_text, dist_text, attempted_text = row
            x = _parse_float(path, line_no, 3, x_text)
            y = _parse_float(path, line_no, 4, y_text)
            dist = _parse_float(path, line_no, 5, dist_text)
            if attempted_text not in ("0", "1"):
                raise ParseError(
                    path, line_no, 6, f"shot_attempted must be 0 or 1, got {attempted_text!r}"
                )
            if dist < 0:
                raise ParseError(path, line_no, 5, f"negative defender distance {dist}")
            events.append(
                ShotEvent(
                    attack_id=attack_id,
                    shooter_id=shooter_id,
                    shot_point=Point2D(x, y),
                    nearest_defender_distance=dist,
                    shot_attempted=attempted_text == "1",
                )
            )
    return events


def write_ground_truth(path, refs: Iterable[SubMatrixRef]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(GROUND_TRUTH_HEADER)
        for ref in refs:
            writer.writerow([ref.matrix_id, ref.start, ref.end])


def read_ground_truth(path) -> list[SubMatrixRef]:
    refs: list[SubMatrixRef] = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError(path, 1, 1, "empty file: header row required") from None
        if header != GROUND_TRUTH_HEADER:
            raise ParseError(
                path, 1, 1, f"expected header {','.join(GROUND_TRUTH_HEADER)}"
            )
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue
            try:
                refs.append(SubMatrixRef(row[0], int(row[1]), int(row[2])))
            except (IndexError, ValueError) as exc:
                raise ParseError(path, line_no, 1, f"malformed row: {exc}") from None
    return refs


def result_document(result: MiningResult) -> dict:
    """The mining result as a JSON-ready dict with stable key order."""
    cfg = result.config
    return {
        "format_version": RESULT_FORMAT_VERSION,
        "config": {
            "min_length": cfg.min_length,
            "epsilon": cfg.epsilon,
            "permutations": cfg.permutations,
            "alpha": cfg.alpha,
            "distance_mode": cfg.distance_mode.value,
            "base_distance": cfg.base_distance,
            "prng_seed": cfg.prng_seed,
            "threads": cfg.threads,
            "prune": cfg.prune,
        },
        "margins": {
            "n_matrices": result.margins.n_total,
            "n_pos": result.margins.n_pos,
            "n_neg": result.margins.n_neg,
        },
        "metadata": {
            "prng": result.prng,
            "fet": "two-sided-point-probability",
            "kernel_backend": result.backend,
        },
        "delta_star": result.delta_star,
        "discoveries": [
            {
                "matrix_id": d.matrix_id,
                "start": d.start,
                "end": d.end,
                "p_value": d.p_value,
                "support_pos": d.support_pos,
                "support": d.support,
                "neighborhood_size": d.neighborhood_size,
            }
            for d in result.discoveries
        ],
        "merged_windows": {
            matrix_id: [[s, e] for s, e in windows]
            for matrix_id, windows in result.merged_windows.items()
        },
        "counters": {
            "seeds": result.counters.seeds,
            "nodes_visited": result.counters.nodes_visited,
            "nodes_pruned": result.counters.nodes_pruned,
            "distance_evals": result.counters.distance_evals,
        },
    }


def write_results(result: MiningResult, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        json.dump(result_document(result), fh, indent=2)
        fh.write("\n")


def read_results(path) -> MiningResult:
    """Reconstruct a MiningResult view from a result document."""
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    if doc.get("format_version") != RESULT_FORMAT_VERSION:
        raise LoadError(
            f"{path}: unsupported format_version {doc.get('format_version')!r}"
        )
    cfg = doc["config"]
    config = MinerConfig(
        min_length=cfg["min_length"],
        epsilon=cfg["epsilon"],
        permutations=cfg["permutations"],
        alpha=cfg["alpha"],
        distance_mode=cfg["distance_mode"],
        base_distance=cfg["base_distance"],
        prng_seed=cfg["prng_seed"],
        threads=cfg["threads"],
        prune=cfg["prune"],
    )
    discoveries = [
        Discovery(
            matrix_id=d["matrix_id"],
            start=d["start"],
            end=d["end"],
            p_value=d["p_value"],
            support_pos=d["support_pos"],
            support=d["support"],
            neighborhood_size=d["neighborhood_size"],
        )
        for d in doc["discoveries"]
    ]
    counters = MiningCounters(**doc["counters"])
    return MiningResult(
        discoveries=discoveries,
        delta_star=doc["delta_star"],
        config=config,
        margins=ContingencyMargins(
            doc["margins"]["n_matrices"], doc["margins"]["n_pos"]
        ),
        merged_windows={
            matrix_id: [(s, e) for s, e in windows]
            for matrix_id, windows in doc["merged_windows"].items()
        },
        counters=counters,
        prng=doc["metadata"]["prng"],
        backend=doc["metadata"]["kernel_backend"],
    )
