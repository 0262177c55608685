"""Trajectory data model: points, role-ordered agent matrices, and datasets.

A trajectory matrix holds one attack: the trajectories of K agents over the
same frames, stored as an (n_frames, n_agents, 2) float array together with a
binary effective/ineffective label. A sub-matrix reference addresses a
contiguous frame window of one matrix. Window indices are 0-based and
end-inclusive everywhere in this package, including all file formats.

All model types are immutable after construction (coordinate arrays are
frozen), so they can be shared freely across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import IntEnum

import numpy as np


class AgentRole(IntEnum):
    """The fixed basketball role ordering used by the canonical file layout."""

    BALL = 0
    SHOOTER = 1
    SHOOTER_DEFENDER = 2
    LAST_PASSER = 3
    LAST_PASSER_DEFENDER = 4

    @property
    def column_name(self) -> str:
        return _ROLE_COLUMN_NAMES[self]


_ROLE_COLUMN_NAMES = {
    AgentRole.BALL: "ball",
    AgentRole.SHOOTER: "shooter",
    AgentRole.SHOOTER_DEFENDER: "shooter_def",
    AgentRole.LAST_PASSER: "passer",
    AgentRole.LAST_PASSER_DEFENDER: "passer_def",
}

BASKETBALL_ROLES: tuple[str, ...] = tuple(r.column_name for r in AgentRole)


def generic_roles(n_agents: int) -> tuple[str, ...]:
    """Role names for datasets that do not use the basketball five."""
    if n_agents < 1:
        raise ValueError("need at least one agent")
    return tuple(f"a{i}" for i in range(n_agents))


@dataclass(frozen=True)
class Point2D:
    """A finite 2-D court coordinate; behaves as a length-2 sequence."""

    x: float
    y: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"non-finite coordinate: ({self.x}, {self.y})")

    def __iter__(self):
        yield self.x
        yield self.y

    def __len__(self) -> int:
        return 2

    def __getitem__(self, index):
        return (self.x, self.y)[index]


@dataclass(frozen=True)
class TrajectoryMatrix:
    """One labelled attack: equal-length trajectories for every agent.

    Attributes:
        attack_id: Unique identifier within a dataset.
        label: +1 (effective) or -1 (ineffective).
        coords: (n_frames, n_agents, 2) float64 array; frame t, agent k holds
            the (x, y) position. Frozen (read-only) after construction.
        sample_rate_hz: Sampling frequency of the frames.
    """

    attack_id: str
    label: int
    coords: np.ndarray
    sample_rate_hz: float = 5.0

    def __post_init__(self) -> None:
        arr = np.array(self.coords, dtype=np.float64, order="C", copy=True)
        if arr.ndim != 3 or arr.shape[2] != 2:
            raise ValueError(
                f"coords must have shape (n_frames, n_agents, 2), got {arr.shape}"
            )
        if arr.shape[0] < 1:
            raise ValueError(f"attack {self.attack_id!r}: at least one frame required")
        if arr.shape[1] < 1:
            raise ValueError(f"attack {self.attack_id!r}: at least one agent required")
        if self.label not in (1, -1):
            raise ValueError(f"attack {self.attack_id!r}: label must be +1 or -1")
        if not self.sample_rate_hz > 0:
            raise ValueError(f"attack {self.attack_id!r}: sample rate must be positive")
        arr.flags.writeable = False
        object.__setattr__(self, "coords", arr)

    @property
    def n_frames(self) -> int:
        return self.coords.shape[0]

    @property
    def n_agents(self) -> int:
        return self.coords.shape[1]

    def flat(self) -> np.ndarray:
        """(n_frames, 2*n_agents) view: frame rows of role-ordered (x, y) pairs."""
        return self.coords.reshape(self.n_frames, 2 * self.n_agents)


@dataclass(frozen=True, order=True)
class SubMatrixRef:
    """A contiguous, end-inclusive frame window [start, end] of one matrix."""

    matrix_id: str
    start: int
    end: int

    def __post_init__(self) -> None:
        if not (0 <= self.start <= self.end):
            raise ValueError(
                f"invalid window [{self.start}, {self.end}] for {self.matrix_id!r}"
            )

    @property
    def length(self) -> int:
        return self.end - self.start + 1


@dataclass(frozen=True)
class Dataset:
    """An ordered collection of trajectory matrices sharing one role set."""

    matrices: tuple[TrajectoryMatrix, ...]
    roles: tuple[str, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "matrices", tuple(self.matrices))
        object.__setattr__(self, "roles", tuple(self.roles))
        for m in self.matrices:
            if m.n_agents != len(self.roles):
                raise ValueError(
                    f"attack {m.attack_id!r} has {m.n_agents} agents, "
                    f"dataset declares {len(self.roles)} roles"
                )
        object.__setattr__(
            self, "_index", {m.attack_id: i for i, m in enumerate(self.matrices)}
        )

    def __len__(self) -> int:
        return len(self.matrices)

    def __iter__(self):
        return iter(self.matrices)

    @property
    def n_pos(self) -> int:
        return sum(1 for m in self.matrices if m.label == 1)

    @property
    def n_neg(self) -> int:
        return sum(1 for m in self.matrices if m.label == -1)

    @property
    def ids(self) -> tuple[str, ...]:
        return tuple(m.attack_id for m in self.matrices)

    def matrix(self, attack_id: str) -> TrajectoryMatrix:
        try:
            return self.matrices[self._index[attack_id]]
        except KeyError:
            raise KeyError(f"unknown attack id {attack_id!r}") from None

    def index(self, attack_id: str) -> int:
        try:
            return self._index[attack_id]
        except KeyError:
            raise KeyError(f"unknown attack id {attack_id!r}") from None


def make_dataset(matrices, roles=None) -> Dataset:
    """Build a Dataset, inferring basketball or generic role names."""
    matrices = tuple(matrices)
    if roles is None:
        if not matrices:
            raise ValueError("cannot infer roles for an empty dataset")
        k = matrices[0].n_agents
        roles = BASKETBALL_ROLES if k == len(BASKETBALL_ROLES) else generic_roles(k)
    return Dataset(matrices=matrices, roles=tuple(roles))


def extract_submatrix(matrix: TrajectoryMatrix, start: int, end: int) -> np.ndarray:
    """View of a frame window as an (n_agents, length, 2) array.

    Row k of the result is agent k's sub-trajectory; column t equals frame
    start + t of the matrix.
    """
    if not 0 <= start < matrix.n_frames:
        raise IndexError(
            f"start index {start} out of range for attack {matrix.attack_id!r} "
            f"of length {matrix.n_frames}"
        )
    if not start <= end < matrix.n_frames:
        raise IndexError(
            f"end index {end} out of range for attack {matrix.attack_id!r} "
            f"of length {matrix.n_frames} (start={start})"
        )
    return matrix.coords[start : end + 1].transpose(1, 0, 2)


def crop_attack(matrix: TrajectoryMatrix, t2_frame: int, t0_frame: int) -> TrajectoryMatrix:
    """New matrix containing exactly frames [t2_frame, t0_frame].

    Used to trim an attack to the interval between the last pass being
    received and the shot (or turnover). Label and id are preserved.
    """
    if not 0 <= t2_frame <= t0_frame < matrix.n_frames:
        raise IndexError(
            f"invalid crop interval [{t2_frame}, {t0_frame}] for attack "
            f"{matrix.attack_id!r} of length {matrix.n_frames}"
        )
    return TrajectoryMatrix(
        attack_id=matrix.attack_id,
        label=matrix.label,
        coords=matrix.coords[t2_frame : t0_frame + 1],
        sample_rate_hz=matrix.sample_rate_hz,
    )


@dataclass(frozen=True)
class Violation:
    """One validation finding; violations are data, not exceptions."""

    attack_id: str | None
    rule: str
    message: str


def validate_dataset(dataset: Dataset, min_length: int | None = None) -> list[Violation]:
    """Check dataset invariants, returning an empty list when all hold.

    Reports duplicate attack ids, non-finite coordinates, and (when
    ``min_length`` is given) attacks shorter than the mining length, which
    the miner will silently skip.
    """
    violations: list[Violation] = []
    seen: set[str] = set()
    dup: set[str] = set()
    for m in dataset.matrices:
        if m.attack_id in seen and m.attack_id not in dup:
            dup.add(m.attack_id)
            violations.append(
                Violation(m.attack_id, "duplicate-id", f"duplicate attack id {m.attack_id!r}")
            )
        seen.add(m.attack_id)
        if not np.isfinite(m.coords).all():
            bad = np.argwhere(~np.isfinite(m.coords))
            frame, agent, _ = bad[0]
            violations.append(
                Violation(
                    m.attack_id,
                    "non-finite-coordinate",
                    f"non-finite coordinate at frame {frame}, agent {agent}",
                )
            )
        if min_length is not None and m.n_frames < min_length:
            violations.append(
                Violation(
                    m.attack_id,
                    "short-attack",
                    f"length {m.n_frames} below minimum mining length {min_length}",
                )
            )
    return violations
