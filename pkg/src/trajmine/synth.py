"""Synthetic labelled multi-agent datasets for validation.

Two generators: ``gen_null`` draws bounded random walks with labels assigned
independently of the trajectories (no signal), and ``gen_planted`` overwrites
a window of selected positive matrices with one shared motif plus per-copy
jitter, returning the planted windows as ground truth.

All randomness derives from one master seed through SeedSequence spawning,
with a dedicated child stream per matrix, so generation is reproducible and
can be partitioned deterministically.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from trajmine.model import Dataset, SubMatrixRef, TrajectoryMatrix, make_dataset


@dataclass(frozen=True)
class SynthConfig:
    n_matrices: int = 12
    n_pos: int = 5
    min_length: int = 8
    max_length: int = 14
    n_agents: int = 5
    step_scale: float = 2.0  # random-walk step std, coordinate units
    motif_length: int = 6
    motif_jitter: float = 0.0  # per-point noise std on planted copies
    plant_rate: float = 1.0  # fraction of positives receiving the motif
    seed: int = 0
    bounds: tuple[float, float, float, float] = (0.0, 94.0, 0.0, 50.0)
    sample_rate_hz: float = 5.0

    def __post_init__(self) -> None:
        if not 0 <= self.n_pos <= self.n_matrices:
            raise ValueError("need 0 <= n_pos <= n_matrices")
        if not 1 <= self.min_length <= self.max_length:
            raise ValueError("need 1 <= min_length <= max_length")
        if self.n_agents < 1:
            raise ValueError("need at least one agent")
        if self.step_scale < 0 or self.motif_jitter < 0:
            raise ValueError("scales must be non-negative")
        if not 1 <= self.motif_length <= self.min_length:
            raise ValueError("need 1 <= motif_length <= min_length")
        if not 0.0 <= self.plant_rate <= 1.0:
            raise ValueError("plant_rate must lie in [0, 1]")
        x0, x1, y0, y1 = self.bounds
        if not (x0 < x1 and y0 < y1):
            raise ValueError("bounds rectangle must be non-degenerate")


def _reflect(values: np.ndarray, lo: float, hi: float) -> np.ndarray:
    """Fold coordinates back into [lo, hi] by mirror reflection."""
    period = 2.0 * (hi - lo)
    t = np.mod(values - lo, period)
    return lo + np.minimum(t, period - t)


def _walk(rng: np.random.Generator, length: int, cfg: SynthConfig) -> np.ndarray:
    x0, x1, y0, y1 = cfg.bounds
    start = np.stack(
        [
            rng.uniform(x0, x1, size=cfg.n_agents),
            rng.uniform(y0, y1, size=cfg.n_agents),
        ],
        axis=1,
    )  # (K, 2)
    steps = rng.normal(0.0, cfg.step_scale, size=(length - 1, cfg.n_agents, 2))
    path = np.concatenate([start[None], start[None] + np.cumsum(steps, axis=0)])
    path[..., 0] = _reflect(path[..., 0], x0, x1)
    path[..., 1] = _reflect(path[..., 1], y0, y1)
    return path  # (length, K, 2)


def _id_width(n: int) -> int:
    return max(3, len(str(n - 1)))


def _generate(cfg: SynthConfig, planted: bool):
    master = np.random.SeedSequence(cfg.seed)
    # fixed spawn layout: meta, motif template, then one child per matrix;
    # gen_null ignores the template child, keeping the walks identical
    children = master.spawn(cfg.n_matrices + 2)
    meta_rng = np.random.Generator(np.random.PCG64(children[0]))
    template_rng = np.random.Generator(np.random.PCG64(children[1]))
    matrix_rngs = [
        np.random.Generator(np.random.PCG64(c)) for c in children[2:]
    ]

    lengths = meta_rng.integers(cfg.min_length, cfg.max_length + 1, cfg.n_matrices)
    labels = np.array([1] * cfg.n_pos + [-1] * (cfg.n_matrices - cfg.n_pos), dtype=int)
    labels = meta_rng.permutation(labels)

    width = _id_width(cfg.n_matrices)
    walks = [
        _walk(matrix_rngs[i], int(lengths[i]), cfg) for i in range(cfg.n_matrices)
    ]

    truth: list[SubMatrixRef] = []
    if planted:
        positives = [i for i in range(cfg.n_matrices) if labels[i] == 1]
        n_plant = int(round(cfg.plant_rate * len(positives)))
        template = _walk(template_rng, cfg.motif_length, cfg)
        for i in positives[:n_plant]:
            start = int(meta_rng.integers(0, int(lengths[i]) - cfg.motif_length + 1))
            copy = template
            if cfg.motif_jitter > 0:
                copy = template + matrix_rngs[i].normal(
                    0.0, cfg.motif_jitter, size=template.shape
                )
            walks[i] = walks[i].copy()
            walks[i][start : start + cfg.motif_length] = copy
            truth.append(
                SubMatrixRef(f"m{i:0{width}d}", start, start + cfg.motif_length - 1)
            )

    matrices = [
        TrajectoryMatrix(
            attack_id=f"m{i:0{width}d}",
            label=int(labels[i]),
            coords=walks[i],
            sample_rate_hz=cfg.sample_rate_hz,
        )
        for i in range(cfg.n_matrices)
    ]
    return make_dataset(matrices), truth


def gen_null(cfg: SynthConfig) -> Dataset:
    """Dataset of independent bounded random walks; labels carry no signal."""
    dataset, _ = _generate(cfg, planted=False)
    return dataset


def gen_planted(cfg: SynthConfig) -> tuple[Dataset, list[SubMatrixRef]]:
    """Null-style dataset with a shared motif planted into positive matrices.

    Returns the dataset and the ground-truth list of planted windows. With
    plant_rate=0 the dataset is identical to gen_null(cfg).
    """
    return _generate(cfg, planted=True)
