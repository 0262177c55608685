"""Discriminative window mining over labelled trajectory-matrix datasets.

Every length-L window of every matrix seeds a chain: its eps-neighborhood
(all same-length windows of the dataset within the configured distance) is
computed once, then anchor and neighbors are extended one frame at a time,
with the child neighborhood obtained by filtering the parent's (candidates
never re-enter). At each unpruned node the true-label Fisher p-value is
recorded and each permutation's running minimum p-value is updated; a node
whose attainable-p envelope already meets the current permutation quantile
is pruned together with its whole extension chain (descendant supports only
shrink, so the envelope bounds every descendant p-value).

After traversal the adjusted threshold delta* is calibrated from the
permutation minima and every recorded window with p < delta* is reported.

Determinism: seeds are processed in fixed-size waves with the pruning
threshold frozen per wave and minimum-p updates merged by elementwise min at
wave end, so discoveries, delta*, and all counters are identical regardless
of thread count.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from math import floor

import numpy as np

from trajmine import kernels
from trajmine.distance import DistanceMode
from trajmine.model import Dataset, SubMatrixRef
from trajmine.stats import (
    ContingencyMargins,
    PermutationSet,
    calibrate_delta,
    pvalue_tables,
)

# Seeds per threshold refresh; a constant (never derived from the thread
# count) so that results do not depend on --threads.
_WAVE_SIZE = 32


@dataclass(frozen=True)
class MinerConfig:
    """Parameters of one mining run."""

    min_length: int = 5
    epsilon: float = 4.0
    permutations: int = 1000
    alpha: float = 0.05
    distance_mode: DistanceMode = DistanceMode.TIMESTEP_POINT_SET
    base_distance: str = "euclidean"
    prng_seed: int = 0
    threads: int = 1
    prune: bool = True

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "distance_mode", DistanceMode.parse(self.distance_mode)
        )
        if self.min_length < 1:
            raise ValueError("min_length must be at least 1")
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")
        if self.permutations < 1:
            raise ValueError("need at least one permutation")
        if not 0.0 < self.alpha < 1.0:
            raise ValueError("alpha must lie in (0, 1)")
        if self.threads < 1:
            raise ValueError("threads must be at least 1")
        kernels.metric_id(self.base_distance)


@dataclass(frozen=True)
class Node:
    """An anchor window with its eps-neighborhood (which includes itself)."""

    anchor: SubMatrixRef
    neighborhood: tuple[SubMatrixRef, ...]

    @property
    def support_ids(self) -> frozenset[str]:
        ids = {r.matrix_id for r in self.neighborhood}
        ids.add(self.anchor.matrix_id)
        return frozenset(ids)


@dataclass(frozen=True)
class Discovery:
    matrix_id: str
    start: int
    end: int
    p_value: float
    support_pos: int
    support: int
    neighborhood_size: int


@dataclass
class MiningCounters:
    seeds: int = 0
    nodes_visited: int = 0
    nodes_pruned: int = 0
    distance_evals: int = 0


@dataclass(frozen=True)
class NodeRecord:
    """One unpruned node of the traversal (kept when collect_nodes=True)."""

    matrix_id: str
    start: int
    end: int
    support: int
    support_pos: int
    p_value: float
    neighborhood_size: int
    neighbors: tuple[SubMatrixRef, ...] | None = None


@dataclass
class MiningResult:
    discoveries: list[Discovery]
    delta_star: float
    config: MinerConfig
    margins: ContingencyMargins
    merged_windows: dict[str, list[tuple[int, int]]]
    counters: MiningCounters
    prng: str
    backend: str
    p_min: np.ndarray = field(repr=False, default=None)
    nodes: list[NodeRecord] | None = field(repr=False, default=None)


def enumerate_seeds(dataset: Dataset, min_length: int) -> list[SubMatrixRef]:
    """Every window of length exactly min_length; shorter matrices contribute none."""
    if min_length < 1:
        raise ValueError("min_length must be at least 1")
    refs = []
    for m in dataset:
        for s in range(m.n_frames - min_length + 1):
            refs.append(SubMatrixRef(m.attack_id, s, s + min_length - 1))
    return refs


def seed_neighborhood(
    dataset: Dataset,
    anchor: SubMatrixRef,
    epsilon: float,
    mode: DistanceMode | str = DistanceMode.TIMESTEP_POINT_SET,
    base_distance: str = "euclidean",
) -> list[SubMatrixRef]:
    """All same-length windows over the whole dataset within epsilon of the
    anchor (the anchor itself is always a member, at distance 0)."""
    mode = DistanceMode.parse(mode)
    metric = kernels.metric_id(base_distance)
    am = dataset.matrix(anchor.matrix_id)
    if anchor.end >= am.n_frames:
        raise IndexError(
            f"anchor window end {anchor.end} out of range for "
            f"{anchor.matrix_id!r} of length {am.n_frames}"
        )
    af = am.flat()
    length = anchor.length
    out = []
    for m in dataset:
        if m.n_frames < length:
            continue
        starts = np.arange(m.n_frames - length + 1, dtype=np.int64)
        f = m.flat()
        if mode is DistanceMode.TIMESTEP_POINT_SET:
            mask = kernels.filter_within(
                af, anchor.start, anchor.end, f, starts, length, metric, epsilon
            )
        else:
            mask = kernels.nested_filter_within(
                af, anchor.start, anchor.end, f, starts, length,
                m.n_agents, metric, epsilon,
            )
        for t in starts[mask]:
            out.append(SubMatrixRef(m.attack_id, int(t), int(t) + length - 1))
    return out


def extend_node(
    dataset: Dataset,
    node: Node,
    epsilon: float,
    mode: DistanceMode | str = DistanceMode.TIMESTEP_POINT_SET,
    base_distance: str = "euclidean",
) -> Node | None:
    """Grow anchor and neighbors by one frame, keeping only parent neighbors
    that can extend and still lie within epsilon. None when the anchor is at
    its matrix boundary."""
    mode = DistanceMode.parse(mode)
    metric = kernels.metric_id(base_distance)
    am = dataset.matrix(node.anchor.matrix_id)
    if node.anchor.end + 1 >= am.n_frames:
        return None
    anchor = SubMatrixRef(node.anchor.matrix_id, node.anchor.start, node.anchor.end + 1)
    af = am.flat()
    kept = []
    for ref in node.neighborhood:
        m = dataset.matrix(ref.matrix_id)
        if ref.end + 1 >= m.n_frames:
            continue
        f = m.flat()
        if mode is DistanceMode.TIMESTEP_POINT_SET:
            ok = kernels.window_within(
                af, anchor.start, anchor.end, f, ref.start, ref.end + 1,
                metric, epsilon,
            )
        else:
            ok = kernels.nested_window_within(
                af, anchor.start, anchor.end, f, ref.start, ref.end + 1,
                m.n_agents, metric, epsilon,
            )
        if ok:
            kept.append(SubMatrixRef(ref.matrix_id, ref.start, ref.end + 1))
    return Node(anchor=anchor, neighborhood=tuple(kept))


@dataclass
class _SeedOutcome:
    p_min: np.ndarray | None
    records: list
    visited: int
    pruned: int
    dist_evals: int


def mine(dataset: Dataset, config: MinerConfig, *, collect_nodes: bool = False) -> MiningResult:
    """Run the full mining pass; deterministic given (dataset, config)."""
    if len(dataset) == 0:
        raise ValueError("empty dataset")
    n = len(dataset)
    if len(set(dataset.ids)) != n:
        raise ValueError("dataset has duplicate attack ids")
    n1 = dataset.n_pos
    if n1 == 0 or n1 == n:
        raise ValueError("single-class dataset: mining needs both +1 and -1 labels")

    mode = config.distance_mode
    metric = kernels.metric_id(config.base_distance)
    length0 = config.min_length
    eps = config.epsilon
    b_count = config.permutations
    n_agents = len(dataset.roles)
    nested = mode is DistanceMode.NESTED_AGENT

    mats = dataset.matrices
    lengths = np.array([m.n_frames for m in mats], dtype=np.int64)
    offsets = np.zeros(n + 1, dtype=np.int64)
    offsets[1:] = np.cumsum(lengths)
    big = np.ascontiguousarray(np.concatenate([m.flat() for m in mats], axis=0))

    margins = ContingencyMargins(n, n1)
    pvals, envelope = pvalue_tables(margins)
    g_pos = np.array([m.label == 1 for m in mats])
    perms = PermutationSet.generate([m.label for m in mats], b_count, config.prng_seed)
    p_pos = perms.positives
    k_index = min(floor(config.alpha * b_count + 1e-9) + 1, b_count)

    # all length-L windows, in dataset order; these are both the seed list
    # and the candidate universe for seed neighborhoods
    parts_mat, parts_loc = [], []
    for i in range(n):
        cnt = int(lengths[i]) - length0 + 1
        if cnt > 0:
            parts_mat.append(np.full(cnt, i, dtype=np.int64))
            parts_loc.append(np.arange(cnt, dtype=np.int64))
    if parts_mat:
        win_mat = np.concatenate(parts_mat)
        win_loc = np.concatenate(parts_loc)
    else:
        win_mat = np.zeros(0, dtype=np.int64)
        win_loc = np.zeros(0, dtype=np.int64)
    win_global = offsets[win_mat] + win_loc

    def _filter(anchor_lo: int, anchor_hi: int, starts: np.ndarray, wlen: int) -> np.ndarray:
        if nested:
            return kernels.nested_filter_within(
                big, anchor_lo, anchor_hi, big, starts, wlen, n_agents, metric, eps
            )
        return kernels.filter_within(
            big, anchor_lo, anchor_hi, big, starts, wlen, metric, eps
        )

    ids = dataset.ids

    def _run_seed(seed_idx: int, threshold: float) -> _SeedOutcome:
        i = int(win_mat[seed_idx])
        s = int(win_loc[seed_idx])
        anchor_lo = int(offsets[i]) + s
        wlen = length0
        e_local = s + length0 - 1

        mask = _filter(anchor_lo, anchor_lo + wlen - 1, win_global, wlen)
        dist_evals = int(win_global.size)
        cand_mat = win_mat[mask]
        cand_loc = win_loc[mask]

        local_pmin: np.ndarray | None = None
        records = []
        visited = 0
        pruned = 0
        while True:
            uniq = np.unique(cand_mat)
            x = int(uniq.size)
            bound = envelope[x]
            if config.prune and bound >= threshold:
                pruned += 1
                break
            visited += 1
            a_true = int(g_pos[uniq].sum())
            p_true = float(pvals[x, a_true])
            a_perm = p_pos[:, uniq].sum(axis=1)
            pv = pvals[x, a_perm]
            local_pmin = pv.copy() if local_pmin is None else np.minimum(local_pmin, pv)
            neighbors = None
            if collect_nodes:
                neighbors = tuple(
                    SubMatrixRef(ids[int(mi)], int(t), int(t) + wlen - 1)
                    for mi, t in zip(cand_mat, cand_loc)
                )
            records.append(
                NodeRecord(
                    matrix_id=ids[i],
                    start=s,
                    end=e_local,
                    support=x,
                    support_pos=a_true,
                    p_value=p_true,
                    neighborhood_size=int(cand_mat.size),
                    neighbors=neighbors,
                )
            )
            if e_local + 1 >= int(lengths[i]):
                break
            extendable = cand_loc + wlen < lengths[cand_mat]
            ext_mat = cand_mat[extendable]
            ext_loc = cand_loc[extendable]
            starts = offsets[ext_mat] + ext_loc
            mask = _filter(anchor_lo, anchor_lo + wlen, starts, wlen + 1)
            dist_evals += int(starts.size)
            cand_mat = ext_mat[mask]
            cand_loc = ext_loc[mask]
            wlen += 1
            e_local += 1
        return _SeedOutcome(local_pmin, records, visited, pruned, dist_evals)

    p_min = np.full(b_count, config.alpha)
    counters = MiningCounters(seeds=int(win_mat.size))
    all_records: list[NodeRecord] = []

    executor = ThreadPoolExecutor(config.threads) if config.threads > 1 else None
    try:
        for wave_lo in range(0, int(win_mat.size), _WAVE_SIZE):
            wave = range(wave_lo, min(wave_lo + _WAVE_SIZE, int(win_mat.size)))
            threshold = float(np.partition(p_min, k_index - 1)[k_index - 1])
            if executor is None:
                outcomes = [_run_seed(ix, threshold) for ix in wave]
            else:
                outcomes = list(executor.map(lambda ix: _run_seed(ix, threshold), wave))
            for out in outcomes:
                if out.p_min is not None:
                    np.minimum(p_min, out.p_min, out=p_min)
                all_records.extend(out.records)
                counters.nodes_visited += out.visited
                counters.nodes_pruned += out.pruned
                counters.distance_evals += out.dist_evals
    finally:
        if executor is not None:
            executor.shutdown()

    delta_star = calibrate_delta(p_min, config.alpha, b_count)
    found = [r for r in all_records if r.p_value < delta_star]
    found.sort(key=lambda r: (r.p_value, r.matrix_id, r.start))
    discoveries = [
        Discovery(
            matrix_id=r.matrix_id,
            start=r.start,
            end=r.end,
            p_value=r.p_value,
            support_pos=r.support_pos,
            support=r.support,
            neighborhood_size=r.neighborhood_size,
        )
        for r in found
    ]

    merged: dict[str, list[tuple[int, int]]] = {}
    for matrix_id in ids:
        windows = sorted(
            (d.start, d.end) for d in discoveries if d.matrix_id == matrix_id
        )
        if not windows:
            continue
        runs = [list(windows[0])]
        for s, e in windows[1:]:
            if s <= runs[-1][1] + 1:
                runs[-1][1] = max(runs[-1][1], e)
            else:
                runs.append([s, e])
        merged[matrix_id] = [(s, e) for s, e in runs]

    return MiningResult(
        discoveries=discoveries,
        delta_star=delta_star,
        config=config,
        margins=margins,
        merged_windows=merged,
        counters=counters,
        prng=perms.prng,
        backend=kernels.BACKEND,
        p_min=p_min,
        nodes=all_records if collect_nodes else None,
    )
