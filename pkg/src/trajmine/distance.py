"""Point, point-set, and sub-matrix distances.

Two sub-matrix distance modes are supported:

* ``TIMESTEP_POINT_SET`` (default): each frame of a window becomes one point
  in 2K-dimensional space (role-ordered coordinate pairs concatenated), and
  the distance is the symmetric Hausdorff distance between the two frame
  point sets. Cross-agent alignment within a frame is preserved.
* ``NESTED_AGENT``: outer max-min over the K agent sub-trajectories of each
  window. The inner distance between two agent sub-trajectories is the flat
  norm of their aligned coordinate sequences when the windows have equal
  length, and the Hausdorff distance over their 2-D point sets otherwise.

Both modes are symmetric, zero on identical inputs, and defined for windows
with different numbers of frames.
"""

from __future__ import annotations

from enum import Enum
from typing import Callable

import numpy as np

from trajmine import kernels
from trajmine.model import SubMatrixRef, TrajectoryMatrix


class DistanceMode(Enum):
    TIMESTEP_POINT_SET = "timestep"
    NESTED_AGENT = "nested"

    @classmethod
    def parse(cls, value: "DistanceMode | str") -> "DistanceMode":
        if isinstance(value, cls):
            return value
        for mode in cls:
            if mode.value == value:
                return mode
        raise ValueError(
            f"unknown distance mode {value!r}; expected one of "
            f"{[m.value for m in cls]}"
        )


def _as_vectors(a, b) -> tuple[np.ndarray, np.ndarray]:
    av = np.asarray(a, dtype=np.float64).ravel()
    bv = np.asarray(b, dtype=np.float64).ravel()
    if av.shape != bv.shape:
        raise ValueError(f"shape mismatch: {av.shape} vs {bv.shape}")
    return av, bv


def euclidean(a, b) -> float:
    """L2 distance between two equal-dimension points or flat vectors."""
    av, bv = _as_vectors(a, b)
    d = av - bv
    return float(np.sqrt(np.dot(d, d)))


def manhattan(a, b) -> float:
    av, bv = _as_vectors(a, b)
    return float(np.abs(av - bv).sum())


def chebyshev(a, b) -> float:
    av, bv = _as_vectors(a, b)
    return float(np.abs(av - bv).max())


BASE_DISTANCES: dict[str, Callable] = {
    "euclidean": euclidean,
    "manhattan": manhattan,
    "chebyshev": chebyshev,
}

_METRIC_OF_CALLABLE = {
    euclidean: kernels.EUCLIDEAN,
    manhattan: kernels.MANHATTAN,
    chebyshev: kernels.CHEBYSHEV,
}


def _resolve_base(base) -> tuple[Callable, int | None]:
    """Map a base-distance name or callable to (callable, kernel metric id)."""
    if callable(base):
        return base, _METRIC_OF_CALLABLE.get(base)
    if base in BASE_DISTANCES:
        return BASE_DISTANCES[base], kernels.METRIC_IDS[base]
    raise ValueError(
        f"unknown base distance {base!r}; expected a callable or one of "
        f"{sorted(BASE_DISTANCES)}"
    )


def _point_array(points) -> np.ndarray:
    arr = np.asarray(points, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr.reshape(1, -1) if arr.size else arr.reshape(0, 0)
    if arr.ndim != 2 or arr.shape[0] == 0:
        raise ValueError("point set must be a non-empty (n, d) collection")
    return np.ascontiguousarray(arr)


def directed_hausdorff(a_points, b_points, base=euclidean) -> float:
    """max over a in A of min over b in B of base(a, b)."""
    a = _point_array(a_points)
    b = _point_array(b_points)
    if a.shape[1] != b.shape[1]:
        raise ValueError(f"point dimension mismatch: {a.shape[1]} vs {b.shape[1]}")
    fn, metric = _resolve_base(base)
    if metric is not None:
        return float(_kernel_directed(a, b, metric))
    worst = 0.0
    for pa in a:
        best = min(fn(pa, pb) for pb in b)
        if best > worst:
            worst = best
    return worst


def _kernel_directed(a: np.ndarray, b: np.ndarray, metric: int) -> float:
    diff = a[:, None, :] - b[None, :, :]
    if metric == kernels.EUCLIDEAN:
        dm = np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))
    elif metric == kernels.MANHATTAN:
        dm = np.abs(diff).sum(axis=2)
    else:
        dm = np.abs(diff).max(axis=2)
    return dm.min(axis=1).max()


def hausdorff(a_points, b_points, base=euclidean) -> float:
    """Symmetric Hausdorff distance: max of the two directed distances."""
    return max(
        directed_hausdorff(a_points, b_points, base),
        directed_hausdorff(b_points, a_points, base),
    )


def _window_flat(matrix: TrajectoryMatrix, ref: SubMatrixRef) -> np.ndarray:
    if ref.matrix_id != matrix.attack_id:
        raise ValueError(
            f"ref addresses {ref.matrix_id!r} but matrix is {matrix.attack_id!r}"
        )
    if ref.end >= matrix.n_frames:
        raise IndexError(
            f"window end {ref.end} out of range for attack "
            f"{matrix.attack_id!r} of length {matrix.n_frames}"
        )
    return matrix.flat()


def submatrix_distance(
    m1: TrajectoryMatrix,
    r1: SubMatrixRef,
    m2: TrajectoryMatrix,
    r2: SubMatrixRef,
    mode: DistanceMode | str = DistanceMode.TIMESTEP_POINT_SET,
    base="euclidean",
) -> float:
    """Distance between two windows under the selected mode (see module doc)."""
    mode = DistanceMode.parse(mode)
    if m1.n_agents != m2.n_agents:
        raise ValueError(
            f"agent count mismatch: {m1.n_agents} vs {m2.n_agents}"
        )
    f1 = _window_flat(m1, r1)
    f2 = _window_flat(m2, r2)
    fn, metric = _resolve_base(base)

    if mode is DistanceMode.TIMESTEP_POINT_SET:
        if metric is None:
            return hausdorff(f1[r1.start : r1.end + 1], f2[r2.start : r2.end + 1], fn)
        return float(
            kernels.window_distance(f1, r1.start, r1.end, f2, r2.start, r2.end, metric)
        )

    if metric is None:
        raise ValueError("nested mode requires a named base distance")
    if r1.length == r2.length:
        return float(
            kernels.nested_window_distance(
                f1, r1.start, r1.end, f2, r2.start, r2.end, m1.n_agents, metric
            )
        )
    # Unequal lengths: the inner distance degrades to a 2-D point-set Hausdorff.
    w1 = m1.coords[r1.start : r1.end + 1].transpose(1, 0, 2)
    w2 = m2.coords[r2.start : r2.end + 1].transpose(1, 0, 2)
    d12 = max(min(hausdorff(a, b, fn) for b in w2) for a in w1)
    d21 = max(min(hausdorff(b, a, fn) for a in w1) for b in w2)
    return max(d12, d21)
