"""Pure-NumPy distance kernels (fallback backend).

Mirrors trajmine._distkernels, the compiled extension. A matrix is an
(n_frames, 2*K) C-contiguous float64 array whose row t concatenates the
role-ordered (x, y) pairs of frame t; windows are inclusive [s, e] row
ranges. Results can differ from the compiled backend only in the last
floating-point ulp (summation order).
"""

from __future__ import annotations

import numpy as np

BACKEND_NAME = "python"

EUCLIDEAN = 0
MANHATTAN = 1
CHEBYSHEV = 2

_CHUNK = 256


def _reduce(diff: np.ndarray, metric: int) -> np.ndarray:
    # diff has the coordinate axis last
    if metric == EUCLIDEAN:
        return np.sqrt(np.einsum("...k,...k->...", diff, diff))
    if metric == MANHATTAN:
        return np.abs(diff).sum(axis=-1)
    if metric == CHEBYSHEV:
        return np.abs(diff).max(axis=-1)
    raise ValueError(f"unknown metric id {metric}")


def _pair_dists(x: np.ndarray, y: np.ndarray, metric: int) -> np.ndarray:
    return _reduce(x[:, None, :] - y[None, :, :], metric)


def window_distance(a, s1, e1, b, s2, e2, metric):
    """Symmetric point-set Hausdorff distance between two frame windows."""
    dm = _pair_dists(a[s1 : e1 + 1], b[s2 : e2 + 1], metric)
    return float(max(dm.min(axis=1).max(), dm.min(axis=0).max()))


def window_within(a, s1, e1, b, s2, e2, metric, eps):
    return window_distance(a, s1, e1, b, s2, e2, metric) <= eps


def filter_within(a, s1, e1, b, starts, length, metric, eps):
    """Boolean mask: which candidate windows of ``b`` lie within eps of the anchor."""
    starts = np.asarray(starts, dtype=np.int64)
    out = np.zeros(starts.size, dtype=bool)
    if starts.size == 0:
        return out
    anchor = a[s1 : e1 + 1]
    offs = np.arange(length)
    for lo in range(0, starts.size, _CHUNK):
        sel = starts[lo : lo + _CHUNK]
        cand = b[sel[:, None] + offs[None, :]]  # (c, length, dim)
        dm = _reduce(anchor[None, :, None, :] - cand[:, None, :, :], metric)
        out[lo : lo + _CHUNK] = (dm.min(axis=2).max(axis=1) <= eps) & (
            dm.min(axis=1).max(axis=1) <= eps
        )
    return out


def _agent_rows(w: np.ndarray, n_agents: int) -> np.ndarray:
    # (length, 2K) window -> (K, length*2) flattened per-agent sequences
    return w.reshape(w.shape[0], n_agents, 2).transpose(1, 0, 2).reshape(n_agents, -1)


def nested_window_distance(a, s1, e1, b, s2, e2, n_agents, metric):
    """Agent-nested Hausdorff: outer max-min over flattened agent sequences.

    Both windows must have the same length; the inner distance is the flat
    norm over the aligned coordinate sequences of an agent pair.
    """
    if e1 - s1 != e2 - s2:
        raise ValueError("nested kernel requires equal window lengths")
    am = _agent_rows(a[s1 : e1 + 1], n_agents)
    bm = _agent_rows(b[s2 : e2 + 1], n_agents)
    dm = _pair_dists(am, bm, metric)
    return float(max(dm.min(axis=1).max(), dm.min(axis=0).max()))


def nested_window_within(a, s1, e1, b, s2, e2, n_agents, metric, eps):
    return nested_window_distance(a, s1, e1, b, s2, e2, n_agents, metric) <= eps


def nested_filter_within(a, s1, e1, b, starts, length, n_agents, metric, eps):
    starts = np.asarray(starts, dtype=np.int64)
    out = np.zeros(starts.size, dtype=bool)
    if starts.size == 0:
        return out
    am = _agent_rows(a[s1 : e1 + 1], n_agents)  # (K, length*2)
    offs = np.arange(length)
    for lo in range(0, starts.size, _CHUNK):
        sel = starts[lo : lo + _CHUNK]
        cand = b[sel[:, None] + offs[None, :]]  # (c, length, 2K)
        cm = (
            cand.reshape(cand.shape[0], length, n_agents, 2)
            .transpose(0, 2, 1, 3)
            .reshape(cand.shape[0], n_agents, -1)
        )
        dm = _reduce(am[None, :, None, :] - cm[:, None, :, :], metric)
        out[lo : lo + _CHUNK] = (dm.min(axis=2).max(axis=1) <= eps) & (
            dm.min(axis=1).max(axis=1) <= eps
        )
    return out
