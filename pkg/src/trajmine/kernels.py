"""Distance kernel backend selection.

The compiled extension (trajmine._distkernels) is preferred when importable;
set TRAJMINE_PURE_PYTHON=1 before import to force the NumPy fallback. Both
backends expose the same functions over (n_frames, 2*K) flattened matrices;
see trajmine._kernels_py for the reference semantics.
"""

from __future__ import annotations

import os

from trajmine import _kernels_py

EUCLIDEAN = _kernels_py.EUCLIDEAN
MANHATTAN = _kernels_py.MANHATTAN
CHEBYSHEV = _kernels_py.CHEBYSHEV

METRIC_IDS = {"euclidean": EUCLIDEAN, "manhattan": MANHATTAN, "chebyshev": CHEBYSHEV}

_impl = None
if not os.environ.get("TRAJMINE_PURE_PYTHON"):
    try:
        from trajmine import _distkernels as _impl  # type: ignore[attr-defined]
    except ImportError:
        _impl = None
if _impl is None:
    _impl = _kernels_py

BACKEND: str = _impl.BACKEND_NAME

window_distance = _impl.window_distance
window_within = _impl.window_within
filter_within = _impl.filter_within
nested_window_distance = _impl.nested_window_distance
nested_window_within = _impl.nested_window_within
nested_filter_within = _impl.nested_filter_within


def metric_id(base_distance: str) -> int:
    try:
        return METRIC_IDS[base_distance]
    except KeyError:
        raise ValueError(
            f"unknown base distance {base_distance!r}; "
            f"expected one of {sorted(METRIC_IDS)}"
        ) from None


def backends() -> dict[str, object]:
    """All importable backends, keyed by name (used by the benchmark)."""
    found: dict[str, object] = {"python": _kernels_py}
    try:
        from trajmine import _distkernels  # type: ignore[attr-defined]

        found["cython"] = _distkernels
    except ImportError:
        pass
    return found
