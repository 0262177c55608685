"""Exact Fisher tests, attainable-p bounds, label permutation, and the
permutation-quantile threshold that controls family-wise error.

The 2x2 table for a candidate window counts supporting vs non-supporting
matrices against the +1/-1 labels with fixed margins, so under the null the
number of positive supporters is hypergeometric. The two-sided p-value is the
point-probability form: the sum of all table probabilities no larger than the
observed one. All point masses share the denominator C(N, x), so p-values are
computed from exact integer weights and converted to float once at the end.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, floor
from typing import Iterable, Mapping

import numpy as np

PRNG_NAME = "pcg64"


@dataclass(frozen=True)
class ContingencyMargins:
    """Fixed class margins of one mining run: N matrices, n_pos labelled +1."""

    n_total: int
    n_pos: int

    def __post_init__(self) -> None:
        if not 0 <= self.n_pos <= self.n_total:
            raise ValueError(
                f"invalid margins: n_pos={self.n_pos}, n_total={self.n_total}"
            )

    @property
    def n_neg(self) -> int:
        return self.n_total - self.n_pos


def _support_range(x: int, margins: ContingencyMargins) -> tuple[int, int]:
    return max(0, x - margins.n_neg), min(x, margins.n_pos)


def _weights(x: int, margins: ContingencyMargins) -> tuple[list[int], int, int]:
    """Integer point-mass numerators over achievable a, plus (a_lo, denom)."""
    lo, hi = _support_range(x, margins)
    n1, n0 = margins.n_pos, margins.n_neg
    w = [comb(n1, a) * comb(n0, x - a) for a in range(lo, hi + 1)]
    return w, lo, comb(margins.n_total, x)


def fet_pvalue_exact(a: int, x: int, margins: ContingencyMargins) -> Fraction:
    """Two-sided Fisher exact p-value as an exact rational."""
    if not 0 <= x <= margins.n_total:
        raise ValueError(f"support {x} outside [0, {margins.n_total}]")
    lo, hi = _support_range(x, margins)
    if not lo <= a <= hi:
        raise ValueError(
            f"infeasible table: a={a} not in [{lo}, {hi}] for x={x}, "
            f"margins ({margins.n_total}, {margins.n_pos})"
        )
    w, w_lo, denom = _weights(x, margins)
    target = w[a - w_lo]
    return Fraction(sum(wa for wa in w if wa <= target), denom)


def fet_pvalue(a: int, x: int, margins: ContingencyMargins) -> float:
    return float(fet_pvalue_exact(a, x, margins))


def min_attainable_p_exact(x: int, margins: ContingencyMargins) -> Fraction:
    """Smallest p-value achievable at support x given the margins."""
    if not 0 <= x <= margins.n_total:
        raise ValueError(f"support {x} outside [0, {margins.n_total}]")
    w, _, denom = _weights(x, margins)
    wmin = min(w)
    # the minimum p belongs to a table of minimal mass
    return Fraction(sum(wa for wa in w if wa <= wmin), denom)


def min_attainable_p(x: int, margins: ContingencyMargins) -> float:
    return float(min_attainable_p_exact(x, margins))


def envelope_bound(x: int, margins: ContingencyMargins) -> float:
    """Lower bound on the p-value of a node with support x and of every
    descendant: min of the attainable-p curve over supports 1..x.

    The raw attainable-p curve is not monotone (it returns to 1 at x = N),
    and extensions only shrink support, so the prefix-min envelope is the
    valid subtree pruning bound.
    """
    if not 1 <= x <= margins.n_total:
        raise ValueError(f"support {x} outside [1, {margins.n_total}]")
    return float(min(min_attainable_p_exact(xp, margins) for xp in range(1, x + 1)))


def pvalue_tables(margins: ContingencyMargins) -> tuple[np.ndarray, np.ndarray]:
    """Dense float tables for the mining loop.

    Returns (pvals, envelope): pvals[x, a] is the two-sided p-value (NaN for
    infeasible a), envelope[x] the prefix-min attainable p over supports
    1..x (envelope[0] is NaN; support is never 0 in mining).
    """
    n, n1 = margins.n_total, margins.n_pos
    pvals = np.full((n + 1, n1 + 1), np.nan)
    psi = np.ones(n + 1)
    for x in range(n + 1):
        w, lo, denom = _weights(x, margins)
        order = sorted(range(len(w)), key=w.__getitem__)
        cum: list[Fraction] = [Fraction(0)] * len(w)
        run = 0
        i = 0
        while i < len(order):
            j = i
            while j < len(order) and w[order[j]] == w[order[i]]:
                run += w[order[j]]
                j += 1
            p = Fraction(run, denom)
            for k in range(i, j):
                cum[order[k]] = p
            i = j
        for a_idx, p in enumerate(cum):
            pvals[x, lo + a_idx] = float(p)
        psi[x] = float(min(cum))
    envelope = np.full(n + 1, np.nan)
    best = np.inf
    for x in range(1, n + 1):
        best = min(best, psi[x])
        envelope[x] = best
    return pvals, envelope


def permuted_support_pvalue(
    support_ids: Iterable[str],
    perm_labels: Mapping[str, int],
    margins: ContingencyMargins,
) -> float:
    """Fisher p-value of a support set under one permuted labelling."""
    ids = set(support_ids)
    a = 0
    for matrix_id in ids:
        if matrix_id not in perm_labels:
            raise KeyError(f"unknown matrix id {matrix_id!r}")
        if perm_labels[matrix_id] == 1:
            a += 1
    return fet_pvalue(a, len(ids), margins)


@dataclass(frozen=True)
class PermutationSet:
    """B uniform shuffles of the label vector, reproducible from the seed."""

    count: int
    seed: int
    labels: np.ndarray = field(repr=False)  # (count, N) int8 of +1/-1
    prng: str = PRNG_NAME

    def __post_init__(self) -> None:
        arr = np.asarray(self.labels, dtype=np.int8)
        if arr.ndim != 2 or arr.shape[0] != self.count:
            raise ValueError("labels must be a (count, N) matrix")
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "labels", arr)

    @classmethod
    def generate(cls, labels: Iterable[int], count: int, seed: int) -> "PermutationSet":
        base = np.asarray(list(labels), dtype=np.int8)
        if count < 1:
            raise ValueError("need at least one permutation")
        rng = np.random.Generator(np.random.PCG64(seed))
        rows = np.stack([rng.permutation(base) for _ in range(count)])
        return cls(count=count, seed=seed, labels=rows)

    @property
    def positives(self) -> np.ndarray:
        """(count, N) boolean matrix of permuted +1 positions."""
        return self.labels == 1


def calibrate_delta(p_min, alpha: float, count: int | None = None) -> float:
    """Adjusted significance threshold from the permutation minimum p-values.

    Sort the B per-permutation minima ascending; the reference order
    statistic sits at index floor(alpha*B)+1 (1-based), and the threshold is
    the largest value strictly below it. With nothing strictly below, no
    window can be called significant and 0 is returned.
    """
    values = np.sort(np.asarray(p_min, dtype=np.float64))
    b = values.size
    if count is not None and count != b:
        raise ValueError(f"expected {count} entries, got {b}")
    if b == 0:
        raise ValueError("empty minimum p-value vector")
    # the +1e-9 nudge guards float artifacts like 0.29*100 = 28.999999999999996
    k = min(floor(alpha * b + 1e-9) + 1, b)
    threshold = values[k - 1]
    below = values[values < threshold]
    return float(below[-1]) if below.size else 0.0
