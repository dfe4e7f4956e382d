"""Pivot selection and per-block partition boundaries.

All functions here work on plain key arrays (the driver passes strided
views of a record array's key field). Three ways to pick the cut values
between partitions:

* ``psrs_select``: regular samples from every sorted block, pivots at
  regular intervals of the sorted sample pool. Cheap, but duplicate-heavy
  inputs can funnel almost everything into one partition.
* ``random_sample_select``: seeded uniform samples from unsorted blocks,
  otherwise like the above.
* ``pses_select``: exact boundary search. Each cut lands on a global rank
  ``floor(k * N / n_partitions)``, and a tie count says how many copies of
  the pivot value the boundary consumes, so partition sizes always come
  out within one element of each other.

``partition_blocks`` turns a plan into per-block cut offsets.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

__all__ = [
    "PivotPlan",
    "psrs_select",
    "random_sample_select",
    "pses_select",
    "partition_blocks",
    "partition_sizes",
]


@dataclass(frozen=True)
class PivotPlan:
    """Ascending cut values; tie_counts present only for exact splitting.

    tie_counts[k] is how many elements equal to pivots[k] belong below
    boundary k, summed across all blocks.
    """

    pivots: np.ndarray
    tie_counts: np.ndarray | None = None

    def __post_init__(self) -> None:
        if self.tie_counts is not None and len(self.tie_counts) != len(self.pivots):
            raise ValueError("tie_counts must match pivots in length")
        if len(self.pivots) > 1 and np.any(self.pivots[1:] < self.pivots[:-1]):
            raise ValueError("pivots must be non-decreasing")


def _pick_regular(sorted_samples: np.ndarray, n_partitions: int) -> np.ndarray:
    # pivot j sits at the ceiling-spaced index ((j+1)*m - 1) // n_partitions
    m = len(sorted_samples)
    idx = [((j + 1) * m - 1) // n_partitions for j in range(n_partitions - 1)]
    return sorted_samples[idx].copy()


def _empty_plan(dtype, with_ties: bool) -> PivotPlan:
    ties = np.zeros(0, np.int64) if with_ties else None
    return PivotPlan(np.empty(0, dtype), ties)


def psrs_select(sorted_blocks: Sequence[np.ndarray], n_partitions: int) -> PivotPlan:
    """Regular-sampling pivots from sorted blocks.

    Each block of length L contributes samples at indices
    ((j+1)*L - 1) // n_partitions for j = 0..n_partitions-2; the pooled
    samples are sorted and pivots picked by the same interval rule.
    """
    if n_partitions < 1:
        raise ValueError("n_partitions must be >= 1")
    dtype = sorted_blocks[0].dtype if sorted_blocks else np.dtype(np.uint32)
    samples = []
    for block in sorted_blocks:
        length = len(block)
        if length == 0:
            continue
        idx = [((j + 1) * length - 1) // n_partitions for j in range(n_partitions - 1)]
        samples.append(block[idx])
    if n_partitions == 1 or not samples:
        return _empty_plan(dtype, with_ties=False)
    pool = np.sort(np.concatenate(samples))
    return PivotPlan(_pick_regular(pool, n_partitions))


def random_sample_select(
    blocks: Sequence[np.ndarray], n_partitions: int, oversample: int = 32, seed: int = 0
) -> PivotPlan:
    """Pivots from seeded uniform samples; blocks need not be sorted."""
    if n_partitions < 1:
        raise ValueError("n_partitions must be >= 1")
    if oversample < 1:
        raise ValueError("oversample must be >= 1")
    dtype = blocks[0].dtype if blocks else np.dtype(np.uint32)
    rng = np.random.default_rng(seed)
    per_block = oversample * n_partitions
    samples = []
    for block in blocks:
        if len(block) == 0:
            continue
        samples.append(block[rng.integers(0, len(block), size=per_block)])
    if n_partitions == 1 or not samples:
        return _empty_plan(dtype, with_ties=False)
    pool = np.sort(np.concatenate(samples))
    return PivotPlan(_pick_regular(pool, n_partitions))


def _select_boundary(sorted_blocks: Sequence[np.ndarray], target_rank: int):
    """Find (pivot, tie_count) such that the boundary at `target_rank`
    consumes every element below the pivot plus tie_count copies of it.

    Classic multisequence selection: keep a candidate index window per
    block, probe the middle of the widest window, and count the probe's
    global rank with per-block binary searches. The window product shrinks
    every round, and the element sitting at the target rank can never be
    excluded, so this terminates at a valid cut.
    """
    n_blocks = len(sorted_blocks)
    lo = [0] * n_blocks
    hi = [len(b) for b in sorted_blocks]
    while True:
        widest = -1
        width = 0
        for b in range(n_blocks):
            w = hi[b] - lo[b]
            if w > width:
                width = w
                widest = b
        if widest < 0:
            raise RuntimeError("selection windows emptied before a cut was found")
        block = sorted_blocks[widest]
        probe = block[(lo[widest] + hi[widest]) // 2]
        less = 0
        leq = 0
        for b in range(n_blocks):
            less += int(np.searchsorted(sorted_blocks[b], probe, side="left"))
            leq += int(np.searchsorted(sorted_blocks[b], probe, side="right"))
        if less > target_rank:
            # every valid cut value is below the probe
            for b in range(n_blocks):
                cl = int(np.searchsorted(sorted_blocks[b], probe, side="left"))
                if cl < hi[b]:
                    hi[b] = max(cl, lo[b])
        elif leq < target_rank:
            for b in range(n_blocks):
                cr = int(np.searchsorted(sorted_blocks[b], probe, side="right"))
                if cr > lo[b]:
                    lo[b] = min(cr, hi[b])
        else:
            return probe, target_rank - less


def pses_select(
    sorted_blocks: Sequence[np.ndarray], n_partitions: int, pool=None
) -> PivotPlan:
    """Exact-splitting pivots: boundary k lands on global rank
    floor(k * N / n_partitions).

    The per-boundary searches are independent over read-only blocks; pass
    a concurrent.futures executor as `pool` to run them concurrently.
    """
    if n_partitions < 1:
        raise ValueError("n_partitions must be >= 1")
    total = sum(len(b) for b in sorted_blocks)
    dtype = sorted_blocks[0].dtype if sorted_blocks else np.dtype(np.uint32)
    if n_partitions == 1 or total == 0:
        return _empty_plan(dtype, with_ties=True)
    ranks = [k * total // n_partitions for k in range(1, n_partitions)]
    if pool is None:
        found = [_select_boundary(sorted_blocks, r) for r in ranks]
    else:
        found = list(pool.map(lambda r: _select_boundary(sorted_blocks, r), ranks))
    pivots = np.array([f[0] for f in found], dtype=dtype)
    ties = np.array([f[1] for f in found], dtype=np.int64)
    return PivotPlan(pivots, ties)


def partition_blocks(sorted_blocks: Sequence[np.ndarray], plan: PivotPlan) -> np.ndarray:
    """Cut offsets per block: an int64 matrix of shape
    (n_blocks, n_pivots + 2) whose row b is 0 <= ... <= len(block b);
    partition k of block b is the slice [bounds[b, k], bounds[b, k+1]).

    Without tie counts, cut k is the rank of the first element greater
    than pivots[k] (so a partition keeps everything <= its upper pivot).
    With tie counts, cut k takes every element below pivots[k] plus
    exactly tie_counts[k] equal copies, handed out block 0 first.
    """
    n_blocks = len(sorted_blocks)
    n_pivots = len(plan.pivots)
    bounds = np.zeros((n_blocks, n_pivots + 2), dtype=np.int64)
    for b, block in enumerate(sorted_blocks):
        bounds[b, -1] = len(block)
    if n_pivots == 0:
        return bounds
    if plan.tie_counts is None:
        for b, block in enumerate(sorted_blocks):
            bounds[b, 1:-1] = np.searchsorted(block, plan.pivots, side="right")
        return bounds
    less = np.zeros((n_blocks, n_pivots), dtype=np.int64)
    equal = np.zeros((n_blocks, n_pivots), dtype=np.int64)
    for b, block in enumerate(sorted_blocks):
        left = np.searchsorted(block, plan.pivots, side="left")
        right = np.searchsorted(block, plan.pivots, side="right")
        less[b] = left
        equal[b] = right - left
    for k in range(n_pivots):
        remaining = int(plan.tie_counts[k])
        if remaining < 0 or remaining > int(equal[:, k].sum()):
            raise ValueError(
                f"tie count {remaining} at boundary {k} exceeds the "
                f"{int(equal[:, k].sum())} available equal elements"
            )
        for b in range(n_blocks):
            take = min(remaining, int(equal[b, k]))
            bounds[b, k + 1] = less[b, k] + take
            remaining -= take
    return bounds


def partition_sizes(bounds: np.ndarray) -> np.ndarray:
    """Global element count of each partition (column sums of the cuts)."""
    return np.diff(bounds, axis=1).sum(axis=0)
