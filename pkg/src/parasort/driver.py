"""Four-step parallel samplesort over a thread team.

Step 1 sorts each block in place with the configured sequential sort.
Step 2 picks pivots (exact splitting may search boundaries concurrently).
Step 3 computes per-block cut offsets from the pivots.
Step 4 computes output offsets sequentially (the only serial section),
then merges each partition's per-block runs into its output slice.

Input and output are distinct arrays; the input is scratch afterwards.
Workers run compiled kernels that release the GIL, so a thread pool gives
real parallelism. With one thread every step runs inline.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import kmerge, pivots, seqsort
from .core import (
    KEY_FIELD,
    MergeStrategy,
    PivotStrategy,
    SamplesortConfig,
    key_view,
    make_block_layout,
)

__all__ = [
    "SortJob",
    "MergeTask",
    "parallel_samplesort",
    "sort",
    "sort_by_key",
    "thread_efficiency",
]


@dataclass
class SortJob:
    input: np.ndarray
    output: np.ndarray
    config: SamplesortConfig

    def __post_init__(self) -> None:
        if self.input.ndim != 1 or self.output.ndim != 1:
            raise ValueError("input and output must be one-dimensional")
        if len(self.input) != len(self.output):
            raise ValueError("input and output lengths differ")
        if self.input.dtype != self.output.dtype:
            raise ValueError("input and output dtypes differ")
        if len(self.input) and np.shares_memory(self.input, self.output):
            raise ValueError("input and output must be separate storage")


@dataclass(frozen=True)
class MergeTask:
    """One partition's merge: runs are absolute [start, end) slices of the
    block-sorted input, written to output[offset : offset + n_elements)."""

    partition_index: int
    run_starts: np.ndarray
    run_ends: np.ndarray
    output_offset: int
    n_elements: int


def _build_merge_tasks(layout, bounds: np.ndarray) -> list[MergeTask]:
    block_lo = np.array([lo for lo, _ in layout], dtype=np.int64)
    sizes = pivots.partition_sizes(bounds)
    offsets = np.zeros(len(sizes) + 1, dtype=np.int64)
    np.cumsum(sizes, out=offsets[1:])
    tasks = []
    for k in range(len(sizes)):
        starts = block_lo + bounds[:, k]
        ends = block_lo + bounds[:, k + 1]
        tasks.append(
            MergeTask(
                partition_index=k,
                run_starts=starts,
                run_ends=ends,
                output_offset=int(offsets[k]),
                n_elements=int(sizes[k]),
            )
        )
    return tasks


def _run_merge_task(task: MergeTask, src, src_keys, out, strategy: MergeStrategy) -> None:
    sl = slice(task.output_offset, task.output_offset + task.n_elements)
    if strategy is MergeStrategy.SELECTION_TREE:
        _, bad = kmerge._merge_tree(src, src_keys, task.run_starts, task.run_ends, out[sl])
    elif strategy is MergeStrategy.BINARY_HEAP:
        bad = kmerge._merge_heap(src, src_keys, task.run_starts, task.run_ends, out[sl])
    else:
        tmp = np.empty(1, out.dtype)
        stats = np.zeros(4, np.int64)
        kmerge._merge_sort_copy(
            src, task.run_starts, task.run_ends, out[sl], key_view(out[sl]), tmp, stats
        )
        bad = -1
    if bad >= 0:
        raise AssertionError(f"block {bad} left unsorted before merge of partition {task.partition_index}")


def parallel_samplesort(job: SortJob) -> None:
    """Sort job.input's records into job.output, ascending by key."""
    cfg = job.config
    src = job.input
    out = job.output
    n = len(src)
    if n == 0:
        return
    layout = make_block_layout(n, cfg.n_blocks)
    keys = key_view(src)
    kernel = seqsort.kernel_for(cfg.block_sort)

    def sort_block(rng):
        lo, hi = rng
        tmp = np.empty(1, src.dtype)
        stats = np.zeros(4, np.int64)
        kernel(src, keys, lo, hi, tmp, stats)

    block_keys = [keys[lo:hi] for lo, hi in layout]

    pool = ThreadPoolExecutor(max_workers=cfg.threads) if cfg.threads > 1 else None
    try:
        if pool is None:
            for rng in layout:
                sort_block(rng)
        else:
            list(pool.map(sort_block, layout))

        if cfg.pivot_strategy is PivotStrategy.PSRS:
            plan = pivots.psrs_select(block_keys, cfg.n_partitions)
        elif cfg.pivot_strategy is PivotStrategy.PSES:
            plan = pivots.pses_select(block_keys, cfg.n_partitions, pool=pool)
        else:
            plan = pivots.random_sample_select(
                block_keys, cfg.n_partitions, cfg.oversample, cfg.seed
            )

        bounds = pivots.partition_blocks(block_keys, plan)
        tasks = _build_merge_tasks(layout, bounds)

        def run_task(task):
            _run_merge_task(task, src, keys, out, cfg.merge_strategy)

        if pool is None:
            for task in tasks:
                run_task(task)
        else:
            list(pool.map(run_task, tasks))
    finally:
        if pool is not None:
            pool.shutdown(wait=True)


def sort(records: np.ndarray, config: SamplesortConfig) -> np.ndarray:
    """Return a new array with records in ascending key order.

    `records` is consumed as scratch; its final content is unspecified.
    """
    out = np.empty_like(records)
    parallel_samplesort(SortJob(records, out, config))
    return out


def sort_by_key(records: np.ndarray, key, config: SamplesortConfig) -> np.ndarray:
    """Sort by a key field name or a per-record key extractor callable.

    A non-default key is materialized into a (key, position) array, that
    array is sorted, and the records are gathered by position; `records`
    itself is left untouched in that case.
    """
    if isinstance(key, str):
        if not records.dtype.names or key not in records.dtype.names:
            raise ValueError(f"records have no field {key!r}")
        if key == KEY_FIELD:
            return sort(records, config)
        keys = np.ascontiguousarray(records[key])
    else:
        keys = np.array([key(r) for r in records])
    tagged = np.empty(len(records), dtype=[(KEY_FIELD, keys.dtype), ("index", "<u8")])
    tagged[KEY_FIELD] = keys
    tagged["index"] = np.arange(len(records), dtype=np.uint64)
    order = sort(tagged, config)
    return records[order["index"].astype(np.int64)]


def thread_efficiency(t1_seconds: float, tn_seconds: float, threads: int) -> float:
    """Parallel efficiency: t1 / (threads * tN)."""
    if t1_seconds <= 0 or tn_seconds <= 0:
        raise ValueError("durations must be positive")
    if threads < 1:
        raise ValueError("threads must be >= 1")
    return t1_seconds / (threads * tn_seconds)
