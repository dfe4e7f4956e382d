"""Merge n sorted runs into one output range.

Three strategies: selection (loser) tree, binary heap, copy-then-sort.
Tree and heap break key ties by lower run index, so their outputs are
byte-identical and within-run order of equal keys is preserved (they only
advance run heads). Runs are validated lazily: an out-of-order element is
detected the moment its run head advances past it.

The kernels address runs as [start, end) windows into one source array so
the driver can merge slices of the block-sorted input without copying; the
RunSet wrappers below concatenate standalone runs into that shape.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from .core import MergeStrategy, key_view
from .seqsort import _introsort

_JIT = dict(nogil=True, cache=True)


@dataclass
class RunSet:
    runs: list[np.ndarray]

    @property
    def total_len(self) -> int:
        return sum(len(r) for r in self.runs)


@njit(**_JIT)
def _merge_tree(src, keys, starts, ends, out):
    """Loser-tree merge. Returns (node_touches, out_of_order_run | -1)."""
    runs = len(starts)
    total = 0
    for i in range(runs):
        total += ends[i] - starts[i]
    if total == 0:
        return 0, -1
    k = 1
    while k < runs:
        k <<= 1
    head = np.zeros(k, np.int64)
    exhausted = np.zeros(k, np.uint8)
    for i in range(k):
        if i < runs and starts[i] < ends[i]:
            head[i] = starts[i]
        else:
            exhausted[i] = 1

    def wins(x, y):
        # does leaf x beat leaf y? exhausted leaves lose; ties go to the
        # lower run index
        if exhausted[x] != 0:
            if exhausted[y] != 0:
                return x < y
            return False
        if exhausted[y] != 0:
            return True
        kx = keys[head[x]]
        ky = keys[head[y]]
        if kx < ky:
            return True
        if ky < kx:
            return False
        return x < y

    # build: play leaves upward, each internal node keeps its match's loser
    loser = np.zeros(k, np.int64)
    winner = np.zeros(2 * k, np.int64)
    for i in range(k):
        winner[k + i] = i
    for v in range(k - 1, 0, -1):
        x = winner[2 * v]
        y = winner[2 * v + 1]
        if wins(x, y):
            winner[v] = x
            loser[v] = y
        else:
            winner[v] = y
            loser[v] = x
    loser[0] = winner[1]

    touches = 0
    for o in range(total):
        w = loser[0]
        p = head[w]
        out[o] = src[p]
        pk = keys[p]
        p += 1
        if p == ends[w]:
            exhausted[w] = 1
        else:
            head[w] = p
            if keys[p] < pk:
                return touches, w
        # replay the path from leaf w to the root
        cur = w
        v = (k + w) >> 1
        while v >= 1:
            other = loser[v]
            if wins(other, cur):
                loser[v] = cur
                cur = other
            touches += 1
            v >>= 1
        loser[0] = cur
    return touches, -1


@njit(**_JIT)
def _merge_heap(src, keys, starts, ends, out):
    """Binary min-heap merge. Returns the out-of-order run index or -1."""
    runs = len(starts)
    head = np.zeros(runs, np.int64)
    heap = np.zeros(runs, np.int64)
    size = 0
    for i in range(runs):
        head[i] = starts[i]
        if starts[i] < ends[i]:
            heap[size] = i
            size += 1

    def less(x, y):
        kx = keys[head[x]]
        ky = keys[head[y]]
        if kx < ky:
            return True
        if ky < kx:
            return False
        return x < y

    def sift(v, n):
        while True:
            c = 2 * v + 1
            if c >= n:
                return
            if c + 1 < n and less(heap[c + 1], heap[c]):
                c += 1
            if less(heap[c], heap[v]):
                heap[v], heap[c] = heap[c], heap[v]
                v = c
            else:
                return

    for v in range(size // 2 - 1, -1, -1):
        sift(v, size)
    o = 0
    while size > 0:
        w = heap[0]
        p = head[w]
        out[o] = src[p]
        o += 1
        pk = keys[p]
        p += 1
        head[w] = p
        if p == ends[w]:
            size -= 1
            heap[0] = heap[size]
        elif keys[p] < pk:
            return w
        sift(0, size)
    return -1


@njit(**_JIT)
def _merge_sort_copy(src, starts, ends, out, out_keys, tmp, stats):
    o = 0
    for i in range(len(starts)):
        for p in range(starts[i], ends[i]):
            out[o] = src[p]
            o += 1
    _introsort(out, out_keys, 0, o, tmp, stats)


def _pack(run_set: RunSet) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    runs = run_set.runs
    if not runs:
        dt = np.dtype(np.uint32)
    else:
        dt = runs[0].dtype
        for r in runs:
            if r.dtype != dt:
                raise TypeError(f"runs must share one dtype, got {dt} and {r.dtype}")
    lengths = np.array([0] + [len(r) for r in runs], dtype=np.int64)
    ends = np.cumsum(lengths)[1:]
    starts = ends - lengths[1:]
    src = np.concatenate(runs) if runs else np.empty(0, dt)
    return src, starts, ends


def _check_out(run_set: RunSet, out: np.ndarray) -> None:
    if len(out) != run_set.total_len:
        raise ValueError(f"output length {len(out)} != total run length {run_set.total_len}")


def merge_selection_tree(run_set: RunSet, out: np.ndarray) -> int:
    """Merge into `out`; returns the node-touch count (instrumentation)."""
    _check_out(run_set, out)
    src, starts, ends = _pack(run_set)
    touches, bad = _merge_tree(src, key_view(src), starts, ends, out)
    if bad >= 0:
        raise ValueError(f"run {bad} is not sorted")
    return int(touches)


def merge_binary_heap(run_set: RunSet, out: np.ndarray) -> None:
    _check_out(run_set, out)
    src, starts, ends = _pack(run_set)
    bad = _merge_heap(src, key_view(src), starts, ends, out)
    if bad >= 0:
        raise ValueError(f"run {bad} is not sorted")


def merge_by_sorting(run_set: RunSet, out: np.ndarray) -> None:
    _check_out(run_set, out)
    src, starts, ends = _pack(run_set)
    tmp = np.empty(1, out.dtype)
    stats = np.zeros(4, np.int64)
    _merge_sort_copy(src, starts, ends, out, key_view(out), tmp, stats)


MERGERS = {
    MergeStrategy.SELECTION_TREE: merge_selection_tree,
    MergeStrategy.BINARY_HEAP: merge_binary_heap,
    MergeStrategy.SORT_MERGE: merge_by_sorting,
}
