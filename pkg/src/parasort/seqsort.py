"""Sequential in-place sorts used on each block.

Every kernel takes (a, keys, lo, hi, tmp, stats) where `keys` is the
comparison view of `a` — the key field of structured records, or `a` itself
for bare key arrays. Comparisons read `keys`; every data move goes through
whole-record assignment on `a`, so payload travels with its key and the key
view stays coherent. `tmp` is a one-record scratch buffer of a's dtype
(structured getitem yields a view, so a plain temp variable would alias).

Kernels are compiled nogil so block sorts on disjoint ranges run in parallel
under a thread pool.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from .core import BlockSort, key_view

INSERTION_CUTOFF = 24
PARTITION_BUFFER = 128  # offsets per side in the buffered block partition
MOSQRT_THRESHOLD = 20_000  # median-of-3 below, median of floor(sqrt(N)) samples above
_MAX_STACK = 160  # larger side is pushed, smaller continued: depth <= log2(N)

_JIT = dict(nogil=True, cache=True)

# SeqSortStats slots
_CMP, _SWAP, _FALLBACK, _BADPART = 0, 1, 2, 3


@dataclass
class SeqSortStats:
    comparisons: int = 0
    swaps: int = 0
    heapsort_fallbacks: int = 0
    bad_partitions: int = 0


@njit(**_JIT)
def _insertion(a, keys, lo, hi, tmp, stats):
    comps = 0
    for i in range(lo + 1, hi):
        kv = keys[i]
        tmp[0] = a[i]
        j = i
        while j > lo:
            comps += 1
            if not (kv < keys[j - 1]):
                break
            a[j] = a[j - 1]
            j -= 1
        a[j] = tmp[0]
    stats[_CMP] += comps


@njit(**_JIT)
def _siftdown(a, keys, lo, start, end, tmp, stats):
    # max-heap over a[lo : lo+end], rooted at `start`
    comps = 0
    root = start
    while True:
        child = 2 * root + 1
        if child >= end:
            break
        if child + 1 < end:
            comps += 1
            if keys[lo + child] < keys[lo + child + 1]:
                child += 1
        comps += 1
        if keys[lo + root] < keys[lo + child]:
            tmp[0] = a[lo + root]
            a[lo + root] = a[lo + child]
            a[lo + child] = tmp[0]
            stats[_SWAP] += 1
            root = child
        else:
            break
    stats[_CMP] += comps


@njit(**_JIT)
def _heapsort(a, keys, lo, hi, tmp, stats):
    n = hi - lo
    if n < 2:
        return
    for start in range(n // 2 - 1, -1, -1):
        _siftdown(a, keys, lo, start, n, tmp, stats)
    for end in range(n - 1, 0, -1):
        tmp[0] = a[lo]
        a[lo] = a[lo + end]
        a[lo + end] = tmp[0]
        stats[_SWAP] += 1
        _siftdown(a, keys, lo, 0, end, tmp, stats)


@njit(**_JIT)
def _sort3(a, keys, i, j, k, tmp, stats):
    # order a[i] <= a[j] <= a[k] by key
    comps = 1
    if keys[j] < keys[i]:
        tmp[0] = a[i]
        a[i] = a[j]
        a[j] = tmp[0]
        stats[_SWAP] += 1
    comps += 1
    if keys[k] < keys[j]:
        tmp[0] = a[j]
        a[j] = a[k]
        a[k] = tmp[0]
        stats[_SWAP] += 1
        comps += 1
        if keys[j] < keys[i]:
            tmp[0] = a[i]
            a[i] = a[j]
            a[j] = tmp[0]
            stats[_SWAP] += 1
    stats[_CMP] += comps


@njit(**_JIT)
def _floor_log2(n):
    r = 0
    v = n
    while v > 1:
        v >>= 1
        r += 1
    return r


@njit(**_JIT)
def _hoare_partition(a, keys, lo, hi, tmp, stats):
    # median-of-3 pivot, two-pointer scan; returns the pivot's final index
    high = hi - 1
    mid = (lo + hi) >> 1
    _sort3(a, keys, lo, mid, high, tmp, stats)
    pk = keys[mid]
    tmp[0] = a[mid]
    a[mid] = a[high]
    a[high] = tmp[0]
    comps = 0
    swaps = 0
    i = lo
    j = high - 1
    while True:
        while i < high:
            comps += 1
            if not (keys[i] < pk):
                break
            i += 1
        while j > lo:
            comps += 1
            if not (pk < keys[j]):
                break
            j -= 1
        if i >= j:
            break
        tmp[0] = a[i]
        a[i] = a[j]
        a[j] = tmp[0]
        swaps += 1
        i += 1
        j -= 1
    tmp[0] = a[i]
    a[i] = a[high]
    a[high] = tmp[0]
    stats[_CMP] += comps
    stats[_SWAP] += swaps + 1
    return i


@njit(**_JIT)
def _introsort(a, keys, lo, hi, tmp, stats):
    n = hi - lo
    if n < 2:
        return
    depth_limit = 2 * _floor_log2(n)
    stack_lo = np.empty(_MAX_STACK, np.int64)
    stack_hi = np.empty(_MAX_STACK, np.int64)
    stack_d = np.empty(_MAX_STACK, np.int64)
    top = 1
    stack_lo[0] = lo
    stack_hi[0] = hi
    stack_d[0] = 0
    while top > 0:
        top -= 1
        lo = stack_lo[top]
        hi = stack_hi[top]
        d = stack_d[top]
        while hi - lo > INSERTION_CUTOFF:
            if d >= depth_limit:
                _heapsort(a, keys, lo, hi, tmp, stats)
                stats[_FALLBACK] += 1
                lo = hi
                break
            p = _hoare_partition(a, keys, lo, hi, tmp, stats)
            d += 1
            if p - lo < hi - (p + 1):
                stack_lo[top] = p + 1
                stack_hi[top] = hi
                stack_d[top] = d
                top += 1
                hi = p
            else:
                stack_lo[top] = lo
                stack_hi[top] = p
                stack_d[top] = d
                top += 1
                lo = p + 1
        _insertion(a, keys, lo, hi, tmp, stats)


@njit(**_JIT)
def _partition3(a, keys, lo, hi, pk, tmp, stats):
    # Dutch-flag three-way partition: [lo,lt) < pk, [lt,gt] == pk, (gt,hi) > pk
    lt = lo
    gt = hi - 1
    i = lo
    comps = 0
    swaps = 0
    while i <= gt:
        comps += 1
        if keys[i] < pk:
            tmp[0] = a[i]
            a[i] = a[lt]
            a[lt] = tmp[0]
            swaps += 1
            lt += 1
            i += 1
        else:
            comps += 1
            if pk < keys[i]:
                tmp[0] = a[i]
                a[i] = a[gt]
                a[gt] = tmp[0]
                swaps += 1
                gt -= 1
            else:
                i += 1
    stats[_CMP] += comps
    stats[_SWAP] += swaps
    return lt, gt


@njit(**_JIT)
def _pdqsort(a, keys, lo, hi, tmp, stats):
    n = hi - lo
    if n < 2:
        return
    bad_limit = _floor_log2(n)
    stack_lo = np.empty(_MAX_STACK, np.int64)
    stack_hi = np.empty(_MAX_STACK, np.int64)
    stack_b = np.empty(_MAX_STACK, np.int64)
    top = 1
    stack_lo[0] = lo
    stack_hi[0] = hi
    stack_b[0] = 0
    while top > 0:
        top -= 1
        lo = stack_lo[top]
        hi = stack_hi[top]
        nbad = stack_b[top]
        while hi - lo > INSERTION_CUTOFF:
            span = hi - lo
            mid = (lo + hi) >> 1
            _sort3(a, keys, lo, mid, hi - 1, tmp, stats)
            lt, gt = _partition3(a, keys, lo, hi, keys[mid], tmp, stats)
            left_n = lt - lo
            right_n = hi - 1 - gt
            smaller = left_n if left_n < right_n else right_n
            if smaller < span // 8:
                stats[_BADPART] += 1
                nbad += 1
            if nbad >= bad_limit:
                _heapsort(a, keys, lo, lt, tmp, stats)
                _heapsort(a, keys, gt + 1, hi, tmp, stats)
                stats[_FALLBACK] += 1
                lo = hi
                break
            if left_n < right_n:
                stack_lo[top] = gt + 1
                stack_hi[top] = hi
                stack_b[top] = nbad
                top += 1
                hi = lt
            else:
                stack_lo[top] = lo
                stack_hi[top] = lt
                stack_b[top] = nbad
                top += 1
                lo = gt + 1
        _insertion(a, keys, lo, hi, tmp, stats)


@njit(**_JIT)
def _fill_left(keys, base, count, pk, offs):
    # branch-free: store the candidate offset unconditionally, advance the
    # write position by the 0/1 comparison result
    num = 0
    for i in range(count):
        flag = keys[base + i] >= pk
        offs[num] = i
        num += flag
    return num


@njit(**_JIT)
def _fill_right(keys, base, count, pk, offs):
    num = 0
    for i in range(count):
        flag = pk >= keys[base - i]
        offs[num] = i
        num += flag
    return num


@njit(**_JIT)
def _block_partition(a, keys, lo, hi, pk, offs_l, offs_r, tmp, stats):
    """Buffered two-way partition: scan records misplaced offsets into the
    side buffers, exchange them in a separate pass. Returns the split point
    s with keys[lo:s] <= pk <= keys[s:hi]."""
    l = lo
    r = hi - 1
    num_l = num_r = 0
    start_l = start_r = 0
    cur_bl = cur_br = 0
    comps = 0
    swaps = 0
    while True:
        if num_l == 0:
            l += cur_bl
            room = r - l + 1 - cur_br
            cur_bl = room if room < PARTITION_BUFFER else PARTITION_BUFFER
            start_l = 0
            num_l = _fill_left(keys, l, cur_bl, pk, offs_l)
            comps += cur_bl
        if num_r == 0:
            r -= cur_br
            room = r - l + 1 - cur_bl
            cur_br = room if room < PARTITION_BUFFER else PARTITION_BUFFER
            start_r = 0
            num_r = _fill_right(keys, r, cur_br, pk, offs_r)
            comps += cur_br
        if num_l > 0 and num_r > 0:
            m = num_l if num_l < num_r else num_r
            for j in range(m):
                u = l + offs_l[start_l + j]
                v = r - offs_r[start_r + j]
                tmp[0] = a[u]
                a[u] = a[v]
                a[v] = tmp[0]
            swaps += m
            num_l -= m
            num_r -= m
            start_l += m
            start_r += m
        elif num_l == 0 and num_r == 0:
            if cur_bl + cur_br >= r - l + 1:
                stats[_CMP] += comps
                stats[_SWAP] += swaps
                return l + cur_bl
            # unscanned room remains on both sides: refill next iteration
        else:
            room = r - l + 1 - cur_bl - cur_br
            if room <= 0:
                # release whichever block drained so the flush below targets
                # only positions inside the pending block
                if num_l == 0:
                    l += cur_bl
                else:
                    r -= cur_br
                break
    stats[_CMP] += comps
    if num_l > 0:
        # pending >= pk entries inside the left block; move them to the right
        # edge, largest offset first, so the swap source is never pending
        e = r
        for j in range(start_l + num_l - 1, start_l - 1, -1):
            u = l + offs_l[j]
            tmp[0] = a[u]
            a[u] = a[e]
            a[e] = tmp[0]
            e -= 1
        stats[_SWAP] += swaps + num_l
        return e + 1
    e = l
    for j in range(start_r + num_r - 1, start_r - 1, -1):
        v = r - offs_r[j]
        tmp[0] = a[v]
        a[v] = a[e]
        a[e] = tmp[0]
        e += 1
    stats[_SWAP] += swaps + num_r
    return e


@njit(**_JIT)
def _block_quicksort(a, keys, lo, hi, tmp, stats):
    n = hi - lo
    if n < 2:
        return
    offs_l = np.empty(PARTITION_BUFFER, np.int64)
    offs_r = np.empty(PARTITION_BUFFER, np.int64)
    ktmp = np.empty(1, keys.dtype)
    stack_lo = np.empty(_MAX_STACK, np.int64)
    stack_hi = np.empty(_MAX_STACK, np.int64)
    top = 1
    stack_lo[0] = lo
    stack_hi[0] = hi
    while top > 0:
        top -= 1
        lo = stack_lo[top]
        hi = stack_hi[top]
        while hi - lo > INSERTION_CUTOFF:
            span = hi - lo
            if span < MOSQRT_THRESHOLD:
                mid = (lo + hi) >> 1
                _sort3(a, keys, lo, mid, hi - 1, tmp, stats)
                pk = keys[mid]
                stats[_CMP] += 1
                three_way = keys[lo] == pk
            else:
                ns = int(math.sqrt(span))
                samples = np.empty(ns, keys.dtype)
                step = span // ns
                for s in range(ns):
                    samples[s] = keys[lo + s * step]
                _heapsort(samples, samples, 0, ns, ktmp, stats)
                pk = samples[ns >> 1]
                stats[_CMP] += 1
                three_way = samples[(ns >> 1) - 1] == pk
            if not three_way:
                split = _block_partition(a, keys, lo, hi, pk, offs_l, offs_r, tmp, stats)
                if split == lo or split == hi:
                    # pivot is the range extremum: the two-way split cannot
                    # shrink, so strip the pivot's equal zone instead
                    three_way = True
                else:
                    if split - lo < hi - split:
                        stack_lo[top] = split
                        stack_hi[top] = hi
                        top += 1
                        hi = split
                    else:
                        stack_lo[top] = lo
                        stack_hi[top] = split
                        top += 1
                        lo = split
            if three_way:
                lt, gt = _partition3(a, keys, lo, hi, pk, tmp, stats)
                if lt - lo < hi - (gt + 1):
                    stack_lo[top] = gt + 1
                    stack_hi[top] = hi
                    top += 1
                    hi = lt
                else:
                    stack_lo[top] = lo
                    stack_hi[top] = lt
                    top += 1
                    lo = gt + 1
        _insertion(a, keys, lo, hi, tmp, stats)


_KERNELS = {
    BlockSort.INTROSORT: _introsort,
    BlockSort.PDQSORT: _pdqsort,
    BlockSort.BLOCK_QUICKSORT: _block_quicksort,
    BlockSort.HEAPSORT: _heapsort,
}


def kernel_for(algo: BlockSort):
    return _KERNELS[algo]


def _run(kernel, records: np.ndarray) -> SeqSortStats:
    keys = key_view(records)
    tmp = np.empty(1, records.dtype)
    stats = np.zeros(4, np.int64)
    kernel(records, keys, 0, len(records), tmp, stats)
    return SeqSortStats(*(int(c) for c in stats))


def insertion_sort(records: np.ndarray) -> SeqSortStats:
    """Sort ascending by key, in place. Base case of the quicksort variants."""
    return _run(_insertion, records)


def heapsort(records: np.ndarray) -> SeqSortStats:
    """Worst-case O(N log N) sort; the fallback target of the variants below."""
    return _run(_heapsort, records)


def introsort(records: np.ndarray) -> SeqSortStats:
    """Quicksort that switches to heapsort at recursion depth 2*floor(log2 N)."""
    return _run(_introsort, records)


def pdqsort(records: np.ndarray) -> SeqSortStats:
    """Three-way-partitioning quicksort; counts partitions whose smaller side
    is below an eighth of the range and finishes the subproblem with heapsort
    once floor(log2 N) of them accumulate."""
    return _run(_pdqsort, records)


def block_quicksort(records: np.ndarray) -> SeqSortStats:
    """Quicksort with a buffered branch-free partition; pivot is the median of
    3 below 20000 elements and of floor(sqrt(N)) equally spaced samples above,
    switching to a three-way partition when the sample median's neighbour
    equals the pivot (duplicate-heavy range)."""
    return _run(_block_quicksort, records)
