"""Element model and shared configuration for the parallel samplesort.

Keys are one of u32, f32 in [0,1), or u64. Records are either a bare key
array or a numpy structured array whose first field is named "key"; ordering
is by key only and any remaining fields are payload that travels with it.
Float keys must be NaN-free (the generators guarantee [0,1)); NaN input is
undefined behaviour.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

KEY_FIELD = "key"

# Table layout contracts: 16-byte key/index pairs, 96-byte particle records
# (8-byte key + 11 doubles of payload).
PAIR_DTYPE = np.dtype([(KEY_FIELD, "<u8"), ("index", "<u8")])
PARTICLE_PAYLOAD_FLOATS = 11
PARTICLE_DTYPE = np.dtype([(KEY_FIELD, "<u8"), ("data", "<f8", (PARTICLE_PAYLOAD_FLOATS,))])

assert PAIR_DTYPE.itemsize == 16
assert PARTICLE_DTYPE.itemsize == 96

KEY_DTYPES = (np.dtype("<u4"), np.dtype("<f4"), np.dtype("<u8"))


class PivotStrategy(enum.Enum):
    PSRS = "psrs"
    PSES = "pses"
    RANDOM_SAMPLE = "random"


class BlockSort(enum.Enum):
    INTROSORT = "intro"
    PDQSORT = "pdq"
    BLOCK_QUICKSORT = "block"
    HEAPSORT = "heap"


class MergeStrategy(enum.Enum):
    SELECTION_TREE = "tree"
    BINARY_HEAP = "heap"
    SORT_MERGE = "sort"


def key_view(records: np.ndarray) -> np.ndarray:
    """Return the comparison keys of `records`.

    For structured records this is a view into the key field, so moving a
    record through the records array moves its key as seen through the view.
    """
    if records.dtype.names is None:
        return records
    if KEY_FIELD not in records.dtype.names:
        raise TypeError(f"structured records need a {KEY_FIELD!r} field, got {records.dtype}")
    return records[KEY_FIELD]


@dataclass(frozen=True)
class SamplesortConfig:
    n_blocks: int
    n_partitions: int
    pivot_strategy: PivotStrategy = PivotStrategy.PSES
    block_sort: BlockSort = BlockSort.BLOCK_QUICKSORT
    merge_strategy: MergeStrategy = MergeStrategy.SELECTION_TREE
    threads: int = 1
    # RandomSample knobs; ignored by the other strategies.
    oversample: int = 32
    seed: int = 0

    def __post_init__(self) -> None:
        if self.n_blocks < 1:
            raise ValueError(f"n_blocks must be >= 1, got {self.n_blocks}")
        if self.n_partitions < 1:
            raise ValueError(f"n_partitions must be >= 1, got {self.n_partitions}")
        if self.threads < 1:
            raise ValueError(f"threads must be >= 1, got {self.threads}")
        if self.oversample < 1:
            raise ValueError(f"oversample must be >= 1, got {self.oversample}")


@dataclass(frozen=True)
class BlockLayout:
    """Contiguous disjoint block ranges covering [0, total_len)."""

    total_len: int
    block_ranges: tuple[tuple[int, int], ...]

    def __iter__(self):
        return iter(self.block_ranges)


def make_block_layout(n: int, n_blocks: int) -> BlockLayout:
    """Split [0, n) into n_blocks ranges of length ceil(n/n_blocks).

    The last non-empty range may be shorter; trailing ranges are empty when
    n < n_blocks. Degenerate n = 0 yields all-empty ranges.
    """
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    if n_blocks < 1:
        raise ValueError(f"n_blocks must be >= 1, got {n_blocks}")
    nominal = -(-n // n_blocks) if n else 0
    ranges = []
    for b in range(n_blocks):
        start = min(b * nominal, n)
        stop = min(start + nominal, n)
        ranges.append((start, stop))
    return BlockLayout(total_len=n, block_ranges=tuple(ranges))
