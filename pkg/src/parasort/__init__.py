"""Multithreaded samplesort: sequential block sorts, pivot selection by
regular sampling or exact splitting, and multiway merges, plus seeded
workload generators and a benchmark CLI."""

from .core import (
    KEY_FIELD,
    PAIR_DTYPE,
    PARTICLE_DTYPE,
    BlockLayout,
    BlockSort,
    MergeStrategy,
    PivotStrategy,
    SamplesortConfig,
    key_view,
    make_block_layout,
)
from .datagen import WorkloadKind, WorkloadSpec, dump, generate, load
from .driver import (
    MergeTask,
    SortJob,
    parallel_samplesort,
    sort,
    sort_by_key,
    thread_efficiency,
)
from .kmerge import RunSet, merge_binary_heap, merge_by_sorting, merge_selection_tree
from .pivots import (
    PivotPlan,
    partition_blocks,
    partition_sizes,
    pses_select,
    psrs_select,
    random_sample_select,
)
from .seqsort import (
    SeqSortStats,
    block_quicksort,
    heapsort,
    insertion_sort,
    introsort,
    pdqsort,
)

__version__ = "0.1.0"

__all__ = [
    "KEY_FIELD",
    "PAIR_DTYPE",
    "PARTICLE_DTYPE",
    "BlockLayout",
    "BlockSort",
    "MergeStrategy",
    "PivotStrategy",
    "SamplesortConfig",
    "key_view",
    "make_block_layout",
    "WorkloadKind",
    "WorkloadSpec",
    "dump",
    "generate",
    "load",
    "MergeTask",
    "SortJob",
    "parallel_samplesort",
    "sort",
    "sort_by_key",
    "thread_efficiency",
    "RunSet",
    "merge_binary_heap",
    "merge_by_sorting",
    "merge_selection_tree",
    "PivotPlan",
    "partition_blocks",
    "partition_sizes",
    "pses_select",
    "psrs_select",
    "random_sample_select",
    "SeqSortStats",
    "block_quicksort",
    "heapsort",
    "insertion_sort",
    "introsort",
    "pdqsort",
    "__version__",
]
