"""End-to-end parallel samplesort: oracle equivalence, determinism, task shape."""
import numpy as np
import pytest

from parasort import core, datagen, driver, pivots, seqsort
from parasort.core import BlockSort, MergeStrategy, PivotStrategy, SamplesortConfig


def _cfg(nb=2, np_=2, **kw):
    return SamplesortConfig(nb, np_, **kw)


def test_regular_sampling_frozen_example():
    cfg = _cfg(pivot_strategy=PivotStrategy.PSRS)
    out = driver.sort(np.array([5, 2, 8, 4, 1, 7], np.uint32), cfg)
    assert list(out) == [1, 2, 4, 5, 7, 8]


def test_exact_splitting_frozen_example_and_task_sizes():
    data = np.array([1, 1, 4, 1, 1, 1], np.uint32)
    cfg = _cfg(pivot_strategy=PivotStrategy.PSES)
    out = driver.sort(data.copy(), cfg)
    assert list(out) == [1, 1, 1, 1, 1, 4]
    # reconstruct the merge tasks the driver builds for this input
    # (both halves of the input are already sorted blocks)
    layout = core.make_block_layout(6, 2)
    blocks = [data[lo:hi] for lo, hi in layout]
    plan = pivots.pses_select(blocks, 2)
    bounds = pivots.partition_blocks(blocks, plan)
    tasks = driver._build_merge_tasks(layout, bounds)
    assert [t.n_elements for t in tasks] == [3, 3]


def test_merge_tasks_tile_output():
    rng = np.random.default_rng(30)
    for _ in range(60):
        n = int(rng.integers(0, 3000))
        nb = int(rng.integers(1, 8))
        n_p = int(rng.integers(1, 8))
        layout = core.make_block_layout(n, nb)
        keys = np.sort(rng.integers(0, 50, n).astype(np.uint32))
        blocks = [np.sort(keys[lo:hi]) for lo, hi in layout]
        plan = pivots.pses_select(blocks, n_p)
        bounds = pivots.partition_blocks(blocks, plan)
        tasks = driver._build_merge_tasks(layout, bounds)
        pos = 0
        for t in tasks:
            assert t.output_offset == pos  # offsets are exact prefix sums
            assert t.n_elements == int((t.run_ends - t.run_starts).sum())
            pos += t.n_elements
        assert pos == n


def test_exact_splitting_task_balance_on_duplicates():
    for n in (10, 1000, 4096, 4097):
        data = np.full(n, 5, np.uint32)
        layout = core.make_block_layout(n, 4)
        blocks = [data[lo:hi] for lo, hi in layout]
        plan = pivots.pses_select(blocks, 4)
        bounds = pivots.partition_blocks(blocks, plan)
        tasks = driver._build_merge_tasks(layout, bounds)
        sizes = [t.n_elements for t in tasks]
        assert max(sizes) - min(sizes) <= 1, sizes


@pytest.mark.parametrize("pivot", list(PivotStrategy))
@pytest.mark.parametrize("merge", list(MergeStrategy))
def test_matrix_slice_matches_oracle(pivot, merge):
    rng = np.random.default_rng(31)
    for kind in datagen.WorkloadKind:
        for n in (0, 1, 2, 130, 1000):
            recs = datagen.generate(datagen.WorkloadSpec(kind, n, seed=7))
            want = np.sort(core.key_view(recs).copy())
            cfg = SamplesortConfig(
                3, 4, pivot_strategy=pivot, merge_strategy=merge,
                block_sort=BlockSort(list(BlockSort)[n % 4]),
                threads=int(rng.integers(1, 5)),
            )
            got = driver.sort(recs.copy(), cfg)
            assert np.array_equal(core.key_view(got), want), (pivot, merge, kind, n)


def test_more_blocks_than_elements():
    out = driver.sort(np.array([2, 1], np.uint32), SamplesortConfig(8, 8))
    assert list(out) == [1, 2]
    out = driver.sort(np.array([9], np.uint32), SamplesortConfig(4, 2, threads=4))
    assert list(out) == [9]


def test_zero_length_input_is_noop():
    for kind in (np.uint32, np.float32):
        out = driver.sort(np.empty(0, kind), _cfg())
        assert len(out) == 0


def test_determinism_bytes_equal_across_runs():
    recs = datagen.generate(datagen.WorkloadSpec(datagen.WorkloadKind.PAIR, 5000, seed=3))
    for pivot in PivotStrategy:
        cfg = SamplesortConfig(4, 4, pivot_strategy=pivot, threads=2, seed=9)
        a = driver.sort(recs.copy(), cfg)
        b = driver.sort(recs.copy(), cfg)
        assert a.tobytes() == b.tobytes()


def test_single_block_single_thread_equals_sequential_sort():
    rng = np.random.default_rng(32)
    base = rng.integers(0, 2**32, 4000, dtype=np.uint32).astype(np.uint32)
    for bs, fn in [
        (BlockSort.INTROSORT, seqsort.introsort),
        (BlockSort.PDQSORT, seqsort.pdqsort),
        (BlockSort.BLOCK_QUICKSORT, seqsort.block_quicksort),
        (BlockSort.HEAPSORT, seqsort.heapsort),
    ]:
        out = driver.sort(base.copy(), SamplesortConfig(1, 1, block_sort=bs))
        ref = base.copy()
        fn(ref)
        assert out.tobytes() == ref.tobytes()


def test_thread_counts_do_not_change_keys():
    recs = datagen.generate(datagen.WorkloadSpec(datagen.WorkloadKind.UNIFORM_INT, 20_000, 1))
    want = np.sort(recs.copy())
    for threads in (1, 2, 4, 8):
        cfg = SamplesortConfig(threads, threads, threads=threads)
        got = driver.sort(recs.copy(), cfg)
        assert np.array_equal(got, want)


def test_sort_leaves_output_in_new_array():
    data = np.array([3, 1, 2], np.uint32)
    out = driver.sort(data, _cfg())
    assert out is not data
    assert not np.shares_memory(out, data)


def test_sort_job_validation():
    a = np.arange(4, dtype=np.uint32)
    with pytest.raises(ValueError):
        driver.SortJob(a, a, _cfg())  # aliased storage
    with pytest.raises(ValueError):
        driver.SortJob(a, np.empty(3, np.uint32), _cfg())  # length mismatch
    with pytest.raises(ValueError):
        driver.SortJob(a, np.empty(4, np.float32), _cfg())  # dtype mismatch
    with pytest.raises(ValueError):
        driver.SortJob(a.reshape(2, 2), np.empty((2, 2), np.uint32), _cfg())


def test_parallel_samplesort_writes_into_given_output():
    data = np.array([4, 1, 3, 2], np.uint32)
    out = np.zeros(4, np.uint32)
    driver.parallel_samplesort(driver.SortJob(data, out, _cfg()))
    assert list(out) == [1, 2, 3, 4]


def test_sort_by_key_field_name():
    recs = datagen.generate(datagen.WorkloadSpec(datagen.WorkloadKind.PAIR, 300, seed=5))
    out = driver.sort_by_key(recs.copy(), "key", _cfg())
    assert np.array_equal(out["key"], np.sort(recs["key"]))
    out = driver.sort_by_key(recs, "index", _cfg())
    assert np.array_equal(out["index"], np.sort(recs["index"]))


def test_sort_by_key_callable():
    rng = np.random.default_rng(33)
    plain = rng.integers(0, 100, 500, dtype=np.uint32).astype(np.uint32)
    out = driver.sort_by_key(plain, lambda r: int(r) % 7, _cfg())
    assert np.array_equal(np.sort(out), np.sort(plain))  # a permutation
    assert np.all((out[1:] % 7) >= (out[:-1] % 7))  # ordered by the derived key


def test_sort_by_key_unknown_field():
    recs = np.zeros(3, core.PAIR_DTYPE)
    with pytest.raises(ValueError):
        driver.sort_by_key(recs, "nope", _cfg())


def test_thread_efficiency():
    assert driver.thread_efficiency(10.0, 10.0, 1) == 1.0
    assert driver.thread_efficiency(10.0, 2.5, 4) == 1.0
    assert driver.thread_efficiency(10.0, 2.5, 8) == 0.5
    with pytest.raises(ValueError):
        driver.thread_efficiency(0.0, 1.0, 1)
    with pytest.raises(ValueError):
        driver.thread_efficiency(1.0, -1.0, 1)
    with pytest.raises(ValueError):
        driver.thread_efficiency(1.0, 1.0, 0)
