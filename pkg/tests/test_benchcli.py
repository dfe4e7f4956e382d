"""Benchmark harness: protocol shape, verification, CSV round-trip, CLI."""
import io

import numpy as np
import pytest

from parasort import benchcli, datagen, driver
from parasort.benchcli import BenchConfig, BenchRow, SuitePlan, SummaryRow
from parasort.core import BlockSort, MergeStrategy, PivotStrategy, key_view
from parasort.datagen import WorkloadKind, WorkloadSpec


def _config(threads=1, kind=WorkloadKind.UNIFORM_INT, n=5000, pivot=PivotStrategy.PSES):
    return BenchConfig(
        pivot_strategy=pivot,
        block_sort=BlockSort.BLOCK_QUICKSORT,
        merge_strategy=MergeStrategy.SELECTION_TREE,
        input_kind=kind,
        n=n,
        threads=threads,
        seed=1,
    )


def test_row_count_and_identical_checksums():
    plan = SuitePlan((_config(),), reps=5, warmups=1)
    result = benchcli.run_suite(plan)
    assert result.ok
    assert len(result.rows) == 5
    assert [r.rep for r in result.rows] == [1, 2, 3, 4, 5]
    assert len({r.checksum for r in result.rows}) == 1
    assert all(r.elapsed_s > 0 for r in result.rows)


def test_checksum_matches_oracle_hash():
    plan = SuitePlan((_config(),), reps=2, warmups=0)
    result = benchcli.run_suite(plan)
    pristine = datagen.generate(WorkloadSpec(WorkloadKind.UNIFORM_INT, 5000, 1))
    want = benchcli.key_checksum(np.sort(pristine))
    assert all(r.checksum == want for r in result.rows)


def test_psrs_and_pses_agree_on_checksum():
    plan = SuitePlan(
        (
            _config(pivot=PivotStrategy.PSRS, kind=WorkloadKind.DUPLICATE3),
            _config(pivot=PivotStrategy.PSES, kind=WorkloadKind.DUPLICATE3),
        ),
        reps=2,
        warmups=0,
    )
    result = benchcli.run_suite(plan)
    assert len({r.checksum for r in result.rows}) == 1


def test_summary_mean_and_efficiency():
    plan = SuitePlan((_config(threads=1), _config(threads=2)), reps=4, warmups=0)
    result = benchcli.run_suite(plan)
    summaries = benchcli.summarize(result.rows)
    assert len(summaries) == 2
    by_threads = {s.threads: s for s in summaries}
    rows1 = [r.elapsed_s for r in result.rows if r.threads == 1]
    assert by_threads[1].mean_s == sum(rows1) / len(rows1)
    assert by_threads[1].efficiency == 1.0  # baseline thread count
    t2 = by_threads[2]
    assert t2.efficiency == pytest.approx(
        driver.thread_efficiency(by_threads[1].mean_s, t2.mean_s, 2)
    )


def test_failed_verification_aborts_configuration(monkeypatch):
    real_sort = driver.sort

    def corrupting_sort(records, config):
        out = real_sort(records, config)
        if config.threads == 2 and len(out):
            kv = key_view(out)
            kv[0], kv[-1] = kv[-1].copy(), kv[0].copy()
        return out

    monkeypatch.setattr(benchcli.driver, "sort", corrupting_sort)
    plan = SuitePlan((_config(threads=1), _config(threads=2)), reps=3, warmups=0)
    result = benchcli.run_suite(plan)
    assert not result.ok
    assert len(result.failures) == 1
    assert "t=2" in result.failures[0]
    rows_good = [r for r in result.rows if r.threads == 1]
    rows_bad = [r for r in result.rows if r.threads == 2]
    assert len(rows_good) == 3
    assert len(rows_bad) == 1  # aborted after the first failed rep
    # the failed configuration is kept out of the summary
    summaries = benchcli.summarize(result.rows, result.failures)
    assert {s.threads for s in summaries} == {1}


def test_csv_round_trip_exact():
    rows = [
        BenchRow("pses", "pses", "block", "tree", "uint", 1000, 2, 1, 0.12345678901234567, "00ff" * 4),
        BenchRow("psrs", "random", "intro", "sort", "particle", 7, 48, 20, 3.5e-07, "a" * 16),
    ]
    summaries = [
        SummaryRow("pses", "pses", "block", "tree", "uint", 1000, 2, 0.1, 1.0),
        SummaryRow("psrs", "random", "intro", "sort", "particle", 7, 48, 3.5e-07, 0.9999999999999),
    ]
    buf = io.StringIO()
    benchcli.emit_csv(rows, summaries, buf)
    rows2, summaries2 = benchcli.parse_csv(buf.getvalue())
    assert rows2 == rows
    assert summaries2 == summaries


def test_csv_layout_and_summary_marker():
    plan = SuitePlan((_config(),), reps=2, warmups=0)
    result = benchcli.run_suite(plan)
    buf = io.StringIO()
    benchcli.emit_csv(result.rows, benchcli.summarize(result.rows), buf)
    lines = buf.getvalue().strip().split("\n")
    assert lines[0] == "algo,pivot,block_sort,merge,input,n,threads,rep,elapsed_s,checksum"
    assert "# summary" in lines
    i = lines.index("# summary")
    assert lines[i + 1] == "algo,pivot,block_sort,merge,input,n,threads,mean_s,efficiency"
    assert len(lines) == i + 2 + 1  # one summary row for one configuration


def test_parse_rejects_unknown_header():
    with pytest.raises(ValueError):
        benchcli.parse_csv("a,b,c\n1,2,3\n")


def test_plan_validation():
    with pytest.raises(ValueError):
        SuitePlan((), reps=0)
    with pytest.raises(ValueError):
        SuitePlan((), warmups=-1)


def test_cli_end_to_end(tmp_path):
    out = tmp_path / "bench.csv"
    rc = benchcli.main([
        "--algo", "pses", "--input", "uint", "--n", "4000",
        "--threads", "1,2", "--reps", "2", "--seed", "3", "--out", str(out),
    ])
    assert rc == 0
    rows, summaries = benchcli.parse_csv(out.read_text())
    assert len(rows) == 4  # 2 thread counts x 2 reps
    assert {r.threads for r in rows} == {1, 2}
    assert all(r.algo == "pses" and r.input == "uint" and r.n == 4000 for r in rows)
    assert {s.threads for s in summaries} == {1, 2}
    eff1 = [s.efficiency for s in summaries if s.threads == 1][0]
    assert eff1 == 1.0


def test_cli_memory_budget_skips_oversized(tmp_path, capsys):
    rc = benchcli.main([
        "--input", "particle", "--n", "10000000", "--threads", "1",
        "--reps", "1", "--mem-budget", "1000000", "--out", str(tmp_path / "x.csv"),
    ])
    assert rc == 2
    assert "nothing to run" in capsys.readouterr().err


def test_cli_rejects_bad_thread_list():
    with pytest.raises(SystemExit):
        benchcli.main(["--threads", "0,2", "--n", "10", "--reps", "1", "--out", "/dev/null"])
