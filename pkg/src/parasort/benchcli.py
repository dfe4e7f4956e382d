"""Benchmark harness and its CLI.

Protocol per configuration: generate the input once, run two untimed
warmups, then for each repetition copy the pristine input into the work
array, time one sort call on the monotonic wall clock, and verify the
output (ascending keys, key-sequence checksum against a known-correct
oracle) before recording the row. A failed check aborts the remaining
repetitions of that configuration and is reported; its time is never
folded into a summary.

CSV layout: a header row `algo,pivot,block_sort,merge,input,n,threads,
rep,elapsed_s,checksum`, one row per repetition, then a `# summary` line
followed by `algo,pivot,block_sort,merge,input,n,threads,mean_s,
efficiency`. Efficiency is mean-at-baseline / (threads * mean), with the
smallest measured thread count of each configuration group as baseline.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import io
import os
import sys
import time
from dataclasses import dataclass, fields
from typing import Iterable, Sequence

import numpy as np

from . import driver
from .core import BlockSort, MergeStrategy, PivotStrategy, SamplesortConfig, key_view
from .datagen import WorkloadKind, WorkloadSpec, generate

__all__ = [
    "BenchConfig",
    "BenchRow",
    "SummaryRow",
    "SuitePlan",
    "SuiteResult",
    "run_suite",
    "summarize",
    "emit_csv",
    "parse_csv",
    "main",
]

_ALGO_OF_PIVOT = {"psrs": "psrs", "random": "psrs", "pses": "pses"}


@dataclass(frozen=True)
class BenchConfig:
    pivot_strategy: PivotStrategy
    block_sort: BlockSort
    merge_strategy: MergeStrategy
    input_kind: WorkloadKind
    n: int
    threads: int
    seed: int = 0

    @property
    def algo(self) -> str:
        return _ALGO_OF_PIVOT[self.pivot_strategy.value]

    def sort_config(self) -> SamplesortConfig:
        # one block and one partition per worker, the classic setup
        return SamplesortConfig(
            n_blocks=self.threads,
            n_partitions=self.threads,
            pivot_strategy=self.pivot_strategy,
            block_sort=self.block_sort,
            merge_strategy=self.merge_strategy,
            threads=self.threads,
            seed=self.seed,
        )


@dataclass(frozen=True)
class SuitePlan:
    configs: tuple[BenchConfig, ...]
    reps: int = 20
    warmups: int = 2

    def __post_init__(self) -> None:
        if self.reps < 1:
            raise ValueError("reps must be >= 1")
        if self.warmups < 0:
            raise ValueError("warmups must be >= 0")


@dataclass(frozen=True)
class BenchRow:
    algo: str
    pivot: str
    block_sort: str
    merge: str
    input: str
    n: int
    threads: int
    rep: int
    elapsed_s: float
    checksum: str


@dataclass(frozen=True)
class SummaryRow:
    algo: str
    pivot: str
    block_sort: str
    merge: str
    input: str
    n: int
    threads: int
    mean_s: float
    efficiency: float


@dataclass
class SuiteResult:
    rows: list[BenchRow]
    failures: list[str]

    @property
    def ok(self) -> bool:
        return not self.failures


def key_checksum(keys: np.ndarray) -> str:
    """64-bit blake2b over the key sequence as little-endian bytes."""
    le = keys.astype(keys.dtype.newbyteorder("<"), copy=False)
    return hashlib.blake2b(np.ascontiguousarray(le).tobytes(), digest_size=8).hexdigest()


def _verify(out: np.ndarray, expected_checksum: str) -> tuple[str, str | None]:
    keys = key_view(out)
    if len(keys) > 1 and not bool(np.all(keys[1:] >= keys[:-1])):
        return key_checksum(keys), "output keys not ascending"
    got = key_checksum(keys)
    if got != expected_checksum:
        return got, f"checksum {got} != expected {expected_checksum}"
    return got, None


def run_suite(plan: SuitePlan) -> SuiteResult:
    rows: list[BenchRow] = []
    failures: list[str] = []
    for cfg in plan.configs:
        pristine = generate(WorkloadSpec(cfg.input_kind, cfg.n, cfg.seed))
        oracle = key_checksum(np.sort(key_view(pristine).copy()))
        work = np.empty_like(pristine)
        sort_cfg = cfg.sort_config()
        label = (
            f"{cfg.algo}/{cfg.pivot_strategy.value}/{cfg.block_sort.value}/"
            f"{cfg.merge_strategy.value}/{cfg.input_kind.value}/n={cfg.n}/t={cfg.threads}"
        )
        for _ in range(plan.warmups):
            np.copyto(work, pristine)
            driver.sort(work, sort_cfg)
        for rep in range(1, plan.reps + 1):
            np.copyto(work, pristine)
            t0 = time.perf_counter()
            out = driver.sort(work, sort_cfg)
            elapsed = time.perf_counter() - t0
            got, err = _verify(out, oracle)
            rows.append(
                BenchRow(
                    algo=cfg.algo,
                    pivot=cfg.pivot_strategy.value,
                    block_sort=cfg.block_sort.value,
                    merge=cfg.merge_strategy.value,
                    input=cfg.input_kind.value,
                    n=cfg.n,
                    threads=cfg.threads,
                    rep=rep,
                    elapsed_s=elapsed,
                    checksum=got,
                )
            )
            if err is not None:
                failures.append(f"{label} rep {rep}: {err}")
                break
    return SuiteResult(rows, failures)


def _group_key(row: BenchRow) -> tuple:
    return (row.algo, row.pivot, row.block_sort, row.merge, row.input, row.n)


def summarize(rows: Iterable[BenchRow], failures: Sequence[str] = ()) -> list[SummaryRow]:
    """Mean elapsed and efficiency per configuration, baseline = the
    smallest measured thread count of each configuration group."""
    failed_labels = set()
    for msg in failures:
        failed_labels.add(msg.split(" rep ")[0])
    means: dict[tuple, dict[int, list[float]]] = {}
    for row in rows:
        label = (
            f"{row.algo}/{row.pivot}/{row.block_sort}/{row.merge}/"
            f"{row.input}/n={row.n}/t={row.threads}"
        )
        if label in failed_labels:
            continue
        means.setdefault(_group_key(row), {}).setdefault(row.threads, []).append(row.elapsed_s)
    out: list[SummaryRow] = []
    for key, per_threads in means.items():
        algo, pivot, block_sort, merge, input_kind, n = key
        base_t = min(per_threads)
        base_mean = sum(per_threads[base_t]) / len(per_threads[base_t])
        for t in sorted(per_threads):
            mean = sum(per_threads[t]) / len(per_threads[t])
            eff = (base_mean * base_t) / (t * mean)
            out.append(SummaryRow(algo, pivot, block_sort, merge, input_kind, n, t, mean, eff))
    return out


_ROW_HEADER = [f.name for f in fields(BenchRow)]
_SUMMARY_HEADER = [f.name for f in fields(SummaryRow)]


def emit_csv(rows: Iterable[BenchRow], summaries: Iterable[SummaryRow], fp) -> None:
    w = csv.writer(fp, lineterminator="\n")
    w.writerow(_ROW_HEADER)
    for r in rows:
        w.writerow(
            [r.algo, r.pivot, r.block_sort, r.merge, r.input, r.n, r.threads, r.rep,
             repr(r.elapsed_s), r.checksum]
        )
    fp.write("# summary\n")
    w.writerow(_SUMMARY_HEADER)
    for s in summaries:
        w.writerow(
            [s.algo, s.pivot, s.block_sort, s.merge, s.input, s.n, s.threads,
             repr(s.mean_s), repr(s.efficiency)]
        )


def parse_csv(fp) -> tuple[list[BenchRow], list[SummaryRow]]:
    text = fp.read() if hasattr(fp, "read") else fp
    if "# summary" in text:
        main_part, summary_part = text.split("# summary\n", 1)
    else:
        main_part, summary_part = text, ""
    rows: list[BenchRow] = []
    reader = csv.reader(io.StringIO(main_part))
    header = next(reader, None)
    if header != _ROW_HEADER:
        raise ValueError(f"unexpected header {header!r}")
    for rec in reader:
        if not rec:
            continue
        rows.append(
            BenchRow(rec[0], rec[1], rec[2], rec[3], rec[4], int(rec[5]), int(rec[6]),
                     int(rec[7]), float(rec[8]), rec[9])
        )
    summaries: list[SummaryRow] = []
    if summary_part:
        reader = csv.reader(io.StringIO(summary_part))
        header = next(reader, None)
        if header != _SUMMARY_HEADER:
            raise ValueError(f"unexpected summary header {header!r}")
        for rec in reader:
            if not rec:
                continue
            summaries.append(
                SummaryRow(rec[0], rec[1], rec[2], rec[3], rec[4], int(rec[5]),
                           int(rec[6]), float(rec[7]), float(rec[8]))
            )
    return rows, summaries


_DEFAULT_THREADS = [1, 2, 4, 8, 12, 24, 48]
_DEFAULT_SIZES = [10**7, 10**8]
_PIVOT_OF_ALGO = {"psrs": PivotStrategy.PSRS, "pses": PivotStrategy.PSES}


def _parse_threads(text: str) -> list[int]:
    vals = sorted({int(t) for t in text.replace(",", " ").split()})
    if not vals or vals[0] < 1:
        raise argparse.ArgumentTypeError("thread counts must be positive integers")
    return vals


def _workload_bytes(kind: WorkloadKind, n: int) -> int:
    probe = generate(WorkloadSpec(kind, 0))
    return probe.dtype.itemsize * n


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="parasort-bench",
        description="Sweep sort configurations, verify every run, write timing CSV.",
    )
    p.add_argument("--algo", choices=sorted(_PIVOT_OF_ALGO), default=None,
                   help="restrict to one algorithm (default: both)")
    p.add_argument("--block-sort", choices=[b.value for b in BlockSort], default="block")
    p.add_argument("--merge", choices=[m.value for m in MergeStrategy], default="tree")
    p.add_argument("--input", choices=[k.value for k in WorkloadKind], default=None,
                   help="restrict to one workload (default: all six)")
    p.add_argument("--n", type=int, default=None,
                   help="element count (default: 1e7 and 1e8, memory permitting)")
    p.add_argument("--threads", type=_parse_threads, default=None,
                   help="comma-separated thread counts (default: 1,2,4,8,12,24,48 clamped to cores)")
    p.add_argument("--reps", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="bench.csv", help="CSV output path")
    p.add_argument("--mem-budget", type=int, default=2 * 1024**3,
                   help="bytes allowed for the three live copies of one input")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    algos = [args.algo] if args.algo else sorted(_PIVOT_OF_ALGO)
    kinds = [WorkloadKind(args.input)] if args.input else list(WorkloadKind)
    cores = os.cpu_count() or 1
    threads = args.threads or sorted({t for t in _DEFAULT_THREADS if t <= cores} | {1})
    sizes = [args.n] if args.n is not None else _DEFAULT_SIZES

    configs = []
    for kind in kinds:
        fitting = [n for n in sizes if 3 * _workload_bytes(kind, n) <= args.mem_budget]
        if not fitting:
            print(f"skipping {kind.value}: no requested size fits --mem-budget", file=sys.stderr)
        for n in fitting:
            for algo in algos:
                for t in threads:
                    configs.append(
                        BenchConfig(
                            pivot_strategy=_PIVOT_OF_ALGO[algo],
                            block_sort=BlockSort(args.block_sort),
                            merge_strategy=MergeStrategy(args.merge),
                            input_kind=kind,
                            n=n,
                            threads=t,
                            seed=args.seed,
                        )
                    )
    if not configs:
        print("nothing to run", file=sys.stderr)
        return 2

    result = run_suite(SuitePlan(tuple(configs), reps=args.reps))
    summaries = summarize(result.rows, result.failures)
    with open(args.out, "w", newline="") as fp:
        emit_csv(result.rows, summaries, fp)
    print(f"wrote {len(result.rows)} rows, {len(summaries)} summary lines to {args.out}")
    for msg in result.failures:
        print(f"FAILED {msg}", file=sys.stderr)
    return 1 if result.failures else 0


if __name__ == "__main__":
    raise SystemExit(main())
