"""Parser for the benchmark CSV interchange format.

The file is two CSV tables in one: per-repetition measurement rows,
a literal ``# summary`` separator line, then per-configuration summary
rows.  Charts are drawn from the summary table only, but both headers
are validated so a malformed file is rejected up front with a message
that names the offending column rather than failing later with a
cryptic KeyError.

This package deliberately does not import the sorting library; the CSV
layout is the whole contract between the two.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

ROW_COLUMNS = (
    "algo",
    "pivot",
    "block_sort",
    "merge",
    "input",
    "n",
    "threads",
    "rep",
    "elapsed_s",
    "checksum",
)

SUMMARY_COLUMNS = (
    "algo",
    "pivot",
    "block_sort",
    "merge",
    "input",
    "n",
    "threads",
    "mean_s",
    "efficiency",
)

SUMMARY_MARKER = "# summary"


class SchemaError(ValueError):
    """The CSV text does not match the benchmark interchange layout."""


@dataclass(frozen=True)
class MeasurementRow:
    """One timed repetition of one benchmark configuration."""

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
class SummaryPoint:
    """Aggregated result for one (configuration, thread count) pair."""

    algo: str
    pivot: str
    block_sort: str
    merge: str
    input: str
    n: int
    threads: int
    mean_s: float
    efficiency: float

    def variant(self) -> tuple[str, str, str, int]:
        """Everything that distinguishes one plotted line from another."""
        return (self.algo, self.block_sort, self.merge, self.n)


def _check_header(line: str, expected: tuple[str, ...], table: str) -> None:
    got = tuple(line.strip().split(","))
    if got == expected:
        return
    missing = [c for c in expected if c not in got]
    extra = [c for c in got if c not in expected]
    parts = [f"bad {table} header"]
    if missing:
        parts.append("missing column(s): " + ", ".join(missing))
    if extra:
        parts.append("unexpected column(s): " + ", ".join(extra))
    if not missing and not extra:
        parts.append("columns are out of order")
    parts.append(f"expected: {','.join(expected)}")
    raise SchemaError("; ".join(parts))


def _int_field(raw: str, column: str, lineno: int) -> int:
    try:
        return int(raw)
    except ValueError:
        raise SchemaError(f"line {lineno}: {column} must be an integer, got {raw!r}") from None


def _float_field(raw: str, column: str, lineno: int) -> float:
    try:
        value = float(raw)
    except ValueError:
        raise SchemaError(f"line {lineno}: {column} must be a number, got {raw!r}") from None
    if not math.isfinite(value):
        raise SchemaError(f"line {lineno}: {column} must be finite, got {raw!r}")
    return value


def _split_row(line: str, n_columns: int, lineno: int) -> list[str]:
    fields = line.split(",")
    if len(fields) != n_columns:
        raise SchemaError(f"line {lineno}: expected {n_columns} fields, got {len(fields)}")
    return fields


def parse_csv(text: str) -> tuple[list[MeasurementRow], list[SummaryPoint]]:
    """Parse the full benchmark CSV into measurement and summary tables."""
    lines = text.splitlines()
    if not lines:
        raise SchemaError("empty file")
    _check_header(lines[0], ROW_COLUMNS, "measurement")

    try:
        marker_at = next(i for i, line in enumerate(lines) if line.strip() == SUMMARY_MARKER)
    except StopIteration:
        raise SchemaError(f"no {SUMMARY_MARKER!r} section") from None

    rows: list[MeasurementRow] = []
    for i in range(1, marker_at):
        line = lines[i]
        if not line.strip():
            continue
        f = _split_row(line, len(ROW_COLUMNS), i + 1)
        rows.append(
            MeasurementRow(
                algo=f[0],
                pivot=f[1],
                block_sort=f[2],
                merge=f[3],
                input=f[4],
                n=_int_field(f[5], "n", i + 1),
                threads=_int_field(f[6], "threads", i + 1),
                rep=_int_field(f[7], "rep", i + 1),
                elapsed_s=_float_field(f[8], "elapsed_s", i + 1),
                checksum=f[9],
            )
        )

    if marker_at + 1 >= len(lines):
        raise SchemaError("summary section has no header")
    _check_header(lines[marker_at + 1], SUMMARY_COLUMNS, "summary")

    points: list[SummaryPoint] = []
    for i in range(marker_at + 2, len(lines)):
        line = lines[i]
        if not line.strip():
            continue
        f = _split_row(line, len(SUMMARY_COLUMNS), i + 1)
        threads = _int_field(f[6], "threads", i + 1)
        if threads < 1:
            raise SchemaError(f"line {i + 1}: threads must be >= 1, got {threads}")
        points.append(
            SummaryPoint(
                algo=f[0],
                pivot=f[1],
                block_sort=f[2],
                merge=f[3],
                input=f[4],
                n=_int_field(f[5], "n", i + 1),
                threads=threads,
                mean_s=_float_field(f[7], "mean_s", i + 1),
                efficiency=_float_field(f[8], "efficiency", i + 1),
            )
        )

    if not points:
        raise SchemaError("summary section is empty")
    return rows, points


def read_summary(text: str) -> list[SummaryPoint]:
    """Parse the CSV and return only the summary table."""
    return parse_csv(text)[1]
