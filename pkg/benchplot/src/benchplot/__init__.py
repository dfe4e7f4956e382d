"""benchplot: turns sort-benchmark CSV files into charts.

Reads the two-table CSV emitted by the benchmark CLI (per-repetition
rows, then a ``# summary`` section) and renders one PNG per input kind,
either mean elapsed time on log-log axes or parallel efficiency on a
fixed [0, 1.1] scale.
"""

from .reader import (
    MeasurementRow,
    ROW_COLUMNS,
    SUMMARY_COLUMNS,
    SchemaError,
    SummaryPoint,
    parse_csv,
    read_summary,
)
from .render import KINDS, PlotSpec, build_series, render, series_label

__all__ = [
    "KINDS",
    "MeasurementRow",
    "PlotSpec",
    "ROW_COLUMNS",
    "SUMMARY_COLUMNS",
    "SchemaError",
    "SummaryPoint",
    "build_series",
    "parse_csv",
    "read_summary",
    "render",
    "series_label",
]

__version__ = "0.1.0"
