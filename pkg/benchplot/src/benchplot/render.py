"""Chart rendering: one figure per input kind, written as PNG files.

Two chart kinds:

* ``elapsed``    mean wall-clock seconds vs. thread count, log-log, with
                 a dashed ideal-scaling reference line anchored at the
                 fastest single-line baseline point.
* ``efficiency`` parallel efficiency vs. thread count, linear axes,
                 fixed y range [0, 1.1] so separate runs are comparable
                 at a glance.

Rendering is file-to-files batch work, so the Agg backend is forced and
no window is ever opened.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .reader import SummaryPoint, read_summary

KINDS = ("elapsed", "efficiency")

_MARKERS = ("o", "s", "^", "D", "v", "P", "X", "*")


@dataclass(frozen=True)
class PlotSpec:
    """One rendering request: which CSV, which chart kind, where to write."""

    csv_path: Path
    kind: str
    outdir: Path

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}, got {self.kind!r}")


def series_label(point: SummaryPoint, varying: set[str]) -> str:
    """Legend label: the algorithm name, extended only by the fields that
    actually differ between lines so a single-variant chart stays clean."""
    parts = [point.algo]
    if "block_sort" in varying:
        parts.append(point.block_sort)
    if "merge" in varying:
        parts.append(point.merge)
    if "n" in varying:
        parts.append(f"n={point.n:g}" if point.n >= 10**6 else f"n={point.n}")
    return " / ".join(parts)


def build_series(
    points: list[SummaryPoint],
) -> dict[str, dict[str, list[SummaryPoint]]]:
    """Group summary points as {input kind: {legend label: points by threads}}.

    Grouping is deterministic: identical CSV bytes always produce the
    same lines in the same order.
    """
    varying: set[str] = set()
    if len({p.algo for p in points}) > 1:
        varying.add("algo")
    if len({p.block_sort for p in points}) > 1:
        varying.add("block_sort")
    if len({p.merge for p in points}) > 1:
        varying.add("merge")
    if len({p.n for p in points}) > 1:
        varying.add("n")

    out: dict[str, dict[str, list[SummaryPoint]]] = {}
    for point in sorted(points, key=lambda p: (p.input, p.variant(), p.threads)):
        label = series_label(point, varying)
        out.setdefault(point.input, {}).setdefault(label, []).append(point)
    return out


def _ideal_line(lines: dict[str, list[SummaryPoint]]) -> tuple[list[int], list[float]]:
    """Perfect-scaling reference anchored at the fastest measured point of
    the smallest thread count on the chart: t threads take base/t seconds."""
    base_threads = min(p.threads for pts in lines.values() for p in pts)
    base_mean = min(
        p.mean_s for pts in lines.values() for p in pts if p.threads == base_threads
    )
    xs = sorted({p.threads for pts in lines.values() for p in pts})
    ys = [base_mean * base_threads / t for t in xs]
    return xs, ys


def _draw(kind: str, input_kind: str, lines: dict[str, list[SummaryPoint]], path: Path) -> None:
    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    all_threads = sorted({p.threads for pts in lines.values() for p in pts})

    for i, (label, pts) in enumerate(lines.items()):
        xs = [p.threads for p in pts]
        if kind == "elapsed":
            ys = [p.mean_s for p in pts]
        else:
            ys = [p.efficiency for p in pts]
        ax.plot(xs, ys, marker=_MARKERS[i % len(_MARKERS)], label=label)

    if kind == "elapsed":
        ix, iy = _ideal_line(lines)
        ax.plot(ix, iy, linestyle="--", color="0.5", label="ideal")
        ax.set_xscale("log", base=2)
        ax.set_yscale("log")
        ax.set_ylabel("mean elapsed [s]")
    else:
        ax.axhline(1.0, linestyle=":", color="0.7", linewidth=1.0)
        ax.set_ylim(0.0, 1.1)
        ax.set_ylabel("parallel efficiency")

    ax.set_xticks(all_threads)
    ax.set_xticklabels([str(t) for t in all_threads])
    ax.set_xlabel("threads")
    ax.set_title(f"{input_kind} input")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render(spec: PlotSpec) -> list[Path]:
    """Render one chart per input kind found in the CSV; return the files
    written, in input-kind order."""
    text = Path(spec.csv_path).read_text()
    points = read_summary(text)
    series = build_series(points)

    spec.outdir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []
    for input_kind, lines in series.items():
        path = Path(spec.outdir) / f"{spec.kind}_{input_kind}.png"
        _draw(spec.kind, input_kind, lines, path)
        written.append(path)
    return written
