"""Shared helpers: synthesize benchmark CSV text without the sort library."""

from __future__ import annotations

ROW_HEADER = "algo,pivot,block_sort,merge,input,n,threads,rep,elapsed_s,checksum"
SUMMARY_HEADER = "algo,pivot,block_sort,merge,input,n,threads,mean_s,efficiency"

_PIVOT_OF = {"psrs": "psrs", "pses": "pses"}


def make_csv(
    *,
    algos: tuple[str, ...] = ("pses",),
    inputs: tuple[str, ...] = ("uint",),
    threads: tuple[int, ...] = (1, 2, 4, 8),
    n: int = 10**6,
    reps: int = 2,
    base_s: float = 8.0,
    scale: float = 0.9,
) -> str:
    """Build a schema-conformant CSV where t > 1 threads take
    base_s / (t * scale) seconds, so parallel efficiency is exactly
    ``scale``: below perfect scaling yet inside the plotted [0, 1.1] band."""
    rows = [ROW_HEADER]
    summary = [SUMMARY_HEADER]
    for algo in algos:
        pivot = _PIVOT_OF[algo]
        for kind in inputs:
            base = None
            for t in threads:
                mean = base_s / t if t == 1 else base_s / (t * scale)
                if base is None:
                    base = (t, mean)
                for rep in range(reps):
                    rows.append(
                        f"{algo},{pivot},block,tree,{kind},{n},{t},{rep},{mean!r},00aa11bb22cc33dd"
                    )
                eff = (base[1] * base[0]) / (t * mean)
                summary.append(f"{algo},{pivot},block,tree,{kind},{n},{t},{mean!r},{eff!r}")
    return "\n".join(rows) + "\n# summary\n" + "\n".join(summary) + "\n"
