"""Benchmark harness: timed solves over an instance directory.

Produces rows for a text table, a CSV alongside, and rendered figures.
Any optimum disagreement between algorithms on the same instance is
flagged as a failure; per-file errors are reported and the run goes on.
"""

from __future__ import annotations

import csv
import statistics
import time
from pathlib import Path

from .dispatch import dispatch
from .instfile import parse_instance
from .model import HappyError


def run_bench(
    instance_dir: str | Path,
    algos: tuple[str, ...] = ("auto",),
    repetitions: int = 3,
    out_dir: str | Path | None = None,
) -> tuple[list[dict], list[str]]:
    """Run every instance under every algorithm; return (rows, failures)."""
    base = Path(instance_dir)
    paths = sorted(
        p for p in base.iterdir() if p.is_file() and not p.name.startswith(".")
    )
    rows: list[dict] = []
    failures: list[str] = []
    for path in paths:
        try:
            inst = parse_instance(path.read_text())
        except (OSError, HappyError) as exc:
            # reported in the table; only disagreements fail the run
            rows.append(
                {
                    "instance": path.name,
                    "algorithm": "-",
                    "status": f"error: {exc}",
                    "optimum": "",
                    "median_ms": "",
                    "reps": 0,
                }
            )
            continue
        optima: dict[str, int] = {}
        for algo in algos:
            times = []
            value = None
            status = "ok"
            try:
                for _ in range(max(1, repetitions)):
                    start = time.perf_counter()
                    sol = dispatch(inst, algo)
                    times.append((time.perf_counter() - start) * 1000.0)
                    value = sol.happy_weight
            except HappyError as exc:
                status = f"error: {exc}"
            rows.append(
                {
                    "instance": path.name,
                    "algorithm": algo,
                    "status": status,
                    "optimum": value if value is not None else "",
                    "median_ms": round(statistics.median(times), 3) if times else "",
                    "reps": len(times),
                }
            )
            if value is not None:
                optima[algo] = value
        if len(set(optima.values())) > 1:
            failures.append(f"{path.name}: optimum disagreement {optima}")
    if out_dir is not None:
        write_report(rows, out_dir)
    return rows, failures


def write_report(rows: list[dict], out_dir: str | Path) -> list[Path]:
    """Write bench.csv plus rendered timing figures; returns the paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    csv_path = out / "bench.csv"
    with csv_path.open("w", newline="") as fh:
        writer = csv.DictWriter(
            fh,
            fieldnames=["instance", "algorithm", "status", "optimum", "median_ms", "reps"],
        )
        writer.writeheader()
        writer.writerows(rows)
    written.append(csv_path)
    written += _figures(rows, out)
    return written


def _figures(rows: list[dict], out: Path) -> list[Path]:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    ok = [r for r in rows if r["status"] == "ok" and r["median_ms"] != ""]
    written = []
    if not ok:
        return written
    instances = sorted({r["instance"] for r in ok})
    algos = sorted({r["algorithm"] for r in ok})
    by_key = {(r["instance"], r["algorithm"]): r["median_ms"] for r in ok}

    fig, ax = plt.subplots(figsize=(max(6, 0.8 * len(instances) * len(algos)), 4))
    width = 0.8 / max(1, len(algos))
    for j, algo in enumerate(algos):
        xs = [i + j * width for i in range(len(instances))]
        ys = [by_key.get((inst, algo), 0) for inst in instances]
        ax.bar(xs, ys, width=width, label=algo)
    ax.set_xticks([i + 0.4 - width / 2 for i in range(len(instances))])
    ax.set_xticklabels(instances, rotation=45, ha="right", fontsize=8)
    ax.set_ylabel("median ms")
    ax.set_title("solve time per instance")
    ax.legend()
    fig.tight_layout()
    p1 = out / "bench_times.png"
    fig.savefig(p1)
    plt.close(fig)
    written.append(p1)

    fig, ax = plt.subplots(figsize=(6, 4))
    medians = [
        statistics.median([r["median_ms"] for r in ok if r["algorithm"] == a])
        for a in algos
    ]
    ax.bar(range(len(algos)), medians)
    ax.set_xticks(range(len(algos)))
    ax.set_xticklabels(algos)
    ax.set_ylabel("median of medians, ms")
    ax.set_title("per-algorithm summary")
    fig.tight_layout()
    p2 = out / "bench_algos.png"
    fig.savefig(p2)
    plt.close(fig)
    written.append(p2)
    return written
