"""Benchmark harness: operation counters over growing instance sizes.

The interesting quantity is ``key_comparisons - 2k`` per query: subtracting
twice the output size leaves the search overhead, which should gain only an
additive constant per doubling of n in cascaded mode but grows with an extra
log factor in binary mode. Comparisons spent in the per-node rectangle
structures are tabulated separately: those structures are searched
independently at every node of the path in both modes, so their overhead is
not covered by the cascading argument.

``render_figures`` draws the emitted table to PNG files next to the TSV.
"""

from __future__ import annotations

import math
import os
import random
import time
from dataclasses import dataclass, fields
from fractions import Fraction
from typing import List, Optional, Sequence

from .geometry import Point
from .index import MODE_BINARY, MODE_CASCADED, build_index
from .oracle import gen_triangles

BENCH_MODES = (MODE_BINARY, MODE_CASCADED)


@dataclass
class BenchRow:
    n: int
    mode: str
    build_s: float
    cascade_s: float
    height: int
    fragments: int
    list_entries: int
    augmented_entries: int
    rects: int
    queries: int
    mean_k: float
    max_k: int
    mean_key_cmp: float
    max_key_cmp: int
    max_key_cmp_minus_2k: int
    mean_rect_cmp: float
    max_rect_cmp: int
    k0_queries: int
    k0_max_key_cmp: int


COLUMNS = [f.name for f in fields(BenchRow)]


def random_queries(n: int, seed: int, count: int) -> List[Point]:
    """Deterministic query points over the generator's coordinate range."""
    rng = random.Random(f"tristab:bench-queries:{n}:{seed}")
    return [Point(Fraction(rng.randint(-1200 * 8, 1200 * 8), 8),
                  Fraction(rng.randint(-1200 * 8, 1200 * 8), 8))
            for _ in range(count)]


def run_bench(n_list: Sequence[int], seed: int = 0,
              modes: Sequence[str] = BENCH_MODES,
              queries: int = 1000, profile: str = "uniform",
              progress=None) -> List[BenchRow]:
    rows: List[BenchRow] = []
    for n in n_list:
        triangles = gen_triangles(n, seed, profile)
        t0 = time.perf_counter()
        index = build_index(triangles)
        build_s = time.perf_counter() - t0
        cascade_s = 0.0
        if MODE_CASCADED in modes:
            t0 = time.perf_counter()
            index.cascade()
            cascade_s = time.perf_counter() - t0
        points = random_queries(n, seed, queries)
        for mode in modes:
            all_stats = [index.query(q, mode)[1] for q in points]
            ks = [s.reported for s in all_stats]
            key = [s.key_comparisons for s in all_stats]
            rect = [s.rect_comparisons for s in all_stats]
            adjusted = [c - 2 * k for c, k in zip(key, ks)]
            k0 = [c for c, k in zip(key, ks) if k == 0]
            rows.append(BenchRow(
                n=n, mode=mode, build_s=build_s,
                cascade_s=cascade_s if mode == MODE_CASCADED else 0.0,
                height=index.height, fragments=index.fragment_count,
                list_entries=index.sum_list_entries,
                augmented_entries=index.cascade().sum_augmented if mode == MODE_CASCADED else 0,
                rects=index.rect_count, queries=len(points),
                mean_k=sum(ks) / len(ks), max_k=max(ks),
                mean_key_cmp=sum(key) / len(key), max_key_cmp=max(key),
                max_key_cmp_minus_2k=max(adjusted),
                mean_rect_cmp=sum(rect) / len(rect), max_rect_cmp=max(rect),
                k0_queries=len(k0), k0_max_key_cmp=max(k0) if k0 else 0,
            ))
            if progress is not None:
                progress(rows[-1])
    return rows


def rows_to_tsv(rows: Sequence[BenchRow]) -> str:
    def fmt(value):
        return f"{value:.4f}" if isinstance(value, float) else str(value)

    lines = ["\t".join(COLUMNS)]
    for row in rows:
        lines.append("\t".join(fmt(getattr(row, c)) for c in COLUMNS))
    return "\n".join(lines) + "\n"


def render_figures(rows: Sequence[BenchRow], outdir) -> List[str]:
    """Render the benchmark table to PNG files; returns the written paths."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    os.makedirs(outdir, exist_ok=True)
    by_mode = {}
    for row in rows:
        by_mode.setdefault(row.mode, []).append(row)
    for mode_rows in by_mode.values():
        mode_rows.sort(key=lambda r: r.n)
    written = []

    def save(fig, name):
        path = os.path.join(outdir, name)
        fig.savefig(path, dpi=150, bbox_inches="tight")
        plt.close(fig)
        written.append(path)

    fig, ax = plt.subplots(figsize=(6, 4))
    for mode, mode_rows in sorted(by_mode.items()):
        xs = [math.log2(r.n) for r in mode_rows]
        ax.plot(xs, [r.max_key_cmp_minus_2k for r in mode_rows], marker="o", label=mode)
    ax.set_xlabel("log2 n")
    ax.set_ylabel("max key comparisons - 2k")
    ax.set_title("Search overhead per query")
    ax.grid(True, alpha=0.3)
    ax.legend()
    save(fig, "search_overhead.png")

    fig, ax = plt.subplots(figsize=(6, 4))
    any_rows = next(iter(by_mode.values()))
    ns = [r.n for r in any_rows]
    ax.loglog(ns, [r.fragments for r in any_rows], marker="o", label="fragments")
    ax.loglog(ns, [2 * r.n * r.height for r in any_rows], linestyle="--",
              label="2 n height bound")
    cascaded = by_mode.get(MODE_CASCADED)
    if cascaded:
        ax.loglog([r.n for r in cascaded], [r.augmented_entries for r in cascaded],
                  marker="s", label="augmented entries")
    ax.set_xlabel("n")
    ax.set_ylabel("stored entries")
    ax.set_title("Index size")
    ax.grid(True, alpha=0.3)
    ax.legend()
    save(fig, "index_size.png")

    fig, ax = plt.subplots(figsize=(6, 4))
    ax.loglog(ns, [max(r.build_s, 1e-9) for r in any_rows], marker="o", label="build")
    if cascaded:
        ax.loglog([r.n for r in cascaded], [max(r.cascade_s, 1e-9) for r in cascaded],
                  marker="s", label="cascade")
    ax.set_xlabel("n")
    ax.set_ylabel("seconds")
    ax.set_title("Construction time")
    ax.grid(True, alpha=0.3)
    ax.legend()
    save(fig, "build_time.png")

    fig, ax = plt.subplots(figsize=(6, 4))
    for mode, mode_rows in sorted(by_mode.items()):
        xs = [math.log2(r.n) for r in mode_rows]
        ax.plot(xs, [r.mean_rect_cmp for r in mode_rows], marker="o", label=f"{mode} mean")
        ax.plot(xs, [r.max_rect_cmp for r in mode_rows], marker="x", linestyle=":",
                label=f"{mode} max")
    ax.set_xlabel("log2 n")
    ax.set_ylabel("rectangle-structure comparisons")
    ax.set_title("Per-node rectangle search cost (uncascaded)")
    ax.grid(True, alpha=0.3)
    ax.legend(fontsize=8)
    save(fig, "rect_overhead.png")

    return written
