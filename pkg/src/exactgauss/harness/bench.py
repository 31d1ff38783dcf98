"""Throughput benchmark over algorithms and digit sizes."""

from __future__ import annotations

import csv
import gc
import statistics
import sys
import time
from dataclasses import asdict, dataclass, fields
from typing import Iterable

from ..discrete import SAMPLERS as DPLUS_SAMPLERS, SIGMA_ONE
from ..normal import ALGORITHMS
from ..randcore import DIGIT_SIZES, RandomSource, derive_seed


@dataclass(frozen=True)
class BenchConfig:
    algorithms: tuple[str, ...] = ("karney", "improved-a", "improved")
    digit_sizes: tuple[int, ...] = DIGIT_SIZES
    n: int = 20_000
    seed: int = 1
    repeats: int = 5
    chunks: int = 20


@dataclass(frozen=True)
class BenchRecord:
    algorithm: str
    digit_size: int
    n: int
    samples_per_second: float
    mean_deviates: float
    mean_bits: float
    mean_attempts: float
    seed: int


CSV_HEADER = [f.name for f in fields(BenchRecord)]


def _runner(algorithm: str):
    if algorithm in ALGORITHMS:
        return ALGORITHMS[algorithm]
    if algorithm.startswith("dplus-") and algorithm[6:] in DPLUS_SAMPLERS:
        sample = DPLUS_SAMPLERS[algorithm[6:]]
        return lambda src: sample(SIGMA_ONE, src)
    raise ValueError(f"unknown algorithm {algorithm!r}")


def _timed_chunk(run, src: RandomSource, n: int) -> tuple[float, int]:
    """Time n samples with the cyclic GC paused; returns (seconds, attempts)."""
    attempts = 0
    gc.collect()
    gc.disable()
    try:
        t0 = time.perf_counter()
        for _ in range(n):
            attempts += run(src).attempts
        elapsed = time.perf_counter() - t0
    finally:
        gc.enable()
    return elapsed, attempts


def run_bench(config: BenchConfig) -> list[BenchRecord]:
    """Median-of-repeats throughput for every (algorithm, digit size) pair.

    Each repeat draws n samples per cell in ``chunks`` slices, cycling through
    the cells slice by slice with a rotating start, so drift in host speed is
    shared by all cells instead of landing on whichever ran last.  Repeat r
    uses a seed derived from (seed, r); counter means pool all repeats.
    """
    cells = [(a, d) for a in config.algorithms for d in config.digit_sizes]
    runners = {a: _runner(a) for a in config.algorithms}
    chunks = max(1, min(config.chunks, config.n))
    sizes = [config.n // chunks + (i < config.n % chunks) for i in range(chunks)]
    times: dict = {c: [] for c in cells}
    totals: dict = {c: [0, 0, 0] for c in cells}
    for r in range(config.repeats):
        seed = derive_seed(config.seed, r)
        sources = {c: RandomSource(seed, c[1]) for c in cells}
        elapsed = dict.fromkeys(cells, 0.0)
        for i, size in enumerate(sizes):
            shift = (i + r) % len(cells)
            for cell in cells[shift:] + cells[:shift]:
                dt, attempts = _timed_chunk(runners[cell[0]], sources[cell], size)
                elapsed[cell] += dt
                totals[cell][2] += attempts
        for cell in cells:
            times[cell].append(elapsed[cell])
            totals[cell][0] += sources[cell].deviates_created
            totals[cell][1] += sources[cell].bits_drawn
    total_n = config.n * config.repeats
    return [
        BenchRecord(
            algorithm=a,
            digit_size=d,
            n=config.n,
            samples_per_second=config.n / statistics.median(times[(a, d)]),
            mean_deviates=totals[(a, d)][0] / total_n,
            mean_bits=totals[(a, d)][1] / total_n,
            mean_attempts=totals[(a, d)][2] / total_n,
            seed=config.seed,
        )
        for a, d in cells
    ]


def write_csv(records: Iterable[BenchRecord], stream=None) -> None:
    stream = stream or sys.stdout
    writer = csv.DictWriter(stream, fieldnames=CSV_HEADER, lineterminator="\n")
    writer.writeheader()
    for rec in records:
        row = asdict(rec)
        for key in ("samples_per_second", "mean_deviates", "mean_bits", "mean_attempts"):
            row[key] = f"{row[key]:.6g}"
        writer.writerow(row)
