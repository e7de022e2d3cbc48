"""Paired-seed GA vs RLGA convergence comparison."""

from __future__ import annotations

import csv
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from .optimizer import RunConfig, generations_to_target, run

SUMMARY_FIELDS = ["algorithm", "seed", "final_fitness", "final_fobj", "n_turbines", "generations_to_target", "target"]


@dataclass
class BenchRow:
    algorithm: str
    seed: int
    fitness: np.ndarray  # best fitness per generation, generation 0 first
    final_fobj: float
    n_turbines: int
    generations_to_target: Optional[int] = None


@dataclass
class BenchSummary:
    rows: list[BenchRow]
    target: float

    def gens(self, algorithm: str) -> list[Optional[int]]:
        return [r.generations_to_target for r in self.rows if r.algorithm == algorithm]

    def median_gens(self, algorithm: str) -> float:
        """Median generations-to-target; runs that never arrive count as infinite."""
        vals = [math.inf if g is None else g for g in self.gens(algorithm)]
        return float(np.median(vals))

    def ratio(self) -> float:
        """RLGA median over GA median (lower favours RLGA)."""
        return self.median_gens("rlga") / self.median_gens("ga")


def _one(args) -> BenchRow:
    config, history_path = args
    if history_path is not None:
        from .io import ConvergenceWriter

        with ConvergenceWriter(history_path, config.algorithm == "rlga") as w:
            res = run(config, on_record=w)
    else:
        res = run(config)
    last = res.history[-1]
    return BenchRow(config.algorithm, config.seed, res.fitness, last.best_fobj, last.n_turbines)


def bench(
    base: RunConfig,
    seeds,
    out_dir=None,
    target: Optional[float] = None,
    jobs: int = 1,
) -> BenchSummary:
    """Run GA and RLGA on every seed and compare generations-to-target.

    Each seed runs once per algorithm with the same master seed; the two runs
    share nothing but the seed. ``target`` defaults to the median final
    fitness of the GA runs.
    """
    seeds = list(seeds)
    if not seeds:
        raise ValueError("bench needs at least one seed")
    out = Path(out_dir) if out_dir is not None else None
    tasks = []
    for algo in ("ga", "rlga"):
        for s in seeds:
            cfg = base.replace(algorithm=algo, seed=s)
            path = out / f"{algo}_seed{s}.csv" if out is not None else None
            tasks.append((cfg, path))
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_one, tasks))
    else:
        rows = [_one(t) for t in tasks]
    if target is None:
        target = float(np.median([r.fitness[-1] for r in rows if r.algorithm == "ga"]))
    for r in rows:
        r.generations_to_target = generations_to_target(r.fitness, target)
    summary = BenchSummary(rows, target)
    if out is not None:
        write_summary(out / "summary.csv", summary)
    return summary


def write_summary(path, summary: BenchSummary) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(SUMMARY_FIELDS)
        for r in summary.rows:
            g = "" if r.generations_to_target is None else r.generations_to_target
            w.writerow([r.algorithm, r.seed, repr(float(r.fitness[-1])), repr(r.final_fobj), r.n_turbines, g, repr(summary.target)])
