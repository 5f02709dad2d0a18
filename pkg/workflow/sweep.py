import asyncio
import logging
import time
import uuid
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from datetime import datetime
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

import config
from analysis.edf_tests import FAST, TEST_MODES
from assignment import ALGORITHMS, FEDERATED, SFS
from errors import ConfigurationError
from generators.workload import GenConfig, count_heavy, gen_taskset
from storage.artifact_store import ArtifactStore
from utils.report import SWEEP_COLUMNS, write_csv

logger = logging.getLogger(__name__)

CSV_FORMAT_VERSION = 1


def parse_util_grid(text: str) -> List[float]:
    """
    Parse a utilisation grid given in percent.

    Accepts "start:stop:step" (inclusive stop) or a comma list such as "10,50,70".

    Raises:
        ConfigurationError: On malformed grids or values outside (0, 100]
    """
    try:
        if ":" in text:
            start, stop, step = (int(part) for part in text.split(":"))
            if step <= 0:
                raise ConfigurationError(f"grid step must be positive in {text!r}")
            percents = list(range(start, stop + 1, step))
        else:
            percents = [int(part) for part in text.split(",") if part.strip()]
    except ValueError as e:
        raise ConfigurationError(f"malformed utilisation grid {text!r}: {e}") from e
    if not percents or any(not 0 < p <= 100 for p in percents):
        raise ConfigurationError(f"utilisation grid {text!r} must hold values in (0, 100]")
    return [p / 100 for p in percents]


@dataclass(frozen=True)
class SweepConfig:
    m_list: Tuple[int, ...]
    n_list: Tuple[int, ...]
    util_grid: Tuple[float, ...] = tuple(parse_util_grid(config.UTIL_GRID))
    sets_per_point: int = config.SETS_PER_POINT
    seed: int = config.SFS_SEED
    mode: str = FAST
    algorithms: Tuple[str, ...] = (SFS, FEDERATED)
    edge_probability: float = config.EDGE_PROBABILITY

    def __post_init__(self):
        if self.mode not in TEST_MODES:
            raise ConfigurationError(f"unknown test mode {self.mode!r}")
        unknown = [a for a in self.algorithms if a not in ALGORITHMS]
        if unknown or not self.algorithms:
            raise ConfigurationError(f"unknown algorithms {unknown}, expected a subset of {sorted(ALGORITHMS)}")
        if self.sets_per_point < 1:
            raise ConfigurationError("sets_per_point must be at least 1")

    def points(self) -> List["SweepPoint"]:
        """Every (m, n, U) combination in deterministic order."""
        return [
            SweepPoint(m, n, u, self.sets_per_point, self.seed, self.mode, self.algorithms, self.edge_probability)
            for m in self.m_list
            for n in self.n_list
            for u in self.util_grid
        ]


@dataclass(frozen=True)
class SweepPoint:
    m: int
    n: int
    util: float
    sets: int
    seed: int
    mode: str
    algorithms: Tuple[str, ...]
    edge_probability: float

    def gen_config(self) -> GenConfig:
        return GenConfig(self.m, self.n, self.util, edge_probability=self.edge_probability, rng_seed=self.seed)


@dataclass
class PointResult:
    point: SweepPoint
    accepted: Dict[str, int] = field(default_factory=dict)
    heavy_total: int = 0

    def rows(self) -> List[Dict]:
        mean_heavy = self.heavy_total / self.point.sets
        return [
            {
                "format_version": CSV_FORMAT_VERSION,
                "m": self.point.m,
                "n": self.point.n,
                "U": f"{self.point.util:.2f}",
                "algorithm": algorithm,
                "accepted": self.accepted[algorithm],
                "total": self.point.sets,
                "ratio": f"{self.accepted[algorithm] / self.point.sets:.4f}",
                "mean_heavy": f"{mean_heavy:.3f}",
            }
            for algorithm in self.point.algorithms
        ]


def evaluate_point(point: SweepPoint) -> PointResult:
    """Generate the task sets of one grid point and run every algorithm on the same sets."""
    cfg = point.gen_config()
    result = PointResult(point, {a: 0 for a in point.algorithms})
    for set_index in range(point.sets):
        tasks = gen_taskset(cfg, set_index)
        result.heavy_total += count_heavy(tasks)
        for algorithm in point.algorithms:
            plan = ALGORITHMS[algorithm](tasks, point.m, point.mode)
            if plan.success:
                result.accepted[algorithm] += 1
    logger.info(f"Point m={point.m} n={point.n} U={point.util:.2f}: {result.accepted}")
    return result


def heavy_statistics(m: int, n: int, util: float, sets: int, seed: int = config.SFS_SEED) -> Dict[str, float]:
    """Mean and standard deviation of the heavy-task count per generated set."""
    cfg = GenConfig(m, n, util, rng_seed=seed)
    counts = np.array([count_heavy(gen_taskset(cfg, i)) for i in range(sets)])
    return {"mean": float(counts.mean()), "std": float(counts.std()), "sets": sets}


class SweepRunner:
    """Acceptance-ratio sweep orchestrator."""

    def __init__(self, sweep: SweepConfig, workers: int = None, store: Optional[ArtifactStore] = None):
        """
        Initialize the sweep.

        Args:
            sweep: Grid and evaluation parameters
            workers: Worker processes; SFS_WORKERS by default, 1 runs inline
            store: Where to record run metadata, if anywhere
        """
        self.sweep = sweep
        self.workers = config.SFS_WORKERS if workers is None else workers
        self.store = store

        self.run_id = f"sweep_{int(time.time())}_{uuid.uuid4().hex[:6]}"
        self.start_time = datetime.now()
        self.metrics = {
            "points": 0,
            "task_sets": 0,
            "elapsed_seconds": 0.0,
        }

    async def run(self) -> List[Dict]:
        """
        Evaluate every grid point, in a process pool when workers > 1.

        Returns:
            CSV rows ordered by (m, n, U, algorithm) regardless of completion order
        """
        points = self.sweep.points()
        started = time.time()
        logger.info(f"Sweep {self.run_id}: {len(points)} points, {self.workers} workers")

        if self.workers <= 1:
            results = [evaluate_point(p) for p in points]
        else:
            loop = asyncio.get_running_loop()
            with ProcessPoolExecutor(max_workers=self.workers) as pool:
                futures = [loop.run_in_executor(pool, evaluate_point, p) for p in points]
                results = await asyncio.gather(*futures)

        rows = [row for result in results for row in result.rows()]
        self.metrics["points"] = len(points)
        self.metrics["task_sets"] = len(points) * self.sweep.sets_per_point
        self.metrics["elapsed_seconds"] = round(time.time() - started, 3)
        if self.store is not None:
            self.store.store_run_metadata(self.run_id, {
                "config": asdict(self.sweep),
                "metrics": self.metrics,
                "start_time": self.start_time.isoformat(),
            })
        logger.info(f"Sweep {self.run_id} finished: {self.metrics}")
        return rows

    def write(self, rows: Sequence[Dict], path: str) -> int:
        count = write_csv(path, SWEEP_COLUMNS, rows)
        logger.info(f"Wrote {count} rows to {path}")
        return count


def max_gap(rows: Sequence[Dict], better: str = SFS, worse: str = FEDERATED) -> float:
    """Largest ratio difference between two algorithms over the grid points of ``rows``."""
    ratios: Dict[Tuple, Dict[str, float]] = {}
    for row in rows:
        key = (int(row["m"]), int(row["n"]), row["U"])
        ratios.setdefault(key, {})[row["algorithm"]] = float(row["ratio"])
    gaps = [r[better] - r[worse] for r in ratios.values() if better in r and worse in r]
    return max(gaps, default=0.0)
