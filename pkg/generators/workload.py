import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

import config
from errors import ConfigurationError
from taskmodel.dag_task import DagTask, is_heavy

logger = logging.getLogger(__name__)

MAX_REDRAWS = 1000


@dataclass(frozen=True)
class GenConfig:
    """
    Parameters of one synthetic workload point.

    ``util_cap`` bounds each task's utilisation during UUniFast-Discard and
    defaults to m.
    """

    m: int
    n: int
    normalised_util: float
    period_list: Tuple[int, ...] = config.PERIOD_LIST
    layer_range: Tuple[int, int] = config.LAYER_RANGE
    width_range: Tuple[int, int] = config.WIDTH_RANGE
    wcet_weight_range: Tuple[float, float] = config.WCET_WEIGHT_RANGE
    edge_probability: float = config.EDGE_PROBABILITY
    rng_seed: int = config.SFS_SEED
    util_cap: Optional[float] = None

    def __post_init__(self):
        if self.m < 1 or self.n < 1:
            raise ConfigurationError(f"need m >= 1 and n >= 1, got m={self.m}, n={self.n}")
        if not 0 < self.normalised_util <= 1:
            raise ConfigurationError(f"normalised utilisation must lie in (0, 1], got {self.normalised_util}")
        if not self.period_list or min(self.period_list) < 1:
            raise ConfigurationError(f"invalid period list {self.period_list}")
        lo, hi = self.layer_range
        if not 1 <= lo <= hi:
            raise ConfigurationError(f"invalid layer range {self.layer_range}")
        lo, hi = self.width_range
        if not 1 <= lo <= hi:
            raise ConfigurationError(f"invalid width range {self.width_range}")
        lo, hi = self.wcet_weight_range
        if not 0 < lo <= hi:
            raise ConfigurationError(f"invalid WCET weight range {self.wcet_weight_range}")
        if not 0 <= self.edge_probability <= 1:
            raise ConfigurationError(f"edge probability must lie in [0, 1], got {self.edge_probability}")

    @property
    def total_util(self) -> float:
        return self.normalised_util * self.m

    @property
    def cap(self) -> float:
        return float(self.m) if self.util_cap is None else float(self.util_cap)


def taskset_rng(cfg: GenConfig, set_index: int) -> np.random.Generator:
    """Independent random stream for one task set of a workload point."""
    util_key = int(round(cfg.normalised_util * 10000))
    entropy = [cfg.rng_seed, cfg.m, cfg.n, util_key, set_index]
    return np.random.default_rng(np.random.SeedSequence(entropy))


def uunifast_discard(n: int, total_util: float, cap: float, rng: np.random.Generator,
                     max_redraws: int = MAX_REDRAWS) -> List[float]:
    """
    UUniFast utilisation vector, redrawn while any value exceeds ``cap``.

    Args:
        n: Number of tasks
        total_util: Sum of the utilisations
        cap: Per-task upper bound
        rng: numpy random generator
        max_redraws: Attempts before giving up

    Returns:
        List of n utilisations summing to total_util

    Raises:
        ConfigurationError: If total_util > n * cap or no draw succeeds
    """
    if n < 1:
        raise ConfigurationError(f"need at least one task, got n={n}")
    if total_util > n * cap:
        raise ConfigurationError(f"total utilisation {total_util} exceeds n * cap = {n * cap}")

    for _ in range(max_redraws):
        utilisations = []
        remaining = total_util
        for i in range(1, n):
            next_remaining = remaining * rng.random() ** (1.0 / (n - i))
            utilisations.append(remaining - next_remaining)
            remaining = next_remaining
        utilisations.append(remaining)
        if all(u <= cap for u in utilisations):
            return utilisations
    raise ConfigurationError(f"UUniFast-Discard found no vector within cap {cap} after {max_redraws} draws")


def layer_widths(cfg: GenConfig, work: int, rng: np.random.Generator) -> List[int]:
    """
    Draw the node count of every layer.

    When the DAG has fewer ticks of work than nodes, the widest layers shrink
    first and trailing layers go last, so every node keeps at least one tick.
    """
    layer_count = int(rng.integers(cfg.layer_range[0], cfg.layer_range[1] + 1))
    widths = [int(rng.integers(cfg.width_range[0], cfg.width_range[1] + 1)) for _ in range(layer_count)]
    while sum(widths) > work:
        widest = max(widths)
        if widest > 1:
            widths[widths.index(widest)] -= 1
        else:
            widths.pop()
    return widths


def _layered_edges(layers: List[List[int]], probability: float, rng: np.random.Generator) -> List[Tuple[int, int]]:
    edges = set()
    for a, upper in enumerate(layers):
        for lower in layers[a + 1:]:
            for u in upper:
                for v in lower:
                    if rng.random() < probability:
                        edges.add((u, v))

    # every node below the first layer needs a parent in the layer just above
    for k in range(1, len(layers)):
        for v in layers[k]:
            if not any((u, v) in edges for u in layers[k - 1]):
                edges.add((int(rng.choice(layers[k - 1])), v))
    # and every node above the last layer needs some successor
    for k in range(len(layers) - 1):
        for u in layers[k]:
            if not any(e[0] == u for e in edges):
                edges.add((u, int(rng.choice(layers[k + 1]))))
    return sorted(edges)


def distribute_work(node_ids: Sequence[int], work: int, weight_range: Tuple[float, float],
                    rng: np.random.Generator) -> Dict[int, int]:
    """
    Split ``work`` ticks over the nodes, every node getting at least one.

    Each node draws a weight uniformly from ``weight_range`` and receives its
    proportional share of the ticks above the one-tick floor; rounding leftovers
    go to random nodes.
    """
    count = len(node_ids)
    extra = work - count
    weights = rng.uniform(weight_range[0], weight_range[1], size=count)
    shares = weights / weights.sum()
    portions = np.floor(shares * extra).astype(int)
    for _ in range(extra - int(portions.sum())):
        portions[int(rng.integers(count))] += 1
    return {node_id: 1 + int(p) for node_id, p in zip(node_ids, portions)}


def gen_dag(task_id: int, dag_util: float, period: int, cfg: GenConfig, rng: np.random.Generator) -> DagTask:
    """
    Generate one layered DAG task with implicit deadline.

    Args:
        task_id: Identifier of the new task
        dag_util: Target utilisation
        period: Period (and deadline) in ticks
        cfg: Generation parameters
        rng: numpy random generator

    Returns:
        A valid DagTask whose volume is round(period * dag_util), at least 1
    """
    work = max(1, int(round(period * dag_util)))
    widths = layer_widths(cfg, work, rng)

    layers: List[List[int]] = []
    next_id = 1
    for width in widths:
        layers.append(list(range(next_id, next_id + width)))
        next_id += width

    edges = _layered_edges(layers, cfg.edge_probability, rng)
    wcets = distribute_work([n for layer in layers for n in layer], work, cfg.wcet_weight_range, rng)
    return DagTask.from_graph(task_id, wcets, edges, period, period)


def gen_taskset(cfg: GenConfig, set_index: int = 0) -> List[DagTask]:
    """
    Generate task set number ``set_index`` of a workload point.

    The same configuration and index always produce the same tasks.
    """
    rng = taskset_rng(cfg, set_index)
    utilisations = uunifast_discard(cfg.n, cfg.total_util, cfg.cap, rng)
    tasks = []
    for index, u in enumerate(utilisations):
        period = int(rng.choice(cfg.period_list))
        tasks.append(gen_dag(index + 1, u, period, cfg, rng))
    logger.debug(f"Generated set {set_index} for m={cfg.m}, n={cfg.n}, U={cfg.normalised_util}: "
                 f"{count_heavy(tasks)} heavy")
    return tasks


def count_heavy(tasks: Sequence[DagTask]) -> int:
    return sum(1 for t in tasks if is_heavy(t))
