import logging
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Union

from flattening.mcnaughton import FlattenedSchedule, flatten_dag
from taskmodel.dag_task import DagTask, longest_path, volume
from taskmodel.segmentation import SegmentedDag, segment
from utils.ticks import ceil_div

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Infeasible:
    """No dedicated cluster meets the deadline; ``bound`` is the lower bound that exceeds it."""

    reason: str
    bound: int


class SizingMode(str, Enum):
    FLATTENED = "Flattened"
    WORK_CONSERVING = "WorkConserving"


@dataclass(frozen=True)
class ClusterSizing:
    """
    Width of a dedicated cluster and how the DAG runs on it.

    ``budget`` is the gang execution time: the flattened length in Flattened
    mode, the Graham makespan bound in WorkConserving mode.
    """

    width: int
    mode: SizingMode
    budget: int
    schedule: Optional[FlattenedSchedule] = None


def feasibly_max_flatten(dag: DagTask, sdag: Optional[SegmentedDag] = None) -> Union[FlattenedSchedule, Infeasible]:
    """
    Smallest-width flattened schedule whose length meets the deadline.

    Args:
        dag: A valid DagTask
        sdag: Its segmentation, computed when omitted

    Returns:
        The flattened schedule, or Infeasible when the serial lower bound exceeds D
    """
    sdag = segment(dag) if sdag is None else sdag
    lower_bound = sdag.serial_lower_bound
    if lower_bound > dag.deadline:
        return Infeasible("serial lower bound exceeds deadline", lower_bound)

    width = max(1, ceil_div(sdag.volume, dag.min_deadline_period))
    while True:
        schedule = flatten_dag(sdag, width)
        if schedule.length <= dag.deadline:
            return schedule
        width += 1


def graham_makespan(work: int, path: int, width: int) -> int:
    """Makespan bound L + ceil((W - L) / m') of any work-conserving schedule."""
    if width < 1:
        raise ValueError(f"width must be at least 1, got {width}")
    if not work >= path >= 0:
        raise ValueError(f"need W >= L >= 0, got W={work}, L={path}")
    return path + ceil_div(work - path, width)


def graham_cluster_size(work: int, path: int, deadline: int) -> Union[int, Infeasible]:
    """Smallest width whose Graham bound meets ``deadline``; Infeasible if D <= L."""
    if deadline <= path:
        return Infeasible("longest path reaches deadline", path)
    return max(1, ceil_div(work - path, deadline - path))


def cluster_size_requirements(dag: DagTask, sdag: Optional[SegmentedDag] = None) -> Union[ClusterSizing, Infeasible]:
    """
    Pick the smaller of the flattening width and the Graham width.

    Ties go to flattening; Graham sizing only wins when strictly narrower.

    Args:
        dag: A valid DagTask
        sdag: Its segmentation, computed when omitted

    Returns:
        ClusterSizing, or Infeasible when neither method meets the deadline
    """
    sdag = segment(dag) if sdag is None else sdag
    flattened = feasibly_max_flatten(dag, sdag)
    work, path = volume(dag), longest_path(dag)
    graham = graham_cluster_size(work, path, dag.deadline)

    if isinstance(flattened, Infeasible) and isinstance(graham, Infeasible):
        return flattened
    if isinstance(graham, Infeasible) or (
            not isinstance(flattened, Infeasible) and flattened.width <= graham):
        return ClusterSizing(flattened.width, SizingMode.FLATTENED, flattened.length, flattened)
    logger.debug(f"Task {dag.task_id}: Graham width {graham} beats flattening")
    return ClusterSizing(graham, SizingMode.WORK_CONSERVING, graham_makespan(work, path, graham))
