from flattening.mcnaughton import (
    FlattenedSchedule,
    ScheduleInterval,
    flatten_dag,
    flatten_segment,
    leftover_dag,
)
from flattening.sizing import (
    ClusterSizing,
    Infeasible,
    SizingMode,
    cluster_size_requirements,
    feasibly_max_flatten,
    graham_cluster_size,
    graham_makespan,
)

__all__ = [
    "ClusterSizing",
    "FlattenedSchedule",
    "Infeasible",
    "ScheduleInterval",
    "SizingMode",
    "cluster_size_requirements",
    "feasibly_max_flatten",
    "flatten_dag",
    "flatten_segment",
    "graham_cluster_size",
    "graham_makespan",
    "leftover_dag",
]
