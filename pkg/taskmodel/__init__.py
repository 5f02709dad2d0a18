from taskmodel.dag_task import (
    DagTask,
    NodeSpec,
    Violation,
    is_heavy,
    longest_path,
    require_valid,
    total_utilisation,
    utilisation,
    validate,
    volume,
)
from taskmodel.segmentation import SegmentedDag, segment

__all__ = [
    "DagTask",
    "NodeSpec",
    "SegmentedDag",
    "Violation",
    "is_heavy",
    "longest_path",
    "require_valid",
    "segment",
    "total_utilisation",
    "utilisation",
    "validate",
    "volume",
]
