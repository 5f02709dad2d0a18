from collections import defaultdict
from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

from taskmodel.segmentation import SegmentedDag
from utils.ticks import ceil_div


@dataclass(frozen=True)
class ScheduleInterval:
    node_id: int
    processor: int
    start: int
    end: int

    @property
    def duration(self) -> int:
        return self.end - self.start


@dataclass(frozen=True)
class FlattenedSchedule:
    """
    A fixed offline schedule on ``width`` processors.

    Interval times are relative to the start of the schedule and lie in
    [0, length). Processors are numbered 0..width-1.
    """

    width: int
    length: int
    intervals: Tuple[ScheduleInterval, ...]

    def allotted(self) -> Dict[int, int]:
        """Total time given to each node."""
        totals: Dict[int, int] = defaultdict(int)
        for iv in self.intervals:
            totals[iv.node_id] += iv.duration
        return dict(totals)

    def executed_before(self, cut: int) -> Dict[int, int]:
        """Time each node receives in [0, cut)."""
        totals: Dict[int, int] = defaultdict(int)
        for iv in self.intervals:
            if iv.start < cut:
                totals[iv.node_id] += min(iv.end, cut) - iv.start
        return dict(totals)

    def prefix(self, cut: int) -> "FlattenedSchedule":
        """The first ``cut`` ticks of this schedule as a schedule of length ``cut``."""
        if not 0 < cut <= self.length:
            raise ValueError(f"prefix cut {cut} outside (0, {self.length}]")
        clipped = tuple(
            ScheduleInterval(iv.node_id, iv.processor, iv.start, min(iv.end, cut))
            for iv in self.intervals
            if iv.start < cut
        )
        return FlattenedSchedule(self.width, cut, clipped)

    def to_dict(self) -> dict:
        return {
            "width": self.width,
            "length": self.length,
            "intervals": [
                {"node": iv.node_id, "proc": iv.processor, "start": iv.start, "end": iv.end}
                for iv in self.intervals
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "FlattenedSchedule":
        intervals = tuple(
            ScheduleInterval(iv["node"], iv["proc"], iv["start"], iv["end"]) for iv in data["intervals"]
        )
        return cls(data["width"], data["length"], intervals)


def flatten_segment(wcets: Union[Mapping[int, int], Sequence[int]], width: int) -> FlattenedSchedule:
    """
    McNaughton's wraparound rule over the nodes of one segment.

    Nodes are packed in ascending id order. A node that overruns the current
    processor is split into a tail on that processor and a head at the start
    of the next one. A plain sequence of WCETs is numbered 1..n.

    Args:
        wcets: Node id -> WCET, or a sequence of WCETs
        width: Number of processors (>= 1)

    Returns:
        Schedule of length max(max WCET, ceil(sum / width))
    """
    if width < 1:
        raise ValueError(f"width must be at least 1, got {width}")
    if not isinstance(wcets, Mapping):
        wcets = {i + 1: c for i, c in enumerate(wcets)}
    if not wcets:
        raise ValueError("a segment needs at least one node")

    length = max(max(wcets.values()), ceil_div(sum(wcets.values()), width))
    intervals: List[ScheduleInterval] = []
    processor, cursor = 0, 0
    for node_id in sorted(wcets):
        remaining = wcets[node_id]
        first_start: Optional[int] = None
        while remaining > 0:
            chunk = min(remaining, length - cursor)
            if first_start is not None:
                # head after a wrap must end no later than the tail starts
                assert cursor + chunk <= first_start, f"node {node_id} would run in parallel with itself"
            intervals.append(ScheduleInterval(node_id, processor, cursor, cursor + chunk))
            if first_start is None:
                first_start = cursor
            cursor += chunk
            remaining -= chunk
            if cursor == length:
                processor, cursor = processor + 1, 0
    assert processor <= width, "wraparound overflowed the processor count"
    return FlattenedSchedule(width, length, tuple(intervals))


def flatten_dag(sdag: SegmentedDag, width: int, wcets: Optional[Mapping[int, int]] = None) -> FlattenedSchedule:
    """
    Concatenate per-segment McNaughton schedules in segment order.

    Args:
        sdag: Segmented DAG (or rump)
        width: Number of processors
        wcets: Optional override of the node WCETs; defaults to ``sdag.wcets``

    Returns:
        Schedule whose length is the sum of the segment lengths
    """
    if width < 1:
        raise ValueError(f"width must be at least 1, got {width}")
    wcets = sdag.wcets if wcets is None else wcets
    intervals: List[ScheduleInterval] = []
    offset = 0
    for seg in sdag.segments:
        part = flatten_segment({n: wcets[n] for n in seg}, width)
        intervals.extend(
            ScheduleInterval(iv.node_id, iv.processor, iv.start + offset, iv.end + offset)
            for iv in part.intervals
        )
        offset += part.length
    return FlattenedSchedule(width, offset, tuple(intervals))


def leftover_dag(sdag: SegmentedDag, fs: FlattenedSchedule, cut: int) -> SegmentedDag:
    """
    The rump of a segmented DAG once the first ``cut`` ticks of ``fs`` have run.

    Each node keeps its WCET minus the time ``fs`` gives it before ``cut``;
    finished nodes and emptied segments disappear, the order of the rest is kept.

    Args:
        sdag: The segmented DAG ``fs`` was built from
        fs: Its flattened schedule
        cut: Tick strictly inside (0, fs.length)

    Returns:
        The rump as a SegmentedDag with reduced WCETs
    """
    if not 0 < cut < fs.length:
        raise ValueError(f"cut {cut} outside (0, {fs.length})")
    done = fs.executed_before(cut)
    remaining = {n: c - done.get(n, 0) for n, c in sdag.wcets.items()}
    segments = []
    for seg in sdag.segments:
        kept = tuple(n for n in seg if remaining[n] > 0)
        if kept:
            segments.append(kept)
    kept_ids = {n for seg in segments for n in seg}
    return SegmentedDag(
        sdag.task_id,
        tuple(segments),
        {n: k for n, k in sdag.xi.items() if n in kept_ids},
        {n: remaining[n] for n in kept_ids},
    )
