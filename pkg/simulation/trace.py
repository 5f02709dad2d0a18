import csv
import logging
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Tuple

from assignment.plan import HostKind

logger = logging.getLogger(__name__)

# EDF priority key of a piece job: (absolute deadline, task id, piece index, job index)
PriorityKey = Tuple[int, int, int, int]

IDLE = "idle"


@dataclass(frozen=True)
class ExecutionSlice:
    """A piece job holding its whole host during [start, end); it covers payload offsets from ``payload_start``."""

    host: HostKind
    host_id: int
    task_id: int
    job_index: int
    piece_index: int
    start: int
    end: int
    payload_start: int


@dataclass(frozen=True)
class NodeRun:
    task_id: int
    job_index: int
    node_id: int
    processor: int
    start: int
    end: int


@dataclass(frozen=True)
class DispatchRecord:
    time: int
    host: HostKind
    host_id: int
    chosen: PriorityKey
    ready: Tuple[PriorityKey, ...]


@dataclass
class JobRecord:
    task_id: int
    job_index: int
    release: int
    deadline: int
    completion: Optional[int] = None


@dataclass
class PieceJobRecord:
    task_id: int
    job_index: int
    piece_index: int
    host: HostKind
    host_id: int
    release: int
    deadline: int
    completion: Optional[int] = None


@dataclass
class SimTrace:
    """Everything a simulation run produced, in the order it happened."""

    horizon: int
    processors: int = 0
    slices: List[ExecutionSlice] = field(default_factory=list)
    node_runs: List[NodeRun] = field(default_factory=list)
    dispatches: List[DispatchRecord] = field(default_factory=list)
    jobs: Dict[Tuple[int, int], JobRecord] = field(default_factory=dict)
    piece_jobs: List[PieceJobRecord] = field(default_factory=list)

    @property
    def end_time(self) -> int:
        return max((run.end for run in self.node_runs), default=0)

    def ownership(self) -> Iterator[Tuple[int, int, str]]:
        """(tick, processor, owner) for every processor-tick before ``end_time``, idle ones included."""
        busy: Dict[Tuple[int, int], str] = {}
        for run in self.node_runs:
            owner = f"T{run.task_id}.J{run.job_index}.N{run.node_id}"
            for tick in range(run.start, run.end):
                busy[(tick, run.processor)] = owner
        processors = sorted(set(range(self.processors)) | {p for _, p in busy})
        for tick in range(self.end_time):
            for processor in processors:
                yield tick, processor, busy.get((tick, processor), IDLE)


def export_trace_csv(trace: SimTrace, path: str) -> int:
    """
    Write the processor ownership of a trace as CSV.

    Args:
        trace: Simulation trace
        path: Output file path

    Returns:
        Number of rows written
    """
    rows = 0
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(["tick", "processor", "owner"])
        for tick, processor, owner in trace.ownership():
            writer.writerow([tick, processor, owner])
            rows += 1
    logger.info(f"Exported {rows} processor-ticks to {path}")
    return rows
