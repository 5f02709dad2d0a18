from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from analysis.seq_task import SeqTask
from flattening.mcnaughton import FlattenedSchedule


class PayloadMode(str, Enum):
    """How a piece executes on its host."""

    FLATTENED = "Flattened"
    WORK_CONSERVING = "WorkConserving"
    SEQUENTIAL = "Sequential"


class HostKind(str, Enum):
    CLUSTER = "cluster"
    BIN = "bin"


class FailureReason(str, Enum):
    NO_CLUSTERS = "NoClusters"
    DEADLINE_EXHAUSTED = "DeadlineExhausted"
    SERIAL_BOUND_EXCEEDS_DEADLINE = "SerialBoundExceedsDeadline"
    LONGEST_PATH_EXCEEDS_DEADLINE = "LongestPathExceedsDeadline"
    INSUFFICIENT_PROCESSORS = "InsufficientProcessors"


@dataclass(frozen=True)
class GangPiece:
    """
    One piece of a DAG task on a cluster or bin, seen by the host's EDF
    scheduler as the sequential task ``task``.

    ``payload`` is the fixed schedule the piece executes (a prefix of a
    flattened schedule, or a width-1 flattening on bins); it is None in
    WorkConserving mode, where the simulator list-schedules the whole DAG.
    """

    task_id: int
    piece_index: int
    task: SeqTask
    release_offset: int
    mode: PayloadMode
    payload: Optional[FlattenedSchedule] = None

    @property
    def zero_laxity(self) -> bool:
        return self.task.zero_laxity


@dataclass
class Cluster:
    cluster_id: int
    processors: Tuple[int, ...]
    members: List[GangPiece] = field(default_factory=list)
    closed: bool = False

    @property
    def width(self) -> int:
        return len(self.processors)

    @property
    def tasks(self) -> List[SeqTask]:
        return [p.task for p in self.members]

    @property
    def density(self) -> Fraction:
        return sum((p.task.density for p in self.members), Fraction(0))

    @property
    def normalised_gross_utilisation(self) -> Fraction:
        """Total member density divided by the cluster width."""
        return self.density / self.width


@dataclass
class Bin:
    """A single-processor host for sequential pieces."""

    bin_id: int
    processor: int
    members: List[GangPiece] = field(default_factory=list)
    closed: bool = False

    @property
    def tasks(self) -> List[SeqTask]:
        return [p.task for p in self.members]

    @property
    def density(self) -> Fraction:
        return sum((p.task.density for p in self.members), Fraction(0))


@dataclass(frozen=True)
class PieceLocation:
    host: HostKind
    host_id: int
    piece_index: int


@dataclass(frozen=True)
class PlanOutcome:
    success: bool
    task_id: Optional[int] = None
    reason: Optional[FailureReason] = None

    @classmethod
    def ok(cls) -> "PlanOutcome":
        return cls(True)

    @classmethod
    def failure(cls, task_id: int, reason: FailureReason) -> "PlanOutcome":
        return cls(False, task_id, reason)

    def __str__(self) -> str:
        if self.success:
            return "Success"
        return f"Failure(task {self.task_id}, {self.reason.value})"


@dataclass
class SystemPlan:
    """Result of an assignment: hosts, where each DAG's pieces went, and the verdict."""

    m: int
    algorithm: str
    mode: str
    clusters: List[Cluster] = field(default_factory=list)
    bins: List[Bin] = field(default_factory=list)
    placements: Dict[int, List[PieceLocation]] = field(default_factory=dict)
    outcome: PlanOutcome = field(default_factory=PlanOutcome.ok)

    @property
    def success(self) -> bool:
        return self.outcome.success

    @property
    def processors_used(self) -> int:
        return sum(c.width for c in self.clusters) + len(self.bins)

    def cluster(self, cluster_id: int) -> Cluster:
        return next(c for c in self.clusters if c.cluster_id == cluster_id)

    def bin(self, bin_id: int) -> Bin:
        return next(b for b in self.bins if b.bin_id == bin_id)

    def pieces_of(self, task_id: int) -> List[Tuple[PieceLocation, GangPiece]]:
        """Pieces of a task in execution order, with their locations."""
        result = []
        for location in self.placements.get(task_id, []):
            host = self.cluster(location.host_id) if location.host == HostKind.CLUSTER else self.bin(location.host_id)
            piece = next(p for p in host.members if p.task_id == task_id and p.piece_index == location.piece_index)
            result.append((location, piece))
        return result
