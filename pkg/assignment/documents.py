import json
import logging
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, ValidationError, validator

from analysis.seq_task import SeqTask
from assignment.plan import (
    Bin,
    Cluster,
    FailureReason,
    GangPiece,
    HostKind,
    PayloadMode,
    PieceLocation,
    PlanOutcome,
    SystemPlan,
)
from errors import DocumentError
from flattening.mcnaughton import FlattenedSchedule
from taskmodel.dag_task import DagTask
from taskmodel.documents import TaskSetDocument, taskset_from_document, taskset_to_document

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1


class PieceDocument(BaseModel):
    task_id: int
    piece_index: int
    exec_time: int
    deadline: int
    period: int
    release_offset: int
    mode: PayloadMode
    zero_laxity: bool
    payload: Optional[dict] = None


class ClusterDocument(BaseModel):
    cluster_id: int
    processors: List[int]
    closed: bool
    members: List[PieceDocument]


class BinDocument(BaseModel):
    bin_id: int
    processor: int
    closed: bool
    members: List[PieceDocument]


class LocationDocument(BaseModel):
    host: HostKind
    host_id: int
    piece_index: int


class OutcomeDocument(BaseModel):
    success: bool
    task_id: Optional[int] = None
    reason: Optional[FailureReason] = None


class PlanDocument(BaseModel):
    format_version: int = FORMAT_VERSION
    m: int
    algorithm: str
    mode: str
    outcome: OutcomeDocument
    clusters: List[ClusterDocument]
    bins: List[BinDocument]
    placements: Dict[int, List[LocationDocument]]
    taskset: TaskSetDocument

    @validator("format_version")
    def check_version(cls, value):
        if value != FORMAT_VERSION:
            raise ValueError(f"unsupported plan format_version {value}")
        return value


def _piece_to_document(piece: GangPiece) -> PieceDocument:
    return PieceDocument(
        task_id=piece.task_id,
        piece_index=piece.piece_index,
        exec_time=piece.task.exec_time,
        deadline=piece.task.deadline,
        period=piece.task.period,
        release_offset=piece.release_offset,
        mode=piece.mode,
        zero_laxity=piece.zero_laxity,
        payload=piece.payload.to_dict() if piece.payload is not None else None,
    )


def _piece_from_document(doc: PieceDocument) -> GangPiece:
    payload = FlattenedSchedule.from_dict(doc.payload) if doc.payload is not None else None
    return GangPiece(doc.task_id, doc.piece_index, SeqTask(doc.exec_time, doc.deadline, doc.period),
                     doc.release_offset, doc.mode, payload)


def plan_to_document(plan: SystemPlan, tasks: List[DagTask]) -> PlanDocument:
    """Serialize a plan together with the task set it was computed for."""
    return PlanDocument(
        m=plan.m,
        algorithm=plan.algorithm,
        mode=plan.mode,
        outcome=OutcomeDocument(success=plan.outcome.success, task_id=plan.outcome.task_id,
                                reason=plan.outcome.reason),
        clusters=[
            ClusterDocument(cluster_id=c.cluster_id, processors=list(c.processors), closed=c.closed,
                            members=[_piece_to_document(p) for p in c.members])
            for c in plan.clusters
        ],
        bins=[
            BinDocument(bin_id=b.bin_id, processor=b.processor, closed=b.closed,
                        members=[_piece_to_document(p) for p in b.members])
            for b in plan.bins
        ],
        placements={
            task_id: [LocationDocument(host=loc.host, host_id=loc.host_id, piece_index=loc.piece_index)
                      for loc in locations]
            for task_id, locations in plan.placements.items()
        },
        taskset=taskset_to_document(plan.m, tasks),
    )


def plan_from_document(doc: PlanDocument) -> Tuple[SystemPlan, List[DagTask]]:
    """
    Rebuild a plan and its task set from a parsed document.

    Raises:
        DocumentError: If a piece or payload in the document is malformed
    """
    try:
        clusters = [
            Cluster(c.cluster_id, tuple(c.processors), [_piece_from_document(p) for p in c.members], c.closed)
            for c in doc.clusters
        ]
        bins = [Bin(b.bin_id, b.processor, [_piece_from_document(p) for p in b.members], b.closed)
                for b in doc.bins]
    except (ValueError, KeyError, TypeError) as e:
        raise DocumentError(f"invalid plan document: {e}") from e
    placements = {
        task_id: [PieceLocation(loc.host, loc.host_id, loc.piece_index) for loc in locations]
        for task_id, locations in doc.placements.items()
    }
    outcome = PlanOutcome(doc.outcome.success, doc.outcome.task_id, doc.outcome.reason)
    plan = SystemPlan(doc.m, doc.algorithm, doc.mode, clusters, bins, placements, outcome)
    _, tasks = taskset_from_document(doc.taskset)
    return plan, tasks


def parse_plan(payload) -> PlanDocument:
    """
    Parse a plan from a JSON string or decoded dict.

    Raises:
        DocumentError: If the payload is not a valid plan document
    """
    try:
        if isinstance(payload, (str, bytes)):
            return PlanDocument.parse_raw(payload)
        return PlanDocument.parse_obj(payload)
    except (ValidationError, json.JSONDecodeError) as e:
        raise DocumentError(f"invalid plan document: {e}") from e


def save_plan(path: str, plan: SystemPlan, tasks: List[DagTask]) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(plan_to_document(plan, tasks).json(indent=2))
    logger.info(f"Wrote {plan.algorithm} plan ({plan.outcome}) to {path}")


def load_plan(path: str) -> Tuple[SystemPlan, List[DagTask]]:
    with open(path, "r", encoding="utf-8") as f:
        return plan_from_document(parse_plan(f.read()))
