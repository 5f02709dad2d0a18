import json
import logging
from typing import List, Tuple

from pydantic import BaseModel, ValidationError, validator

from errors import DocumentError
from taskmodel.dag_task import DagTask, NodeSpec

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1


class NodeDocument(BaseModel):
    id: int
    wcet: int


class DagTaskDocument(BaseModel):
    task_id: int
    period: int
    deadline: int
    nodes: List[NodeDocument]
    edges: List[Tuple[int, int]]


class TaskSetDocument(BaseModel):
    format_version: int = FORMAT_VERSION
    m: int
    tasks: List[DagTaskDocument]

    @validator("format_version")
    def check_version(cls, value):
        if value != FORMAT_VERSION:
            raise ValueError(f"unsupported task set format_version {value}")
        return value


def dag_to_document(dag: DagTask) -> DagTaskDocument:
    return DagTaskDocument(
        task_id=dag.task_id,
        period=dag.period,
        deadline=dag.deadline,
        nodes=[NodeDocument(id=n.node_id, wcet=n.wcet) for n in dag.nodes],
        edges=[list(e) for e in dag.edges],
    )


def dag_from_document(doc: DagTaskDocument) -> DagTask:
    nodes = tuple(NodeSpec(n.id, n.wcet) for n in doc.nodes)
    return DagTask(doc.task_id, nodes, tuple(tuple(e) for e in doc.edges), doc.period, doc.deadline)


def taskset_to_document(m: int, tasks: List[DagTask]) -> TaskSetDocument:
    return TaskSetDocument(m=m, tasks=[dag_to_document(t) for t in tasks])


def taskset_from_document(doc: TaskSetDocument) -> Tuple[int, List[DagTask]]:
    return doc.m, [dag_from_document(t) for t in doc.tasks]


def parse_taskset(payload) -> TaskSetDocument:
    """
    Parse a task set from a JSON string or an already decoded dict.

    Raises:
        DocumentError: If the payload is not a valid task set document
    """
    try:
        if isinstance(payload, (str, bytes)):
            return TaskSetDocument.parse_raw(payload)
        return TaskSetDocument.parse_obj(payload)
    except (ValidationError, json.JSONDecodeError) as e:
        raise DocumentError(f"invalid task set document: {e}") from e


def save_taskset(path: str, m: int, tasks: List[DagTask]) -> None:
    """Write a task set file ({format_version, m, tasks})."""
    with open(path, "w", encoding="utf-8") as f:
        f.write(taskset_to_document(m, tasks).json(indent=2))
    logger.info(f"Wrote {len(tasks)} tasks for m={m} to {path}")


def load_taskset(path: str) -> Tuple[int, List[DagTask]]:
    with open(path, "r", encoding="utf-8") as f:
        doc = parse_taskset(f.read())
    return taskset_from_document(doc)
