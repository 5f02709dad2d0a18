import hashlib
import json
import logging
import os
from datetime import datetime
from typing import Any, Dict, List, Optional, Tuple

import chromadb
from chromadb.config import Settings

import config
from assignment.documents import parse_plan, plan_from_document, plan_to_document
from assignment.plan import SystemPlan
from taskmodel.dag_task import DagTask
from taskmodel.documents import parse_taskset, taskset_from_document, taskset_to_document

logger = logging.getLogger(__name__)

# Records are only fetched by id or metadata, never by similarity
PLACEHOLDER_EMBEDDING = [0.0]


class ArtifactStore:
    """ChromaDB-backed store for task sets, the plans computed for them, and sweep runs."""

    def __init__(self, db_path: str = None):
        """
        Initialize the store with ChromaDB.

        Args:
            db_path: Path to the ChromaDB directory; SFS_DATA_DIRECTORY by default
        """
        if db_path is None:
            db_path = config.SFS_DATA_DIRECTORY

        os.makedirs(db_path, exist_ok=True)
        try:
            self.db = chromadb.PersistentClient(path=db_path, settings=Settings(anonymized_telemetry=False))
            self.taskset_collection = self.db.get_or_create_collection(name="tasksets")
            self.plan_collection = self.db.get_or_create_collection(name="plans")
            self.run_collection = self.db.get_or_create_collection(name="runs")
        except Exception as e:
            logger.error(f"Error initializing ChromaDB at {db_path}: {e}")
            raise
        self.db_path = db_path
        logger.debug(f"Artifact store ready at {db_path}")

    def _fingerprint(self, prefix: str, payload: str) -> str:
        """Content-derived id: identical documents share an id."""
        digest = hashlib.sha256(payload.encode()).hexdigest()[:12]
        return f"{prefix}_{digest}"

    def _upsert(self, collection, item_id: str, document: str, metadata: Dict[str, Any]) -> None:
        collection.upsert(
            ids=[item_id],
            documents=[document],
            metadatas=[{k: v for k, v in metadata.items() if v is not None}],
            embeddings=[PLACEHOLDER_EMBEDDING],
        )

    def _get(self, collection, item_id: str) -> Optional[Dict[str, Any]]:
        results = collection.get(ids=[item_id])
        if not results["documents"]:
            return None
        return {
            "id": item_id,
            "document": json.loads(results["documents"][0]),
            "metadata": results["metadatas"][0] if results["metadatas"] else {},
        }

    def _list(self, collection, where: Optional[Dict[str, Any]] = None) -> List[Dict[str, Any]]:
        if where:
            results = collection.get(where=where, include=["metadatas"])
        else:
            results = collection.get(include=["metadatas"])
        records = [{"id": i, "metadata": m} for i, m in zip(results["ids"], results["metadatas"])]
        return sorted(records, key=lambda r: r["id"])

    def store_taskset(self, m: int, tasks: List[DagTask], metadata: Optional[Dict[str, Any]] = None) -> str:
        """
        Store a task set.

        Args:
            m: Platform size the set was generated for
            tasks: The DAG tasks
            metadata: Extra metadata (generator parameters, seed, ...)

        Returns:
            ID of the stored task set
        """
        document = taskset_to_document(m, tasks).json()
        taskset_id = self._fingerprint("taskset", document)
        record_metadata = {
            "m": m,
            "task_count": len(tasks),
            "timestamp": datetime.now().isoformat(),
        }
        record_metadata.update(metadata or {})
        self._upsert(self.taskset_collection, taskset_id, document, record_metadata)
        logger.info(f"Stored task set {taskset_id} ({len(tasks)} tasks)")
        return taskset_id

    def get_taskset(self, taskset_id: str) -> Optional[Tuple[int, List[DagTask]]]:
        record = self._get(self.taskset_collection, taskset_id)
        if record is None:
            return None
        return taskset_from_document(parse_taskset(record["document"]))

    def list_tasksets(self) -> List[Dict[str, Any]]:
        return self._list(self.taskset_collection)

    def store_plan(self, taskset_id: str, plan: SystemPlan, tasks: List[DagTask]) -> str:
        """
        Store a plan as a version of a task set, one per algorithm and test mode.

        Returns:
            ID of the stored plan
        """
        plan_id = f"{taskset_id}_{plan.algorithm}_{plan.mode}"
        metadata = {
            "taskset_id": taskset_id,
            "algorithm": plan.algorithm,
            "mode": plan.mode,
            "success": plan.success,
            "outcome": str(plan.outcome),
            "timestamp": datetime.now().isoformat(),
        }
        self._upsert(self.plan_collection, plan_id, plan_to_document(plan, tasks).json(), metadata)
        logger.info(f"Stored plan {plan_id}: {plan.outcome}")
        return plan_id

    def get_plan(self, plan_id: str) -> Optional[Tuple[SystemPlan, List[DagTask]]]:
        record = self._get(self.plan_collection, plan_id)
        if record is None:
            return None
        return plan_from_document(parse_plan(record["document"]))

    def list_plans(self, taskset_id: Optional[str] = None) -> List[Dict[str, Any]]:
        where = {"taskset_id": taskset_id} if taskset_id is not None else None
        return self._list(self.plan_collection, where)

    def store_run_metadata(self, run_id: str, data: Dict[str, Any]) -> None:
        """Store metadata of a sweep run."""
        self._upsert(self.run_collection, run_id, json.dumps(data), {"timestamp": datetime.now().isoformat()})

    def get_run_metadata(self, run_id: str) -> Optional[Dict[str, Any]]:
        record = self._get(self.run_collection, run_id)
        if record is None:
            return None
        return {"id": run_id, "data": record["document"], "metadata": record["metadata"]}
