from typing import List, Optional


class SfsError(Exception):
    """Base class for caller faults raised by the toolkit."""


class InvalidTaskError(SfsError):
    """A DAG task that does not validate was handed to an operation that needs a valid one."""

    def __init__(self, task_id, violations: Optional[List] = None):
        self.task_id = task_id
        self.violations = list(violations or [])
        details = "; ".join(str(v) for v in self.violations)
        super().__init__(f"task {task_id} is invalid: {details}")


class ConfigurationError(SfsError):
    """Impossible generator or sweep configuration."""


class DocumentError(SfsError):
    """Malformed JSON document or unsupported format_version."""
