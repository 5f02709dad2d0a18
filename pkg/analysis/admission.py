from abc import ABC, abstractmethod
from typing import Sequence

from analysis.edf_tests import (
    EXACT,
    FAST,
    cd_sensitivity,
    density_schedulable,
    exact_edf_schedulable,
)
from analysis.seq_task import SeqTask
from errors import ConfigurationError


class AdmissionTest(ABC):
    """Uniprocessor EDF admission used to place whole tasks and size split pieces."""

    def __init__(self, mode: str):
        """
        Initialize the admission test.

        Args:
            mode: Name of the test mode (fast, exact)
        """
        self.mode = mode

    @abstractmethod
    def schedulable(self, tasks: Sequence[SeqTask]) -> bool:
        """Whether the task set passes this test."""
        pass

    def admits(self, existing: Sequence[SeqTask], exec_time: int, deadline: int, period: int) -> bool:
        """
        Check whether (exec_time, deadline, period) can join ``existing``.

        Candidates that are not well-formed tasks (C > D, C <= 0) are rejected
        instead of raising.
        """
        if not SeqTask.is_well_formed(exec_time, deadline, period):
            return False
        return self.schedulable(list(existing) + [SeqTask(exec_time, deadline, period)])

    def max_zero_laxity_budget(self, existing: Sequence[SeqTask], period: int, cap: int) -> int:
        """Largest C for a (C, C, period) piece on top of ``existing``, at most ``cap``."""
        return cd_sensitivity(existing, period, cap, self.mode)


class FastAdmission(AdmissionTest):
    """Density test for whole tasks, closed-form bound for zero-laxity pieces."""

    def __init__(self):
        super().__init__(FAST)

    def schedulable(self, tasks: Sequence[SeqTask]) -> bool:
        return density_schedulable(tasks)


class ExactAdmission(AdmissionTest):
    """Processor-demand test for both whole tasks and pieces."""

    def __init__(self):
        super().__init__(EXACT)

    def schedulable(self, tasks: Sequence[SeqTask]) -> bool:
        return exact_edf_schedulable(tasks)


def admission_for(mode: str) -> AdmissionTest:
    if mode == FAST:
        return FastAdmission()
    if mode == EXACT:
        return ExactAdmission()
    raise ConfigurationError(f"unknown test mode {mode!r}, expected one of {FAST}, {EXACT}")
