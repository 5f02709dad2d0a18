from dataclasses import dataclass
from fractions import Fraction


@dataclass(frozen=True)
class SeqTask:
    """Uniprocessor-equivalent sporadic task (C, D, T) with 0 < C <= D <= T."""

    exec_time: int
    deadline: int
    period: int

    def __post_init__(self):
        if not 0 < self.exec_time <= self.deadline <= self.period:
            raise ValueError(
                f"need 0 < C <= D <= T, got C={self.exec_time}, D={self.deadline}, T={self.period}")

    @property
    def density(self) -> Fraction:
        return Fraction(self.exec_time, min(self.deadline, self.period))

    @property
    def utilisation(self) -> Fraction:
        return Fraction(self.exec_time, self.period)

    @property
    def zero_laxity(self) -> bool:
        return self.exec_time == self.deadline

    @classmethod
    def is_well_formed(cls, exec_time: int, deadline: int, period: int) -> bool:
        return 0 < exec_time <= deadline <= period
