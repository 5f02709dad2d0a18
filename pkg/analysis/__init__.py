from analysis.admission import AdmissionTest, ExactAdmission, FastAdmission, admission_for
from analysis.edf_tests import (
    EXACT,
    FAST,
    TEST_MODES,
    augusto_bound,
    cd_sensitivity,
    dbf,
    density_schedulable,
    exact_edf_schedulable,
)
from analysis.seq_task import SeqTask

__all__ = [
    "AdmissionTest",
    "EXACT",
    "ExactAdmission",
    "FAST",
    "FastAdmission",
    "SeqTask",
    "TEST_MODES",
    "admission_for",
    "augusto_bound",
    "cd_sensitivity",
    "dbf",
    "density_schedulable",
    "exact_edf_schedulable",
]
