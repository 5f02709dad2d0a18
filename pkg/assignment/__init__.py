from assignment.federated import FEDERATED, federated_assign
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
from assignment.sfs import SFS, AssignmentState, pass1, pass2, sfs_assign, split_heavy, split_light

ALGORITHMS = {
    SFS: sfs_assign,
    FEDERATED: federated_assign,
}

__all__ = [
    "ALGORITHMS",
    "AssignmentState",
    "Bin",
    "Cluster",
    "FEDERATED",
    "FailureReason",
    "GangPiece",
    "HostKind",
    "PayloadMode",
    "PieceLocation",
    "PlanOutcome",
    "SFS",
    "SystemPlan",
    "federated_assign",
    "pass1",
    "pass2",
    "sfs_assign",
    "split_heavy",
    "split_light",
]
