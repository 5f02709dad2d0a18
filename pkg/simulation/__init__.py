from simulation.checker import check_trace
from simulation.oracles import edf_brute_force, list_schedule, list_schedule_intervals
from simulation.simulator import simulate_plan
from simulation.trace import SimTrace, export_trace_csv

__all__ = [
    "SimTrace",
    "check_trace",
    "edf_brute_force",
    "export_trace_csv",
    "list_schedule",
    "list_schedule_intervals",
    "simulate_plan",
]
