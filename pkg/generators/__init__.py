from generators.workload import GenConfig, count_heavy, gen_dag, gen_taskset, taskset_rng, uunifast_discard

__all__ = ["GenConfig", "count_heavy", "gen_dag", "gen_taskset", "taskset_rng", "uunifast_discard"]
