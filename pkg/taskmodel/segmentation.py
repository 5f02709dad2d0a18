from dataclasses import dataclass
from typing import Dict, List, Tuple

import networkx as nx

from taskmodel.dag_task import DagTask


@dataclass(frozen=True)
class SegmentedDag:
    """
    Real nodes of a DAG grouped by maximum hop distance from the source.

    ``segments[k]`` holds the ids of segment k + 1 in ascending order. ``wcets``
    gives the (possibly reduced) WCET of every node still present, so a rump
    left after partial execution is a SegmentedDag as well.
    """

    task_id: int
    segments: Tuple[Tuple[int, ...], ...]
    xi: Dict[int, int]
    wcets: Dict[int, int]

    @property
    def volume(self) -> int:
        return sum(self.wcets[n] for seg in self.segments for n in seg)

    @property
    def serial_lower_bound(self) -> int:
        """Sum over segments of the largest WCET in each; no flattening can be shorter."""
        return sum(max(self.wcets[n] for n in seg) for seg in self.segments)


def hop_distances(dag: DagTask) -> Dict[int, int]:
    """Maximum number of edges on any path from the source to each node."""
    graph = dag.graph
    xi: Dict[int, int] = {}
    for node in nx.topological_sort(graph):
        xi[node] = max((xi[p] + 1 for p in graph.predecessors(node)), default=0)
    return xi


def segment(dag: DagTask) -> SegmentedDag:
    """
    Split a valid DAG into segments, segment k holding the nodes whose maximum
    hop distance from the source is k. Dummy nodes never appear in segments.

    Args:
        dag: A valid DagTask

    Returns:
        The SegmentedDag of the task
    """
    xi = hop_distances(dag)
    dummies = {dag.source, dag.sink}
    real_xi = {n: k for n, k in xi.items() if n not in dummies}
    count = max(real_xi.values(), default=0)
    buckets: List[List[int]] = [[] for _ in range(count)]
    for node_id, k in real_xi.items():
        buckets[k - 1].append(node_id)
    segments = tuple(tuple(sorted(b)) for b in buckets)
    wcets = {n: dag.wcets[n] for n in real_xi}
    return SegmentedDag(dag.task_id, segments, real_xi, wcets)
