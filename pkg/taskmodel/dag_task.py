from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple

import networkx as nx

from errors import InvalidTaskError


@dataclass(frozen=True)
class NodeSpec:
    """A sequential subtask of a DAG task."""

    node_id: int
    wcet: int


@dataclass(frozen=True)
class Violation:
    """One broken DagTask invariant, naming the rule and the offending element."""

    rule: str
    element: str
    message: str

    def __str__(self) -> str:
        return f"[{self.rule}] {self.element}: {self.message}"


@dataclass(frozen=True)
class DagTask:
    """
    A sporadic DAG task.

    Nodes and edges are stored as tuples so instances can be shared freely
    between workers. The dummy source and sink (WCET 0) are stored explicitly.
    """

    task_id: int
    nodes: Tuple[NodeSpec, ...]
    edges: Tuple[Tuple[int, int], ...]
    period: int
    deadline: int

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(sorted(self.nodes, key=lambda n: n.node_id)))
        object.__setattr__(self, "edges", tuple((int(u), int(v)) for u, v in self.edges))

    @classmethod
    def from_graph(cls,
                   task_id: int,
                   wcets: Mapping[int, int],
                   edges: Iterable[Tuple[int, int]],
                   period: int,
                   deadline: int) -> "DagTask":
        """
        Build a task from its real nodes, adding the dummy source and sink.

        The source gets id 0 and the sink id max(real id) + 1. The source is
        wired to every real node without predecessors and every real node
        without successors is wired to the sink.

        Args:
            task_id: Task identifier
            wcets: Real node id -> WCET in ticks (ids must be >= 1)
            edges: Precedence edges between real nodes
            period: T in ticks
            deadline: D in ticks

        Returns:
            The complete DagTask
        """
        edges = list(edges)
        real_ids = sorted(wcets)
        source = 0
        sink = (real_ids[-1] + 1) if real_ids else 1
        has_pred = {v for _, v in edges}
        has_succ = {u for u, _ in edges}
        all_edges = list(edges)
        all_edges += [(source, n) for n in real_ids if n not in has_pred]
        all_edges += [(n, sink) for n in real_ids if n not in has_succ]
        if not real_ids:
            all_edges.append((source, sink))
        nodes = [NodeSpec(source, 0)] + [NodeSpec(n, wcets[n]) for n in real_ids] + [NodeSpec(sink, 0)]
        return cls(task_id, tuple(nodes), tuple(all_edges), period, deadline)

    @cached_property
    def graph(self) -> nx.DiGraph:
        graph = nx.DiGraph()
        for node in self.nodes:
            graph.add_node(node.node_id, wcet=node.wcet)
        graph.add_edges_from(self.edges)
        return graph

    @cached_property
    def wcets(self) -> Dict[int, int]:
        return {node.node_id: node.wcet for node in self.nodes}

    @property
    def source(self) -> int:
        return next(n for n in self.graph.nodes if self.graph.in_degree(n) == 0)

    @property
    def sink(self) -> int:
        return next(n for n in self.graph.nodes if self.graph.out_degree(n) == 0)

    @property
    def real_nodes(self) -> List[int]:
        """Node ids other than the dummy source and sink, ascending."""
        dummies = {self.source, self.sink}
        return [n.node_id for n in self.nodes if n.node_id not in dummies]

    @property
    def min_deadline_period(self) -> int:
        return min(self.deadline, self.period)


def validate(dag: DagTask) -> List[Violation]:
    """
    Check every DagTask invariant.

    Args:
        dag: The task to check

    Returns:
        List of violations, empty iff the task is valid
    """
    violations = []
    element = f"task {dag.task_id}"

    if dag.period < 1:
        violations.append(Violation("timing", element, f"period {dag.period} must be at least 1 tick"))
    if dag.deadline < 1:
        violations.append(Violation("timing", element, f"deadline {dag.deadline} must be at least 1 tick"))
    if dag.deadline > dag.period:
        violations.append(Violation(
            "constrained-deadline", element,
            f"deadline {dag.deadline} exceeds period {dag.period}"))

    ids = [n.node_id for n in dag.nodes]
    seen = set()
    for node_id in ids:
        if node_id in seen:
            violations.append(Violation("node-ids", f"node {node_id}", "duplicate node id"))
        seen.add(node_id)
    for node in dag.nodes:
        if node.wcet < 0:
            violations.append(Violation("wcet", f"node {node.node_id}", f"negative WCET {node.wcet}"))

    for u, v in dag.edges:
        if u not in seen or v not in seen:
            violations.append(Violation("edge-endpoint", f"edge {u}->{v}", "references an unknown node"))
        elif u == v:
            violations.append(Violation("acyclic", f"edge {u}->{v}", "self-loop"))
    if any(v.rule == "edge-endpoint" for v in violations):
        return violations

    graph = dag.graph
    try:
        cycle = nx.find_cycle(graph)
        path = " -> ".join(str(u) for u, _ in cycle)
        violations.append(Violation("acyclic", f"cycle {path}", "edge relation contains a cycle"))
        return violations
    except nx.NetworkXNoCycle:
        pass

    sources = [n for n in graph.nodes if graph.in_degree(n) == 0]
    sinks = [n for n in graph.nodes if graph.out_degree(n) == 0]
    if len(sources) != 1:
        violations.append(Violation("source", element, f"expected one source, found {sorted(sources)}"))
    if len(sinks) != 1:
        violations.append(Violation("sink", element, f"expected one sink, found {sorted(sinks)}"))
    if len(sources) == 1 and len(sinks) == 1 and sources[0] == sinks[0]:
        violations.append(Violation("source", element, "source and sink must be distinct nodes"))
    wcets = dag.wcets
    for dummy, rule in [(s, "source") for s in sources] + [(s, "sink") for s in sinks]:
        if wcets[dummy] != 0:
            violations.append(Violation(rule, f"node {dummy}", f"dummy node has WCET {wcets[dummy]}, expected 0"))
    if violations:
        return violations

    source, sink = sources[0], sinks[0]
    reachable = nx.descendants(graph, source)
    reaching = nx.ancestors(graph, sink)
    for node in dag.nodes:
        if node.node_id in (source, sink):
            continue
        if node.wcet == 0:
            violations.append(Violation("wcet", f"node {node.node_id}", "real nodes need a WCET of at least 1"))
        if node.node_id not in reachable:
            violations.append(Violation("reachability", f"node {node.node_id}", "not reachable from the source"))
        if node.node_id not in reaching:
            violations.append(Violation("reachability", f"node {node.node_id}", "does not reach the sink"))
    return violations


def require_valid(dag: DagTask) -> None:
    """Raise InvalidTaskError unless the task validates."""
    violations = validate(dag)
    if violations:
        raise InvalidTaskError(dag.task_id, violations)


def volume(dag: DagTask) -> int:
    """Sum of all node WCETs (W)."""
    return sum(node.wcet for node in dag.nodes)


def longest_path(dag: DagTask) -> int:
    """Heaviest source-to-sink path (L), by dynamic programming in topological order."""
    wcets = dag.wcets
    graph = dag.graph
    finish: Dict[int, int] = {}
    for node in nx.topological_sort(graph):
        preds = [finish[p] for p in graph.predecessors(node)]
        finish[node] = max(preds, default=0) + wcets[node]
    return max(finish.values(), default=0)


def utilisation(dag: DagTask) -> Fraction:
    return Fraction(volume(dag), dag.period)


def is_heavy(dag: DagTask) -> bool:
    """Heavy tasks have a utilisation strictly above 1."""
    return volume(dag) > dag.period


def total_utilisation(tasks: Sequence[DagTask]) -> Fraction:
    return sum((utilisation(t) for t in tasks), Fraction(0))
